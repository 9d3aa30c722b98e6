// Acceptance gate: one pass/fail line per criterion.
//
//   fslab_acceptance                  runs criteria 1..12
//   fslab_acceptance --criterion N    runs a single criterion
//
// Criteria 1..11 call the library driver directly; criterion 12 shells out to
// the fslab binary (path in FSLAB_BIN) twice and byte-compares the CSVs.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "fslab/experiments.hpp"
#include "fslab/serialize.hpp"

namespace fs = std::filesystem;

namespace {

fs::path scratch_root() {
    return fs::temp_directory_path() / "fslab_acceptance";
}

void print_line(int criterion, bool passed, const std::string& note) {
    std::cout << (passed ? "[PASS]" : "[FAIL]") << " criterion " << criterion;
    if (!note.empty()) std::cout << ": " << note;
    std::cout << "\n";
}

bool run_library_criterion(int index) {
    const fs::path dir = scratch_root();
    try {
        const fslab::CriterionResult res = fslab::run_criterion(index, fslab::Tolerances{}, dir);
        std::string note = res.title;
        for (const auto& check : res.checks)
            if (!check.passed) note += "; " + check.label + " -- " + check.detail;
        print_line(index, res.passed(), note);
        return res.passed();
    } catch (const std::exception& err) {
        print_line(index, false, std::string("exception: ") + err.what());
        return false;
    }
}

std::map<std::string, std::string> csv_bytes(const fs::path& root) {
    std::map<std::string, std::string> files;
    for (const auto& entry : fs::recursive_directory_iterator(root)) {
        if (!entry.is_regular_file() || entry.path().extension() != ".csv") continue;
        files[fs::relative(entry.path(), root).string()] = fslab::read_text(entry.path());
    }
    return files;
}

bool run_determinism_criterion() {
    const char* bin = std::getenv("FSLAB_BIN");
    if (bin == nullptr || *bin == '\0') {
        print_line(12, false, "FSLAB_BIN is not set; cannot launch the suite");
        return false;
    }
    const fs::path root = scratch_root() / "determinism";
    std::error_code ec;
    fs::remove_all(root, ec);

    for (const char* run : {"a", "b"}) {
        const fs::path dir = root / run;
        fs::create_directories(dir);
        const std::string cmd =
            std::string("\"") + bin + "\" suite --out \"" + dir.string() + "\" > \"" +
            (dir / "stdout.txt").string() + "\" 2>&1";
        const int status = std::system(cmd.c_str());
        // The suite may legitimately exit 1 here; only the artifact bytes
        // matter, and a crash would leave the comparison empty.
        if (status < 0) {
            print_line(12, false, "failed to launch the suite");
            return false;
        }
    }

    const auto a = csv_bytes(root / "a");
    const auto b = csv_bytes(root / "b");
    if (a.empty()) {
        print_line(12, false, "suite produced no CSV artifacts");
        return false;
    }
    if (a.size() != b.size()) {
        print_line(12, false, "runs produced different artifact sets");
        return false;
    }
    for (const auto& [name, bytes] : a) {
        const auto it = b.find(name);
        if (it == b.end() || it->second != bytes) {
            print_line(12, false, "artifact " + name + " differs between runs");
            return false;
        }
    }
    print_line(12, true,
               "suite determinism: " + std::to_string(a.size()) + " CSVs byte-identical");
    return true;
}

} // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--criterion" && i + 1 < argc) {
            only = std::atoi(argv[++i]);
        } else {
            std::cerr << "usage: fslab_acceptance [--criterion N]\n";
            return 2;
        }
    }
    if (only < 0 || only > 12) {
        std::cerr << "criterion must be in 1..12\n";
        return 2;
    }

    bool all_passed = true;
    for (int index = 1; index <= 12; ++index) {
        if (only != 0 && index != only) continue;
        const bool passed =
            index == 12 ? run_determinism_criterion() : run_library_criterion(index);
        all_passed = all_passed && passed;
    }
    return all_passed ? 0 : 1;
}
