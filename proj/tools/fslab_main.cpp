// fslab: experiment driver over the function-space laboratory.
//
//   fslab <command> --config <file> [--out <dir>] [--seed <int>]
//   fslab suite [--config <file>] [--out <dir>]
//
// Every command validates its config before computing, writes a report.json
// (inputs echoed, results, pass/fail against the declared tolerances) plus
// the CSV data declared per module, and exits 0 only if all declared
// assertions hold.  Invalid configs exit 2 with an error JSON on stdout;
// assertion failures exit 1 with the report still written.

#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fslab/corpus.hpp"
#include "fslab/dilation.hpp"
#include "fslab/experiments.hpp"
#include "fslab/multiplier.hpp"
#include "fslab/norms.hpp"
#include "fslab/rng.hpp"
#include "fslab/seqspace.hpp"
#include "fslab/serialize.hpp"
#include "fslab/smoothness.hpp"

namespace fs = std::filesystem;
using fslab::Json;

namespace {

struct RunContext {
    Json config;
    fs::path out;
    std::optional<std::uint64_t> seed; // --seed override
};

int fail_usage(const std::string& message) {
    Json err;
    err["error"] = {{"type", "usage"}, {"message", message}};
    std::cout << err.dump(2) << "\n";
    return 2;
}

int fail_experiment(const std::string& message) {
    Json err;
    err["error"] = {{"type", "experiment"}, {"message", message}};
    std::cout << err.dump(2) << "\n";
    return 1;
}

const Json& require_key(const Json& j, const std::string& key) {
    if (!j.contains(key)) throw fslab::UsageError("config is missing the \"" + key + "\" key");
    return j.at(key);
}

fslab::GridFunction function_from_config(const Json& j) {
    if (!j.is_object()) throw fslab::UsageError("function config must be an object");
    if (j.contains("grid")) return fslab::grid_function_from_json(j.at("grid"));
    const auto profile =
        fslab::corpus_profile_from_string(require_key(j, "profile").get<std::string>());
    const int dim = j.value("dim", 1);
    const int level = j.value("level", 8);
    const double extent = j.value("extent", 2.0);
    const double radius = j.value("radius", 1.0);
    return fslab::make_profile(profile, dim, level, extent, radius);
}

std::vector<fslab::GridFunction> corpus_from_config(const Json& j, std::uint64_t seed) {
    std::vector<fslab::GridFunction> members;
    if (j.contains("members")) {
        for (const auto& entry : j.at("members")) members.push_back(function_from_config(entry));
        if (members.empty()) throw fslab::UsageError("corpus member list is empty");
        return members;
    }
    const int dim = j.value("dim", 1);
    const int level = j.value("level", 8);
    const double extent = j.value("extent", 2.0);
    const double radius = j.value("radius", 1.0);
    const int count = j.value("count", 10);
    const auto corpus =
        fslab::make_corpus(dim, level, extent, radius, count, j.value("seed", seed));
    for (const auto& member : corpus) members.push_back(member.f);
    return members;
}

void write_report(const RunContext& ctx, Json report) {
    report["config"] = ctx.config;
    fslab::write_json(ctx.out / "report.json", report);
}

// ---- commands ---------------------------------------------------------------

int cmd_norm(const RunContext& ctx) {
    const auto f = function_from_config(require_key(ctx.config, "function"));
    const auto prm = fslab::smoothness_params_from_json(require_key(ctx.config, "params"));
    const auto variant = fslab::norm_variant_from_string(
        ctx.config.value("variant", std::string("inhomogeneous_01")));
    const auto report = fslab::quasi_norm(f, prm, variant);

    Json out;
    out["command"] = "norm";
    out["result"] = fslab::to_json(report);
    out["passed"] = true;
    write_report(ctx, out);
    std::cout << "total " << fslab::format_double(report.total) << "\n";
    return 0;
}

int cmd_homogeneity(const RunContext& ctx) {
    const auto f = function_from_config(require_key(ctx.config, "function"));
    const auto prm = fslab::smoothness_params_from_json(require_key(ctx.config, "params"));
    const int steps = ctx.config.value("steps", 4);
    const auto tol = fslab::tolerances_from_json(ctx.config.value("tolerances", Json::object()));

    const auto hom = fslab::homogeneity_experiment(f, prm, steps);
    const double gap = std::abs(hom.fit.slope - hom.predicted_slope);
    const bool ok = gap <= tol.slope_abs && hom.fit.max_residual <= tol.residual_max;

    fslab::write_text(ctx.out / "homogeneity.csv", fslab::homogeneity_csv(hom));
    Json out;
    out["command"] = "homogeneity";
    out["result"] = fslab::to_json(hom);
    out["slope_gap"] = gap;
    out["passed"] = ok;
    write_report(ctx, out);
    std::cout << "slope " << fslab::format_double(hom.fit.slope) << " predicted "
              << fslab::format_double(hom.predicted_slope) << "\n";
    return ok ? 0 : 1;
}

int cmd_equivalence(const RunContext& ctx) {
    const auto f = function_from_config(require_key(ctx.config, "function"));
    const auto prm = fslab::smoothness_params_from_json(require_key(ctx.config, "params"));
    const auto [inhom, homog] = fslab::equivalence_probe(f, prm);

    Json out;
    out["command"] = "equivalence";
    out["result"] = {{"inhomogeneous", inhom}, {"homogeneous", homog}, {"ratio", inhom / homog}};
    out["passed"] = true;
    write_report(ctx, out);
    std::cout << "ratio " << fslab::format_double(inhom / homog) << "\n";
    return 0;
}

int cmd_embed(const RunContext& ctx) {
    const auto corpus = corpus_from_config(require_key(ctx.config, "corpus"), ctx.seed.value_or(404));
    const auto src = fslab::smoothness_params_from_json(require_key(ctx.config, "src"));
    const auto dst = fslab::smoothness_params_from_json(require_key(ctx.config, "dst"));
    const auto probe = fslab::embedding_probe(corpus, src, dst);

    Json out;
    out["command"] = "embed";
    out["result"] = {{"max_ratio", probe.max_ratio}, {"ratios", probe.ratios}};
    out["passed"] = true;
    write_report(ctx, out);
    std::cout << "max_ratio " << fslab::format_double(probe.max_ratio) << "\n";
    return 0;
}

int cmd_entropy(const RunContext& ctx) {
    const auto src = fslab::seq_space_params_from_json(require_key(ctx.config, "src"));
    const auto dst = fslab::seq_space_params_from_json(require_key(ctx.config, "dst"));
    std::vector<int> k_range = {2, 3, 4, 5};
    if (ctx.config.contains("k_range")) k_range = ctx.config.at("k_range").get<std::vector<int>>();
    const auto cloud = ctx.config.value("cloud_size", std::int64_t{1024});
    const std::uint64_t seed = ctx.seed.value_or(ctx.config.value("seed", std::uint64_t{1}));
    const auto tol = fslab::tolerances_from_json(ctx.config.value("tolerances", Json::object()));

    const auto fit = fslab::entropy_rate_fit(src, dst, k_range, cloud, seed);
    const double predicted = fslab::entropy_rate_exponent(src, dst);
    const bool ok = fit.slope >= tol.entropy_slope_lo && fit.slope <= tol.entropy_slope_hi;

    fslab::write_text(ctx.out / "entropy.csv", fslab::entropy_csv(fit));
    Json manifest;
    manifest["src"] = fslab::to_json(src);
    manifest["dst"] = fslab::to_json(dst);
    manifest["k_range"] = k_range;
    manifest["cloud_size"] = cloud;
    manifest["seed"] = seed;
    manifest["slope"] = fit.slope;
    manifest["predicted_slope"] = predicted;
    fslab::write_json(ctx.out / "manifest.json", manifest);

    Json out;
    out["command"] = "entropy";
    out["result"] = fslab::to_json(fit);
    out["predicted_slope"] = predicted;
    out["passed"] = ok;
    write_report(ctx, out);
    std::cout << "slope " << fslab::format_double(fit.slope) << " predicted "
              << fslab::format_double(predicted) << "\n";
    return ok ? 0 : 1;
}

int cmd_multiplier(const RunContext& ctx) {
    const auto corpus =
        corpus_from_config(require_key(ctx.config, "corpus"), ctx.seed.value_or(1000));
    const auto prm = fslab::smoothness_params_from_json(require_key(ctx.config, "params"));
    const Json& spec_json = require_key(ctx.config, "spec");
    fslab::MultiplierSpec spec;
    spec.lambda_exponent = spec_json.value("lambda_exponent", 0);
    spec.a = spec_json.value("a", 0.0);
    spec.order = spec_json.value("order", 1);
    const auto mother = spec_json.value("mother", std::string("canonical"));
    if (mother == "canonical")
        spec.mother = fslab::MotherBump::Canonical;
    else if (mother == "inner_witness")
        spec.mother = fslab::MotherBump::InnerWitness;
    else
        throw fslab::UsageError("unknown mother \"" + mother + "\"");
    const bool allow_restricted = ctx.config.value("allow_restricted", false);

    const auto result = fslab::multiplier_bound_experiment(corpus, spec, prm, allow_restricted);
    fslab::write_text(ctx.out / "multiplier.csv",
                      fslab::csv_document({"lambda", "max_ratio"},
                                          {{fslab::format_double(result.lambda),
                                            fslab::format_double(result.max_ratio)}}));
    Json out;
    out["command"] = "multiplier";
    out["result"] = {{"lambda", result.lambda},
                     {"max_ratio", result.max_ratio},
                     {"ratios", result.ratios}};
    out["passed"] = true;
    write_report(ctx, out);
    std::cout << "max_ratio " << fslab::format_double(result.max_ratio) << "\n";
    return 0;
}

int cmd_identities(const RunContext& ctx) {
    const auto tol = fslab::tolerances_from_json(ctx.config.value("tolerances", Json::object()));
    const int cases = ctx.config.value("cases", 50);
    if (cases < 1) throw fslab::UsageError("identities needs at least one case");
    fslab::Rng rng(ctx.seed.value_or(ctx.config.value("seed", std::uint64_t{301})));

    double worst = 0.0;
    std::vector<fslab::CsvRow> rows;
    for (int i = 0; i < cases; ++i) {
        const int level = static_cast<int>(rng.uniform_int(5, 7));
        const int m = static_cast<int>(rng.uniform_int(1, 2));
        const int r = static_cast<int>(rng.uniform_int(1, 3));
        const double t = std::exp2(-static_cast<double>(rng.uniform_int(1, 3)));
        const auto kind = (i % 2) ? fslab::CommutationKind::BallMeans
                                  : fslab::CommutationKind::Modulus;
        const fslab::LpExponent p(static_cast<double>(rng.uniform_int(1, 2)));
        const auto f = fslab::make_profile((i % 4 < 2) ? fslab::CorpusProfile::SmoothBump
                                                       : fslab::CorpusProfile::Hat,
                                           1, level, 1.0, 0.25);
        const auto [lhs, rhs] = fslab::scale_commutation_check(f, m, t, p, r, kind);
        const double rel = std::abs(lhs - rhs) / std::max({1.0, std::abs(lhs), std::abs(rhs)});
        worst = std::max(worst, rel);
        rows.push_back({std::to_string(i), (i % 2) ? "ball_means" : "modulus",
                        fslab::format_double(rel)});
    }
    fslab::write_text(ctx.out / "identities.csv",
                      fslab::csv_document({"case", "kind", "rel_gap"}, rows));
    const bool ok = worst <= tol.identity_rel;
    Json out;
    out["command"] = "identities";
    out["result"] = {{"cases", cases}, {"worst_rel_gap", worst}};
    out["passed"] = ok;
    write_report(ctx, out);
    std::cout << "worst_rel_gap " << fslab::format_double(worst) << "\n";
    return ok ? 0 : 1;
}

int cmd_suite(const Json& config, const fs::path& out) {
    const auto tol = fslab::tolerances_from_json(config.value("tolerances", Json::object()));
    const auto suite = fslab::run_suite(tol, out);
    for (const auto& criterion : suite.criteria)
        std::cout << (criterion.passed() ? "[PASS] " : "[FAIL] ") << "criterion "
                  << criterion.index << ": " << criterion.title << "\n";
    return suite.passed() ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"difference-based function space laboratory"};
    app.require_subcommand(1);

    const std::vector<std::pair<std::string, int (*)(const RunContext&)>> commands = {
        {"norm", cmd_norm},           {"homogeneity", cmd_homogeneity},
        {"equivalence", cmd_equivalence}, {"embed", cmd_embed},
        {"entropy", cmd_entropy},     {"multiplier", cmd_multiplier},
        {"identities", cmd_identities},
    };

    std::string config_path;
    std::string out_dir = "fslab_out";
    std::int64_t seed = -1;
    int (*selected)(const RunContext&) = nullptr;

    for (const auto& [name, fn] : commands) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "experiment config (JSON)")->required();
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--seed", seed, "seed override");
        sub->callback([&selected, fn = fn] { selected = fn; });
    }
    auto* suite = app.add_subcommand("suite", "run the full acceptance grid");
    suite->add_option("--config", config_path, "tolerance overrides (JSON)");
    suite->add_option("--out", out_dir, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return fail_usage(e.what()); // bad invocation is a config error: status 2
    }

    try {
        Json config = Json::object();
        if (!config_path.empty()) config = fslab::read_json(config_path);

        if (suite->parsed()) return cmd_suite(config, out_dir);

        RunContext ctx;
        ctx.config = std::move(config);
        ctx.out = out_dir;
        if (seed >= 0) ctx.seed = static_cast<std::uint64_t>(seed);
        return selected(ctx);
    } catch (const fslab::ExperimentError& err) {
        return fail_experiment(err.what());
    } catch (const fslab::UsageError& err) {
        return fail_usage(err.what());
    } catch (const fslab::DomainError& err) {
        return fail_usage(err.what());
    } catch (const fslab::ResourceError& err) {
        return fail_usage(err.what());
    } catch (const std::exception& err) {
        return fail_usage(err.what());
    }
}
