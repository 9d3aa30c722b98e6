#include "fslab/serialize.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <system_error>

namespace fslab {

std::string format_double(double x) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

Json exponent_to_json(const LpExponent& p) {
    if (p.is_inf()) return Json("inf");
    return Json(p.value());
}

LpExponent exponent_from_json(const Json& j) {
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "inf" || s == "infinity") return LpExponent::infinity();
        throw UsageError("exponent string must be \"inf\", got \"" + s + "\"");
    }
    if (!j.is_number()) throw UsageError("exponent must be a number or \"inf\"");
    return LpExponent(j.get<double>());
}

Family family_from_string(const std::string& name) {
    if (name == "besov" || name == "B") return Family::Besov;
    if (name == "triebel_lizorkin" || name == "tl" || name == "F") return Family::TriebelLizorkin;
    throw UsageError("unknown family \"" + name + "\" (want besov or triebel_lizorkin)");
}

NormVariant norm_variant_from_string(const std::string& name) {
    if (name == "inhomogeneous_01") return NormVariant::Inhomogeneous01;
    if (name == "inhomogeneous_0inf") return NormVariant::Inhomogeneous0Inf;
    if (name == "homogeneous_0inf") return NormVariant::Homogeneous0Inf;
    throw UsageError("unknown norm variant \"" + name + "\"");
}

Json to_json(const GridFunction& f) {
    Json j;
    j["dim"] = f.dim();
    j["level"] = f.level();
    j["extent"] = f.extent();
    j["support_radius"] = f.support_radius();
    j["values"] = f.values();
    return j;
}

GridFunction grid_function_from_json(const Json& j) {
    for (const char* key : {"dim", "level", "extent", "support_radius", "values"}) {
        if (!j.contains(key))
            throw UsageError(std::string("grid function JSON missing key \"") + key + "\"");
    }
    return GridFunction(j.at("dim").get<int>(), j.at("level").get<int>(),
                        j.at("extent").get<double>(), j.at("support_radius").get<double>(),
                        j.at("values").get<std::vector<double>>());
}

Json to_json(const SmoothnessParams& prm) {
    Json j;
    j["family"] = to_string(prm.family);
    j["s"] = prm.s;
    j["p"] = exponent_to_json(prm.p);
    j["q"] = exponent_to_json(prm.q);
    j["r"] = prm.r;
    return j;
}

SmoothnessParams smoothness_params_from_json(const Json& j) {
    SmoothnessParams prm;
    if (j.contains("family")) prm.family = family_from_string(j.at("family").get<std::string>());
    if (j.contains("s")) prm.s = j.at("s").get<double>();
    if (j.contains("p")) prm.p = exponent_from_json(j.at("p"));
    if (j.contains("q")) prm.q = exponent_from_json(j.at("q"));
    if (j.contains("r")) prm.r = j.at("r").get<int>();
    prm.validate();
    return prm;
}

Json to_json(const SeqSpaceParams& prm) {
    Json j;
    j["s"] = prm.s;
    j["rho"] = prm.rho;
    j["p"] = exponent_to_json(prm.p);
    j["q"] = exponent_to_json(prm.q);
    j["n"] = prm.n;
    j["levels"] = prm.levels;
    j["beta_max"] = prm.beta_max;
    j["beta_dim"] = prm.beta_dim;
    j["sizes"] = prm.sizes;
    j["c1"] = prm.c1;
    j["c2"] = prm.c2;
    return j;
}

SeqSpaceParams seq_space_params_from_json(const Json& j) {
    SeqSpaceParams prm;
    if (j.contains("s")) prm.s = j.at("s").get<double>();
    if (j.contains("rho")) prm.rho = j.at("rho").get<double>();
    if (j.contains("p")) prm.p = exponent_from_json(j.at("p"));
    if (j.contains("q")) prm.q = exponent_from_json(j.at("q"));
    if (j.contains("n")) prm.n = j.at("n").get<double>();
    if (j.contains("levels")) prm.levels = j.at("levels").get<int>();
    if (j.contains("beta_max")) prm.beta_max = j.at("beta_max").get<int>();
    if (j.contains("beta_dim")) prm.beta_dim = j.at("beta_dim").get<int>();
    if (j.contains("sizes")) prm.sizes = j.at("sizes").get<std::vector<std::int64_t>>();
    if (j.contains("c1")) prm.c1 = j.at("c1").get<double>();
    if (j.contains("c2")) prm.c2 = j.at("c2").get<double>();
    prm.validate();
    return prm;
}

Json to_json(const QuasiNormReport& report) {
    Json j;
    j["family"] = to_string(report.family);
    j["variant"] = to_string(report.variant);
    j["total"] = report.total;
    if (report.lp_part) j["lp_part"] = *report.lp_part;
    j["seminorm_part"] = report.seminorm;
    Json scales = Json::array();
    for (const auto& term : report.scales) {
        Json entry;
        entry["t"] = term.t;
        entry["contribution"] = term.weighted;
        scales.push_back(std::move(entry));
    }
    j["scales"] = std::move(scales);
    return j;
}

Json to_json(const FitResult& fit) {
    Json j;
    j["slope"] = fit.slope;
    j["intercept"] = fit.intercept;
    j["max_residual"] = fit.max_residual;
    Json points = Json::array();
    for (const auto& [x, y] : fit.points) points.push_back(Json::array({x, y}));
    j["points"] = std::move(points);
    return j;
}

Json to_json(const HomogeneityResult& result) {
    Json j = to_json(result.fit);
    j["predicted_slope"] = result.predicted_slope;
    j["lambdas"] = result.lambdas;
    j["norms"] = result.norms;
    j["inhomogeneous_norms"] = result.inhomogeneous_norms;
    return j;
}

std::string csv_document(const CsvRow& header, const std::vector<CsvRow>& rows) {
    std::string out;
    auto emit = [&out](const CsvRow& row) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += row[i];
        }
        out += '\n';
    };
    emit(header);
    for (const auto& row : rows) {
        if (row.size() != header.size())
            throw UsageError("csv row width does not match the header");
        emit(row);
    }
    return out;
}

std::string modulus_curve_csv(const ModulusCurve& curve) {
    std::vector<CsvRow> rows;
    rows.reserve(curve.points.size());
    for (const auto& [t, omega] : curve.points)
        rows.push_back({format_double(t), format_double(omega)});
    return csv_document({"t", "omega"}, rows);
}

std::string homogeneity_csv(const HomogeneityResult& result) {
    if (result.lambdas.size() != result.norms.size())
        throw UsageError("homogeneity result has mismatched lambda/norm lengths");
    std::vector<CsvRow> rows;
    rows.reserve(result.lambdas.size());
    for (std::size_t i = 0; i < result.lambdas.size(); ++i)
        rows.push_back({format_double(result.lambdas[i]), format_double(result.norms[i])});
    return csv_document({"lambda", "norm"}, rows);
}

std::string entropy_csv(const FitResult& fit) {
    std::vector<CsvRow> rows;
    rows.reserve(fit.points.size());
    for (const auto& [k, ek] : fit.points)
        rows.push_back({format_double(k), format_double(ek)});
    return csv_document({"k", "e_k"}, rows);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    namespace fs = std::filesystem;
    const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
    std::error_code ec;
    fs::create_directories(dir, ec); // ok if it already exists
    fs::path tmp = dir / (path.filename().string() + ".tmp");
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ResourceError("cannot open " + tmp.string() + " for writing");
        out.write(text.data(), static_cast<std::streamsize>(text.size()));
        if (!out) throw ResourceError("short write to " + tmp.string());
    }
    fs::rename(tmp, path, ec);
    if (ec) throw ResourceError("cannot move " + tmp.string() + " into place: " + ec.message());
}

void write_json(const std::filesystem::path& path, const Json& j) {
    write_text(path, j.dump(2) + "\n");
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot read " + path.string());
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

Json read_json(const std::filesystem::path& path) {
    Json j = Json::parse(read_text(path), nullptr, false);
    if (j.is_discarded()) throw UsageError("invalid JSON in " + path.string());
    return j;
}

} // namespace fslab
