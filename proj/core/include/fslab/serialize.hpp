#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "fslab/dilation.hpp"
#include "fslab/errors.hpp"
#include "fslab/fit.hpp"
#include "fslab/grid.hpp"
#include "fslab/lp_exponent.hpp"
#include "fslab/norms.hpp"
#include "fslab/seqspace.hpp"
#include "fslab/smoothness.hpp"

namespace fslab {

// Key order in emitted files is fixed (declaration order below), so identical
// inputs serialize to identical bytes.
using Json = nlohmann::ordered_json;

// Shortest decimal string that round-trips the double (std::to_chars).
std::string format_double(double x);

// "inf" or the numeric value; inverse accepts both spellings and numbers.
Json exponent_to_json(const LpExponent& p);
LpExponent exponent_from_json(const Json& j);

Family family_from_string(const std::string& name);
NormVariant norm_variant_from_string(const std::string& name);

// {dim, level, extent, support_radius, values:[row-major]}
Json to_json(const GridFunction& f);
GridFunction grid_function_from_json(const Json& j);

// {family, s, p, q, r}
Json to_json(const SmoothnessParams& prm);
SmoothnessParams smoothness_params_from_json(const Json& j);

// {s, rho, p, q, n, levels, beta_max, beta_dim, sizes, c1, c2}
Json to_json(const SeqSpaceParams& prm);
SeqSpaceParams seq_space_params_from_json(const Json& j);

// {variant, total, lp_part, seminorm_part, scales:[{t, contribution}]};
// lp_part is omitted for the homogeneous variant.
Json to_json(const QuasiNormReport& report);

// {slope, intercept, max_residual, points:[[x,y],...]}
Json to_json(const FitResult& fit);

// Fit plus {predicted_slope, lambdas, norms}.
Json to_json(const HomogeneityResult& result);

// CSV rows: header line, then one line per row; fields joined with ','.
using CsvRow = std::vector<std::string>;
std::string csv_document(const CsvRow& header, const std::vector<CsvRow>& rows);

// `t,omega` ascending in t.
std::string modulus_curve_csv(const ModulusCurve& curve);
// `lambda,norm` in experiment order (lambda descending from 1).
std::string homogeneity_csv(const HomogeneityResult& result);
// `k,e_k` from fit points (x = k, y = e_k).
std::string entropy_csv(const FitResult& fit);

// Atomic write: temp file in the same directory, fsync-free rename over the
// target.  Parent directories are created on demand.
void write_text(const std::filesystem::path& path, const std::string& text);
void write_json(const std::filesystem::path& path, const Json& j);

std::string read_text(const std::filesystem::path& path);
Json read_json(const std::filesystem::path& path);

} // namespace fslab
