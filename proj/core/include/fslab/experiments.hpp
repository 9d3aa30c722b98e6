#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "fslab/serialize.hpp"

namespace fslab {

/// Declared experiment policy: the equivalence theorems come with unquantified
/// constants, so every bracket below is a documented engineering default, not
/// a mathematical claim.  The CLI can override any field from its config.
struct Tolerances {
    double slope_abs = 0.10;        // |fitted - predicted| for homogeneity slopes
    double residual_max = 0.15;     // max residual of those fits, log2 units
    double identity_rel = 1e-12;    // relative gap allowed in exact identities
    double bracket_growth = 0.10;   // growth of equivalence brackets past level 8
    double sandwich_factor = 4.0;   // B-F-B sandwich slack
    double entropy_slope_lo = -1.4; // accepted entropy rate window
    double entropy_slope_hi = -0.6;
    double entropy_1d_rel = 0.15;   // greedy cover vs the exact 1-d law
    double calculus_slack = 2.0;    // entropy calculus inequalities
    double multiplier_factor = 4.0; // lambda-uniformity spread of max ratios
    double embedding_factor = 2.0;  // embedding ratio spread across levels

    void validate() const; // tolerances must be nonnegative, windows ordered
};

Json to_json(const Tolerances& tol);
// Missing keys keep their defaults; unknown keys are a usage error.
Tolerances tolerances_from_json(const Json& j);

struct CheckResult {
    std::string label;
    bool passed = false;
    std::string detail; // measured value vs allowance, human-readable
};

struct CriterionResult {
    int index = 0;
    std::string title;
    std::vector<CheckResult> checks;
    std::vector<std::string> artifacts; // files written, relative to the criterion dir

    bool passed() const;
};

Json to_json(const CriterionResult& result);

/// Runs acceptance criterion `index` (1..11) with fixed seeds, writing CSV
/// artifacts and a report.json under out_dir/cNN/.  Criterion 12 is the
/// byte-determinism of the suite itself and lives with the CLI, which can
/// compare two full runs.
CriterionResult run_criterion(int index, const Tolerances& tol,
                              const std::filesystem::path& out_dir);

struct SuiteResult {
    std::vector<CriterionResult> criteria;
    bool passed() const;
};

/// All criteria in order, plus an aggregated out_dir/suite_report.json.
SuiteResult run_suite(const Tolerances& tol, const std::filesystem::path& out_dir);

} // namespace fslab
