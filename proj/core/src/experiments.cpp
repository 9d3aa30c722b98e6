#include "fslab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <map>
#include <utility>

#include "fslab/corpus.hpp"
#include "fslab/dilation.hpp"
#include "fslab/multiplier.hpp"
#include "fslab/norms.hpp"
#include "fslab/rng.hpp"
#include "fslab/seqspace.hpp"
#include "fslab/smoothness.hpp"

namespace fslab {
namespace {

namespace fs = std::filesystem;

std::string fd(double x) { return format_double(x); }

std::string exp_tag(const LpExponent& p) { return p.is_inf() ? "inf" : fd(p.value()); }

void add_check(CriterionResult& res, std::string label, bool passed, std::string detail) {
    res.checks.push_back({std::move(label), passed, std::move(detail)});
}

void save_text(CriterionResult& res, const fs::path& dir, const std::string& name,
               const std::string& text) {
    write_text(dir / name, text);
    res.artifacts.push_back(name);
}

void save_json(CriterionResult& res, const fs::path& dir, const std::string& name,
               const Json& j) {
    write_json(dir / name, j);
    res.artifacts.push_back(name);
}

SmoothnessParams sparams(Family family, double s, LpExponent p, LpExponent q, int r) {
    SmoothnessParams prm;
    prm.family = family;
    prm.s = s;
    prm.p = p;
    prm.q = q;
    prm.r = r;
    return prm;
}

// ---- criteria 1 and 2: homogeneity exponent fits --------------------------

void homogeneity_grid(Family family, const std::vector<double>& s_list,
                      const std::vector<LpExponent>& p_list, const std::vector<LpExponent>& q_list,
                      const Tolerances& tol, const fs::path& dir, CriterionResult& res) {
    // Mother bump small enough that all four dilations stay inside B_1.
    const GridFunction mother = make_profile(CorpusProfile::SmoothBump, 1, 10, 2.0, 1.0 / 16.0);
    const int steps = 4;

    Json fits = Json::array();
    std::vector<CsvRow> summary;
    for (double s : s_list) {
        for (const auto& p : p_list) {
            for (const auto& q : q_list) {
                const int r = static_cast<int>(std::floor(s)) + 1;
                const auto prm = sparams(family, s, p, q, r);
                const HomogeneityResult hom = homogeneity_experiment(mother, prm, steps);

                const double gap = std::abs(hom.fit.slope - hom.predicted_slope);
                const bool ok = gap <= tol.slope_abs && hom.fit.max_residual <= tol.residual_max;
                const std::string tag = "s" + fd(s) + "_p" + exp_tag(p) + "_q" + exp_tag(q);
                add_check(res, "slope " + tag, ok,
                          "slope " + fd(hom.fit.slope) + " vs " + fd(hom.predicted_slope) +
                              " (gap " + fd(gap) + " <= " + fd(tol.slope_abs) + "), residual " +
                              fd(hom.fit.max_residual) + " <= " + fd(tol.residual_max));

                save_text(res, dir, "fit_" + tag + ".csv", homogeneity_csv(hom));
                Json entry = to_json(hom);
                entry["params"] = to_json(prm);
                fits.push_back(std::move(entry));
                summary.push_back({fd(s), exp_tag(p), exp_tag(q), std::to_string(r),
                                   fd(hom.predicted_slope), fd(hom.fit.slope),
                                   fd(hom.fit.max_residual)});
            }
        }
    }
    save_text(res, dir, "summary.csv",
              csv_document({"s", "p", "q", "r", "predicted_slope", "slope", "max_residual"},
                           summary));
    save_json(res, dir, "fits.json", fits);
}

void criterion_1(const Tolerances& tol, const fs::path& dir, CriterionResult& res) {
    homogeneity_grid(Family::Besov, {0.5, 0.75, 1.25},
                     {LpExponent(1.0), LpExponent(2.0), LpExponent::infinity()},
                     {LpExponent(1.0), LpExponent(2.0), LpExponent::infinity()}, tol, dir, res);
}

void criterion_2(const Tolerances& tol, const fs::path& dir, CriterionResult& res) {
    homogeneity_grid(Family::TriebelLizorkin, {0.8, 1.5}, {LpExponent(1.0), LpExponent(2.0)},
                     {LpExponent(2.0), LpExponent::infinity()}, tol, dir, res);
}

// ---- criterion 3: exact reindexing identities ------------------------------

void criterion_3(const Tolerances& tol, const fs::path& dir, CriterionResult& res) {
    Rng rng(301);
    double worst[3] = {0.0, 0.0, 0.0};
    const char* kind_name[3] = {"difference", "modulus", "ball_means"};
    std::vector<CsvRow> rows;

    for (int i = 0; i < 50; ++i) {
        const int kind = i % 3;
        const int level = static_cast<int>(rng.uniform_int(5, 7));
        const double radius = rng.uniform_int(0, 1) ? 0.25 : 0.125;
        const int m = static_cast<int>(rng.uniform_int(1, 2));
        const int r = static_cast<int>(rng.uniform_int(1, 3));
        const auto profile = (i % 2) ? CorpusProfile::Hat : CorpusProfile::SmoothBump;
        const GridFunction f = make_profile(profile, 1, level, 1.0, radius);

        double rel = 0.0;
        std::string param;
        if (kind == 0) {
            const std::int64_t h = rng.uniform_int(1, 4);
            const GridFunction g = dilate(f, m);
            const GridFunction dg = iterated_difference(g, {1, h, 0}, r);
            const GridFunction df = iterated_difference(f, {1, h, 0}, r);
            const std::int64_t w = std::min(dg.half_width(), df.half_width());
            double gap = 0.0, ref = 1.0;
            for (std::int64_t x = -w; x <= w; ++x) {
                gap = std::max(gap, std::abs(dg.at(x) - df.at(x)));
                ref = std::max(ref, std::abs(df.at(x)));
            }
            rel = gap / ref;
            param = "h=" + std::to_string(h);
        } else {
            const double t = std::exp2(-static_cast<double>(rng.uniform_int(1, 3)));
            const LpExponent p = (kind == 1 && rng.uniform_int(0, 2) == 2)
                                     ? LpExponent::infinity()
                                     : LpExponent(static_cast<double>(rng.uniform_int(1, 2)));
            const auto [lhs, rhs] = scale_commutation_check(
                f, m, t, p, r, kind == 1 ? CommutationKind::Modulus : CommutationKind::BallMeans);
            rel = std::abs(lhs - rhs) / std::max({1.0, std::abs(lhs), std::abs(rhs)});
            param = "t=" + fd(t) + ";p=" + exp_tag(p);
        }
        worst[kind] = std::max(worst[kind], rel);
        rows.push_back({std::to_string(i), kind_name[kind], std::to_string(level),
                        std::to_string(m), std::to_string(r), param, fd(rel)});
    }
    save_text(res, dir, "identities.csv",
              csv_document({"case", "kind", "level", "m", "r", "param", "rel_gap"}, rows));
    for (int kind = 0; kind < 3; ++kind)
        add_check(res, std::string(kind_name[kind]) + " identity", worst[kind] <= tol.identity_rel,
                  "worst relative gap " + fd(worst[kind]) + " <= " + fd(tol.identity_rel));
}

// ---- criteria 4 and 5: level-stable equivalence brackets -------------------

struct BracketOutcome {
    double c8 = 1.0;      // bracket recorded at level 8
    double worst = 1.0;   // worst max(ratio, 1/ratio) at levels 9, 10
    bool degenerate = false;
};

// ratios[level][member]; bracket C from level 8, levels 9/10 must stay within
// C * (1 + growth).
BracketOutcome bracket_protocol(const std::map<int, std::vector<double>>& ratios) {
    BracketOutcome out;
    for (const auto& [level, list] : ratios) {
        for (double ratio : list) {
            if (!(ratio > 0.0) || !std::isfinite(ratio)) {
                out.degenerate = true;
                continue;
            }
            const double spread = std::max(ratio, 1.0 / ratio);
            if (level == 8)
                out.c8 = std::max(out.c8, spread);
            else
                out.worst = std::max(out.worst, spread);
        }
    }
    return out;
}

void criterion_4(const Tolerances& tol, const fs::path& dir, CriterionResult& res) {
    const auto prm_of = [](Family family) {
        return sparams(family, 0.6, LpExponent(2.0), LpExponent(2.0), 1);
    };
    std::vector<CsvRow> rows;
    for (Family family : {Family::Besov, Family::TriebelLizorkin}) {
        std::map<int, std::vector<double>> ratios;
        for (int level : {8, 9, 10}) {
            const auto corpus = make_corpus(1, level, 2.0, 1.0, 10, 404);
            for (const auto& member : corpus) {
                const auto [inhom, homog] = equivalence_probe(member.f, prm_of(family));
                const double ratio = inhom / homog;
                ratios[level].push_back(ratio);
                rows.push_back({to_string(family), member.name, std::to_string(level), fd(inhom),
                                fd(homog), fd(ratio)});
            }
        }
        const BracketOutcome out = bracket_protocol(ratios);
        const double allowed = out.c8 * (1.0 + tol.bracket_growth);
        add_check(res, to_string(family) + " bracket", !out.degenerate && out.worst <= allowed,
                  "C(level 8) " + fd(out.c8) + ", worst spread at levels 9-10 " + fd(out.worst) +
                      " <= " + fd(allowed));
    }
    save_text(res, dir, "equivalence.csv",
              csv_document({"family", "member", "level", "inhomogeneous", "homogeneous", "ratio"},
                           rows));
}

void criterion_5(const Tolerances& tol, const fs::path& dir, CriterionResult& res) {
    struct Tuple {
        double s;
        LpExponent p, q;
    };
    const std::vector<Tuple> tuples = {{0.6, LpExponent(2.0), LpExponent(2.0)},
                                       {0.9, LpExponent::infinity(), LpExponent(1.0)}};
    std::vector<CsvRow> rows;
    for (const auto& tup : tuples) {
        std::map<int, std::vector<double>> ratios;
        for (int level : {8, 9, 10}) {
            const auto corpus = make_corpus(1, level, 2.0, 1.0, 10, 404);
            for (const auto& member : corpus) {
                const double a =
                    besov_norm(member.f, sparams(Family::Besov, tup.s, tup.p, tup.q, 2),
                               NormVariant::Inhomogeneous01)
                        .total;
                const double b =
                    besov_norm(member.f, sparams(Family::Besov, tup.s, tup.p, tup.q, 3),
                               NormVariant::Inhomogeneous01)
                        .total;
                const double ratio = a / b;
                ratios[level].push_back(ratio);
                rows.push_back({"s" + fd(tup.s) + "_p" + exp_tag(tup.p) + "_q" + exp_tag(tup.q),
                                member.name, std::to_string(level), fd(a), fd(b), fd(ratio)});
            }
        }
        const BracketOutcome out = bracket_protocol(ratios);
        const double allowed = out.c8 * (1.0 + tol.bracket_growth);
        add_check(res, "r2/r3 bracket s=" + fd(tup.s), !out.degenerate && out.worst <= allowed,
                  "C(level 8) " + fd(out.c8) + ", worst spread at levels 9-10 " + fd(out.worst) +
                      " <= " + fd(allowed));
    }
    save_text(res, dir, "r_independence.csv",
              csv_document({"params", "member", "level", "norm_r2", "norm_r3", "ratio"}, rows));
}

// ---- criterion 6: B-F-B sandwich -------------------------------------------

void criterion_6(const Tolerances& tol, const fs::path& dir, CriterionResult& res) {
    const auto corpus = make_corpus(1, 8, 2.0, 1.0, 10, 404);
    std::vector<CsvRow> rows;
    for (const auto& q : {LpExponent(1.0), LpExponent::infinity()}) {
        const LpExponent p(2.0);
        const LpExponent q_lo = min(p, q);
        const LpExponent q_hi = max(p, q);
        double low_factor = 0.0, high_factor = 0.0;
        for (const auto& member : corpus) {
            const double t =
                tl_norm(member.f, sparams(Family::TriebelLizorkin, 0.8, p, q, 1),
                        NormVariant::Inhomogeneous01)
                    .total;
            const double b_lo = besov_norm(member.f, sparams(Family::Besov, 0.8, p, q_lo, 1),
                                           NormVariant::Inhomogeneous01)
                                    .total;
            const double b_hi = besov_norm(member.f, sparams(Family::Besov, 0.8, p, q_hi, 1),
                                           NormVariant::Inhomogeneous01)
                                    .total;
            low_factor = std::max(low_factor, t / b_lo);
            high_factor = std::max(high_factor, b_hi / t);
            rows.push_back({"q" + exp_tag(q), member.name, fd(b_lo), fd(t), fd(b_hi),
                            fd(t / b_lo), fd(b_hi / t)});
        }
        add_check(res, "sandwich q=" + exp_tag(q),
                  low_factor <= tol.sandwich_factor && high_factor <= tol.sandwich_factor,
                  "tl/besov(q=min) " + fd(low_factor) + ", besov(q=max)/tl " + fd(high_factor) +
                      " <= " + fd(tol.sandwich_factor));
    }
    save_text(res, dir, "sandwich.csv",
              csv_document({"params", "member", "besov_qmin", "tl", "besov_qmax", "low_factor",
                            "high_factor"},
                           rows));
}

// ---- criterion 7: polynomial annihilation -----------------------------------

void criterion_7(const Tolerances&, const fs::path& dir, CriterionResult& res) {
    const double t = 0.125;
    const double interior = 0.25;
    std::vector<CsvRow> rows;
    bool all_zero = true;
    bool controls_positive = true;

    for (int r = 1; r <= 4; ++r) {
        for (int degree = 0; degree < r; ++degree) {
            const GridFunction f = make_bump(1, 7, 1.0, 0.875, Profile::Polynomial, degree);
            for (const auto& p : {LpExponent(1.0), LpExponent(2.0), LpExponent::infinity()}) {
                const double omega = modulus_interior(f, t, p, r, interior);
                all_zero = all_zero && omega == 0.0;
                rows.push_back({"1", std::to_string(r), std::to_string(degree), exp_tag(p),
                                fd(omega)});
            }
        }
        // degree = r control: the difference no longer annihilates
        const GridFunction g = make_bump(1, 7, 1.0, 0.875, Profile::Polynomial, r);
        const double control = modulus_interior(g, t, LpExponent(2.0), r, interior);
        controls_positive = controls_positive && control > 0.0;
        rows.push_back({"1", std::to_string(r), std::to_string(r), "2", fd(control)});
    }
    for (int r : {1, 2}) {
        for (int degree = 0; degree < r; ++degree) {
            const GridFunction f = make_bump(2, 7, 1.0, 0.875, Profile::Polynomial, degree);
            const double omega = modulus_interior(f, t, LpExponent(2.0), r, interior);
            all_zero = all_zero && omega == 0.0;
            rows.push_back({"2", std::to_string(r), std::to_string(degree), "2", fd(omega)});
        }
    }
    save_text(res, dir, "annihilation.csv",
              csv_document({"dim", "r", "degree", "p", "omega_interior"}, rows));
    add_check(res, "degree < r annihilated", all_zero, "interior modulus exactly 0 in every case");
    add_check(res, "degree = r control", controls_positive,
              "interior modulus positive when the degree reaches r");
}

// ---- criterion 8: entropy monotonicity and calculus --------------------------

void criterion_8(const Tolerances& tol, const fs::path& dir, CriterionResult& res) {
    SeqSpaceParams src;
    src.s = 1.0;
    src.rho = 1.0;
    SeqSpaceParams dst;
    dst.s = 0.5;
    dst.rho = 0.0;

    bool law_exact = true;
    bool op_law_exact = true;
    SeqOperator scaled{{0.75}};
    for (int k = 1; k <= 8; ++k) {
        const EntropyEstimate est = entropy_estimate(src, dst, k, 64, 1);
        law_exact = law_exact && est.method == EntropyMethod::Exact1d &&
                    est.value == std::exp2(static_cast<double>(1 - k));
        const EntropyEstimate op_est = entropy_estimate_op(scaled, src, dst, k, 64, 1);
        op_law_exact =
            op_law_exact && op_est.value == 0.75 * std::exp2(static_cast<double>(1 - k));
    }
    add_check(res, "exact 1-d halving law", law_exact && op_law_exact,
              "e_k == w * 2^{1-k} bit-exact for k = 1..8, identity and diag(0.75)");

    std::vector<CsvRow> rows;
    bool greedy_close = true;
    bool monotone = true;
    double prev = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= 6; ++k) {
        const double law = std::exp2(static_cast<double>(1 - k));
        const EntropyEstimate greedy =
            entropy_estimate(src, dst, k, 4096, 42, EntropyMethod::GreedyCover);
        if (k >= 2) greedy_close = greedy_close && std::abs(greedy.value - law) <= tol.entropy_1d_rel * law;
        monotone = monotone && greedy.value <= prev;
        prev = greedy.value;
        rows.push_back({std::to_string(k), fd(law), fd(greedy.value)});
    }
    save_text(res, dir, "entropy_1d.csv", csv_document({"k", "law", "greedy"}, rows));
    add_check(res, "greedy cover tracks the 1-d law", greedy_close,
              "relative gap <= " + fd(tol.entropy_1d_rel) + " for k = 2..6, cloud 4096");
    add_check(res, "greedy sequence monotone", monotone, "e_k non-increasing for k = 1..6");

    SeqSpaceParams space;
    space.s = 1.0;
    space.levels = 2;
    space.sizes = {1, 2};
    const CalculusReport rep =
        entropy_calculus_check(space, space, space, SeqOperator{{0.9, 0.3, 0.3}},
                               SeqOperator{{0.5, 0.25, 0.1}}, SeqOperator{{1.0, 0.5, 0.5}}, 3, 3,
                               1024, 21, tol.calculus_slack);
    Json calc;
    calc["monotone"] = rep.monotone;
    calc["slack"] = rep.slack;
    Json add_cases = Json::array();
    for (const auto& c : rep.additivity)
        add_cases.push_back({{"j", c.j}, {"k", c.k}, {"lhs", c.lhs}, {"rhs", c.rhs}, {"ok", c.ok}});
    Json mul_cases = Json::array();
    for (const auto& c : rep.multiplicativity)
        mul_cases.push_back({{"j", c.j}, {"k", c.k}, {"lhs", c.lhs}, {"rhs", c.rhs}, {"ok", c.ok}});
    calc["additivity"] = std::move(add_cases);
    calc["multiplicativity"] = std::move(mul_cases);
    save_json(res, dir, "calculus.json", calc);
    add_check(res, "calculus inequalities", rep.monotone && rep.ok(),
              "additivity and multiplicativity within slack " + fd(rep.slack) +
                  ", all sequences monotone");

    const CalculusReport exact1d =
        entropy_calculus_check(src, src, src, SeqOperator{{0.75}}, SeqOperator{{0.5}},
                               SeqOperator{{0.75}}, 3, 3, 64, 5, tol.calculus_slack);
    bool mult_exact = true;
    for (const auto& c : exact1d.multiplicativity) mult_exact = mult_exact && c.lhs == c.rhs;
    add_check(res, "scalar multiplicativity exact", mult_exact,
              "e_{j+k-1}(RT) == e_j(R) e_k(T) bit-exact on the closed-form path");
}

// ---- criterion 9: entropy rate fit -------------------------------------------

void criterion_9(const Tolerances& tol, const fs::path& dir, CriterionResult& res) {
    SeqSpaceParams src;
    src.s = 2.0;
    src.rho = 1.0;
    src.levels = 3;
    src.sizes = {1, 2, 4};
    SeqSpaceParams dst = src;
    dst.s = 1.0;
    dst.rho = 0.0;
    const std::vector<int> k_range = {2, 3, 4, 5, 6, 7};
    const std::int64_t cloud = 4096;
    const double predicted = entropy_rate_exponent(src, dst);

    for (std::uint64_t seed : {901u, 902u, 903u}) {
        const FitResult fit = entropy_rate_fit(src, dst, k_range, cloud, seed);
        const bool ok = fit.slope >= tol.entropy_slope_lo && fit.slope <= tol.entropy_slope_hi;
        add_check(res, "rate slope seed " + std::to_string(seed), ok,
                  "slope " + fd(fit.slope) + " in [" + fd(tol.entropy_slope_lo) + ", " +
                      fd(tol.entropy_slope_hi) + "], predicted " + fd(predicted));
        const std::string tag = std::to_string(seed);
        save_text(res, dir, "entropy_seed" + tag + ".csv", entropy_csv(fit));
        Json manifest;
        manifest["src"] = to_json(src);
        manifest["dst"] = to_json(dst);
        manifest["k_range"] = k_range;
        manifest["cloud_size"] = cloud;
        manifest["seed"] = seed;
        manifest["slope"] = fit.slope;
        manifest["predicted_slope"] = predicted;
        save_json(res, dir, "manifest_seed" + tag + ".json", manifest);
    }
}

// ---- criterion 10: multiplier lambda-uniformity -------------------------------

void criterion_10(const Tolerances& tol, const fs::path& dir, CriterionResult& res) {
    const auto prm = sparams(Family::Besov, 0.5, LpExponent(2.0), LpExponent(2.0), 1);
    std::vector<CsvRow> rows;
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    bool usable = true;
    for (int m = 0; m <= 3; ++m) {
        const double lambda = std::exp2(static_cast<double>(-m));
        const auto corpus = make_corpus(1, 8, 2.0, lambda, 10, 1000 + static_cast<std::uint64_t>(m));
        std::vector<GridFunction> members;
        members.reserve(corpus.size());
        for (const auto& member : corpus) members.push_back(member.f);

        MultiplierSpec spec;
        spec.lambda_exponent = m;
        spec.mother = MotherBump::InnerWitness;
        const MultiplierBoundResult out = multiplier_bound_experiment(members, spec, prm);
        usable = usable && std::isfinite(out.max_ratio) && out.max_ratio > 0.0;
        lo = std::min(lo, out.max_ratio);
        hi = std::max(hi, out.max_ratio);
        rows.push_back({fd(lambda), fd(out.max_ratio)});
    }
    save_text(res, dir, "multiplier.csv", csv_document({"lambda", "max_ratio"}, rows));
    add_check(res, "lambda uniformity", usable && hi <= tol.multiplier_factor * lo,
              "max ratios span [" + fd(lo) + ", " + fd(hi) + "], spread " + fd(hi / lo) +
                  " <= " + fd(tol.multiplier_factor));

    // phi == 1 on the common support: the product is bit-identical.
    const auto corpus = make_corpus(1, 8, 2.0, 1.0, 10, 1000);
    std::vector<GridFunction> members;
    for (const auto& member : corpus) members.push_back(member.f);
    MultiplierSpec plateau;
    plateau.mother = MotherBump::Canonical;
    const MultiplierBoundResult one = multiplier_bound_experiment(members, plateau, prm);
    bool all_one = one.max_ratio == 1.0;
    for (double ratio : one.ratios) all_one = all_one && ratio == 1.0;
    add_check(res, "plateau multiplier is the identity", all_one,
              "all norm ratios exactly 1 under the canonical cutoff");
}

// ---- criterion 11: embedding probe stability ----------------------------------

std::vector<GridFunction> smooth_corpus(int level) {
    // Embeddings at s = 1.5 need members that actually lie in the source
    // space; keep the C^inf profiles and drop the kinked/jumpy ones.
    const auto corpus = make_corpus(1, level, 2.0, 1.0, 10, 1100);
    std::vector<GridFunction> members;
    for (const auto& member : corpus) {
        if (member.name == "smooth_bump" || member.name == "twin_bumps" ||
            member.name.rfind("random_", 0) == 0)
            members.push_back(member.f);
    }
    return members;
}

void criterion_11(const Tolerances& tol, const fs::path& dir, CriterionResult& res) {
    struct Pair {
        const char* name;
        SmoothnessParams src, dst;
    };
    const std::vector<Pair> pairs = {
        {"s1.5p2q2_to_s0.5p2q2", sparams(Family::Besov, 1.5, LpExponent(2.0), LpExponent(2.0), 2),
         sparams(Family::Besov, 0.5, LpExponent(2.0), LpExponent(2.0), 1)},
        {"s1pinfqinf_to_s0.5p1qinf",
         sparams(Family::Besov, 1.0, LpExponent::infinity(), LpExponent::infinity(), 2),
         sparams(Family::Besov, 0.5, LpExponent(1.0), LpExponent::infinity(), 1)},
        {"s1.2p1q1_to_s0.5p2q1", sparams(Family::Besov, 1.2, LpExponent(1.0), LpExponent(1.0), 2),
         sparams(Family::Besov, 0.5, LpExponent(2.0), LpExponent(1.0), 1)},
    };

    std::vector<CsvRow> rows;
    for (const auto& pair : pairs) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = 0.0;
        bool usable = true;
        for (int level : {5, 6, 7}) {
            const EmbeddingProbe probe = embedding_probe(smooth_corpus(level), pair.src, pair.dst);
            usable = usable && std::isfinite(probe.max_ratio) && probe.max_ratio > 0.0;
            lo = std::min(lo, probe.max_ratio);
            hi = std::max(hi, probe.max_ratio);
            rows.push_back({pair.name, std::to_string(level), fd(probe.max_ratio)});
        }
        add_check(res, std::string("embedding ") + pair.name,
                  usable && hi <= tol.embedding_factor * lo,
                  "max ratio in [" + fd(lo) + ", " + fd(hi) + "], spread " + fd(hi / lo) +
                      " <= " + fd(tol.embedding_factor));
    }
    save_text(res, dir, "embedding.csv", csv_document({"pair", "level", "max_ratio"}, rows));

    bool refused = false;
    try {
        embedding_probe(smooth_corpus(5), sparams(Family::Besov, 0.5, LpExponent(2.0), LpExponent(2.0), 1),
                        sparams(Family::Besov, 0.5, LpExponent(2.0), LpExponent(2.0), 1));
    } catch (const UsageError&) {
        refused = true;
    }
    add_check(res, "nonpositive gap refused", refused,
              "delta_+ = 0 embedding raises a usage error");
}

const char* criterion_title(int index) {
    switch (index) {
    case 1: return "besov homogeneity exponent";
    case 2: return "triebel-lizorkin homogeneity exponent";
    case 3: return "exact dilation identities";
    case 4: return "support-based equivalence bracket";
    case 5: return "difference-order independence";
    case 6: return "besov/tl sandwich";
    case 7: return "polynomial annihilation";
    case 8: return "entropy monotonicity and calculus";
    case 9: return "entropy rate fit";
    case 10: return "multiplier lambda-uniformity";
    case 11: return "embedding probe stability";
    default: return "";
    }
}

} // namespace

void Tolerances::validate() const {
    const double fields[] = {slope_abs,      residual_max,     identity_rel,  bracket_growth,
                             sandwich_factor, entropy_1d_rel,  calculus_slack, multiplier_factor,
                             embedding_factor};
    for (double v : fields)
        if (!(v >= 0.0) || !std::isfinite(v))
            throw UsageError("tolerances must be finite and nonnegative");
    if (!std::isfinite(entropy_slope_lo) || !std::isfinite(entropy_slope_hi) ||
        entropy_slope_lo > entropy_slope_hi)
        throw UsageError("entropy slope window must be ordered and finite");
}

Json to_json(const Tolerances& tol) {
    Json j;
    j["slope_abs"] = tol.slope_abs;
    j["residual_max"] = tol.residual_max;
    j["identity_rel"] = tol.identity_rel;
    j["bracket_growth"] = tol.bracket_growth;
    j["sandwich_factor"] = tol.sandwich_factor;
    j["entropy_slope_lo"] = tol.entropy_slope_lo;
    j["entropy_slope_hi"] = tol.entropy_slope_hi;
    j["entropy_1d_rel"] = tol.entropy_1d_rel;
    j["calculus_slack"] = tol.calculus_slack;
    j["multiplier_factor"] = tol.multiplier_factor;
    j["embedding_factor"] = tol.embedding_factor;
    return j;
}

Tolerances tolerances_from_json(const Json& j) {
    Tolerances tol;
    if (!j.is_object()) throw UsageError("tolerances must be a JSON object");
    const std::map<std::string, double*> fields = {
        {"slope_abs", &tol.slope_abs},
        {"residual_max", &tol.residual_max},
        {"identity_rel", &tol.identity_rel},
        {"bracket_growth", &tol.bracket_growth},
        {"sandwich_factor", &tol.sandwich_factor},
        {"entropy_slope_lo", &tol.entropy_slope_lo},
        {"entropy_slope_hi", &tol.entropy_slope_hi},
        {"entropy_1d_rel", &tol.entropy_1d_rel},
        {"calculus_slack", &tol.calculus_slack},
        {"multiplier_factor", &tol.multiplier_factor},
        {"embedding_factor", &tol.embedding_factor},
    };
    for (const auto& [key, value] : j.items()) {
        const auto it = fields.find(key);
        if (it == fields.end()) throw UsageError("unknown tolerance key \"" + key + "\"");
        if (!value.is_number()) throw UsageError("tolerance \"" + key + "\" must be a number");
        *it->second = value.get<double>();
    }
    tol.validate();
    return tol;
}

bool CriterionResult::passed() const {
    if (checks.empty()) return false;
    for (const auto& check : checks)
        if (!check.passed) return false;
    return true;
}

Json to_json(const CriterionResult& result) {
    Json j;
    j["criterion"] = result.index;
    j["title"] = result.title;
    j["passed"] = result.passed();
    Json checks = Json::array();
    for (const auto& check : result.checks)
        checks.push_back({{"label", check.label}, {"passed", check.passed},
                          {"detail", check.detail}});
    j["checks"] = std::move(checks);
    j["artifacts"] = result.artifacts;
    return j;
}

CriterionResult run_criterion(int index, const Tolerances& tol,
                              const std::filesystem::path& out_dir) {
    tol.validate();
    if (index < 1 || index > 11)
        throw UsageError("criterion index must be in 1..11 (12 is the CLI determinism check)");

    CriterionResult res;
    res.index = index;
    res.title = criterion_title(index);
    char name[8];
    std::snprintf(name, sizeof(name), "c%02d", index);
    const fs::path dir = out_dir / name;
    std::filesystem::create_directories(dir);

    switch (index) {
    case 1: criterion_1(tol, dir, res); break;
    case 2: criterion_2(tol, dir, res); break;
    case 3: criterion_3(tol, dir, res); break;
    case 4: criterion_4(tol, dir, res); break;
    case 5: criterion_5(tol, dir, res); break;
    case 6: criterion_6(tol, dir, res); break;
    case 7: criterion_7(tol, dir, res); break;
    case 8: criterion_8(tol, dir, res); break;
    case 9: criterion_9(tol, dir, res); break;
    case 10: criterion_10(tol, dir, res); break;
    case 11: criterion_11(tol, dir, res); break;
    default: break;
    }

    Json report = to_json(res);
    report["tolerances"] = to_json(tol);
    write_json(dir / "report.json", report);
    res.artifacts.push_back("report.json");
    return res;
}

bool SuiteResult::passed() const {
    if (criteria.empty()) return false;
    for (const auto& criterion : criteria)
        if (!criterion.passed()) return false;
    return true;
}

SuiteResult run_suite(const Tolerances& tol, const std::filesystem::path& out_dir) {
    SuiteResult suite;
    for (int index = 1; index <= 11; ++index)
        suite.criteria.push_back(run_criterion(index, tol, out_dir));

    Json j;
    j["passed"] = suite.passed();
    Json entries = Json::array();
    for (const auto& criterion : suite.criteria) entries.push_back(to_json(criterion));
    j["criteria"] = std::move(entries);
    write_json(out_dir / "suite_report.json", j);
    return suite;
}

} // namespace fslab
