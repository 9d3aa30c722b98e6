#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fslab/errors.hpp"
#include "fslab/fit.hpp"
#include "fslab/lp_exponent.hpp"

namespace fslab {

/// Truncated weighted sequence space b^{s,rho}_{p,q}(M_j): coefficient
/// families indexed by (beta, j, m) where beta is a multi-index with
/// |beta| <= beta_max, j = 0..levels-1 is a dyadic level and m = 1..M_j a slot
/// within the level.  Level sizes must respect the declared growth bracket
/// c1 * 2^{j*n} <= M_j <= c2 * 2^{j*n}.
struct SeqSpaceParams {
    double s = 1.0;   // level weight exponent: 2^{j(s - n/p)}
    double rho = 0.0; // beta weight exponent: 2^{rho |beta|}
    LpExponent p{2.0};
    LpExponent q{2.0};
    double n = 1.0; // dimension parameter of the M_j ~ 2^{jn} growth
    int levels = 1; // J
    int beta_max = 0;
    int beta_dim = 1; // components per multi-index
    std::vector<std::int64_t> sizes{1}; // M_j, one entry per level
    double c1 = 0.5;
    double c2 = 2.0;

    void validate() const;

    /// Multi-indices with beta_dim components and |beta| <= beta_max.
    std::int64_t beta_count() const;
    /// Coefficients per beta slice: sum_j M_j.
    std::int64_t slice_size() const;
    std::int64_t coeff_count() const { return beta_count() * slice_size(); }
    /// Flat offset of (beta_index, j, m), m in [1, M_j].
    std::int64_t offset(std::int64_t beta_index, int j, std::int64_t m) const;
    /// Same index set (levels, sizes, beta budget); weights may differ.
    bool same_layout(const SeqSpaceParams& other) const;
};

/// Dense coefficient family, flat layout: beta-major, then level, then slot.
struct SeqElement {
    std::vector<double> coeffs;
};

SeqElement zero_element(const SeqSpaceParams& prm);

/// sup_beta 2^{rho|beta|} (sum_j (2^{j(s-n/p)} ||lambda_{beta,j}||_p)^q)^{1/q},
/// with max replacing the sum at p = inf and/or q = inf.
double seq_norm(const SeqElement& x, const SeqSpaceParams& prm);

/// Formal identity between spaces over the same index set.  Validates the
/// compactness conditions rho1 > rho2 >= 0, p1 <= p2 and
/// delta = s1 - s2 - n(1/p1 - 1/p2) > 0, then returns the coefficients
/// unchanged (only the norms differ).
SeqElement embedding_map(const SeqElement& x, const SeqSpaceParams& src,
                         const SeqSpaceParams& dst);

/// Coordinatewise scaling map between spaces sharing a layout.
struct SeqOperator {
    std::vector<double> diag;
};

SeqOperator identity_operator(const SeqSpaceParams& prm);
SeqOperator add(const SeqOperator& a, const SeqOperator& b);
SeqOperator compose(const SeqOperator& outer, const SeqOperator& inner);

enum class EntropyMethod { Auto, Exact1d, GreedyCover };

struct EntropyEstimate {
    int k = 1;
    double value = 0.0;
    EntropyMethod method = EntropyMethod::GreedyCover;
    std::int64_t centers_used = 1; // 2^{k-1}
};

/// Covering-radius estimate of the k-th entropy number of the identity
/// src -> dst.  The one-coordinate space (levels=1, M=[1], beta_max=0) has the
/// closed form w * 2^{-(k-1)}; everything else samples a deterministic point
/// cloud on the src unit ball and covers it in the dst norm with 2^{k-1}
/// centers (farthest-point selection plus box recentering, upper-biased).
EntropyEstimate entropy_estimate(const SeqSpaceParams& src, const SeqSpaceParams& dst, int k,
                                 std::int64_t cloud_size, std::uint64_t seed,
                                 EntropyMethod method = EntropyMethod::Auto);

/// Same estimator for a diagonal operator in place of the identity.
EntropyEstimate entropy_estimate_op(const SeqOperator& op, const SeqSpaceParams& src,
                                    const SeqSpaceParams& dst, int k, std::int64_t cloud_size,
                                    std::uint64_t seed,
                                    EntropyMethod method = EntropyMethod::Auto);

/// OLS fit of log e_k against log k over k_range (ascending, >= 4 entries).
/// Refuses single-level spaces: their e_k decay geometrically and have no
/// polynomial rate to fit.
FitResult entropy_rate_fit(const SeqSpaceParams& src, const SeqSpaceParams& dst,
                           const std::vector<int>& k_range, std::int64_t cloud_size,
                           std::uint64_t seed);

/// Predicted log-log slope -delta/n + 1/p2 - 1/p1 for the identity embedding.
double entropy_rate_exponent(const SeqSpaceParams& src, const SeqSpaceParams& dst);

struct CalculusCase {
    int j = 1;
    int k = 1;
    double lhs = 0.0; // e_{j+k-1} of the combined map
    double rhs = 0.0; // additivity: (e_j(S)^u + e_k(T)^u)^{1/u}; multiplicativity: e_j(R)*e_k(T)
    bool ok = false;  // lhs <= slack * rhs
};

struct CalculusReport {
    bool monotone = false; // every estimated sequence is non-increasing in k
    std::vector<CalculusCase> additivity;
    std::vector<CalculusCase> multiplicativity;
    double slack = 2.0;
    bool ok() const;
};

/// Checks the entropy-number calculus on explicit diagonal maps
/// S, T: X -> Y and R: Y -> Z over j in [1, j_max], k in [1, k_max]:
/// monotonicity of every sequence, additivity of S + T with the p-Banach
/// exponent u = min(1, p_Y, q_Y), and multiplicativity of R o T, each up to
/// the declared slack factor covering the estimator's upper bias.
CalculusReport entropy_calculus_check(const SeqSpaceParams& x_space,
                                      const SeqSpaceParams& y_space,
                                      const SeqSpaceParams& z_space, const SeqOperator& s_op,
                                      const SeqOperator& t_op, const SeqOperator& r_op,
                                      int j_max, int k_max, std::int64_t cloud_size,
                                      std::uint64_t seed, double slack = 2.0);

std::string to_string(EntropyMethod method);

namespace detail {

/// Deterministic cloud on the src unit ball mapped through op, row-major
/// cloud_size x coeff_count: origin, signed per-coordinate extremes, then
/// alternating unit-sphere and interior points from the seeded stream.
std::vector<double> build_cloud(const SeqOperator& op, const SeqSpaceParams& src,
                                std::int64_t cloud_size, std::uint64_t seed);

/// dst-norm distance between flat coefficient rows a and b.
double dst_distance(const SeqSpaceParams& dst, const double* a, const double* b);

/// Covering radius of the cloud under the given center rows.
double cloud_radius(const SeqSpaceParams& dst, const std::vector<double>& cloud,
                    const std::vector<std::int64_t>& centers);

/// Plain farthest-point (Gonzalez) radius with c centers, no recentering;
/// 2-approximates the optimal cloud k-center radius.
double greedy_radius(const SeqSpaceParams& dst, const std::vector<double>& cloud,
                     std::int64_t c);

} // namespace detail

} // namespace fslab
