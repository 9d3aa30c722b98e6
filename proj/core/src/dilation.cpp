#include "fslab/dilation.hpp"

#include <algorithm>
#include <cmath>

#include "fslab/smoothness.hpp"

namespace fslab {

GridFunction dilate(const GridFunction& f, int m) {
    if (m < 0) throw UsageError("dilation step must be nonnegative");
    if (m > f.level()) throw DomainError("dilated lattice must remain dyadic: level >= m");
    if (m == 0) return f;

    const int L = f.level();
    const std::int64_t H = f.half_width();
    const double delta_out = std::exp2(m - L);
    const double r_out = f.support_radius() * std::exp2(m);

    // window in coarse-lattice units: natural extent, clipped to max(extent, 2)
    // but never below the dilated support
    const std::int64_t h_keep = (H + (std::int64_t{1} << m) - 1) >> m; // ceil(H / 2^m)
    const std::int64_t h_two = std::int64_t{1} << (L - m + 1);
    const auto h_supp = static_cast<std::int64_t>(std::ceil(r_out / delta_out - 1e-9));
    const std::int64_t h_out = std::min(H, std::max({h_keep, h_two, h_supp}));

    std::vector<double> vals;
    if (f.dim() == 1) {
        vals.reserve(static_cast<std::size_t>(2 * h_out + 1));
        for (std::int64_t k = -h_out; k <= h_out; ++k) vals.push_back(f.at(k));
    } else {
        const std::int64_t ppa = 2 * h_out + 1;
        vals.reserve(static_cast<std::size_t>(ppa * ppa));
        for (std::int64_t k1 = -h_out; k1 <= h_out; ++k1)
            for (std::int64_t k2 = -h_out; k2 <= h_out; ++k2) vals.push_back(f.at(k1, k2));
    }
    return GridFunction(f.dim(), L - m, static_cast<double>(h_out) * delta_out, r_out,
                        std::move(vals));
}

GridFunction contract(const GridFunction& f, int m) {
    if (m < 0) throw UsageError("contraction step must be nonnegative");
    if (m == 0) return f;
    return GridFunction(f.dim(), f.level() + m, f.extent() * std::exp2(-m),
                        f.support_radius() * std::exp2(-m), f.values());
}

std::pair<double, double> scale_commutation_check(const GridFunction& f, int m, double t,
                                                  const LpExponent& p, int r,
                                                  CommutationKind kind) {
    const GridFunction g = dilate(f, m);
    if (t < g.spacing())
        throw ResolutionError("commutation scale t lies below the dilated spacing");
    const double t_fine = t * std::exp2(-m);

    if (kind == CommutationKind::Modulus) {
        const double lhs = modulus(g, t, p, r).value;
        const double factor = std::exp2(m * f.dim() * p.reciprocal());
        const double rhs = factor * modulus(f, t_fine, p, r).value;
        return {lhs, rhs};
    }

    const GridFunction lhs_field = ball_means(g, t, p, r);
    const GridFunction rhs_field = ball_means(f, t_fine, p, r);
    const std::int64_t h = std::min(lhs_field.half_width(), rhs_field.half_width());
    double best_gap = -1.0;
    std::pair<double, double> best{0.0, 0.0};
    if (f.dim() == 1) {
        best = {lhs_field.at(0), rhs_field.at(0)};
        best_gap = std::abs(best.first - best.second);
        for (std::int64_t k = -h; k <= h; ++k) {
            const double gap = std::abs(lhs_field.at(k) - rhs_field.at(k));
            if (gap > best_gap) {
                best_gap = gap;
                best = {lhs_field.at(k), rhs_field.at(k)};
            }
        }
    } else {
        best = {lhs_field.at(0, 0), rhs_field.at(0, 0)};
        best_gap = std::abs(best.first - best.second);
        for (std::int64_t k1 = -h; k1 <= h; ++k1)
            for (std::int64_t k2 = -h; k2 <= h; ++k2) {
                const double gap = std::abs(lhs_field.at(k1, k2) - rhs_field.at(k1, k2));
                if (gap > best_gap) {
                    best_gap = gap;
                    best = {lhs_field.at(k1, k2), rhs_field.at(k1, k2)};
                }
            }
    }
    return best;
}

HomogeneityResult homogeneity_experiment(const GridFunction& f, const SmoothnessParams& prm,
                                         int steps) {
    prm.validate();
    if (steps < 3) throw UsageError("homogeneity experiment needs at least 3 dilation steps");
    if (f.support_radius() * std::exp2(steps) > 1.0 + 1e-12)
        throw DomainError("support must fit the largest dilation: radius * 2^steps <= 1");

    HomogeneityResult res;
    res.predicted_slope = prm.s - f.dim() * prm.p.reciprocal();
    std::vector<std::pair<double, double>> pts;
    for (int m = 0; m <= steps; ++m) {
        const GridFunction g = dilate(f, m);
        const double norm = quasi_norm(g, prm, NormVariant::Homogeneous0Inf).total;
        const double inhom = quasi_norm(g, prm, NormVariant::Inhomogeneous01).total;
        res.lambdas.push_back(std::exp2(-m));
        res.norms.push_back(norm);
        res.inhomogeneous_norms.push_back(inhom);
        if (std::isfinite(norm) && norm > 0.0)
            pts.emplace_back(-static_cast<double>(m), std::log2(norm));
    }
    if (pts.size() < 3) throw ExperimentError("fewer than 3 usable dilation norms");
    res.fit = fit_line(pts);
    return res;
}

} // namespace fslab
