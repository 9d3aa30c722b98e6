#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "fslab/grid.hpp"

namespace fslab {

/// Lattice shift h in Z^n; the physical shift is h * spacing.
struct LatticeShift {
    int dim = 1;
    std::int64_t h1 = 0;
    std::int64_t h2 = 0;
};

/// r-th iterated forward difference sum_{j=0}^r (-1)^{r-j} C(r,j) f(x + j*h*delta)
/// with zero extension.  The output window is enlarged so it contains the full
/// support of the difference; its declared support radius is the output extent.
GridFunction iterated_difference(const GridFunction& f, const LatticeShift& shift, int r);

struct ModulusValue {
    double value = 0.0;
    /// Set when t is below the lattice spacing, where no nonzero shift fits.
    bool degenerate = false;
};

/// Discrete modulus of smoothness: max of ||difference(f,h,r)||_p over lattice
/// shifts 0 < |h*delta| <= t.
ModulusValue modulus(const GridFunction& f, double t, const LpExponent& p, int r);

/// Modulus with the L_p sum restricted to |x| <= interior_radius, for probes
/// that must not see the support-edge truncation.  Requires
/// interior_radius + r*t <= f.support_radius().
double modulus_interior(const GridFunction& f, double t, const LpExponent& p, int r,
                        double interior_radius);

/// Ball means of differences: g(x) = (avg over lattice |h*delta| <= t, h = 0
/// included, of |difference(f,h,r)(x)|^p)^{1/p}.  p must be finite.  The output
/// window is enlarged to cover the spread of the contributing differences.
GridFunction ball_means(const GridFunction& f, double t, const LpExponent& p, int r);

/// Modulus sampled on the dyadic scales t_k = 2^-k, k in [k_min, k_max],
/// stored with t ascending.  Requires 2^-k_max >= spacing.
struct ModulusCurve {
    std::vector<std::pair<double, double>> points; // (t, omega), t ascending
};
ModulusCurve modulus_curve(const GridFunction& f, const LpExponent& p, int r, int k_min,
                           int k_max);

namespace detail {

/// Signed binomial weights (-1)^{r-j} C(r,j), j = 0..r.
std::vector<double> difference_weights(int r);

/// ||difference(f,h,r)||_p accumulated over the enlarged window without
/// materializing the difference.
double difference_norm(const GridFunction& f, const LatticeShift& shift, int r,
                       const LpExponent& p);

/// Modulus on all dyadic scales t_k = 2^-k, k in [k_lo, k_hi], plus the
/// saturation value sup_t omega(t) (attained once shifts separate the support).
struct ScaleProfile {
    int k_lo = 0;
    int k_hi = 0;
    std::vector<double> omega; // omega[i] = modulus at k = k_lo + i
    double omega_sat = 0.0;    // sup over all t
    double lp = 0.0;           // ||f||_p

    double at(int k) const { return omega[static_cast<std::size_t>(k - k_lo)]; }
};
ScaleProfile modulus_profile(const GridFunction& f, const LpExponent& p, int r, int k_lo,
                             int k_hi);

/// Lattice points in the closed n-ball of |h| <= radius lattice units
/// (exact for moderate radii, asymptotic beyond; 1-d is always exact).
double ball_lattice_count(int dim, double radius_units);

} // namespace detail

} // namespace fslab
