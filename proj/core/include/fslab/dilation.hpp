#pragma once

#include <utility>
#include <vector>

#include "fslab/fit.hpp"
#include "fslab/grid.hpp"
#include "fslab/norms.hpp"

namespace fslab {

/// g(x) = f(x / 2^m): the same samples reread on the 2^m-coarser dyadic
/// lattice.  The window is clipped to max(extent, 2) once the dilated support
/// fits inside it; values beyond the clip are zero by the support invariant.
GridFunction dilate(const GridFunction& f, int m);

/// g(x) = f(2^m x): exact inverse reindexing onto the finer lattice.
GridFunction contract(const GridFunction& f, int m);

enum class CommutationKind { Modulus, BallMeans };

/// Evaluates both sides of the dilation commutation identity at scale t on
/// the dilated grid: for the modulus, omega_r(f(lambda.), t)_p against
/// lambda^{-n/p} omega_r(f, lambda t)_p; for ball means, the pointwise pair
/// with the largest gap over the common window.
std::pair<double, double> scale_commutation_check(const GridFunction& f, int m, double t,
                                                  const LpExponent& p, int r,
                                                  CommutationKind kind);

struct HomogeneityResult {
    FitResult fit;                           // log2(norm) against log2(lambda)
    double predicted_slope = 0.0;            // s - n/p
    std::vector<double> lambdas;             // 2^-m, m = 0..steps
    std::vector<double> norms;               // homogeneous-variant totals
    std::vector<double> inhomogeneous_norms; // inhomogeneous [0,1] totals, recorded alongside
};

/// Norms of the dyadic dilations f(2^-m x), m = 0..steps, in the homogeneous
/// variant, with the scaling-law fit.  The support must fit the largest
/// dilation: support_radius * 2^steps <= 1.
HomogeneityResult homogeneity_experiment(const GridFunction& f, const SmoothnessParams& prm,
                                         int steps);

} // namespace fslab
