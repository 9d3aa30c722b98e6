#pragma once

#include <cmath>
#include <vector>

#include "fslab/grid.hpp"
#include "fslab/norms.hpp"

namespace fslab {

/// Mother profiles for the scaled cutoff, both C^inf plateaus built from the
/// smoothstep sigma(u) = g(u)/(g(u)+g(1-u)) with g(u) = exp(-1/u).
enum class MotherBump {
    Canonical,    // identically 1 on B_1, supported in B_2
    InnerWitness, // identically 1 on B_{1/2}, supported in B_1
};

/// Cutoff phi(x) = mother(x / lambda) at the dyadic scale lambda = 2^-m.
/// `a` declares the derivative budget |D^gamma phi| <= a * lambda^-gamma for
/// gamma = 1..order; a = 0 selects the measured mother constant.
struct MultiplierSpec {
    int lambda_exponent = 0; // m >= 0
    double a = 0.0;
    int order = 1;
    MotherBump mother = MotherBump::Canonical;

    double lambda() const { return std::exp2(-lambda_exponent); }
    void validate() const;
};

/// Samples the cutoff on the dim/level/extent lattice and verifies the
/// declared derivative budget against axis-aligned difference quotients.
/// The grid must resolve the transition band (lambda / spacing >= 8) and
/// contain the mother support.
GridFunction make_multiplier(int dim, int level, double extent, const MultiplierSpec& spec);

/// Pointwise product on a shared lattice; the support shrinks to the smaller
/// of the two radii.
GridFunction multiply(const GridFunction& f, const GridFunction& phi);

struct MultiplierBoundResult {
    double lambda = 1.0;
    double max_ratio = 0.0;
    std::vector<double> ratios; // ||phi f|| / ||f|| per member, 0 when ||f|| = 0
};

/// Max quasi-norm ratio ||phi f|| / ||f|| over corpus members supported in
/// B_lambda (inhomogeneous [0,1] variant).  Triebel-Lizorkin parameters must
/// clear the multiplier restriction s > n (1/min(p,q) - 1/p) unless
/// allow_restricted overrides the gate.
MultiplierBoundResult multiplier_bound_experiment(const std::vector<GridFunction>& corpus,
                                                  const MultiplierSpec& spec,
                                                  const SmoothnessParams& prm,
                                                  bool allow_restricted = false);

namespace detail {

/// Mother value at the unscaled argument t.
double mother_value(MotherBump mother, double t);

/// Frozen sup of the gamma-th mother derivative (measured at 2^-11 resolution,
/// gamma in [1, 3]).
double mother_derivative_sup(MotherBump mother, int gamma);

} // namespace detail

} // namespace fslab
