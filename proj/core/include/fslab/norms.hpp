#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fslab/errors.hpp"
#include "fslab/grid.hpp"
#include "fslab/lp_exponent.hpp"

namespace fslab {

enum class Family { Besov, TriebelLizorkin };

// Dyadic scale range entering the smoothness seminorm:
//   Inhomogeneous01   -- scales t = 2^-k, k in [0, level]
//   Inhomogeneous0Inf -- k in [-K, level] plus the saturated coarse tail,
//                        K the smallest integer with 2^K >= 2*extent
//   Homogeneous0Inf   -- same scale range, but no Lp term in the total
enum class NormVariant { Inhomogeneous01, Inhomogeneous0Inf, Homogeneous0Inf };

struct SmoothnessParams {
    Family family = Family::Besov;
    double s = 0.5;
    LpExponent p = LpExponent::infinity();
    LpExponent q = LpExponent::infinity();
    int r = 1; // difference order, must exceed s

    void validate() const;
};

struct ScaleTerm {
    double t = 0.0;        // dyadic scale 2^-k
    double weighted = 0.0; // Besov: 2^{ks} omega(2^-k); TL: Lp size of the k-th layer
};

struct QuasiNormReport {
    Family family = Family::Besov;
    NormVariant variant = NormVariant::Inhomogeneous01;
    double total = 0.0;
    std::optional<double> lp_part; // absent for the homogeneous variant
    double seminorm = 0.0;
    std::vector<ScaleTerm> scales; // explicit scales, t ascending
    double tail_head = 0.0;        // first saturated-tail term (0 for the [0,1] variant)
};

// Besov quasi-norm via the modulus of smoothness on dyadic scales.
QuasiNormReport besov_norm(const GridFunction& f, const SmoothnessParams& prm,
                           NormVariant variant);

// Triebel-Lizorkin quasi-norm via ball means of differences; requires finite p.
QuasiNormReport tl_norm(const GridFunction& f, const SmoothnessParams& prm, NormVariant variant);

// Dispatch on prm.family.
QuasiNormReport quasi_norm(const GridFunction& f, const SmoothnessParams& prm,
                           NormVariant variant);

// (inhomogeneous [0,1] total, homogeneous (0,inf) total) for the same params.
std::pair<double, double> equivalence_probe(const GridFunction& f, const SmoothnessParams& prm);

struct EmbeddingProbe {
    double max_ratio = 0.0;
    std::vector<double> ratios; // per usable corpus entry, corpus order
};

// Ratio of destination to source quasi-norm over a corpus; admissible only
// when the differential dimension gap s1 - s2 - n*max(1/p1 - 1/p2, 0) is
// strictly positive.
EmbeddingProbe embedding_probe(const std::vector<GridFunction>& corpus,
                               const SmoothnessParams& src, const SmoothnessParams& dst);

namespace detail {

// Smallest K with 2^K >= 2*extent; explicit scales of the (0,inf) variants
// stop at k = -K, where the modulus has saturated.
int coarse_scale_index(double extent);

// ln(2)-weighted max-factored dyadic q-sum with an exactly geometric
// saturated tail: M * (sum_k ln2*(y_k/M)^q + ln2*(tail_head/M)^q/(1-2^-sq))^(1/q).
double dyadic_q_sum(const std::vector<double>& y, double tail_head, double s,
                    const LpExponent& q);

} // namespace detail

std::string to_string(Family family);
std::string to_string(NormVariant variant);

} // namespace fslab
