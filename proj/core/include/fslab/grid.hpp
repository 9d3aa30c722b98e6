#pragma once

#include <cstdint>
#include <vector>

#include "fslab/errors.hpp"
#include "fslab/lp_exponent.hpp"

namespace fslab {

/// Profile shapes for make_bump.
enum class Profile {
    Hat,        // max(0, 1 - |x|/radius)
    SmoothBump, // exp(-1/(1 - |x/radius|^2)) inside B_radius, 0 outside
    Polynomial, // x_1^degree truncated to B_radius (jump at the edge)
    Abs,        // |x_1| - radius truncated to B_radius
};

/// Samples of a compactly supported function on the uniform dyadic lattice
/// delta * Z^n, delta = 2^-level, restricted to the closed box [-extent, extent]^n.
/// Row-major storage, (2*extent/delta + 1)^n samples, lattice point m maps to
/// coordinate m*delta.  Samples at |x| >= support_radius are exactly zero, so
/// the array carries the full zero collar needed by difference operators.
class GridFunction {
public:
    GridFunction(int dim, int level, double extent, double support_radius,
                 std::vector<double> values);

    int dim() const { return dim_; }
    int level() const { return level_; }
    /// Lattice spacing 2^-level.
    double spacing() const { return spacing_; }
    double extent() const { return extent_; }
    double support_radius() const { return support_radius_; }

    /// extent / spacing as an exact integer.
    std::int64_t half_width() const { return half_width_; }
    std::int64_t points_per_axis() const { return 2 * half_width_ + 1; }

    const std::vector<double>& values() const { return values_; }
    std::vector<double>& mutable_values() { return values_; }

    /// Sample at lattice index m in [-half_width, half_width] (dim 1).
    double at(std::int64_t m) const { return values_[static_cast<std::size_t>(m + half_width_)]; }
    /// Sample at lattice index (m1, m2) (dim 2).
    double at(std::int64_t m1, std::int64_t m2) const {
        return values_[static_cast<std::size_t>((m1 + half_width_) * points_per_axis() + (m2 + half_width_))];
    }

    /// Zero-extended read: indices outside the stored box return 0.
    double sample(std::int64_t m) const {
        return (m < -half_width_ || m > half_width_) ? 0.0 : at(m);
    }
    double sample(std::int64_t m1, std::int64_t m2) const {
        if (m1 < -half_width_ || m1 > half_width_ || m2 < -half_width_ || m2 > half_width_) return 0.0;
        return at(m1, m2);
    }

    friend bool operator==(const GridFunction& a, const GridFunction& b) {
        return a.dim_ == b.dim_ && a.level_ == b.level_ && a.extent_ == b.extent_ &&
               a.support_radius_ == b.support_radius_ && a.values_ == b.values_;
    }

private:
    int dim_;
    int level_;
    double spacing_;
    double extent_;
    double support_radius_;
    std::int64_t half_width_;
    std::vector<double> values_;
};

/// Canonical compactly supported test functions; radius <= extent required.
GridFunction make_bump(int dim, int level, double extent, double radius, Profile profile,
                       int degree = 0);

/// (delta^n sum |f|^p)^{1/p}; max |f| for p = inf.
double lp_norm(const GridFunction& f, const LpExponent& p);

/// Pointwise sum; grids must match exactly.  Declared support radius is the max.
GridFunction add(const GridFunction& f, const GridFunction& g);

/// Pointwise scalar multiple; support radius unchanged.
GridFunction scale(const GridFunction& f, double c);

namespace detail {
/// extent/spacing as an exact nonnegative integer; throws DomainError if the
/// extent is not a lattice multiple.
std::int64_t lattice_width(int level, double extent);
} // namespace detail

} // namespace fslab
