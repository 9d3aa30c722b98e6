#include "fslab/grid.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>

namespace fslab {

namespace {

constexpr int kMaxLevel = 24;
constexpr std::int64_t kMaxPointsTotal = std::int64_t{1} << 26;

double profile_value(Profile profile, int degree, double x1, double rho_sq, double radius) {
    switch (profile) {
        case Profile::Hat: {
            const double v = 1.0 - std::sqrt(rho_sq) / radius;
            return v > 0.0 ? v : 0.0;
        }
        case Profile::SmoothBump: {
            const double u = rho_sq / (radius * radius);
            return u < 1.0 ? std::exp(-1.0 / (1.0 - u)) : 0.0;
        }
        case Profile::Polynomial: {
            if (rho_sq >= radius * radius) return 0.0;
            double v = 1.0;
            for (int i = 0; i < degree; ++i) v *= x1;
            return v;
        }
        case Profile::Abs:
            return rho_sq < radius * radius ? std::abs(x1) - radius : 0.0;
    }
    throw UsageError("unknown profile");
}

} // namespace

namespace detail {

std::int64_t lattice_width(int level, double extent) {
    if (level < 0 || level > kMaxLevel)
        throw DomainError("level must lie in [0, " + std::to_string(kMaxLevel) + "]");
    if (!(extent > 0.0) || !std::isfinite(extent))
        throw DomainError("extent must be a positive real");
    const double w = extent * std::exp2(level);
    if (w != std::floor(w) || w < 1.0)
        throw DomainError("extent must be a positive multiple of the lattice spacing");
    if (w > static_cast<double>(std::int64_t{1} << 23))
        throw ResourceError("grid extent too large for the requested level");
    return static_cast<std::int64_t>(w);
}

} // namespace detail

GridFunction::GridFunction(int dim, int level, double extent, double support_radius,
                           std::vector<double> values)
    : dim_(dim),
      level_(level),
      spacing_(std::exp2(-level)),
      extent_(extent),
      support_radius_(support_radius),
      half_width_(detail::lattice_width(level, extent)),
      values_(std::move(values)) {
    if (dim_ != 1 && dim_ != 2) throw DomainError("dim must be 1 or 2");
    if (!(support_radius_ > 0.0) || !std::isfinite(support_radius_))
        throw DomainError("support_radius must be a positive real");
    if (support_radius_ > extent_) throw DomainError("support_radius must not exceed extent");

    const std::int64_t ppa = points_per_axis();
    const std::int64_t total = dim_ == 1 ? ppa : ppa * ppa;
    if (total > kMaxPointsTotal) throw ResourceError("grid too large");
    if (static_cast<std::int64_t>(values_.size()) != total)
        throw DomainError("values size does not match grid shape");

    const double r_sq = support_radius_ * support_radius_;
    const double d_sq = spacing_ * spacing_;
    if (dim_ == 1) {
        for (std::int64_t m = -half_width_; m <= half_width_; ++m) {
            const double v = at(m);
            if (!std::isfinite(v)) throw DomainError("values must be finite");
            if (static_cast<double>(m * m) * d_sq >= r_sq && v != 0.0)
                throw DomainError("nonzero sample outside the declared support radius");
        }
    } else {
        for (std::int64_t m1 = -half_width_; m1 <= half_width_; ++m1)
            for (std::int64_t m2 = -half_width_; m2 <= half_width_; ++m2) {
                const double v = at(m1, m2);
                if (!std::isfinite(v)) throw DomainError("values must be finite");
                if (static_cast<double>(m1 * m1 + m2 * m2) * d_sq >= r_sq && v != 0.0)
                    throw DomainError("nonzero sample outside the declared support radius");
            }
    }
}

GridFunction make_bump(int dim, int level, double extent, double radius, Profile profile,
                       int degree) {
    if (dim != 1 && dim != 2) throw DomainError("dim must be 1 or 2");
    if (!(radius > 0.0) || radius > extent)
        throw DomainError("bump radius must lie in (0, extent]");
    if (degree < 0 || degree > 8) throw UsageError("polynomial degree must lie in [0, 8]");

    const std::int64_t hw = detail::lattice_width(level, extent);
    const double delta = std::exp2(-level);
    const std::int64_t ppa = 2 * hw + 1;

    std::vector<double> vals;
    if (dim == 1) {
        vals.resize(static_cast<std::size_t>(ppa));
        for (std::int64_t m = -hw; m <= hw; ++m) {
            const double x = static_cast<double>(m) * delta;
            vals[static_cast<std::size_t>(m + hw)] = profile_value(profile, degree, x, x * x, radius);
        }
    } else {
        vals.resize(static_cast<std::size_t>(ppa * ppa));
        for (std::int64_t m1 = -hw; m1 <= hw; ++m1) {
            const double x1 = static_cast<double>(m1) * delta;
            for (std::int64_t m2 = -hw; m2 <= hw; ++m2) {
                const double x2 = static_cast<double>(m2) * delta;
                vals[static_cast<std::size_t>((m1 + hw) * ppa + (m2 + hw))] =
                    profile_value(profile, degree, x1, x1 * x1 + x2 * x2, radius);
            }
        }
    }
    return GridFunction(dim, level, extent, radius, std::move(vals));
}

double lp_norm(const GridFunction& f, const LpExponent& p) {
    const auto& v = f.values();
    if (p.is_inf()) {
        double m = 0.0;
        for (double x : v) m = std::max(m, std::abs(x));
        return m;
    }
    const double cell = std::exp2(-f.level() * f.dim()); // delta^n
    const double pv = p.value();
    if (pv == 1.0) {
        double s = 0.0;
        for (double x : v) s += std::abs(x);
        return cell * s;
    }
    if (pv == 2.0) {
        double s = 0.0;
        for (double x : v) s += x * x;
        return std::sqrt(cell * s);
    }
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    if (m == 0.0) return 0.0;
    double s = 0.0;
    for (double x : v)
        if (x != 0.0) s += std::pow(std::abs(x) / m, pv);
    return m * std::pow(cell * s, 1.0 / pv);
}

GridFunction add(const GridFunction& f, const GridFunction& g) {
    if (f.dim() != g.dim() || f.level() != g.level() || f.extent() != g.extent())
        throw DomainError("add requires identical grids");
    std::vector<double> v = f.values();
    const auto& w = g.values();
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += w[i];
    return GridFunction(f.dim(), f.level(), f.extent(),
                        std::max(f.support_radius(), g.support_radius()), std::move(v));
}

GridFunction scale(const GridFunction& f, double c) {
    if (!std::isfinite(c)) throw DomainError("scale factor must be finite");
    std::vector<double> v = f.values();
    for (double& x : v) x *= c;
    return GridFunction(f.dim(), f.level(), f.extent(), f.support_radius(), std::move(v));
}

} // namespace fslab
