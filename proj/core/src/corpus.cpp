#include "fslab/corpus.hpp"

#include <cmath>
#include <numbers>

#include "fslab/errors.hpp"
#include "fslab/rng.hpp"

namespace fslab {

namespace {

double sub_bump(double dist_sq, double width) {
    const double v = dist_sq / (width * width);
    return v < 1.0 ? std::exp(-1.0 / (1.0 - v)) : 0.0;
}

// Shape value at squared distance rho_sq from the origin, unit radius scale.
double shape_value(CorpusProfile profile, double x1, double rho_sq, double radius) {
    const double u = std::sqrt(rho_sq) / radius;
    switch (profile) {
        case CorpusProfile::Parabola:
            return u < 1.0 ? 1.0 - u * u : 0.0;
        case CorpusProfile::CosineArch:
            return u < 1.0 ? 0.5 * (1.0 + std::cos(std::numbers::pi * u)) : 0.0;
        case CorpusProfile::Step:
            return u <= 0.5 ? 1.0 : 0.0;
        case CorpusProfile::Zigzag: {
            if (u >= 1.0) return 0.0;
            const double t = 3.0 * u;
            const double tri = 1.0 - 2.0 * std::fabs(t - std::floor(t) - 0.5);
            return (1.0 - u) * tri;
        }
        case CorpusProfile::TwinBumps: {
            const double w = radius / 4.0;
            const double off = radius / 2.0;
            const double other_sq = rho_sq - x1 * x1; // remaining coordinates
            const double d_plus = (x1 - off) * (x1 - off) + other_sq;
            const double d_minus = (x1 + off) * (x1 + off) + other_sq;
            return sub_bump(d_plus, w) + sub_bump(d_minus, w);
        }
        default:
            throw UsageError("shape_value handles the non-delegated profiles only");
    }
}

struct RandomBump {
    double c1 = 0.0;
    double c2 = 0.0;
    double width = 0.1;
    double amp = 0.0;
};

// Three sub-bumps per member; placement keeps |c| + width <= radius.
std::vector<RandomBump> random_bumps(int dim, double radius, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<RandomBump> bumps(3);
    for (RandomBump& b : bumps) {
        if (dim == 1) {
            b.c1 = rng.uniform(-0.6 * radius, 0.6 * radius);
        } else {
            const double angle = rng.uniform(0.0, 2.0 * std::numbers::pi);
            const double rad = 0.6 * radius * std::sqrt(rng.uniform());
            b.c1 = rad * std::cos(angle);
            b.c2 = rad * std::sin(angle);
        }
        b.width = rng.uniform(0.2 * radius, 0.4 * radius);
        b.amp = rng.uniform(-1.0, 1.0);
    }
    return bumps;
}

GridFunction make_random_member(int dim, int level, double extent, double radius,
                                std::uint64_t seed) {
    const std::vector<RandomBump> bumps = random_bumps(dim, radius, seed);
    const std::int64_t hw = detail::lattice_width(level, extent);
    const double delta = std::exp2(-level);
    const std::int64_t ppa = 2 * hw + 1;
    std::vector<double> vals(static_cast<std::size_t>(dim == 1 ? ppa : ppa * ppa));
    const auto value_at = [&](double x1, double x2) {
        double v = 0.0;
        for (const RandomBump& b : bumps) {
            const double d1 = x1 - b.c1;
            const double d2 = x2 - b.c2;
            v += b.amp * sub_bump(d1 * d1 + d2 * d2, b.width);
        }
        return v;
    };
    if (dim == 1) {
        for (std::int64_t m = -hw; m <= hw; ++m)
            vals[static_cast<std::size_t>(m + hw)] =
                value_at(static_cast<double>(m) * delta, 0.0);
    } else {
        for (std::int64_t m1 = -hw; m1 <= hw; ++m1)
            for (std::int64_t m2 = -hw; m2 <= hw; ++m2)
                vals[static_cast<std::size_t>((m1 + hw) * ppa + (m2 + hw))] =
                    value_at(static_cast<double>(m1) * delta, static_cast<double>(m2) * delta);
    }
    return GridFunction(dim, level, extent, radius, std::move(vals));
}

constexpr CorpusProfile kFixedOrder[7] = {
    CorpusProfile::Hat,    CorpusProfile::SmoothBump, CorpusProfile::Parabola,
    CorpusProfile::CosineArch, CorpusProfile::Step,   CorpusProfile::Zigzag,
    CorpusProfile::TwinBumps,
};

} // namespace

std::string to_string(CorpusProfile profile) {
    switch (profile) {
        case CorpusProfile::Hat: return "hat";
        case CorpusProfile::SmoothBump: return "smooth_bump";
        case CorpusProfile::Parabola: return "parabola";
        case CorpusProfile::CosineArch: return "cosine_arch";
        case CorpusProfile::Step: return "step";
        case CorpusProfile::Zigzag: return "zigzag";
        case CorpusProfile::TwinBumps: return "twin_bumps";
    }
    throw UsageError("unknown corpus profile");
}

CorpusProfile corpus_profile_from_string(const std::string& name) {
    for (CorpusProfile p : kFixedOrder)
        if (to_string(p) == name) return p;
    throw UsageError("unknown corpus profile '" + name + "'");
}

GridFunction make_profile(CorpusProfile profile, int dim, int level, double extent,
                          double radius) {
    if (profile == CorpusProfile::Hat) return make_bump(dim, level, extent, radius, Profile::Hat);
    if (profile == CorpusProfile::SmoothBump)
        return make_bump(dim, level, extent, radius, Profile::SmoothBump);
    if (dim != 1 && dim != 2) throw DomainError("dim must be 1 or 2");
    if (!(radius > 0.0) || radius > extent)
        throw DomainError("profile radius must lie in (0, extent]");

    const std::int64_t hw = detail::lattice_width(level, extent);
    const double delta = std::exp2(-level);
    const std::int64_t ppa = 2 * hw + 1;
    std::vector<double> vals(static_cast<std::size_t>(dim == 1 ? ppa : ppa * ppa));
    if (dim == 1) {
        for (std::int64_t m = -hw; m <= hw; ++m) {
            const double x = static_cast<double>(m) * delta;
            vals[static_cast<std::size_t>(m + hw)] = shape_value(profile, x, x * x, radius);
        }
    } else {
        for (std::int64_t m1 = -hw; m1 <= hw; ++m1) {
            const double x1 = static_cast<double>(m1) * delta;
            for (std::int64_t m2 = -hw; m2 <= hw; ++m2) {
                const double x2 = static_cast<double>(m2) * delta;
                vals[static_cast<std::size_t>((m1 + hw) * ppa + (m2 + hw))] =
                    shape_value(profile, x1, x1 * x1 + x2 * x2, radius);
            }
        }
    }
    return GridFunction(dim, level, extent, radius, std::move(vals));
}

std::vector<CorpusMember> make_corpus(int dim, int level, double extent, double radius,
                                      int count, std::uint64_t seed) {
    if (count < 1 || count > 64) throw UsageError("corpus count must lie in [1, 64]");
    std::vector<CorpusMember> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count && i < 7; ++i)
        out.push_back({to_string(kFixedOrder[i]),
                       make_profile(kFixedOrder[i], dim, level, extent, radius)});
    for (int i = 7; i < count; ++i)
        out.push_back({"random_" + std::to_string(i - 6),
                       make_random_member(dim, level, extent, radius,
                                          seed + static_cast<std::uint64_t>(i - 6))});
    return out;
}

} // namespace fslab
