#include "fslab/smoothness.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <string>

#include "fslab/parallel.hpp"

namespace fslab {

namespace {

constexpr int kMaxOrder = 16;
constexpr std::int64_t kMaxShifts = std::int64_t{1} << 22;

int ceil_log2_u64(std::uint64_t m) { // smallest e with 2^e >= m, m >= 1
    return m <= 1 ? 0 : std::bit_width(m - 1);
}

std::int64_t isqrt_i64(std::int64_t n) {
    if (n <= 0) return 0;
    auto s = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n)));
    while (s > 0 && s * s > n) --s;
    while ((s + 1) * (s + 1) <= n) ++s;
    return s;
}

std::int64_t ceil_euclid_units(std::int64_t h1, std::int64_t h2) {
    const std::int64_t sq = h1 * h1 + h2 * h2;
    std::int64_t c = isqrt_i64(sq);
    if (c * c < sq) ++c;
    return c;
}

void validate_order(int r) {
    if (r < 1 || r > kMaxOrder)
        throw UsageError("difference order r must lie in [1, " + std::to_string(kMaxOrder) + "]");
}

// Largest dyadic index k with |h*delta| <= 2^-k, i.e. the coarsest-index
// bucket this shift first enters.  Exact integer arithmetic.
int scale_bucket(int dim, int level, std::int64_t h1, std::int64_t h2) {
    if (dim == 1) return level - ceil_log2_u64(static_cast<std::uint64_t>(std::abs(h1)));
    const auto sq = static_cast<std::uint64_t>(h1 * h1 + h2 * h2);
    return level - (ceil_log2_u64(sq) + 1) / 2;
}

struct ShiftEntry {
    std::int64_t h1;
    std::int64_t h2;
    int bucket;
};

// Half-lattice enumeration (h and -h have equal difference norms) of all
// shifts with 0 < |h| <= bound_units lattice units.
std::vector<ShiftEntry> enumerate_half_shifts(int dim, int level, double bound_units) {
    std::vector<ShiftEntry> shifts;
    if (bound_units < 1.0) return shifts;
    if (dim == 1) {
        const auto hmax = static_cast<std::int64_t>(std::floor(bound_units));
        if (hmax > kMaxShifts) throw ResourceError("shift enumeration too large");
        shifts.reserve(static_cast<std::size_t>(hmax));
        for (std::int64_t h = 1; h <= hmax; ++h)
            shifts.push_back({h, 0, scale_bucket(1, level, h, 0)});
        return shifts;
    }
    const auto limit_sq = static_cast<std::int64_t>(std::floor(bound_units * bound_units));
    const std::int64_t hmax = isqrt_i64(limit_sq);
    for (std::int64_t h1 = 0; h1 <= hmax; ++h1) {
        const std::int64_t rem = limit_sq - h1 * h1;
        const std::int64_t h2max = isqrt_i64(rem);
        const std::int64_t h2min = (h1 == 0) ? 1 : -h2max;
        for (std::int64_t h2 = h2min; h2 <= h2max; ++h2) {
            if (h1 == 0 && h2 == 0) continue;
            shifts.push_back({h1, h2, scale_bucket(2, level, h1, h2)});
            if (static_cast<std::int64_t>(shifts.size()) > kMaxShifts)
                throw ResourceError("shift enumeration too large");
        }
    }
    return shifts;
}

double sup_abs(const GridFunction& f) {
    double m = 0.0;
    for (double v : f.values()) m = std::max(m, std::abs(v));
    return m;
}

// One-pass difference norm over the enlarged window.  scale0 is a precomputed
// uniform bound on |difference| used to keep general-p powers in range; pass 0
// for the p in {1, 2, inf} fast paths.
double difference_norm_scaled(const GridFunction& f, const LatticeShift& shift, int r,
                              const LpExponent& p, double scale0) {
    const auto w = detail::difference_weights(r);
    const std::int64_t H = f.half_width();
    const double cell = std::exp2(-f.level() * f.dim());
    const double pv = p.is_inf() ? 0.0 : p.value();

    double acc = 0.0; // sum for finite p, max for p = inf
    const bool inf = p.is_inf();
    const bool direct = !inf && (pv == 1.0 || pv == 2.0);

    if (f.dim() == 1) {
        const std::int64_t h = shift.h1;
        const std::int64_t M = H + static_cast<std::int64_t>(r) * std::abs(h);
        for (std::int64_t m = -M; m <= M; ++m) {
            double d = 0.0;
            for (int j = 0; j <= r; ++j) d += w[static_cast<std::size_t>(j)] * f.sample(m + j * h);
            if (inf)
                acc = std::max(acc, std::abs(d));
            else if (pv == 1.0)
                acc += std::abs(d);
            else if (pv == 2.0)
                acc += d * d;
            else if (d != 0.0)
                acc += std::pow(std::abs(d) / scale0, pv);
        }
    } else {
        const std::int64_t h1 = shift.h1, h2 = shift.h2;
        const std::int64_t M1 = H + static_cast<std::int64_t>(r) * std::abs(h1);
        const std::int64_t M2 = H + static_cast<std::int64_t>(r) * std::abs(h2);
        for (std::int64_t m1 = -M1; m1 <= M1; ++m1)
            for (std::int64_t m2 = -M2; m2 <= M2; ++m2) {
                double d = 0.0;
                for (int j = 0; j <= r; ++j)
                    d += w[static_cast<std::size_t>(j)] * f.sample(m1 + j * h1, m2 + j * h2);
                if (inf)
                    acc = std::max(acc, std::abs(d));
                else if (pv == 1.0)
                    acc += std::abs(d);
                else if (pv == 2.0)
                    acc += d * d;
                else if (d != 0.0)
                    acc += std::pow(std::abs(d) / scale0, pv);
            }
    }

    if (inf) return acc;
    if (pv == 1.0) return cell * acc;
    if (pv == 2.0) return std::sqrt(cell * acc);
    if (acc == 0.0) return 0.0;
    return scale0 * std::pow(cell * acc, 1.0 / pv);
}

// Shift radius (in lattice units) beyond which every difference norm equals
// the separated value: translates of the support are disjoint past 2R, so two
// extra steps of margin always reach a separated representative.
double saturation_units(const GridFunction& f) {
    return 2.0 * f.support_radius() * std::exp2(f.level()) + 2.0;
}

} // namespace

namespace detail {

std::vector<double> difference_weights(int r) {
    validate_order(r);
    std::vector<double> w(static_cast<std::size_t>(r) + 1);
    double binom = 1.0;
    for (int j = 0; j <= r; ++j) {
        w[static_cast<std::size_t>(j)] = ((r - j) % 2 == 0) ? binom : -binom;
        binom = binom * (r - j) / (j + 1);
    }
    return w;
}

double difference_norm(const GridFunction& f, const LatticeShift& shift, int r,
                       const LpExponent& p) {
    validate_order(r);
    if (shift.dim != f.dim()) throw UsageError("shift dimension does not match the grid");
    double scale0 = 0.0;
    if (!p.is_inf() && p.value() != 1.0 && p.value() != 2.0) {
        scale0 = std::exp2(r) * sup_abs(f);
        if (scale0 == 0.0) return 0.0;
    }
    return difference_norm_scaled(f, shift, r, p, scale0);
}

ScaleProfile modulus_profile(const GridFunction& f, const LpExponent& p, int r, int k_lo,
                             int k_hi) {
    validate_order(r);
    if (k_lo > k_hi) throw UsageError("modulus_profile needs k_lo <= k_hi");
    if (k_hi > f.level()) throw ResolutionError("scale 2^-k below the lattice spacing");

    const double bound_units =
        std::min(std::exp2(static_cast<double>(f.level() - k_lo)), saturation_units(f));
    const auto shifts = enumerate_half_shifts(f.dim(), f.level(), bound_units);

    double scale0 = 0.0;
    if (!p.is_inf() && p.value() != 1.0 && p.value() != 2.0) scale0 = std::exp2(r) * sup_abs(f);

    std::vector<double> norms(shifts.size(), 0.0);
    parallel_chunks(static_cast<std::int64_t>(shifts.size()),
                    [&](int, std::int64_t begin, std::int64_t end) {
                        for (std::int64_t i = begin; i < end; ++i) {
                            const auto& sh = shifts[static_cast<std::size_t>(i)];
                            norms[static_cast<std::size_t>(i)] = difference_norm_scaled(
                                f, LatticeShift{f.dim(), sh.h1, sh.h2}, r, p, scale0);
                        }
                    });

    ScaleProfile prof;
    prof.k_lo = k_lo;
    prof.k_hi = k_hi;
    prof.omega.assign(static_cast<std::size_t>(k_hi - k_lo + 1), 0.0);
    prof.lp = lp_norm(f, p);

    std::vector<double> bucket_max(prof.omega.size(), 0.0);
    for (std::size_t i = 0; i < shifts.size(); ++i) {
        const int k = std::clamp(shifts[i].bucket, k_lo, k_hi);
        auto& b = bucket_max[static_cast<std::size_t>(k - k_lo)];
        b = std::max(b, norms[i]);
    }
    // omega(2^-k) collects every bucket at k or finer-entering (larger) shifts.
    double running = 0.0;
    for (int k = k_hi; k >= k_lo; --k) {
        running = std::max(running, bucket_max[static_cast<std::size_t>(k - k_lo)]);
        prof.omega[static_cast<std::size_t>(k - k_lo)] = running;
    }
    prof.omega_sat = running;
    return prof;
}

double ball_lattice_count(int dim, double radius_units) {
    if (radius_units < 0.0) return 0.0;
    if (dim == 1) return 2.0 * std::floor(radius_units) + 1.0;
    if (radius_units > static_cast<double>(std::int64_t{1} << 21))
        return std::numbers::pi * radius_units * radius_units; // far tail only
    const auto limit_sq = static_cast<std::int64_t>(std::floor(radius_units * radius_units));
    const std::int64_t imax = isqrt_i64(limit_sq);
    double count = 0.0;
    for (std::int64_t i = -imax; i <= imax; ++i)
        count += 2.0 * static_cast<double>(isqrt_i64(limit_sq - i * i)) + 1.0;
    return count;
}

} // namespace detail

GridFunction iterated_difference(const GridFunction& f, const LatticeShift& shift, int r) {
    validate_order(r);
    if (shift.dim != f.dim()) throw UsageError("shift dimension does not match the grid");
    const auto w = detail::difference_weights(r);
    const std::int64_t H = f.half_width();
    const std::int64_t grow = static_cast<std::int64_t>(r) * ceil_euclid_units(shift.h1, shift.h2);
    const std::int64_t Hout = H + grow;
    const double extent_out = static_cast<double>(Hout) * f.spacing();

    if (f.dim() == 1) {
        std::vector<double> vals(static_cast<std::size_t>(2 * Hout + 1));
        for (std::int64_t m = -Hout; m <= Hout; ++m) {
            double d = 0.0;
            for (int j = 0; j <= r; ++j)
                d += w[static_cast<std::size_t>(j)] * f.sample(m + j * shift.h1);
            vals[static_cast<std::size_t>(m + Hout)] = d;
        }
        return GridFunction(1, f.level(), extent_out, extent_out, std::move(vals));
    }
    const std::int64_t ppa = 2 * Hout + 1;
    if (ppa * ppa > (std::int64_t{1} << 26)) throw ResourceError("difference window too large");
    std::vector<double> vals(static_cast<std::size_t>(ppa * ppa));
    for (std::int64_t m1 = -Hout; m1 <= Hout; ++m1)
        for (std::int64_t m2 = -Hout; m2 <= Hout; ++m2) {
            double d = 0.0;
            for (int j = 0; j <= r; ++j)
                d += w[static_cast<std::size_t>(j)] * f.sample(m1 + j * shift.h1, m2 + j * shift.h2);
            vals[static_cast<std::size_t>((m1 + Hout) * ppa + (m2 + Hout))] = d;
        }
    return GridFunction(2, f.level(), extent_out, extent_out, std::move(vals));
}

ModulusValue modulus(const GridFunction& f, double t, const LpExponent& p, int r) {
    validate_order(r);
    if (!(t > 0.0) || !std::isfinite(t)) throw UsageError("modulus scale t must be positive");
    if (t < f.spacing()) return {0.0, true};

    const double bound_units = std::min(t * std::exp2(f.level()), saturation_units(f));
    const auto shifts = enumerate_half_shifts(f.dim(), f.level(), bound_units);

    double scale0 = 0.0;
    if (!p.is_inf() && p.value() != 1.0 && p.value() != 2.0) scale0 = std::exp2(r) * sup_abs(f);

    std::vector<double> norms(shifts.size(), 0.0);
    parallel_chunks(static_cast<std::int64_t>(shifts.size()),
                    [&](int, std::int64_t begin, std::int64_t end) {
                        for (std::int64_t i = begin; i < end; ++i) {
                            const auto& sh = shifts[static_cast<std::size_t>(i)];
                            norms[static_cast<std::size_t>(i)] = difference_norm_scaled(
                                f, LatticeShift{f.dim(), sh.h1, sh.h2}, r, p, scale0);
                        }
                    });
    double best = 0.0;
    for (double v : norms) best = std::max(best, v);
    return {best, false};
}

double modulus_interior(const GridFunction& f, double t, const LpExponent& p, int r,
                        double interior_radius) {
    validate_order(r);
    if (!(t > 0.0) || !std::isfinite(t)) throw UsageError("modulus scale t must be positive");
    if (!(interior_radius > 0.0)) throw UsageError("interior radius must be positive");
    if (interior_radius + r * t > f.support_radius())
        throw DomainError("interior window plus shift spread must stay inside the support");
    if (t < f.spacing()) return 0.0;

    const auto shifts = enumerate_half_shifts(f.dim(), f.level(), t * std::exp2(f.level()));
    const auto w = detail::difference_weights(r);
    const double u = interior_radius * std::exp2(f.level());
    const auto W = static_cast<std::int64_t>(std::floor(u));
    const double cell = std::exp2(-f.level() * f.dim());
    const double pv = p.is_inf() ? 0.0 : p.value();
    const auto wsq = static_cast<std::int64_t>(std::floor(u * u));

    double best = 0.0;
    for (const auto& sh : shifts) {
        // both signs: the interior window breaks the reflection symmetry
        for (int sign : {1, -1}) {
            const std::int64_t h1 = sign * sh.h1, h2 = sign * sh.h2;
            double acc = 0.0;
            if (f.dim() == 1) {
                for (std::int64_t m = -W; m <= W; ++m) {
                    double d = 0.0;
                    for (int j = 0; j <= r; ++j) d += w[static_cast<std::size_t>(j)] * f.sample(m + j * h1);
                    acc = p.is_inf() ? std::max(acc, std::abs(d))
                                     : acc + std::pow(std::abs(d), pv);
                }
            } else {
                for (std::int64_t m1 = -W; m1 <= W; ++m1)
                    for (std::int64_t m2 = -W; m2 <= W; ++m2) {
                        if (m1 * m1 + m2 * m2 > wsq) continue;
                        double d = 0.0;
                        for (int j = 0; j <= r; ++j)
                            d += w[static_cast<std::size_t>(j)] * f.sample(m1 + j * h1, m2 + j * h2);
                        acc = p.is_inf() ? std::max(acc, std::abs(d))
                                         : acc + std::pow(std::abs(d), pv);
                    }
            }
            best = std::max(best, p.is_inf() ? acc : std::pow(cell * acc, 1.0 / pv));
        }
    }
    return best;
}

GridFunction ball_means(const GridFunction& f, double t, const LpExponent& p, int r) {
    validate_order(r);
    if (p.is_inf()) throw UsageError("ball means require a finite integrability exponent");
    if (!(t > 0.0) || !std::isfinite(t)) throw UsageError("ball means scale t must be positive");

    const std::int64_t H = f.half_width();
    const double delta = f.spacing();
    const double units = t * std::exp2(f.level());
    const auto t_units = static_cast<std::int64_t>(std::floor(units));
    if (t_units > kMaxShifts) throw ResourceError("ball means scale too large for the grid");

    const std::int64_t Hout = H + static_cast<std::int64_t>(r) * t_units;
    const std::int64_t ppa_out = 2 * Hout + 1;
    const std::int64_t total = f.dim() == 1 ? ppa_out : ppa_out * ppa_out;
    if (total > (std::int64_t{1} << 26)) throw ResourceError("ball means window too large");

    const auto weights = detail::difference_weights(r);
    const double pv = p.value();
    const double N_t = detail::ball_lattice_count(f.dim(), units);
    const double R = f.support_radius();
    const double extent_out = static_cast<double>(Hout) * delta;
    const auto limit_sq_d = units * units;

    std::vector<double> out(static_cast<std::size_t>(total), 0.0);

    parallel_chunks(total, [&](int, std::int64_t begin, std::int64_t end) {
        for (std::int64_t idx = begin; idx < end; ++idx) {
            std::int64_t m1, m2 = 0;
            double xnorm;
            if (f.dim() == 1) {
                m1 = idx - Hout;
                xnorm = std::abs(static_cast<double>(m1)) * delta;
            } else {
                m1 = idx / ppa_out - Hout;
                m2 = idx % ppa_out - Hout;
                xnorm = std::sqrt(static_cast<double>(m1 * m1 + m2 * m2)) * delta;
            }
            // Beyond |h|*delta > |x| + R all translates miss the support and
            // the difference collapses to (-1)^r f(x).
            const double sat_units = std::ceil((xnorm + R) / delta) + 1.0;
            const double fx = f.dim() == 1 ? f.sample(m1) : f.sample(m1, m2);
            const bool complete_far = units > sat_units;
            const double enum_units = complete_far ? sat_units : units;
            const auto hmax = static_cast<std::int64_t>(std::floor(enum_units));
            const auto enum_sq = static_cast<std::int64_t>(std::floor(enum_units * enum_units));

            double num = 0.0;
            double cnt = 0.0;
            if (f.dim() == 1) {
                for (std::int64_t h = -hmax; h <= hmax; ++h) {
                    if (!complete_far &&
                        static_cast<double>(h) * static_cast<double>(h) > limit_sq_d)
                        continue;
                    double d = 0.0;
                    for (int j = 0; j <= r; ++j)
                        d += weights[static_cast<std::size_t>(j)] * f.sample(m1 + j * h);
                    num += std::pow(std::abs(d), pv);
                    cnt += 1.0;
                }
            } else {
                for (std::int64_t h1 = -hmax; h1 <= hmax; ++h1) {
                    const std::int64_t rem = enum_sq - h1 * h1;
                    if (rem < 0) continue;
                    const std::int64_t h2max = isqrt_i64(rem);
                    for (std::int64_t h2 = -h2max; h2 <= h2max; ++h2) {
                        if (!complete_far &&
                            static_cast<double>(h1 * h1 + h2 * h2) > limit_sq_d)
                            continue;
                        double d = 0.0;
                        for (int j = 0; j <= r; ++j)
                            d += weights[static_cast<std::size_t>(j)] *
                                 f.sample(m1 + j * h1, m2 + j * h2);
                        num += std::pow(std::abs(d), pv);
                        cnt += 1.0;
                    }
                }
            }
            if (complete_far && fx != 0.0) num += (N_t - cnt) * std::pow(std::abs(fx), pv);
            const double denom = complete_far ? N_t : cnt;
            out[static_cast<std::size_t>(idx)] =
                denom > 0.0 && num > 0.0 ? std::pow(num / denom, 1.0 / pv) : 0.0;
        }
    });

    return GridFunction(f.dim(), f.level(), extent_out, extent_out, std::move(out));
}

ModulusCurve modulus_curve(const GridFunction& f, const LpExponent& p, int r, int k_min,
                           int k_max) {
    if (k_min > k_max) throw UsageError("modulus_curve needs k_min <= k_max");
    if (k_max > f.level())
        throw ResolutionError("finest requested scale is below the lattice spacing");
    const auto prof = detail::modulus_profile(f, p, r, k_min, k_max);
    ModulusCurve curve;
    curve.points.reserve(static_cast<std::size_t>(k_max - k_min + 1));
    for (int k = k_max; k >= k_min; --k)
        curve.points.emplace_back(std::exp2(-k), prof.at(k));
    return curve;
}

} // namespace fslab
