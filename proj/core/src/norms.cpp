#include "fslab/norms.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

#include "fslab/parallel.hpp"
#include "fslab/smoothness.hpp"

namespace fslab {

namespace {

constexpr double kLn2 = std::numbers::ln2;
constexpr int kMaxTailSteps = 1200; // beyond this the geometric remainder is negligible
constexpr double kTailRelTol = 1e-30;

int ceil_log2_u64(std::uint64_t m) {
    return m <= 1 ? 0 : std::bit_width(m - 1);
}

std::int64_t div_floor(std::int64_t a, std::int64_t b) { // b > 0
    return a >= 0 ? a / b : -((-a + b - 1) / b);
}

std::int64_t div_ceil(std::int64_t a, std::int64_t b) { // b > 0
    return a >= 0 ? (a + b - 1) / b : -((-a) / b);
}

using ShiftRange = std::pair<std::int64_t, std::int64_t>;

// Merge overlapping/adjacent ranges and call run(lo, hi) on each blob.
template <typename Run>
void sweep_merged(std::vector<ShiftRange>& iv, Run run) {
    std::sort(iv.begin(), iv.end());
    std::int64_t lo = 0, hi = -1;
    bool open = false;
    for (const auto& [a, b] : iv) {
        if (!open) {
            lo = a, hi = b, open = true;
        } else if (a <= hi + 1) {
            hi = std::max(hi, b);
        } else {
            run(lo, hi);
            lo = a, hi = b;
        }
    }
    if (open) run(lo, hi);
}

double p_power(double v, double pv) {
    if (pv == 1.0) return v;
    if (pv == 2.0) return v * v;
    return std::pow(v, pv);
}

double p_root(double v, double pv) {
    if (pv == 1.0) return v;
    if (pv == 2.0) return std::sqrt(v);
    return std::pow(v, 1.0 / pv);
}

double sup_abs(const GridFunction& f) {
    double m = 0.0;
    for (double v : f.values()) m = std::max(m, std::abs(v));
    return m;
}

// Lattice count of the closed ball of radius 2^e cells; exact while the 2D
// disk is enumerable, asymptotic far beyond (where only tail remainders use it).
double ball_count_pow2(int dim, int e) {
    if (dim == 1) return e >= 62 ? std::exp2(e + 1) : std::exp2(e + 1) + 1.0;
    static const std::vector<double> table = [] {
        std::vector<double> t;
        for (int k = 0; k <= 21; ++k)
            t.push_back(detail::ball_lattice_count(2, std::exp2(k)));
        return t;
    }();
    if (e <= 21) return table[static_cast<std::size_t>(e)];
    return std::numbers::pi * std::exp2(2.0 * e);
}

struct ZeroReportShape {
    int k_lo;
    int k_hi;
};

QuasiNormReport zero_report(Family family, NormVariant variant, const ZeroReportShape& sh) {
    QuasiNormReport rep;
    rep.family = family;
    rep.variant = variant;
    rep.total = 0.0;
    rep.seminorm = 0.0;
    if (variant != NormVariant::Homogeneous0Inf) rep.lp_part = 0.0;
    for (int k = sh.k_hi; k >= sh.k_lo; --k) rep.scales.push_back({std::exp2(-k), 0.0});
    rep.tail_head = 0.0;
    return rep;
}

} // namespace

void SmoothnessParams::validate() const {
    if (!(s > 0.0) || !std::isfinite(s)) throw UsageError("smoothness s must be positive");
    if (r < 1 || r > 16) throw UsageError("difference order r must lie in [1, 16]");
    if (!(static_cast<double>(r) > s)) throw UsageError("difference order r must exceed s");
    if (family == Family::TriebelLizorkin && p.is_inf())
        throw UsageError("the ball-means family requires a finite integrability exponent");
}

namespace detail {

int coarse_scale_index(double extent) {
    int k = 0;
    while (std::exp2(k) < 2.0 * extent) ++k;
    return k;
}

double dyadic_q_sum(const std::vector<double>& y, double tail_head, double s,
                    const LpExponent& q) {
    double peak = tail_head;
    for (double v : y) peak = std::max(peak, v);
    if (q.is_inf() || peak == 0.0) return peak;
    const double qv = q.value();
    double acc = 0.0;
    for (double v : y)
        if (v > 0.0) acc += std::pow(v / peak, qv);
    acc *= kLn2;
    if (tail_head > 0.0) {
        const double ratio = std::exp2(-s * qv);
        acc += kLn2 * std::pow(tail_head / peak, qv) / (1.0 - ratio);
    }
    return peak * std::pow(acc, 1.0 / qv);
}

} // namespace detail

QuasiNormReport besov_norm(const GridFunction& f, const SmoothnessParams& prm,
                           NormVariant variant) {
    prm.validate();
    if (prm.family != Family::Besov) throw UsageError("besov_norm requires Besov parameters");

    const int K = detail::coarse_scale_index(f.extent());
    const int k_lo = variant == NormVariant::Inhomogeneous01 ? 0 : -K;
    const int k_hi = f.level();

    const auto prof = detail::modulus_profile(f, prm.p, prm.r, k_lo, k_hi);

    QuasiNormReport rep;
    rep.family = Family::Besov;
    rep.variant = variant;
    std::vector<double> y(static_cast<std::size_t>(k_hi - k_lo + 1), 0.0);
    for (int k = k_lo; k <= k_hi; ++k)
        y[static_cast<std::size_t>(k - k_lo)] = std::exp2(k * prm.s) * prof.at(k);
    rep.tail_head = variant == NormVariant::Inhomogeneous01
                        ? 0.0
                        : std::exp2(-(K + 1) * prm.s) * prof.omega_sat;
    rep.seminorm = detail::dyadic_q_sum(y, rep.tail_head, prm.s, prm.q);
    for (int k = k_hi; k >= k_lo; --k)
        rep.scales.push_back({std::exp2(-k), y[static_cast<std::size_t>(k - k_lo)]});
    if (variant == NormVariant::Homogeneous0Inf) {
        rep.total = rep.seminorm;
    } else {
        rep.lp_part = prof.lp;
        rep.total = prof.lp + rep.seminorm;
    }
    return rep;
}

QuasiNormReport tl_norm(const GridFunction& f, const SmoothnessParams& prm, NormVariant variant) {
    prm.validate();
    if (prm.family != Family::TriebelLizorkin)
        throw UsageError("tl_norm requires Triebel-Lizorkin parameters");

    const int L = f.level();
    const int n = f.dim();
    const int K = detail::coarse_scale_index(f.extent());
    const bool has_tail = variant != NormVariant::Inhomogeneous01;
    const int k_lo = has_tail ? -K : 0;
    const int k_hi = L;
    const double s = prm.s;
    const int r = prm.r;
    const double pv = prm.p.value();
    const double qv = prm.q.is_inf() ? 0.0 : prm.q.value();
    const bool q_inf = prm.q.is_inf();
    const double delta = f.spacing();
    const double R = f.support_radius();

    const double dscale = std::exp2(r) * sup_abs(f);
    if (dscale == 0.0) return zero_report(Family::TriebelLizorkin, variant, {k_lo, k_hi});

    // Window: exact reach of the explicit scales, widened for the coarse tail
    // so that truncation error is a scale-free fraction of the far-field mass.
    double W = f.extent() + r * std::exp2(-k_lo);
    if (has_tail) W = std::max(W, (n == 1 ? 64.0 : 16.0) * R);
    const auto Hout = static_cast<std::int64_t>(std::ceil(W * std::exp2(L) - 1e-9));
    const std::int64_t ppa = 2 * Hout + 1;
    const std::int64_t total_cells = n == 1 ? ppa : ppa * ppa;
    if (total_cells > (std::int64_t{1} << 26)) throw ResourceError("norm window too large");

    const double diag = n == 1 ? 1.0 : std::numbers::sqrt2;
    const double sat_max = std::ceil((W * diag + R) / delta) + 1.0;
    const double units_cap = std::exp2(static_cast<double>(L - k_lo));
    const double bound_max = has_tail ? sat_max : std::min(units_cap, sat_max);
    // Cost model: cells outside the support only sweep the <= r short shift
    // intervals that can reach it; only the (2uH+1)^n interior cells pay the
    // full saturated range.  uH bounds the support box in lattice units.
    const std::int64_t support_units =
        std::min(f.half_width(), static_cast<std::int64_t>(std::ceil(R / delta)));
    const double uH = static_cast<double>(support_units);
    const double harmonic = 1.0 + std::log(static_cast<double>(r));
    double ops_est;
    if (n == 1) {
        const double reach_out = std::min(bound_max, (2.0 * uH + 2.0) * harmonic + 2.0 * r + 4.0);
        const double reach_in = std::min(bound_max, 2.0 * uH + 4.0);
        ops_est = (static_cast<double>(total_cells) * 2.0 * reach_out +
                   (2.0 * uH + 1.0) * 2.0 * reach_in) *
                  (r + 1);
    } else {
        const double area_out = std::min(4.0 * bound_max * bound_max,
                                         1.7 * (2.0 * uH + 3.0) * (2.0 * uH + 3.0) + 8.0 * r);
        const double area_in =
            std::min(4.0 * bound_max * bound_max,
                     3.2 * ((1.0 + diag) * uH + 3.0) * ((1.0 + diag) * uH + 3.0));
        ops_est = (static_cast<double>(total_cells) * area_out +
                   (2.0 * uH + 1.0) * (2.0 * uH + 1.0) * area_in) *
                  (r + 1);
    }
    ops_est += static_cast<double>(total_cells) *
               (static_cast<double>(k_hi - k_lo + 1) + (has_tail ? 400.0 : 0.0));
    if (ops_est > 6e9) throw ResourceError("norm evaluation would exceed the resource budget");
    if (ceil_log2_u64(static_cast<std::uint64_t>(bound_max)) + 1 > 31)
        throw ResourceError("norm shift range too deep");

    const auto weights = detail::difference_weights(r);
    const int nscales = k_hi - k_lo + 1;
    const int nlayers = nscales + (has_tail ? 1 : 0); // extra slot: first tail scale

    std::vector<double> pow2ks(static_cast<std::size_t>(nscales));
    std::vector<double> n_expl(static_cast<std::size_t>(nscales));
    for (int k = k_lo; k <= k_hi; ++k) {
        pow2ks[static_cast<std::size_t>(k - k_lo)] = std::exp2(k * s);
        n_expl[static_cast<std::size_t>(k - k_lo)] = ball_count_pow2(n, L - k);
    }
    const double pow2_minus_s = std::exp2(-s);
    const double ynorm = std::exp2(-s * k_hi); // keeps (y/ynorm)^p in range
    const double inv_dscale = 1.0 / dscale;
    const double units_max = std::exp2(static_cast<double>(L - k_lo));

    const int nchunks = chunk_count(total_cells);
    std::vector<double> gp_chunk(static_cast<std::size_t>(nchunks), 0.0);
    std::vector<std::vector<double>> layer_chunk(
        static_cast<std::size_t>(nchunks),
        std::vector<double>(static_cast<std::size_t>(nlayers), 0.0));

    parallel_chunks(total_cells, [&](int chunk, std::int64_t begin, std::int64_t end) {
        auto& layers = layer_chunk[static_cast<std::size_t>(chunk)];
        double gp = 0.0;
        std::array<double, 32> s_cum{};
        std::array<double, 32> c_cum{};
        std::vector<double> yterm(static_cast<std::size_t>(nscales) + kMaxTailSteps + 1, 0.0);
        std::vector<ShiftRange> iv, iv2;
        iv.reserve(static_cast<std::size_t>(r));
        iv2.reserve(static_cast<std::size_t>(r));

        for (std::int64_t idx = begin; idx < end; ++idx) {
            std::int64_t m1, m2 = 0;
            double xnorm;
            if (n == 1) {
                m1 = idx - Hout;
                xnorm = std::abs(static_cast<double>(m1)) * delta;
            } else {
                m1 = idx / ppa - Hout;
                m2 = idx % ppa - Hout;
                xnorm = std::sqrt(static_cast<double>(m1 * m1 + m2 * m2)) * delta;
            }
            const double fx = n == 1 ? f.sample(m1) : f.sample(m1, m2);
            const double fxn = std::abs(fx) * inv_dscale;
            const double fxp = p_power(fxn, pv);
            const double sat_units = std::ceil((xnorm + R) / delta) + 1.0;
            const double bound = has_tail ? sat_units : std::min(units_max, sat_units);
            const auto hmax = static_cast<std::int64_t>(std::floor(bound));
            const int nb = ceil_log2_u64(static_cast<std::uint64_t>(hmax)) + 1;
            const int k_min_x = k_hi - nb + 1;

            std::fill(s_cum.begin(), s_cum.begin() + nb, 0.0);
            std::fill(c_cum.begin(), c_cum.begin() + nb, 0.0);

            // bucket index: 0 <-> k_hi, nb-1 <-> k_min_x
            if (n == 1) {
                const auto bucket1 = [&](std::int64_t h) {
                    double d = 0.0;
                    for (int j = 0; j <= r; ++j)
                        d += weights[static_cast<std::size_t>(j)] * f.sample(m1 + j * h);
                    const int b = ceil_log2_u64(static_cast<std::uint64_t>(std::llabs(h)));
                    s_cum[static_cast<std::size_t>(b)] += p_power(std::abs(d) * inv_dscale, pv);
                    c_cum[static_cast<std::size_t>(b)] += 1.0;
                };
                if (fxn == 0.0) {
                    // f(x) = 0, so only shifts landing some x + j*h inside the
                    // support box matter: a union of <= r short intervals.  The
                    // skipped counts feed a completion term that is zero here.
                    iv.clear();
                    for (int j = 1; j <= r; ++j) {
                        const std::int64_t lo = std::max(div_ceil(-m1 - support_units, j), -hmax);
                        const std::int64_t hi = std::min(div_floor(-m1 + support_units, j), hmax);
                        if (lo <= hi) iv.push_back({lo, hi});
                    }
                    sweep_merged(iv, [&](std::int64_t lo, std::int64_t hi) {
                        for (std::int64_t h = lo; h <= hi; ++h)
                            if (h != 0) bucket1(h);
                    });
                } else {
                    for (std::int64_t h = -hmax; h <= hmax; ++h)
                        if (h != 0) bucket1(h);
                }
            } else {
                const auto limit_sq = static_cast<std::int64_t>(std::floor(bound * bound));
                const auto bucket2 = [&](std::int64_t h1, std::int64_t h2) {
                    double d = 0.0;
                    for (int j = 0; j <= r; ++j)
                        d += weights[static_cast<std::size_t>(j)] *
                             f.sample(m1 + j * h1, m2 + j * h2);
                    const auto sq = static_cast<std::uint64_t>(h1 * h1 + h2 * h2);
                    const int b = (ceil_log2_u64(sq) + 1) / 2;
                    s_cum[static_cast<std::size_t>(b)] += p_power(std::abs(d) * inv_dscale, pv);
                    c_cum[static_cast<std::size_t>(b)] += 1.0;
                };
                const auto h2_top = [&](std::int64_t h1) -> std::int64_t {
                    const std::int64_t rem = limit_sq - h1 * h1;
                    if (rem < 0) return -1;
                    auto v = static_cast<std::int64_t>(std::sqrt(static_cast<double>(rem)));
                    while (v * v > rem) --v;
                    while ((v + 1) * (v + 1) <= rem) ++v;
                    return v;
                };
                if (fxn == 0.0) {
                    iv.clear();
                    for (int j = 1; j <= r; ++j) {
                        const std::int64_t lo = std::max(div_ceil(-m1 - support_units, j), -hmax);
                        const std::int64_t hi = std::min(div_floor(-m1 + support_units, j), hmax);
                        if (lo <= hi) iv.push_back({lo, hi});
                    }
                    sweep_merged(iv, [&](std::int64_t lo1, std::int64_t hi1) {
                        for (std::int64_t h1 = lo1; h1 <= hi1; ++h1) {
                            const std::int64_t vmax = h2_top(h1);
                            if (vmax < 0) continue;
                            iv2.clear();
                            for (int j = 1; j <= r; ++j) {
                                const std::int64_t a1 = j * h1 + m1;
                                if (a1 < -support_units || a1 > support_units) continue;
                                const std::int64_t lo =
                                    std::max(div_ceil(-m2 - support_units, j), -vmax);
                                const std::int64_t hi =
                                    std::min(div_floor(-m2 + support_units, j), vmax);
                                if (lo <= hi) iv2.push_back({lo, hi});
                            }
                            sweep_merged(iv2, [&](std::int64_t lo, std::int64_t hi) {
                                for (std::int64_t h2 = lo; h2 <= hi; ++h2)
                                    if (h1 != 0 || h2 != 0) bucket2(h1, h2);
                            });
                        }
                    });
                } else {
                    for (std::int64_t h1 = -hmax; h1 <= hmax; ++h1) {
                        const std::int64_t vmax = h2_top(h1);
                        if (vmax < 0) continue;
                        for (std::int64_t h2 = -vmax; h2 <= vmax; ++h2)
                            if (h1 != 0 || h2 != 0) bucket2(h1, h2);
                    }
                }
            }
            for (int b = 1; b < nb; ++b) {
                s_cum[static_cast<std::size_t>(b)] += s_cum[static_cast<std::size_t>(b - 1)];
                c_cum[static_cast<std::size_t>(b)] += c_cum[static_cast<std::size_t>(b - 1)];
            }
            const double s_tot = s_cum[static_cast<std::size_t>(nb - 1)];
            const double c_tot = c_cum[static_cast<std::size_t>(nb - 1)] + 1.0; // h = 0

            if (s_tot == 0.0 && fxn == 0.0) continue; // nothing reaches the support

            // explicit scales
            int nterm = 0;
            for (int k = k_hi; k >= k_lo; --k) {
                const int b = k_hi - k;
                double sc, cc;
                if (b < nb) {
                    sc = s_cum[static_cast<std::size_t>(b)];
                    cc = c_cum[static_cast<std::size_t>(b)] + 1.0;
                } else {
                    sc = s_tot;
                    cc = c_tot;
                }
                const double N = n_expl[static_cast<std::size_t>(k - k_lo)];
                double sfull = sc;
                if (cc < N && fxp > 0.0) sfull += (N - cc) * fxp;
                yterm[static_cast<std::size_t>(nterm++)] =
                    pow2ks[static_cast<std::size_t>(k - k_lo)] * p_root(sfull / N, pv);
            }
            const int ntail_base = nterm;

            if (has_tail) {
                double w2ks = pow2ks[0] * pow2_minus_s; // 2^{ks} at k = k_lo - 1
                double peak_so_far = 0.0;
                bool prev_small = false;
                for (int i = 0; i < nterm; ++i) peak_so_far = std::max(peak_so_far, yterm[static_cast<std::size_t>(i)]);
                for (int step = 1; step <= kMaxTailSteps; ++step) {
                    const int e = L - (k_lo - step);
                    const int b = k_hi - (k_lo - step);
                    const double N = ball_count_pow2(n, e);
                    double sc, cc;
                    if (b < nb) {
                        sc = s_cum[static_cast<std::size_t>(b)];
                        cc = c_cum[static_cast<std::size_t>(b)] + 1.0;
                    } else {
                        sc = s_tot;
                        cc = c_tot;
                    }
                    double sfull = sc;
                    if (cc < N && fxp > 0.0) sfull += (N - cc) * fxp;
                    const double y = w2ks * p_root(sfull / N, pv);
                    yterm[static_cast<std::size_t>(nterm++)] = y;
                    peak_so_far = std::max(peak_so_far, y);
                    const bool small = b >= nb && y < kTailRelTol * peak_so_far;
                    if (small && prev_small) break;
                    prev_small = small;
                    w2ks *= pow2_minus_s;
                }
            }

            // q-aggregation, max-factored
            double peak = 0.0;
            for (int i = 0; i < nterm; ++i) peak = std::max(peak, yterm[static_cast<std::size_t>(i)]);
            double G;
            if (q_inf) {
                G = peak;
            } else if (peak == 0.0) {
                G = 0.0;
            } else {
                double acc = 0.0;
                for (int i = 0; i < nterm; ++i) {
                    const double v = yterm[static_cast<std::size_t>(i)];
                    if (v > 0.0) acc += std::pow(v / peak, qv);
                }
                G = peak * std::pow(acc * kLn2, 1.0 / qv);
            }
            gp += p_power(G * ynorm, pv);

            for (int i = 0; i < nscales; ++i)
                layers[static_cast<std::size_t>(i)] +=
                    p_power(yterm[static_cast<std::size_t>(i)] * ynorm, pv);
            if (has_tail && nterm > ntail_base)
                layers[static_cast<std::size_t>(nscales)] +=
                    p_power(yterm[static_cast<std::size_t>(ntail_base)] * ynorm, pv);
        }
        gp_chunk[static_cast<std::size_t>(chunk)] = gp;
    });

    double gp_sum = 0.0;
    std::vector<double> layer_sum(static_cast<std::size_t>(nlayers), 0.0);
    for (int c = 0; c < nchunks; ++c) {
        gp_sum += gp_chunk[static_cast<std::size_t>(c)];
        for (int i = 0; i < nlayers; ++i)
            layer_sum[static_cast<std::size_t>(i)] += layer_chunk[static_cast<std::size_t>(c)][static_cast<std::size_t>(i)];
    }

    const double cell = std::exp2(-static_cast<double>(L) * n);
    const double unscale = dscale / ynorm;

    QuasiNormReport rep;
    rep.family = Family::TriebelLizorkin;
    rep.variant = variant;
    rep.seminorm = unscale * p_root(cell * gp_sum, pv);
    for (int i = 0; i < nscales; ++i) { // i = 0 <-> k_hi
        const int k = k_hi - i;
        rep.scales.push_back(
            {std::exp2(-k), unscale * p_root(cell * layer_sum[static_cast<std::size_t>(i)], pv)});
    }
    rep.tail_head =
        has_tail ? unscale * p_root(cell * layer_sum[static_cast<std::size_t>(nscales)], pv) : 0.0;
    if (variant == NormVariant::Homogeneous0Inf) {
        rep.total = rep.seminorm;
    } else {
        rep.lp_part = lp_norm(f, prm.p);
        rep.total = *rep.lp_part + rep.seminorm;
    }
    return rep;
}

QuasiNormReport quasi_norm(const GridFunction& f, const SmoothnessParams& prm,
                           NormVariant variant) {
    return prm.family == Family::Besov ? besov_norm(f, prm, variant) : tl_norm(f, prm, variant);
}

std::pair<double, double> equivalence_probe(const GridFunction& f, const SmoothnessParams& prm) {
    const auto inhom = quasi_norm(f, prm, NormVariant::Inhomogeneous01);
    const auto homog = quasi_norm(f, prm, NormVariant::Homogeneous0Inf);
    return {inhom.total, homog.total};
}

EmbeddingProbe embedding_probe(const std::vector<GridFunction>& corpus,
                               const SmoothnessParams& src, const SmoothnessParams& dst) {
    src.validate();
    dst.validate();
    if (corpus.empty()) throw UsageError("embedding probe needs a non-empty corpus");
    const int n = corpus.front().dim();
    for (const auto& f : corpus)
        if (f.dim() != n) throw UsageError("embedding probe corpus must share one dimension");
    const double gap =
        src.s - dst.s - n * std::max(src.p.reciprocal() - dst.p.reciprocal(), 0.0);
    if (!(gap > 0.0))
        throw UsageError("embedding requires s1 - s2 - n*max(1/p1 - 1/p2, 0) > 0");

    EmbeddingProbe probe;
    for (const auto& f : corpus) {
        const double a = quasi_norm(f, src, NormVariant::Inhomogeneous01).total;
        if (a == 0.0) continue;
        const double b = quasi_norm(f, dst, NormVariant::Inhomogeneous01).total;
        probe.ratios.push_back(b / a);
        probe.max_ratio = std::max(probe.max_ratio, b / a);
    }
    if (probe.ratios.empty()) throw ExperimentError("no corpus entry has a nonzero source norm");
    return probe;
}

std::string to_string(Family family) {
    return family == Family::Besov ? "besov" : "triebel_lizorkin";
}

std::string to_string(NormVariant variant) {
    switch (variant) {
    case NormVariant::Inhomogeneous01: return "inhomogeneous_01";
    case NormVariant::Inhomogeneous0Inf: return "inhomogeneous_0inf";
    default: return "homogeneous_0inf";
    }
}

} // namespace fslab
