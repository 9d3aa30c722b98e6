#include "fslab/seqspace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "fslab/rng.hpp"

namespace fslab {
namespace {

constexpr std::int64_t kMaxCoeffs = 200;  // spec recommends <= 60; hard stop here
constexpr std::int64_t kMaxCloud = 1 << 20;
constexpr int kMaxK = 21;
constexpr int kRefineCap = 2000;
constexpr int kRefineStaleLimit = 40;

std::int64_t centers_for(int k) { return std::int64_t(1) << (k - 1); }

// Degrees |beta| of all multi-indices with beta_dim components and total
// degree <= beta_max, odometer order (last component fastest).
std::vector<int> beta_degrees(int beta_dim, int beta_max) {
    std::vector<int> degs;
    std::vector<int> idx(static_cast<std::size_t>(beta_dim), 0);
    while (true) {
        int sum = 0;
        for (int c : idx) sum += c;
        if (sum <= beta_max) degs.push_back(sum);
        int pos = beta_dim - 1;
        while (pos >= 0 && ++idx[static_cast<std::size_t>(pos)] > beta_max) {
            idx[static_cast<std::size_t>(pos)] = 0;
            --pos;
        }
        if (pos < 0) break;
    }
    return degs;
}

struct Block {
    std::int64_t start;
    std::int64_t count;
    double jw; // 2^{j(s - n/p)}
};

// Flattened weight layout of one space, so norm evaluation is a single pass.
struct NormPlan {
    std::vector<double> beta_w;
    std::vector<std::vector<Block>> blocks; // [beta][j]
    LpExponent p{2.0};
    LpExponent q{2.0};
};

NormPlan make_plan(const SeqSpaceParams& prm) {
    NormPlan plan;
    plan.p = prm.p;
    plan.q = prm.q;
    const std::vector<int> degs = beta_degrees(prm.beta_dim, prm.beta_max);
    const double np = prm.n * prm.p.reciprocal();
    plan.beta_w.reserve(degs.size());
    plan.blocks.resize(degs.size());
    std::int64_t off = 0;
    for (std::size_t b = 0; b < degs.size(); ++b) {
        plan.beta_w.push_back(std::exp2(prm.rho * degs[b]));
        auto& row = plan.blocks[b];
        row.reserve(static_cast<std::size_t>(prm.levels));
        for (int j = 0; j < prm.levels; ++j) {
            row.push_back({off, prm.sizes[static_cast<std::size_t>(j)],
                           std::exp2(j * (prm.s - np))});
            off += prm.sizes[static_cast<std::size_t>(j)];
        }
    }
    return plan;
}

// ||a - b||_p over one block; b may be null (plain norm of a).
double block_lp(const double* a, const double* b, std::int64_t count, const LpExponent& p) {
    if (p.is_inf()) {
        double m = 0.0;
        for (std::int64_t i = 0; i < count; ++i)
            m = std::max(m, std::fabs(a[i] - (b ? b[i] : 0.0)));
        return m;
    }
    const double pv = p.value();
    if (pv == 2.0) {
        double s = 0.0;
        for (std::int64_t i = 0; i < count; ++i) {
            const double d = a[i] - (b ? b[i] : 0.0);
            s += d * d;
        }
        return std::sqrt(s);
    }
    if (pv == 1.0) {
        double s = 0.0;
        for (std::int64_t i = 0; i < count; ++i) s += std::fabs(a[i] - (b ? b[i] : 0.0));
        return s;
    }
    double m = 0.0;
    for (std::int64_t i = 0; i < count; ++i)
        m = std::max(m, std::fabs(a[i] - (b ? b[i] : 0.0)));
    if (m == 0.0) return 0.0;
    double s = 0.0;
    for (std::int64_t i = 0; i < count; ++i)
        s += std::pow(std::fabs(a[i] - (b ? b[i] : 0.0)) / m, pv);
    return m * std::pow(s, 1.0 / pv);
}

// Mixed norm of a - b (b nullable).  Level terms are q-aggregated with the
// largest term factored out, so huge finite q degrades gracefully to the sup.
double plan_norm(const NormPlan& plan, const double* a, const double* b) {
    double best = 0.0;
    double terms[64];
    for (std::size_t bi = 0; bi < plan.blocks.size(); ++bi) {
        const auto& row = plan.blocks[bi];
        double peak = 0.0;
        for (std::size_t j = 0; j < row.size(); ++j) {
            const Block& blk = row[j];
            const double u = blk.jw * block_lp(a + blk.start, b ? b + blk.start : nullptr,
                                               blk.count, plan.p);
            terms[j] = u;
            peak = std::max(peak, u);
        }
        double agg;
        if (plan.q.is_inf() || peak == 0.0) {
            agg = peak;
        } else {
            const double qv = plan.q.value();
            double s = 0.0;
            for (std::size_t j = 0; j < row.size(); ++j) s += std::pow(terms[j] / peak, qv);
            agg = peak * std::pow(s, 1.0 / qv);
        }
        best = std::max(best, plan.beta_w[bi] * agg);
    }
    return best;
}

bool exact_1d_applicable(const SeqSpaceParams& prm) {
    return prm.levels == 1 && prm.beta_max == 0 && prm.sizes.size() == 1 && prm.sizes[0] == 1;
}

double exact_1d_value(const SeqOperator& op, const SeqSpaceParams& src,
                      const SeqSpaceParams& dst, int k) {
    // Image of the src unit ball is the segment of dst-radius
    // |diag| * w_dst / w_src; 2^{k-1} intervals cover it at radius w/2^{k-1}.
    SeqElement unit;
    unit.coeffs = {1.0};
    const double w_src = seq_norm(unit, src);
    SeqElement img;
    img.coeffs = {op.diag[0]};
    const double w_dst = seq_norm(img, dst);
    return (w_dst / w_src) * std::exp2(-static_cast<double>(k - 1));
}

struct GonzalezRun {
    std::vector<std::int64_t> order; // selected cloud rows
    std::vector<double> radius_at;   // covering radius with the first c centers
};

GonzalezRun gonzalez(const NormPlan& plan, const std::vector<double>& cloud, std::int64_t d,
                     std::int64_t cmax) {
    const std::int64_t npts = static_cast<std::int64_t>(cloud.size()) / d;
    GonzalezRun run;
    run.order.reserve(static_cast<std::size_t>(cmax));
    run.radius_at.reserve(static_cast<std::size_t>(cmax));
    std::vector<double> dist(static_cast<std::size_t>(npts));
    run.order.push_back(0); // origin (or its image) seeds the cover
    for (std::int64_t i = 0; i < npts; ++i)
        dist[static_cast<std::size_t>(i)] = plan_norm(plan, &cloud[static_cast<std::size_t>(i * d)], &cloud[0]);
    while (true) {
        std::int64_t arg = 0;
        double far = -1.0;
        for (std::int64_t i = 0; i < npts; ++i) {
            if (dist[static_cast<std::size_t>(i)] > far) {
                far = dist[static_cast<std::size_t>(i)];
                arg = i;
            }
        }
        run.radius_at.push_back(far);
        if (static_cast<std::int64_t>(run.order.size()) >= cmax) break;
        run.order.push_back(arg);
        const double* c = &cloud[static_cast<std::size_t>(arg * d)];
        for (std::int64_t i = 0; i < npts; ++i) {
            const double dd = plan_norm(plan, &cloud[static_cast<std::size_t>(i * d)], c);
            auto& slot = dist[static_cast<std::size_t>(i)];
            slot = std::min(slot, dd);
        }
    }
    return run;
}

// Box-midpoint recentering from a Gonzalez prefix; returns the best covering
// radius seen (never worse than the initial one).
double refine(const NormPlan& plan, const std::vector<double>& cloud, std::int64_t d,
              const std::vector<std::int64_t>& order, std::int64_t c, double init_radius) {
    const std::int64_t npts = static_cast<std::int64_t>(cloud.size()) / d;
    std::vector<double> cen(static_cast<std::size_t>(c * d));
    for (std::int64_t a = 0; a < c; ++a)
        std::copy_n(&cloud[static_cast<std::size_t>(order[static_cast<std::size_t>(a)] * d)], d,
                    &cen[static_cast<std::size_t>(a * d)]);
    std::vector<double> lo(static_cast<std::size_t>(c * d));
    std::vector<double> hi(static_cast<std::size_t>(c * d));
    double best = init_radius;
    int stale = 0;
    for (int iter = 0; iter < kRefineCap; ++iter) {
        std::fill(lo.begin(), lo.end(), std::numeric_limits<double>::infinity());
        std::fill(hi.begin(), hi.end(), -std::numeric_limits<double>::infinity());
        double radius = 0.0;
        for (std::int64_t i = 0; i < npts; ++i) {
            const double* x = &cloud[static_cast<std::size_t>(i * d)];
            double dm = std::numeric_limits<double>::infinity();
            std::int64_t am = 0;
            for (std::int64_t a = 0; a < c; ++a) {
                const double dd = plan_norm(plan, x, &cen[static_cast<std::size_t>(a * d)]);
                if (dd < dm) {
                    dm = dd;
                    am = a;
                }
            }
            radius = std::max(radius, dm);
            for (std::int64_t j = 0; j < d; ++j) {
                auto& l = lo[static_cast<std::size_t>(am * d + j)];
                auto& h = hi[static_cast<std::size_t>(am * d + j)];
                l = std::min(l, x[j]);
                h = std::max(h, x[j]);
            }
        }
        if (radius < best * (1.0 - 1e-9)) {
            best = radius;
            stale = 0;
        } else if (++stale >= kRefineStaleLimit) {
            break;
        }
        best = std::min(best, radius);
        bool moved = false;
        for (std::int64_t a = 0; a < c; ++a) {
            for (std::int64_t j = 0; j < d; ++j) {
                const std::size_t idx = static_cast<std::size_t>(a * d + j);
                if (lo[idx] > hi[idx]) continue; // empty cluster keeps its center
                const double mid = 0.5 * (lo[idx] + hi[idx]);
                if (mid != cen[idx]) {
                    cen[idx] = mid;
                    moved = true;
                }
            }
        }
        if (!moved) break;
    }
    return best;
}

// Refined covering radius for every k' <= k_max, forced non-increasing by a
// running minimum (adding centers never makes the estimate worse).
// One coordinate: the optimal cloud cover is plain interval covering, solved
// exactly by bisection on the radius with a greedy left-to-right sweep.
std::vector<double> profile_1d(const NormPlan& plan, const std::vector<double>& cloud,
                               int k_max) {
    std::vector<double> xs(cloud);
    std::sort(xs.begin(), xs.end());
    const double unit = 1.0;
    const double w = plan_norm(plan, &unit, nullptr); // dst length of a unit step
    const auto blobs = [&](double span) {
        std::int64_t cnt = 0;
        std::size_t i = 0;
        while (i < xs.size()) {
            const double limit = xs[i] + span;
            ++cnt;
            while (i < xs.size() && xs[i] <= limit) ++i;
        }
        return cnt;
    };
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(k_max));
    for (int k = 1; k <= k_max; ++k) {
        const std::int64_t c = centers_for(k);
        double lo = 0.0;
        double hi = xs.back() - xs.front();
        if (blobs(0.0) <= c) hi = 0.0; // no more blobs than centers
        for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
            const double mid = 0.5 * (lo + hi);
            (blobs(mid) <= c ? hi : lo) = mid;
        }
        out.push_back(0.5 * hi * w);
    }
    return out;
}

std::vector<double> cover_profile(const SeqSpaceParams& dst, const std::vector<double>& cloud,
                                  std::int64_t d, int k_max) {
    const NormPlan plan = make_plan(dst);
    if (d == 1) return profile_1d(plan, cloud, k_max);
    const GonzalezRun run = gonzalez(plan, cloud, d, centers_for(k_max));
    std::vector<double> out(static_cast<std::size_t>(k_max));
    double running = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= k_max; ++k) {
        const std::int64_t c = centers_for(k);
        const double raw = run.radius_at[static_cast<std::size_t>(c - 1)];
        running = std::min(running, refine(plan, cloud, d, run.order, c, raw));
        out[static_cast<std::size_t>(k - 1)] = running;
    }
    return out;
}

void check_layout_pair(const SeqSpaceParams& src, const SeqSpaceParams& dst,
                       const char* what) {
    src.validate();
    dst.validate();
    if (!src.same_layout(dst))
        throw UsageError(std::string(what) + " requires identical index sets");
}

void check_op(const SeqOperator& op, const SeqSpaceParams& src) {
    if (static_cast<std::int64_t>(op.diag.size()) != src.coeff_count())
        throw UsageError("diagonal operator length " + std::to_string(op.diag.size()) +
                         " does not match the coefficient count " +
                         std::to_string(src.coeff_count()));
}

void check_estimate_budget(const SeqSpaceParams& src, int k, std::int64_t cloud_size) {
    if (k < 1) throw UsageError("entropy index k must be >= 1");
    if (k > kMaxK)
        throw ResourceError("k = " + std::to_string(k) + " needs 2^" + std::to_string(k - 1) +
                            " centers; desk-scale limit is k <= " + std::to_string(kMaxK));
    if (src.coeff_count() > kMaxCoeffs)
        throw ResourceError("coefficient count " + std::to_string(src.coeff_count()) +
                            " exceeds the covering budget (" + std::to_string(kMaxCoeffs) + ")");
    if (cloud_size > kMaxCloud)
        throw ResourceError("cloud_size " + std::to_string(cloud_size) + " exceeds " +
                            std::to_string(kMaxCloud));
}

// Only the sampled-cloud estimator needs the cloud to dominate the centers;
// the closed-form path has no cloud at all.
void check_cloud_dominates(std::int64_t cloud_size, int k) {
    if (cloud_size < centers_for(k))
        throw UsageError("cloud_size " + std::to_string(cloud_size) +
                         " is smaller than the 2^{k-1} = " + std::to_string(centers_for(k)) +
                         " centers it must dominate");
}

void validate_embedding_params(const SeqSpaceParams& src, const SeqSpaceParams& dst) {
    check_layout_pair(src, dst, "embedding");
    if (src.n != dst.n) throw UsageError("embedding requires a common dimension parameter n");
    if (!(src.rho > dst.rho))
        throw UsageError("embedding requires rho1 > rho2, got rho1 = " + std::to_string(src.rho) +
                         ", rho2 = " + std::to_string(dst.rho));
    if (src.p.value() > dst.p.value()) throw UsageError("embedding requires p1 <= p2");
    const double delta = src.s - dst.s - src.n * (src.p.reciprocal() - dst.p.reciprocal());
    if (!(delta > 0.0))
        throw UsageError("embedding gap delta = s1 - s2 - n(1/p1 - 1/p2) must be positive, got " +
                         std::to_string(delta));
}

} // namespace

void SeqSpaceParams::validate() const {
    if (!(s > 0.0) || !std::isfinite(s)) throw UsageError("sequence space needs s > 0");
    if (!(rho >= 0.0) || !std::isfinite(rho)) throw UsageError("sequence space needs rho >= 0");
    if (!(n > 0.0) || !std::isfinite(n)) throw UsageError("dimension parameter n must be positive");
    if (levels < 1 || levels > 64) throw UsageError("levels must lie in [1, 64]");
    if (beta_max < 0 || beta_max > 16) throw UsageError("beta_max must lie in [0, 16]");
    if (beta_dim < 1 || beta_dim > 4) throw UsageError("beta_dim must lie in [1, 4]");
    if (static_cast<int>(sizes.size()) != levels)
        throw UsageError("sizes must list one M_j per level");
    if (!(c1 > 0.0) || !(c2 >= c1)) throw UsageError("growth bracket needs 0 < c1 <= c2");
    for (int j = 0; j < levels; ++j) {
        const std::int64_t mj = sizes[static_cast<std::size_t>(j)];
        if (mj < 1) throw UsageError("every M_j must be >= 1");
        const double target = std::exp2(static_cast<double>(j) * n);
        if (static_cast<double>(mj) < c1 * target - 1e-9 ||
            static_cast<double>(mj) > c2 * target + 1e-9)
            throw UsageError("M_" + std::to_string(j) + " = " + std::to_string(mj) +
                             " violates the declared bracket [" + std::to_string(c1 * target) +
                             ", " + std::to_string(c2 * target) + "]");
    }
}

std::int64_t SeqSpaceParams::beta_count() const {
    return static_cast<std::int64_t>(beta_degrees(beta_dim, beta_max).size());
}

std::int64_t SeqSpaceParams::slice_size() const {
    std::int64_t total = 0;
    for (std::int64_t mj : sizes) total += mj;
    return total;
}

std::int64_t SeqSpaceParams::offset(std::int64_t beta_index, int j, std::int64_t m) const {
    if (beta_index < 0 || beta_index >= beta_count()) throw UsageError("beta index out of range");
    if (j < 0 || j >= levels) throw UsageError("level index out of range");
    if (m < 1 || m > sizes[static_cast<std::size_t>(j)])
        throw UsageError("slot index out of range");
    std::int64_t off = beta_index * slice_size();
    for (int jj = 0; jj < j; ++jj) off += sizes[static_cast<std::size_t>(jj)];
    return off + (m - 1);
}

bool SeqSpaceParams::same_layout(const SeqSpaceParams& other) const {
    return levels == other.levels && beta_max == other.beta_max && beta_dim == other.beta_dim &&
           sizes == other.sizes;
}

SeqElement zero_element(const SeqSpaceParams& prm) {
    prm.validate();
    SeqElement x;
    x.coeffs.assign(static_cast<std::size_t>(prm.coeff_count()), 0.0);
    return x;
}

double seq_norm(const SeqElement& x, const SeqSpaceParams& prm) {
    prm.validate();
    if (static_cast<std::int64_t>(x.coeffs.size()) != prm.coeff_count())
        throw UsageError("coefficient family has " + std::to_string(x.coeffs.size()) +
                         " entries; the index set declares " + std::to_string(prm.coeff_count()));
    const NormPlan plan = make_plan(prm);
    return plan_norm(plan, x.coeffs.data(), nullptr);
}

SeqElement embedding_map(const SeqElement& x, const SeqSpaceParams& src,
                         const SeqSpaceParams& dst) {
    validate_embedding_params(src, dst);
    if (static_cast<std::int64_t>(x.coeffs.size()) != src.coeff_count())
        throw UsageError("coefficient family does not match the source index set");
    return x; // the formal identity: only the norms change
}

SeqOperator identity_operator(const SeqSpaceParams& prm) {
    prm.validate();
    SeqOperator op;
    op.diag.assign(static_cast<std::size_t>(prm.coeff_count()), 1.0);
    return op;
}

SeqOperator add(const SeqOperator& a, const SeqOperator& b) {
    if (a.diag.size() != b.diag.size()) throw UsageError("operator size mismatch in add");
    SeqOperator out = a;
    for (std::size_t i = 0; i < out.diag.size(); ++i) out.diag[i] += b.diag[i];
    return out;
}

SeqOperator compose(const SeqOperator& outer, const SeqOperator& inner) {
    if (outer.diag.size() != inner.diag.size())
        throw UsageError("operator size mismatch in compose");
    SeqOperator out = outer;
    for (std::size_t i = 0; i < out.diag.size(); ++i) out.diag[i] *= inner.diag[i];
    return out;
}

EntropyEstimate entropy_estimate(const SeqSpaceParams& src, const SeqSpaceParams& dst, int k,
                                 std::int64_t cloud_size, std::uint64_t seed,
                                 EntropyMethod method) {
    return entropy_estimate_op(identity_operator(src), src, dst, k, cloud_size, seed, method);
}

EntropyEstimate entropy_estimate_op(const SeqOperator& op, const SeqSpaceParams& src,
                                    const SeqSpaceParams& dst, int k, std::int64_t cloud_size,
                                    std::uint64_t seed, EntropyMethod method) {
    check_layout_pair(src, dst, "entropy estimation");
    check_op(op, src);
    check_estimate_budget(src, k, cloud_size);
    EntropyMethod chosen = method;
    if (chosen == EntropyMethod::Auto)
        chosen = exact_1d_applicable(src) ? EntropyMethod::Exact1d : EntropyMethod::GreedyCover;
    EntropyEstimate est;
    est.k = k;
    est.centers_used = centers_for(k);
    if (chosen == EntropyMethod::Exact1d) {
        if (!exact_1d_applicable(src))
            throw UsageError("exact_1d needs levels = 1, M = [1], beta_max = 0");
        est.method = EntropyMethod::Exact1d;
        est.value = exact_1d_value(op, src, dst, k);
        return est;
    }
    check_cloud_dominates(cloud_size, k);
    const std::vector<double> cloud = detail::build_cloud(op, src, cloud_size, seed);
    const std::vector<double> prof = cover_profile(dst, cloud, src.coeff_count(), k);
    est.method = EntropyMethod::GreedyCover;
    est.value = prof[static_cast<std::size_t>(k - 1)];
    return est;
}

FitResult entropy_rate_fit(const SeqSpaceParams& src, const SeqSpaceParams& dst,
                           const std::vector<int>& k_range, std::int64_t cloud_size,
                           std::uint64_t seed) {
    validate_embedding_params(src, dst);
    if (src.levels == 1)
        throw UsageError("single-level spaces have geometric e_k decay; "
                         "a polynomial rate fit needs levels >= 2");
    if (k_range.size() < 4) throw UsageError("rate fit needs at least 4 entropy indices");
    for (std::size_t i = 0; i < k_range.size(); ++i) {
        if (k_range[i] < 1) throw UsageError("entropy indices must be >= 1");
        if (i > 0 && k_range[i] <= k_range[i - 1])
            throw UsageError("entropy indices must be strictly ascending");
    }
    const int k_max = k_range.back();
    check_estimate_budget(src, k_max, cloud_size);
    check_cloud_dominates(cloud_size, k_max);
    const std::vector<double> cloud =
        detail::build_cloud(identity_operator(src), src, cloud_size, seed);
    const std::vector<double> prof = cover_profile(dst, cloud, src.coeff_count(), k_max);
    std::vector<std::pair<double, double>> points;
    points.reserve(k_range.size());
    for (int k : k_range) {
        const double v = prof[static_cast<std::size_t>(k - 1)];
        if (v > 0.0 && std::isfinite(v))
            points.emplace_back(std::log(static_cast<double>(k)), std::log(v));
    }
    if (points.size() < 3)
        throw ExperimentError("too few nonzero covering radii for a rate fit");
    return fit_line(points);
}

double entropy_rate_exponent(const SeqSpaceParams& src, const SeqSpaceParams& dst) {
    validate_embedding_params(src, dst);
    const double delta = src.s - dst.s - src.n * (src.p.reciprocal() - dst.p.reciprocal());
    return -delta / src.n + dst.p.reciprocal() - src.p.reciprocal();
}

bool CalculusReport::ok() const {
    if (!monotone) return false;
    for (const auto& c : additivity)
        if (!c.ok) return false;
    for (const auto& c : multiplicativity)
        if (!c.ok) return false;
    return !additivity.empty() && !multiplicativity.empty();
}

CalculusReport entropy_calculus_check(const SeqSpaceParams& x_space,
                                      const SeqSpaceParams& y_space,
                                      const SeqSpaceParams& z_space, const SeqOperator& s_op,
                                      const SeqOperator& t_op, const SeqOperator& r_op,
                                      int j_max, int k_max, std::int64_t cloud_size,
                                      std::uint64_t seed, double slack) {
    check_layout_pair(x_space, y_space, "entropy calculus");
    check_layout_pair(y_space, z_space, "entropy calculus");
    check_op(s_op, x_space);
    check_op(t_op, x_space);
    check_op(r_op, y_space);
    if (j_max < 1 || k_max < 1) throw UsageError("j_max and k_max must be >= 1");
    if (!(slack >= 1.0)) throw UsageError("slack factor must be >= 1");
    const int top = j_max + k_max - 1;
    check_estimate_budget(x_space, top, cloud_size);

    std::uint64_t stream = seed;
    auto profile = [&](const SeqOperator& op, const SeqSpaceParams& a, const SeqSpaceParams& b,
                       int kk) {
        const std::uint64_t s = stream++;
        if (exact_1d_applicable(a)) {
            std::vector<double> prof(static_cast<std::size_t>(kk));
            for (int k = 1; k <= kk; ++k)
                prof[static_cast<std::size_t>(k - 1)] = exact_1d_value(op, a, b, k);
            return prof;
        }
        check_cloud_dominates(cloud_size, kk);
        const std::vector<double> cloud = detail::build_cloud(op, a, cloud_size, s);
        return cover_profile(b, cloud, a.coeff_count(), kk);
    };

    const std::vector<double> e_s = profile(s_op, x_space, y_space, j_max);
    const std::vector<double> e_t = profile(t_op, x_space, y_space, std::max(j_max, k_max));
    const std::vector<double> e_sum = profile(add(s_op, t_op), x_space, y_space, top);
    const std::vector<double> e_r = profile(r_op, y_space, z_space, j_max);
    const std::vector<double> e_rt = profile(compose(r_op, t_op), x_space, z_space, top);

    CalculusReport report;
    report.slack = slack;
    report.monotone = true;
    for (const auto* prof : {&e_s, &e_t, &e_sum, &e_r, &e_rt}) {
        for (std::size_t i = 1; i < prof->size(); ++i)
            if ((*prof)[i] > (*prof)[i - 1] * (1.0 + 1e-12) + 1e-300) report.monotone = false;
    }

    const double u = std::min({1.0, y_space.p.value(), y_space.q.value()});
    for (int j = 1; j <= j_max; ++j) {
        for (int k = 1; k <= k_max; ++k) {
            CalculusCase addc;
            addc.j = j;
            addc.k = k;
            addc.lhs = e_sum[static_cast<std::size_t>(j + k - 2)];
            addc.rhs = std::pow(std::pow(e_s[static_cast<std::size_t>(j - 1)], u) +
                                    std::pow(e_t[static_cast<std::size_t>(k - 1)], u),
                                1.0 / u);
            addc.ok = addc.lhs <= slack * addc.rhs + 1e-12;
            report.additivity.push_back(addc);

            CalculusCase mul;
            mul.j = j;
            mul.k = k;
            mul.lhs = e_rt[static_cast<std::size_t>(j + k - 2)];
            mul.rhs = e_r[static_cast<std::size_t>(j - 1)] * e_t[static_cast<std::size_t>(k - 1)];
            mul.ok = mul.lhs <= slack * mul.rhs + 1e-12;
            report.multiplicativity.push_back(mul);
        }
    }
    return report;
}

std::string to_string(EntropyMethod method) {
    switch (method) {
        case EntropyMethod::Auto: return "auto";
        case EntropyMethod::Exact1d: return "exact_1d";
        case EntropyMethod::GreedyCover: return "greedy_cover";
    }
    return "unknown";
}

namespace detail {

std::vector<double> build_cloud(const SeqOperator& op, const SeqSpaceParams& src,
                                std::int64_t cloud_size, std::uint64_t seed) {
    src.validate();
    check_op(op, src);
    const std::int64_t d = src.coeff_count();
    if (d > kMaxCoeffs)
        throw ResourceError("coefficient count " + std::to_string(d) +
                            " exceeds the covering budget");
    const std::int64_t mandatory = 1 + 2 * d;
    if (cloud_size < mandatory)
        throw UsageError("cloud_size must be >= " + std::to_string(mandatory) +
                         " (origin plus signed extremes)");
    if (cloud_size > kMaxCloud) throw ResourceError("cloud_size exceeds the sampling budget");
    const NormPlan plan = make_plan(src);
    std::vector<double> cloud(static_cast<std::size_t>(cloud_size * d), 0.0);
    std::vector<double> buf(static_cast<std::size_t>(d), 0.0);
    std::int64_t row = 1; // row 0 stays at the origin
    for (std::int64_t i = 0; i < d; ++i) {
        for (const double sign : {1.0, -1.0}) {
            std::fill(buf.begin(), buf.end(), 0.0);
            buf[static_cast<std::size_t>(i)] = sign;
            const double w = plan_norm(plan, buf.data(), nullptr);
            buf[static_cast<std::size_t>(i)] = sign / w;
            for (std::int64_t j = 0; j < d; ++j)
                cloud[static_cast<std::size_t>(row * d + j)] =
                    op.diag[static_cast<std::size_t>(j)] * buf[static_cast<std::size_t>(j)];
            ++row;
        }
    }
    Rng rng(seed);
    bool interior = false;
    while (row < cloud_size) {
        double nrm = 0.0;
        do {
            for (std::int64_t j = 0; j < d; ++j) buf[static_cast<std::size_t>(j)] = rng.gaussian();
            nrm = plan_norm(plan, buf.data(), nullptr);
        } while (nrm == 0.0);
        double scale = 1.0 / nrm;
        if (interior) scale *= rng.uniform();
        for (std::int64_t j = 0; j < d; ++j)
            cloud[static_cast<std::size_t>(row * d + j)] =
                op.diag[static_cast<std::size_t>(j)] * (buf[static_cast<std::size_t>(j)] * scale);
        interior = !interior;
        ++row;
    }
    return cloud;
}

double dst_distance(const SeqSpaceParams& dst, const double* a, const double* b) {
    dst.validate();
    const NormPlan plan = make_plan(dst);
    return plan_norm(plan, a, b);
}

double cloud_radius(const SeqSpaceParams& dst, const std::vector<double>& cloud,
                    const std::vector<std::int64_t>& centers) {
    dst.validate();
    if (centers.empty()) throw UsageError("cloud_radius needs at least one center");
    const std::int64_t d = dst.coeff_count();
    const NormPlan plan = make_plan(dst);
    const std::int64_t npts = static_cast<std::int64_t>(cloud.size()) / d;
    double radius = 0.0;
    for (std::int64_t i = 0; i < npts; ++i) {
        double dm = std::numeric_limits<double>::infinity();
        for (const std::int64_t c : centers)
            dm = std::min(dm, plan_norm(plan, &cloud[static_cast<std::size_t>(i * d)],
                                        &cloud[static_cast<std::size_t>(c * d)]));
        radius = std::max(radius, dm);
    }
    return radius;
}

double greedy_radius(const SeqSpaceParams& dst, const std::vector<double>& cloud,
                     std::int64_t c) {
    dst.validate();
    if (c < 1) throw UsageError("greedy_radius needs at least one center");
    const std::int64_t d = dst.coeff_count();
    const NormPlan plan = make_plan(dst);
    const GonzalezRun run = gonzalez(plan, cloud, d, c);
    return run.radius_at[static_cast<std::size_t>(c - 1)];
}

} // namespace detail

} // namespace fslab
