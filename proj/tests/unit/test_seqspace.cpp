#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "fslab/rng.hpp"
#include "fslab/seqspace.hpp"

using namespace fslab;

namespace {

SeqSpaceParams three_level(double s, double rho, LpExponent p, LpExponent q) {
    SeqSpaceParams prm;
    prm.s = s;
    prm.rho = rho;
    prm.p = p;
    prm.q = q;
    prm.n = 1.0;
    prm.levels = 3;
    prm.sizes = {1, 2, 4};
    return prm;
}

SeqSpaceParams scalar_space(double s, double rho) {
    SeqSpaceParams prm;
    prm.s = s;
    prm.rho = rho;
    return prm;
}

SeqElement random_element(const SeqSpaceParams& prm, std::uint64_t seed) {
    Rng rng(seed);
    SeqElement x = zero_element(prm);
    for (double& c : x.coeffs) c = rng.uniform(-1.0, 1.0);
    return x;
}

} // namespace

TEST_CASE("seq_norm weights a single coefficient by its level") {
    SeqSpaceParams prm = three_level(1.5, 0.0, 2.0, 2.0);
    SeqElement x = zero_element(prm);
    REQUIRE(x.coeffs.size() == 7);
    x.coeffs[static_cast<std::size_t>(prm.offset(0, 2, 1))] = 1.0;
    // single block, single coefficient: norm = 2^{j(s - n/p)} = 2^{2 * 1.0}
    CHECK(seq_norm(x, prm) == 4.0);
}

TEST_CASE("seq_norm applies the beta weight 2^{rho |beta|}") {
    SeqSpaceParams prm;
    prm.s = 1.0;
    prm.rho = 1.5;
    prm.levels = 2;
    prm.sizes = {1, 2};
    prm.beta_max = 1;
    SeqElement x = zero_element(prm);
    REQUIRE(x.coeffs.size() == 6);
    x.coeffs[static_cast<std::size_t>(prm.offset(1, 0, 1))] = 1.0;
    CHECK(seq_norm(x, prm) == doctest::Approx(std::exp2(1.5)).epsilon(1e-14));
}

TEST_CASE("seq_norm p=q=2 matches the direct weighted sum") {
    SeqSpaceParams prm = three_level(1.2, 0.0, 2.0, 2.0);
    SeqElement x = random_element(prm, 5);
    double acc = 0.0;
    for (int j = 0; j < prm.levels; ++j) {
        double block = 0.0;
        for (std::int64_t m = 1; m <= prm.sizes[static_cast<std::size_t>(j)]; ++m) {
            const double c = x.coeffs[static_cast<std::size_t>(prm.offset(0, j, m))];
            block += c * c;
        }
        acc += std::exp2(2.0 * j * (prm.s - prm.n / 2.0)) * block;
    }
    CHECK(seq_norm(x, prm) == doctest::Approx(std::sqrt(acc)).epsilon(1e-12));
}

TEST_CASE("seq_norm sup-sup path takes the largest weighted block") {
    SeqSpaceParams prm;
    prm.s = 1.0;
    prm.p = LpExponent::infinity();
    prm.q = LpExponent::infinity();
    prm.levels = 2;
    prm.sizes = {1, 2};
    SeqElement x = zero_element(prm);
    x.coeffs[static_cast<std::size_t>(prm.offset(0, 0, 1))] = 0.5;
    x.coeffs[static_cast<std::size_t>(prm.offset(0, 1, 1))] = 0.25;
    x.coeffs[static_cast<std::size_t>(prm.offset(0, 1, 2))] = -0.125;
    // levels weigh 2^{js}: max(1 * 0.5, 2 * 0.25) = 0.5
    CHECK(seq_norm(x, prm) == 0.5);
}

TEST_CASE("seq_norm is homogeneous and satisfies the u-triangle inequality") {
    SeqSpaceParams prm = three_level(0.9, 0.0, 2.0 / 3.0, 2.0 / 3.0);
    SeqElement x = random_element(prm, 11);
    SeqElement y = random_element(prm, 12);
    SeqElement cx = x;
    for (double& c : cx.coeffs) c *= -3.75;
    CHECK(seq_norm(cx, prm) == doctest::Approx(3.75 * seq_norm(x, prm)).epsilon(1e-12));

    SeqElement sum = x;
    for (std::size_t i = 0; i < sum.coeffs.size(); ++i) sum.coeffs[i] += y.coeffs[i];
    const double u = 2.0 / 3.0; // min(1, p, q)
    const double lhs = std::pow(seq_norm(sum, prm), u);
    const double rhs = std::pow(seq_norm(x, prm), u) + std::pow(seq_norm(y, prm), u);
    CHECK(lhs <= rhs + 1e-9);
}

TEST_CASE("seq space parameter validation") {
    SeqSpaceParams prm = three_level(1.0, 0.0, 2.0, 2.0);
    prm.sizes = {1, 2};
    CHECK_THROWS_AS(prm.validate(), UsageError); // one M_j per level

    prm = three_level(1.0, 0.0, 2.0, 2.0);
    prm.sizes = {1, 2, 9}; // above c2 * 2^{jn} = 8
    CHECK_THROWS_AS(prm.validate(), UsageError);

    prm = three_level(-0.5, 0.0, 2.0, 2.0);
    CHECK_THROWS_AS(prm.validate(), UsageError);

    prm = three_level(1.0, -0.25, 2.0, 2.0);
    CHECK_THROWS_AS(prm.validate(), UsageError);

    prm = three_level(1.0, 0.0, 2.0, 2.0);
    prm.beta_dim = 0;
    CHECK_THROWS_AS(prm.validate(), UsageError);

    prm = three_level(1.0, 0.0, 2.0, 2.0);
    prm.levels = 0;
    prm.sizes = {};
    CHECK_THROWS_AS(prm.validate(), UsageError);
}

TEST_CASE("offset enumerates every coefficient exactly once") {
    SeqSpaceParams prm;
    prm.levels = 2;
    prm.sizes = {1, 2};
    prm.beta_max = 1;
    prm.beta_dim = 2;
    REQUIRE(prm.beta_count() == 3); // (0,0), (1,0), (0,1)
    REQUIRE(prm.coeff_count() == 9);
    std::vector<std::int64_t> seen;
    for (std::int64_t bi = 0; bi < prm.beta_count(); ++bi)
        for (int j = 0; j < prm.levels; ++j)
            for (std::int64_t m = 1; m <= prm.sizes[static_cast<std::size_t>(j)]; ++m)
                seen.push_back(prm.offset(bi, j, m));
    std::sort(seen.begin(), seen.end());
    for (std::int64_t i = 0; i < 9; ++i) CHECK(seen[static_cast<std::size_t>(i)] == i);
    CHECK_THROWS_AS(prm.offset(3, 0, 1), UsageError);
    CHECK_THROWS_AS(prm.offset(0, 2, 1), UsageError);
    CHECK_THROWS_AS(prm.offset(0, 1, 3), UsageError);
}

TEST_CASE("embedding map validates the compactness conditions") {
    SeqSpaceParams src;
    src.s = 1.5;
    src.rho = 1.0;
    src.levels = 2;
    src.sizes = {1, 2};
    src.beta_max = 1;
    SeqSpaceParams dst = src;
    dst.s = 0.5;
    dst.rho = 0.0;

    SeqElement x = random_element(src, 31);
    SeqElement y = embedding_map(x, src, dst);
    CHECK(y.coeffs == x.coeffs);

    // single coefficient at |beta| = 1, j = 1: dst/src norm ratio is
    // 2^{(rho2 - rho1)|beta|} * 2^{j[(s2 - n/p2) - (s1 - n/p1)]} = 2^{-1} * 2^{-1}
    SeqElement e = zero_element(src);
    e.coeffs[static_cast<std::size_t>(src.offset(1, 1, 2))] = 1.0;
    const double ratio = seq_norm(embedding_map(e, src, dst), dst) / seq_norm(e, src);
    CHECK(ratio == doctest::Approx(0.25).epsilon(1e-14));

    SeqSpaceParams bad = dst;
    bad.rho = 1.0; // rho1 > rho2 fails
    CHECK_THROWS_AS(embedding_map(x, src, bad), UsageError);

    bad = dst;
    bad.p = 1.0; // p1 <= p2 fails
    CHECK_THROWS_AS(embedding_map(x, src, bad), UsageError);

    bad = dst;
    bad.s = 1.4; // delta = 0.1 - 0 > 0 holds; now break it via p gap
    bad.p = LpExponent::infinity();
    // delta = 1.5 - 1.4 - 1 * (1/2 - 0) = -0.4
    CHECK_THROWS_AS(embedding_map(x, src, bad), UsageError);

    bad = dst;
    bad.sizes = {1, 3};
    CHECK_THROWS_AS(embedding_map(x, src, bad), UsageError);
}

TEST_CASE("single-coordinate entropy numbers follow the halving law exactly") {
    SeqSpaceParams src = scalar_space(1.0, 1.0);
    SeqSpaceParams dst = scalar_space(0.5, 0.0);
    for (int k = 1; k <= 8; ++k) {
        const EntropyEstimate est = entropy_estimate(src, dst, k, 64, 1);
        CHECK(est.method == EntropyMethod::Exact1d);
        CHECK(est.centers_used == (std::int64_t{1} << (k - 1)));
        CHECK(est.value == std::exp2(static_cast<double>(1 - k)));
    }

    SeqOperator op;
    op.diag = {0.75};
    for (int k = 1; k <= 6; ++k) {
        const EntropyEstimate est = entropy_estimate_op(op, src, dst, k, 64, 1);
        CHECK(est.value == 0.75 * std::exp2(static_cast<double>(1 - k)));
    }

    SeqSpaceParams wide = three_level(2.0, 1.0, 2.0, 2.0);
    SeqSpaceParams wdst = three_level(1.0, 0.0, 2.0, 2.0);
    CHECK_THROWS_AS(entropy_estimate(wide, wdst, 2, 64, 1, EntropyMethod::Exact1d), UsageError);
}

TEST_CASE("greedy cover reproduces the one-dimensional law within 15 percent") {
    SeqSpaceParams src = scalar_space(1.0, 1.0);
    SeqSpaceParams dst = scalar_space(0.5, 0.0);
    for (int k = 1; k <= 6; ++k) {
        const EntropyEstimate est =
            entropy_estimate(src, dst, k, 4096, 42, EntropyMethod::GreedyCover);
        CHECK(est.method == EntropyMethod::GreedyCover);
        const double law = std::exp2(static_cast<double>(1 - k));
        CHECK(est.value <= 1.15 * law);
        CHECK(est.value >= 0.85 * law);
    }
}

TEST_CASE("entropy estimates are monotone in k and deterministic in the seed") {
    SeqSpaceParams src = three_level(2.0, 1.0, 2.0, 2.0);
    SeqSpaceParams dst = three_level(1.0, 0.0, 2.0, 2.0);
    std::vector<double> first;
    for (int k = 1; k <= 6; ++k)
        first.push_back(entropy_estimate(src, dst, k, 512, 7).value);
    for (std::size_t i = 1; i < first.size(); ++i) CHECK(first[i] <= first[i - 1] + 1e-15);
    CHECK(first.front() > 0.0);
    for (int k = 1; k <= 6; ++k)
        CHECK(entropy_estimate(src, dst, k, 512, 7).value == first[static_cast<std::size_t>(k - 1)]);
}

TEST_CASE("greedy cover stays within factor two of the optimal cloud cover") {
    SeqSpaceParams prm;
    prm.levels = 2;
    prm.sizes = {1, 2};
    const std::int64_t rows = 10;
    const std::vector<double> cloud = detail::build_cloud(identity_operator(prm), prm, rows, 3);
    for (std::int64_t c = 1; c <= 4; ++c) {
        double opt = std::numeric_limits<double>::infinity();
        std::vector<std::int64_t> pick(static_cast<std::size_t>(c));
        // all c-subsets of the rows, odometer style
        for (std::int64_t i = 0; i < c; ++i) pick[static_cast<std::size_t>(i)] = i;
        while (true) {
            opt = std::min(opt, detail::cloud_radius(prm, cloud, pick));
            std::int64_t pos = c - 1;
            while (pos >= 0 && pick[static_cast<std::size_t>(pos)] == rows - c + pos) --pos;
            if (pos < 0) break;
            ++pick[static_cast<std::size_t>(pos)];
            for (std::int64_t i = pos + 1; i < c; ++i)
                pick[static_cast<std::size_t>(i)] = pick[static_cast<std::size_t>(i - 1)] + 1;
        }
        CHECK(detail::greedy_radius(prm, cloud, c) <= 2.0 * opt + 1e-12);
    }
}

TEST_CASE("entropy rate fit validates its arguments") {
    SeqSpaceParams src = scalar_space(1.0, 1.0);
    SeqSpaceParams dst = scalar_space(0.5, 0.0);
    CHECK_THROWS_AS(entropy_rate_fit(src, dst, {2, 3, 4, 5}, 64, 1), UsageError);

    SeqSpaceParams wsrc = three_level(2.0, 1.0, 2.0, 2.0);
    SeqSpaceParams wdst = three_level(1.0, 0.0, 2.0, 2.0);
    CHECK_THROWS_AS(entropy_rate_fit(wsrc, wdst, {2, 3, 4}, 512, 1), UsageError);
    CHECK_THROWS_AS(entropy_rate_fit(wsrc, wdst, {2, 3, 3, 5}, 512, 1), UsageError);
}

TEST_CASE("entropy rate of a compact identity tracks the predicted exponent") {
    SeqSpaceParams src = three_level(2.0, 1.0, 2.0, 2.0);
    SeqSpaceParams dst = three_level(1.0, 0.0, 2.0, 2.0);
    // delta = s1 - s2 - n(1/p1 - 1/p2) = 1: slope -delta/n + 1/p2 - 1/p1 = -1
    CHECK(entropy_rate_exponent(src, dst) == -1.0);
    const FitResult fit = entropy_rate_fit(src, dst, {2, 3, 4, 5}, 512, 11);
    CHECK(fit.points.size() == 4);
    CHECK(fit.slope < -0.3);
    CHECK(fit.slope > -1.8);
}

TEST_CASE("entropy calculus holds on explicit diagonal operators") {
    SeqSpaceParams sp;
    sp.s = 1.0;
    sp.levels = 2;
    sp.sizes = {1, 2};
    SeqOperator s_op{{0.9, 0.3, 0.3}};
    SeqOperator t_op{{0.5, 0.25, 0.1}};
    SeqOperator r_op{{1.0, 0.5, 0.5}};
    const CalculusReport rep = entropy_calculus_check(sp, sp, sp, s_op, t_op, r_op, 3, 3, 1024, 21);
    CHECK(rep.monotone);
    CHECK(rep.additivity.size() == 9);
    CHECK(rep.multiplicativity.size() == 9);
    CHECK(rep.ok());
}

TEST_CASE("entropy multiplicativity is exact on single-coordinate spaces") {
    SeqSpaceParams sp = scalar_space(1.0, 0.0);
    SeqOperator s_op{{0.6}};
    SeqOperator t_op{{0.5}};
    SeqOperator r_op{{0.75}};
    const CalculusReport rep = entropy_calculus_check(sp, sp, sp, s_op, t_op, r_op, 3, 3, 64, 1);
    CHECK(rep.ok());
    for (const CalculusCase& c : rep.multiplicativity) {
        // e_{j+k-1}(RT) = 0.375 * 2^{-(j+k-2)} equals e_j(R) e_k(T) exactly
        CHECK(c.lhs == c.rhs);
        CHECK(c.lhs == 0.375 * std::exp2(static_cast<double>(2 - c.j - c.k)));
    }
}

TEST_CASE("entropy estimation enforces its resource budget") {
    SeqSpaceParams src = scalar_space(1.0, 1.0);
    SeqSpaceParams dst = scalar_space(0.5, 0.0);
    CHECK_THROWS_AS(entropy_estimate(src, dst, 0, 64, 1), UsageError);
    CHECK_THROWS_AS(entropy_estimate(src, dst, 22, std::int64_t{1} << 21, 1), ResourceError);
    SeqSpaceParams big;
    big.levels = 9;
    big.sizes = {1, 2, 4, 8, 16, 32, 64, 128, 256}; // 511 coefficients
    SeqSpaceParams bigdst = big;
    big.rho = 1.0;
    big.s = 2.0;
    bigdst.s = 1.0;
    CHECK_THROWS_AS(entropy_estimate(big, bigdst, 3, 512, 1), ResourceError);
    SeqSpaceParams wide = three_level(2.0, 1.0, 2.0, 2.0);
    SeqSpaceParams wdst = three_level(1.0, 0.0, 2.0, 2.0);
    CHECK_THROWS_AS(entropy_estimate(wide, wdst, 5, 8, 1), UsageError); // cloud < centers
}
