#include "doctest.h"

#include <cmath>

#include "fslab/dilation.hpp"
#include "fslab/smoothness.hpp"

using namespace fslab;

TEST_CASE("dilate rereads samples on the coarser lattice") {
    GridFunction f = make_bump(1, 4, 1.0, 1.0, Profile::Hat);
    GridFunction g = dilate(f, 2);
    CHECK(g.level() == 2);
    CHECK(g.extent() == 4.0);
    CHECK(g.support_radius() == 4.0);
    CHECK(g.half_width() == 16);
    CHECK(g.at(4) == f.at(4)); // g(1) = f(1/4)
    CHECK(g.at(4) == 0.75);

    CHECK_THROWS_AS(dilate(f, 5), DomainError);
    CHECK_THROWS_AS(dilate(f, -1), UsageError);
}

TEST_CASE("dilate clips the window once the support fits") {
    GridFunction f = make_bump(1, 5, 2.0, 0.25, Profile::SmoothBump);
    GridFunction g = dilate(f, 2);
    CHECK(g.level() == 3);
    CHECK(g.extent() == 2.0); // natural extent 8 clipped to max(extent, 2)
    CHECK(g.support_radius() == 1.0);
    for (std::int64_t k = -g.half_width(); k <= g.half_width(); ++k)
        CHECK(g.at(k) == f.at(k));
}

TEST_CASE("contract inverts dilate on unclipped windows") {
    GridFunction f = make_bump(1, 4, 1.0, 1.0, Profile::Hat);
    CHECK(contract(dilate(f, 1), 1) == f);
    CHECK(dilate(contract(f, 2), 2) == f);
    GridFunction c = contract(f, 2);
    CHECK(c.level() == 6);
    CHECK(c.extent() == 0.25);
    CHECK(c.values() == f.values());
}

TEST_CASE("difference commutes with dilation exactly") {
    GridFunction f = make_bump(1, 5, 1.0, 0.75, Profile::SmoothBump);
    GridFunction g = dilate(f, 1);
    for (int r : {1, 2}) {
        GridFunction dg = iterated_difference(g, {1, 3, 0}, r);
        GridFunction df = iterated_difference(f, {1, 3, 0}, r);
        const std::int64_t h = std::min(dg.half_width(), df.half_width());
        double gap = 0.0;
        for (std::int64_t k = -h; k <= h; ++k)
            gap = std::max(gap, std::abs(dg.at(k) - df.at(k)));
        CHECK(gap == 0.0); // identical samples, identical arithmetic
    }
}

TEST_CASE("modulus commutation identity") {
    GridFunction f = make_bump(1, 4, 1.0, 1.0, Profile::Hat);
    auto [l_inf, r_inf] = scale_commutation_check(f, 1, 0.25, LpExponent::infinity(), 1,
                                                  CommutationKind::Modulus);
    CHECK(l_inf == r_inf); // p = inf: both sides are the same maxima
    CHECK(l_inf == 0.125);

    auto [l1, r1] = scale_commutation_check(f, 1, 0.25, 1.0, 1, CommutationKind::Modulus);
    CHECK(l1 == r1); // p = 1: factor 2 is exact

    auto [l2, r2] = scale_commutation_check(f, 2, 0.5, 2.0, 2, CommutationKind::Modulus);
    CHECK(l2 == doctest::Approx(r2).epsilon(1e-14));

    CHECK_THROWS_AS(
        scale_commutation_check(f, 3, 0.01, 2.0, 1, CommutationKind::Modulus),
        ResolutionError);
}

TEST_CASE("ball means commutation identity") {
    GridFunction f = make_bump(1, 4, 1.0, 1.0, Profile::Hat);
    for (double pv : {1.0, 2.0}) {
        auto [lhs, rhs] = scale_commutation_check(f, 1, 0.25, pv, 1, CommutationKind::BallMeans);
        CHECK(lhs == rhs); // matched lattices make the identity bit-exact
        CHECK(lhs > 0.0);
    }
    GridFunction f2 = make_bump(2, 3, 1.0, 1.0, Profile::Hat);
    auto [lhs2, rhs2] = scale_commutation_check(f2, 1, 0.25, 2.0, 1, CommutationKind::BallMeans);
    CHECK(lhs2 == rhs2);
}

TEST_CASE("besov homogeneity follows the scaling law exactly") {
    GridFunction f = make_bump(1, 6, 2.0, 0.125, Profile::SmoothBump);

    SmoothnessParams prm;
    prm.family = Family::Besov;
    prm.s = 0.5;
    prm.p = LpExponent::infinity();
    prm.q = LpExponent::infinity();
    prm.r = 1;
    auto res = homogeneity_experiment(f, prm, 3);
    CHECK(res.predicted_slope == 0.5);
    CHECK(res.fit.slope == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(res.fit.max_residual < 1e-12);
    REQUIRE(res.norms.size() == 4);
    CHECK(res.lambdas[1] == 0.5);
    CHECK(res.inhomogeneous_norms[0] > 0.0);

    SmoothnessParams prm2 = prm;
    prm2.s = 0.8;
    prm2.p = 2.0;
    prm2.q = 1.0;
    prm2.r = 2;
    auto res2 = homogeneity_experiment(f, prm2, 3);
    CHECK(res2.predicted_slope == doctest::Approx(0.3));
    CHECK(res2.fit.slope == doctest::Approx(0.3).epsilon(1e-9));
}

TEST_CASE("triebel-lizorkin homogeneity follows the scaling law") {
    GridFunction f = make_bump(1, 5, 1.0, 0.125, Profile::SmoothBump);
    SmoothnessParams prm;
    prm.family = Family::TriebelLizorkin;
    prm.s = 0.8;
    prm.p = 2.0;
    prm.q = 2.0;
    prm.r = 2;
    auto res = homogeneity_experiment(f, prm, 3);
    CHECK(res.predicted_slope == doctest::Approx(0.3));
    CHECK(std::abs(res.fit.slope - 0.3) < 1e-6);
    CHECK(res.fit.max_residual < 1e-7);
}

TEST_CASE("homogeneity preconditions") {
    GridFunction f = make_bump(1, 6, 2.0, 0.25, Profile::SmoothBump);
    SmoothnessParams prm;
    prm.s = 0.5;
    prm.r = 1;
    CHECK_THROWS_AS(homogeneity_experiment(f, prm, 2), UsageError);
    GridFunction wide = make_bump(1, 6, 2.0, 1.0, Profile::SmoothBump);
    CHECK_THROWS_AS(homogeneity_experiment(wide, prm, 3), DomainError);
}
