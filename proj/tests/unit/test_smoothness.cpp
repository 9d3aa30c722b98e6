#include "doctest.h"

#include <cmath>
#include <cstdlib>

#include "fslab/grid.hpp"
#include "fslab/smoothness.hpp"

using namespace fslab;

TEST_CASE("difference weights") {
    auto w1 = detail::difference_weights(1);
    REQUIRE(w1.size() == 2);
    CHECK(w1[0] == -1.0);
    CHECK(w1[1] == 1.0);
    auto w3 = detail::difference_weights(3);
    REQUIRE(w3.size() == 4);
    CHECK(w3[0] == -1.0);
    CHECK(w3[1] == 3.0);
    CHECK(w3[2] == -3.0);
    CHECK(w3[3] == 1.0);
    CHECK_THROWS_AS(detail::difference_weights(0), UsageError);
    CHECK_THROWS_AS(detail::difference_weights(17), UsageError);
}

TEST_CASE("second difference of x^2 is 2h^2") {
    GridFunction f = make_bump(1, 4, 1.0, 0.5, Profile::Polynomial, 2);
    GridFunction d = iterated_difference(f, {1, 4, 0}, 2); // h = 0.25
    CHECK(d.half_width() == 24);
    CHECK(d.extent() == 1.5);
    CHECK(d.at(-4) == 0.125); // samples at -0.25, 0, 0.25 all interior
    // window edge stays zero
    CHECK(d.at(24) == 0.0);
}

TEST_CASE("hat modulus is t in sup norm") {
    GridFunction f = make_bump(1, 4, 1.0, 1.0, Profile::Hat);
    const LpExponent inf = LpExponent::infinity();
    CHECK(modulus(f, 0.25, inf, 1).value == 0.25);
    CHECK(modulus(f, 0.5, inf, 1).value == 0.5);
    CHECK_FALSE(modulus(f, 0.25, inf, 1).degenerate);

    auto fine = modulus(f, f.spacing() / 2.0, inf, 1);
    CHECK(fine.degenerate);
    CHECK(fine.value == 0.0);
}

TEST_CASE("modulus curve on dyadic scales") {
    GridFunction f = make_bump(1, 4, 1.0, 1.0, Profile::Hat);
    auto curve = modulus_curve(f, LpExponent::infinity(), 1, 1, 3);
    REQUIRE(curve.points.size() == 3);
    CHECK(curve.points[0].first == 0.125);
    CHECK(curve.points[0].second == 0.125);
    CHECK(curve.points[1].first == 0.25);
    CHECK(curve.points[1].second == 0.25);
    CHECK(curve.points[2].first == 0.5);
    CHECK(curve.points[2].second == 0.5);
    CHECK_THROWS_AS(modulus_curve(f, 2.0, 1, 1, 9), ResolutionError);
}

TEST_CASE("modulus saturates at separated shifts") {
    GridFunction f = make_bump(1, 4, 1.0, 1.0, Profile::Hat);
    const LpExponent inf = LpExponent::infinity();
    CHECK(modulus(f, 2.5, inf, 1).value == 1.0);  // max binomial weight * sup
    CHECK(modulus(f, 2.5, inf, 2).value == 2.0);
    CHECK(modulus(f, 3.0, 1.0, 2).value == 4.0);  // sum of weights * L1 mass
    CHECK(modulus(f, 100.0, 1.0, 2).value == modulus(f, 2.5, 1.0, 2).value);

    // general p: separated value is (sum_j C(r,j)^p)^(1/p) * ||f||_p
    GridFunction g = make_bump(1, 5, 1.0, 0.75, Profile::SmoothBump);
    const double pv = 1.7;
    const double expected =
        std::pow(1.0 + std::pow(2.0, pv) + 1.0, 1.0 / pv) * lp_norm(g, pv);
    CHECK(modulus(g, 4.0, pv, 2).value == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("modulus is monotone in t") {
    GridFunction f = make_bump(1, 5, 1.0, 0.75, Profile::SmoothBump);
    for (double pv : {1.0, 2.0}) {
        double prev = 0.0;
        for (int k = 5; k >= -2; --k) {
            const double cur = modulus(f, std::exp2(-k), pv, 2).value;
            CHECK(cur >= prev);
            prev = cur;
        }
    }
}

TEST_CASE("2d hat modulus") {
    GridFunction f = make_bump(2, 3, 1.0, 1.0, Profile::Hat);
    CHECK(modulus(f, 0.25, LpExponent::infinity(), 1).value == 0.25);
}

TEST_CASE("interior modulus annihilates low-degree polynomials") {
    GridFunction f = make_bump(1, 5, 1.0, 0.75, Profile::Polynomial, 2);
    CHECK(modulus_interior(f, 0.125, 2.0, 3, 0.25) == 0.0);
    CHECK(modulus_interior(f, 0.125, 2.0, 2, 0.25) > 0.0);
    CHECK_THROWS_AS(modulus_interior(f, 0.25, 2.0, 3, 0.5), DomainError);
}

TEST_CASE("ball means of the hat") {
    GridFunction f = make_bump(1, 4, 1.0, 1.0, Profile::Hat);
    GridFunction d1 = ball_means(f, 0.125, 1.0, 1); // 2 lattice units, N = 5
    CHECK(d1.at(0) == doctest::Approx(0.075).epsilon(1e-15));
    GridFunction d2 = ball_means(f, 0.125, 2.0, 1);
    CHECK(d2.at(0) == doctest::Approx(std::sqrt(2.0) / 16.0).epsilon(1e-14));

    // per-point far completion: ball of radius 2.5 from the peak
    GridFunction d3 = ball_means(f, 2.5, 1.0, 1);
    CHECK(d3.at(0) == doctest::Approx(65.0 / 81.0).epsilon(1e-14));

    // beyond reach of the support the means vanish
    GridFunction d4 = ball_means(f, 0.125, 1.0, 1);
    CHECK(d4.at(d4.half_width()) == 0.0);

    CHECK_THROWS_AS(ball_means(f, 0.25, LpExponent::infinity(), 1), UsageError);
}

TEST_CASE("results do not depend on the worker count") {
    GridFunction f = make_bump(1, 6, 1.0, 0.75, Profile::SmoothBump);
    setenv("FSLAB_THREADS", "1", 1);
    const double a = modulus(f, 0.5, 2.0, 2).value;
    const double b1 = ball_means(f, 0.25, 2.0, 2).at(3);
    setenv("FSLAB_THREADS", "3", 1);
    const double a2 = modulus(f, 0.5, 2.0, 2).value;
    const double b2 = ball_means(f, 0.25, 2.0, 2).at(3);
    unsetenv("FSLAB_THREADS");
    CHECK(a == a2);
    CHECK(b1 == b2);
}

TEST_CASE("order validation") {
    GridFunction f = make_bump(1, 4, 1.0, 1.0, Profile::Hat);
    CHECK_THROWS_AS(modulus(f, 0.25, 2.0, 0), UsageError);
    CHECK_THROWS_AS(ball_means(f, 0.25, 2.0, 17), UsageError);
    CHECK_THROWS_AS(modulus(f, -1.0, 2.0, 1), UsageError);
}
