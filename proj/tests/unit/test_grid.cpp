#include "doctest.h"

#include <cmath>

#include "fslab/grid.hpp"

using namespace fslab;

TEST_CASE("lattice geometry") {
    GridFunction f = make_bump(1, 4, 1.0, 1.0, Profile::Hat);
    CHECK(f.dim() == 1);
    CHECK(f.level() == 4);
    CHECK(f.spacing() == 0.0625);
    CHECK(f.half_width() == 16);
    CHECK(f.points_per_axis() == 33);
    CHECK(f.values().size() == 33);

    GridFunction g = make_bump(2, 2, 1.0, 1.0, Profile::Hat);
    CHECK(g.points_per_axis() == 9);
    CHECK(g.values().size() == 81);
}

TEST_CASE("hat profile values") {
    GridFunction f = make_bump(1, 4, 1.0, 1.0, Profile::Hat);
    CHECK(f.at(0) == 1.0);
    CHECK(f.at(8) == 0.5);
    CHECK(f.at(-8) == 0.5);
    CHECK(f.at(16) == 0.0);
    CHECK(f.sample(40) == 0.0); // zero-extension beyond the window

    GridFunction g = make_bump(2, 2, 1.0, 1.0, Profile::Hat);
    CHECK(g.at(0, 0) == 1.0);
    CHECK(g.at(4, 0) == 0.0);
    CHECK(g.at(4, 4) == 0.0);
    CHECK(g.at(1, 1) == doctest::Approx(0.6464466094067263).epsilon(1e-15));
}

TEST_CASE("smooth bump profile values") {
    GridFunction f = make_bump(1, 4, 1.0, 1.0, Profile::SmoothBump);
    // exp(-1/(1-u)) with u = 0.25 at x = 0.5
    CHECK(f.at(8) == doctest::Approx(0.26359713811572677).epsilon(1e-15));
    CHECK(f.at(0) == doctest::Approx(0.36787944117144233).epsilon(1e-15));
    CHECK(f.at(16) == 0.0);
    CHECK(f.at(15) > 0.0);
}

TEST_CASE("polynomial and abs profiles truncate at the radius") {
    GridFunction p2 = make_bump(1, 4, 1.0, 0.5, Profile::Polynomial, 2);
    CHECK(p2.at(4) == 0.0625); // (1/4)^2
    CHECK(p2.at(0) == 0.0);
    CHECK(p2.at(8) == 0.0); // boundary excluded

    GridFunction a = make_bump(1, 4, 1.0, 0.5, Profile::Abs);
    CHECK(a.at(0) == -0.5);
    CHECK(a.at(4) == -0.25);
    CHECK(a.at(8) == 0.0);
}

TEST_CASE("lp norms of the hat") {
    GridFunction f = make_bump(1, 4, 1.0, 1.0, Profile::Hat);
    CHECK(lp_norm(f, 1.0) == 1.0); // exact dyadic Riemann sum
    CHECK(lp_norm(f, LpExponent::infinity()) == 1.0);
    // delta * (1 + 2*sum_{j=1}^{15} (j/16)^2) = 10.6875/16
    CHECK(lp_norm(f, 2.0) == doctest::Approx(std::sqrt(0.66796875)).epsilon(1e-15));
    // general-p path agrees with the direct p = 2 path
    CHECK(lp_norm(f, 2.0 + 1e-12) == doctest::Approx(lp_norm(f, 2.0)).epsilon(1e-9));
}

TEST_CASE("lp norm scales by |c| and p-triangle holds") {
    GridFunction f = make_bump(1, 5, 1.0, 0.75, Profile::SmoothBump);
    GridFunction g = make_bump(1, 5, 1.0, 1.0, Profile::Hat);
    for (double pv : {0.5, 1.0, 2.0}) {
        LpExponent p(pv);
        const double nf = lp_norm(f, p), ng = lp_norm(g, p);
        CHECK(lp_norm(scale(f, -3.0), p) == doctest::Approx(3.0 * nf).epsilon(1e-14));
        const double rho = std::min(pv, 1.0);
        const double lhs = std::pow(lp_norm(add(f, g), p), rho);
        CHECK(lhs <= std::pow(nf, rho) + std::pow(ng, rho) + 1e-12);
    }
}

TEST_CASE("grid validation rejects bad shapes") {
    CHECK_THROWS_AS(make_bump(3, 4, 1.0, 1.0, Profile::Hat), DomainError);
    CHECK_THROWS_AS(make_bump(1, 4, 0.3, 0.2, Profile::Hat), DomainError);  // non-dyadic extent
    CHECK_THROWS_AS(make_bump(1, 4, 1.0, 1.5, Profile::Hat), DomainError);  // radius past extent
    CHECK_THROWS_AS(make_bump(1, 30, 1.0, 1.0, Profile::Hat), DomainError); // level too deep
    CHECK_THROWS_AS(GridFunction(1, 2, 1.0, 1.0, std::vector<double>(4, 0.0)), DomainError);
    // nonzero sample outside the declared support
    std::vector<double> vals(9, 0.0);
    vals[0] = 1.0;
    CHECK_THROWS_AS(GridFunction(1, 2, 1.0, 0.5, vals), DomainError);
}

TEST_CASE("add requires identical grids, support is the larger one") {
    GridFunction f = make_bump(1, 4, 1.0, 0.5, Profile::Hat);
    GridFunction g = make_bump(1, 4, 1.0, 1.0, Profile::Hat);
    GridFunction h = add(f, g);
    CHECK(h.support_radius() == 1.0);
    CHECK(h.at(0) == 2.0);
    CHECK(h.at(8) == 0.5);
    GridFunction other = make_bump(1, 5, 1.0, 1.0, Profile::Hat);
    CHECK_THROWS_AS(add(f, other), DomainError);
}
