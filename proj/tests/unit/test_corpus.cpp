#include "doctest.h"

#include <cmath>

#include "fslab/corpus.hpp"
#include "fslab/errors.hpp"

using namespace fslab;

TEST_CASE("fixed profiles have the expected center and edge values") {
    const int L = 6;
    auto center = [&](CorpusProfile p) {
        return make_profile(p, 1, L, 2.0, 1.0).at(0);
    };
    CHECK(center(CorpusProfile::Hat) == 1.0);
    CHECK(center(CorpusProfile::Parabola) == 1.0);
    CHECK(center(CorpusProfile::CosineArch) == 1.0);
    CHECK(center(CorpusProfile::Step) == 1.0);
    CHECK(center(CorpusProfile::Zigzag) == 0.0);
    CHECK(center(CorpusProfile::TwinBumps) == 0.0);
    CHECK(center(CorpusProfile::SmoothBump) == doctest::Approx(std::exp(-1.0)));

    GridFunction twins = make_profile(CorpusProfile::TwinBumps, 1, L, 2.0, 1.0);
    CHECK(twins.at(1 << (L - 1)) == doctest::Approx(std::exp(-1.0))); // x = 1/2
    GridFunction step = make_profile(CorpusProfile::Step, 1, L, 2.0, 1.0);
    CHECK(step.at(1 << (L - 1)) == 1.0);
    CHECK(step.at((1 << (L - 1)) + 1) == 0.0);
}

TEST_CASE("profile names round-trip") {
    for (CorpusProfile p :
         {CorpusProfile::Hat, CorpusProfile::SmoothBump, CorpusProfile::Parabola,
          CorpusProfile::CosineArch, CorpusProfile::Step, CorpusProfile::Zigzag,
          CorpusProfile::TwinBumps})
        CHECK(corpus_profile_from_string(to_string(p)) == p);
    CHECK_THROWS_AS(corpus_profile_from_string("sinc"), UsageError);
}

TEST_CASE("corpus lists the fixed profiles then seeded random members") {
    const auto corpus = make_corpus(1, 6, 2.0, 1.0, 10, 77);
    REQUIRE(corpus.size() == 10);
    CHECK(corpus[0].name == "hat");
    CHECK(corpus[6].name == "twin_bumps");
    CHECK(corpus[7].name == "random_1");
    CHECK(corpus[9].name == "random_3");

    const auto again = make_corpus(1, 6, 2.0, 1.0, 10, 77);
    for (std::size_t i = 0; i < corpus.size(); ++i) CHECK(corpus[i].f == again[i].f);

    const auto other = make_corpus(1, 6, 2.0, 1.0, 10, 78);
    CHECK(corpus[2].f == other[2].f);          // fixed members ignore the seed
    CHECK_FALSE(corpus[8].f == other[8].f);    // random members do not

    CHECK_THROWS_AS(make_corpus(1, 6, 2.0, 1.0, 0, 1), UsageError);
}

TEST_CASE("random members refine consistently across levels") {
    const auto coarse = make_corpus(1, 5, 2.0, 1.0, 8, 31);
    const auto fine = make_corpus(1, 6, 2.0, 1.0, 8, 31);
    const GridFunction& c = coarse[7].f;
    const GridFunction& f = fine[7].f;
    for (std::int64_t m = -c.half_width(); m <= c.half_width(); ++m)
        CHECK(c.at(m) == f.at(2 * m));
}

TEST_CASE("two-dimensional corpus members carry their declared support") {
    const auto corpus = make_corpus(2, 5, 1.0, 0.5, 9, 12);
    REQUIRE(corpus.size() == 9);
    for (const auto& member : corpus) {
        CHECK(member.f.dim() == 2);
        CHECK(member.f.support_radius() == 0.5);
    }
    CHECK_THROWS_AS(make_profile(CorpusProfile::Parabola, 1, 5, 1.0, 1.5), DomainError);
}
