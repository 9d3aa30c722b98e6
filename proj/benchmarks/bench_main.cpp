// Microbenchmarks for the hot kernels: iterated differences, the dyadic
// modulus sweep, ball means, whole-norm evaluations, and the entropy cover.
// Levels are kept a notch below the acceptance runs so a full pass stays in
// seconds; scaling trends across the registered levels are the point.

#include <benchmark/benchmark.h>

#include "fslab/corpus.hpp"
#include "fslab/norms.hpp"
#include "fslab/seqspace.hpp"
#include "fslab/smoothness.hpp"

namespace {

using namespace fslab;

GridFunction bump(int level) {
    return make_profile(CorpusProfile::SmoothBump, 1, level, 2.0, 1.0);
}

SmoothnessParams params(Family family) {
    SmoothnessParams prm;
    prm.family = family;
    prm.s = 0.6;
    prm.p = LpExponent(2.0);
    prm.q = LpExponent(2.0);
    prm.r = 1;
    return prm;
}

void bm_iterated_difference(benchmark::State& state) {
    const GridFunction f = bump(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(iterated_difference(f, {1, 3, 0}, 2));
    }
}
BENCHMARK(bm_iterated_difference)->Arg(8)->Arg(10)->Arg(12);

void bm_modulus_curve(benchmark::State& state) {
    const GridFunction f = bump(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(modulus_curve(f, LpExponent(2.0), 2, 0, f.level()));
    }
}
BENCHMARK(bm_modulus_curve)->Arg(7)->Arg(8)->Arg(9);

void bm_ball_means(benchmark::State& state) {
    const GridFunction f = bump(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(ball_means(f, 0.125, LpExponent(2.0), 1));
    }
}
BENCHMARK(bm_ball_means)->Arg(7)->Arg(8)->Arg(9);

void bm_besov_norm(benchmark::State& state) {
    const GridFunction f = bump(static_cast<int>(state.range(0)));
    const SmoothnessParams prm = params(Family::Besov);
    for (auto _ : state) {
        benchmark::DoNotOptimize(besov_norm(f, prm, NormVariant::Inhomogeneous0Inf));
    }
}
BENCHMARK(bm_besov_norm)->Arg(7)->Arg(8)->Arg(9);

void bm_tl_norm(benchmark::State& state) {
    const GridFunction f = bump(static_cast<int>(state.range(0)));
    const SmoothnessParams prm = params(Family::TriebelLizorkin);
    for (auto _ : state) {
        benchmark::DoNotOptimize(tl_norm(f, prm, NormVariant::Homogeneous0Inf));
    }
}
BENCHMARK(bm_tl_norm)->Arg(6)->Arg(7)->Arg(8);

void bm_tl_norm_2d(benchmark::State& state) {
    // radius 0.5 keeps level 6 inside the evaluator's ops budget
    const GridFunction f = make_profile(CorpusProfile::SmoothBump, 2,
                                        static_cast<int>(state.range(0)), 2.0, 0.5);
    const SmoothnessParams prm = params(Family::TriebelLizorkin);
    for (auto _ : state) {
        benchmark::DoNotOptimize(tl_norm(f, prm, NormVariant::Inhomogeneous01));
    }
}
BENCHMARK(bm_tl_norm_2d)->Arg(5)->Arg(6);

void bm_seq_norm(benchmark::State& state) {
    SeqSpaceParams prm;
    prm.levels = static_cast<int>(state.range(0));
    prm.sizes.clear();
    for (int j = 0; j < prm.levels; ++j) prm.sizes.push_back(std::int64_t{1} << j);
    SeqElement x = zero_element(prm);
    for (std::size_t i = 0; i < x.coeffs.size(); ++i)
        x.coeffs[i] = 1.0 / static_cast<double>(i + 1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(seq_norm(x, prm));
    }
}
BENCHMARK(bm_seq_norm)->Arg(8)->Arg(12)->Arg(16);

void bm_entropy_cover(benchmark::State& state) {
    SeqSpaceParams src;
    src.s = 2.0;
    src.levels = 3;
    src.sizes = {1, 2, 4};
    SeqSpaceParams dst = src;
    dst.s = 1.0;
    const auto cloud = state.range(0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            entropy_estimate(src, dst, 5, cloud, 42, EntropyMethod::GreedyCover));
    }
}
BENCHMARK(bm_entropy_cover)->Arg(512)->Arg(2048)->Arg(8192);

} // namespace

BENCHMARK_MAIN();
