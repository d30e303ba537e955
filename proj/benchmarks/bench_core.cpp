#include <benchmark/benchmark.h>

#include "upslope/rng.hpp"
#include "upslope/scenario.hpp"

using namespace upslope;

namespace {

Mat random_matrix(const PadicContext* ctx, int n, std::uint64_t seed) {
    SplitMix64 rng(seed);
    Mat m(ctx, n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m.at(i, j) = CycloElt(ctx, rng.below(ctx->modulus()));
    return m;
}

void BM_CharSeries(benchmark::State& state) {
    auto ctx = PadicContext::create(3, 4, 40, 27);
    Mat m = random_matrix(ctx.get(), static_cast<int>(state.range(0)), 17);
    for (auto _ : state) benchmark::DoNotOptimize(char_series(m));
}
BENCHMARK(BM_CharSeries)->Arg(9)->Arg(18)->Arg(27)->Unit(benchmark::kMillisecond);

void BM_AssembleHamilton(benchmark::State& state) {
    Example53 ex = example53_scenario(40);
    WeightChar kappa = WeightChar::disk(ex.psi, CycloElt::zero(ex.ctx.get()));
    for (auto _ : state)
        benchmark::DoNotOptimize(assemble(ex.ctx, ex.recipe, kappa, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_AssembleHamilton)->Arg(12)->Arg(24)->Unit(benchmark::kMillisecond);

void BM_HodgePolygon(benchmark::State& state) {
    Fixtures fx = fixtures(40);
    for (auto _ : state) benchmark::DoNotOptimize(hodge_polygon(fx.c81));
}
BENCHMARK(BM_HodgePolygon)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
