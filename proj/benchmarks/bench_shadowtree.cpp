#include <benchmark/benchmark.h>

#include "shadowtree/asymptotics.hpp"
#include "shadowtree/markov.hpp"
#include "shadowtree/oracle.hpp"
#include "shadowtree/shadow.hpp"
#include "shadowtree/solver.hpp"

using namespace shadowtree;

namespace {

ShadowFunction model(int k) {
    return make_shadow_function(solve_c(calibrate_integer_k(0.52, 0.8, k).params));
}

void BM_SolveC(benchmark::State& state) {
    const ModelParams mp{0.9, 0.52, 1e-3, 1.0};
    for (auto _ : state) benchmark::DoNotOptimize(solve_c(mp).c);
}
BENCHMARK(BM_SolveC);

void BM_SolveCBsRegime(benchmark::State& state) {
    const ModelParams mp = bs_params({0.08, 0.2, 1e-6}, 1e-2);
    for (auto _ : state) benchmark::DoNotOptimize(solve_c(mp, DriftDomain::Leveraged).c);
}
BENCHMARK(BM_SolveCBsRegime);

void BM_Calibrate(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(calibrate_integer_k(0.52, 0.8, 3).c);
}
BENCHMARK(BM_Calibrate);

void BM_LambdaSeries(benchmark::State& state) {
    const ModelParams mp{0.8, 0.52, 0.0, 1.0};
    for (auto _ : state) benchmark::DoNotOptimize(lambda_series(mp, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_LambdaSeries)->Arg(2)->Arg(5);

void BM_GrowthStationary(benchmark::State& state) {
    const auto sf = model(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(growth_rate_stationary(sf));
}
BENCHMARK(BM_GrowthStationary)->Arg(1)->Arg(6);

void BM_ExhaustiveCheck(benchmark::State& state) {
    const auto sf = model(3);
    const int T = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(exhaustive_check(sf, T).paths);
    state.SetItemsProcessed(state.iterations() * (int64_t{1} << T));
}
BENCHMARK(BM_ExhaustiveCheck)->Arg(10)->Arg(14)->Unit(benchmark::kMillisecond);

void BM_DpTrue(benchmark::State& state) {
    const auto sf = model(1);
    DPConfig cfg;
    cfg.horizon = 8;
    cfg.fraction_grid = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(dp_true(sf.solution.params, cfg).value);
}
BENCHMARK(BM_DpTrue)->Arg(1001)->Arg(2001)->Arg(4001)->Unit(benchmark::kMillisecond);

void BM_Simulate(benchmark::State& state) {
    const auto sf = model(3);
    for (auto _ : state) benchmark::DoNotOptimize(simulate(sf, 100000, 8, 1).mean_growth);
    state.SetItemsProcessed(state.iterations() * 800000);
}
BENCHMARK(BM_Simulate)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
