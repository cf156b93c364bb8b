#include <benchmark/benchmark.h>

#include "refgame/equilibrium.hpp"
#include "refgame/game_dynamics.hpp"
#include "refgame/mnl_model.hpp"

namespace {

using namespace refgame;

void BM_Demand(benchmark::State& state) {
    const MarketParams m = figure1_params();
    const MarketState s = figure1_initial_state();
    for (auto _ : state) {
        benchmark::DoNotOptimize(demand(m, s.prices, s.references));
    }
}
BENCHMARK(BM_Demand);

void BM_OpgaStep(benchmark::State& state) {
    const MarketParams m = figure1_params();
    MarketState s = figure1_initial_state();
    for (auto _ : state) {
        s = opga_step(m, s, 0.01);
        benchmark::DoNotOptimize(s);
    }
}
BENCHMARK(BM_OpgaStep);

void BM_Simulate(benchmark::State& state) {
    const MarketParams m = figure1_params();
    const MarketState s = figure1_initial_state();
    const StepSchedule sched = StepSchedule::inverse_sqrt(1.0);
    const auto horizon = state.range(0);
    for (auto _ : state) {
        double last = 0.0;
        simulate(m, s, sched, horizon, [&](const TrajectoryRecord& r) { last = r.prices.h; });
        benchmark::DoNotOptimize(last);
    }
    state.SetItemsProcessed(state.iterations() * horizon);
}
BENCHMARK(BM_Simulate)->Arg(1'000)->Arg(100'000);

void BM_SolveSne(benchmark::State& state) {
    const MarketParams m = figure1_params();
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_sne(m));
    }
}
BENCHMARK(BM_SolveSne);

void BM_EquilibriumPolicy(benchmark::State& state) {
    const MarketParams m = figure1_params();
    const PricePair r = figure1_initial_state().references;
    for (auto _ : state) {
        benchmark::DoNotOptimize(equilibrium_policy(m, r));
    }
}
BENCHMARK(BM_EquilibriumPolicy);

}  // namespace
BENCHMARK_MAIN();
