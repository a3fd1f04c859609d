#include <benchmark/benchmark.h>

#include "qhe/analysis.hpp"

namespace {

qhe::CycleSpec spec(double k, double delta_m) {
    qhe::CycleSpec s;
    s.k = k;
    s.delta_m = delta_m;
    return s;
}

const qhe::BathSpec kBaths = qhe::BathSpec::flat(1.0, 100.0, 1.0, 3.0);

void BM_HarmonicWeights(benchmark::State& state) {
    const auto s = spec(2.0, 1.2);
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(qhe::harmonic_weights(s, 256, n));
}
BENCHMARK(BM_HarmonicWeights)->Arg(16384)->Arg(65536)->Unit(benchmark::kMillisecond);

void BM_IntegrateCycle(benchmark::State& state) {
    const auto ctx = qhe::RateContext::build(spec(1.0, 1.2), kBaths);
    const int n_max = static_cast<int>(state.range(0));
    const qhe::LadderGenerator gen(ctx, n_max);
    const auto p0 = qhe::LadderState::geometric(n_max, 0.5);
    for (auto _ : state) benchmark::DoNotOptimize(qhe::integrate_cycle(gen, p0, {}));
    state.counters["steps"] = qhe::effective_steps(gen, {});
}
BENCHMARK(BM_IntegrateCycle)->Arg(60)->Arg(120)->Unit(benchmark::kMillisecond);

void BM_FindLimitCycle(benchmark::State& state) {
    const auto ctx = qhe::RateContext::build(spec(static_cast<double>(state.range(0)), 1.2), kBaths);
    for (auto _ : state) {
        benchmark::DoNotOptimize(qhe::find_limit_cycle(ctx, qhe::initial_guess(ctx, 60)));
    }
}
BENCHMARK(BM_FindLimitCycle)->Arg(0)->Arg(2)->Arg(20)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
