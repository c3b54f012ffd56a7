#include <benchmark/benchmark.h>

#include "ruinlab/estimators.hpp"
#include "ruinlab/lundberg.hpp"
#include "ruinlab/presets.hpp"

using namespace ruinlab;

static void BM_Kappa(benchmark::State& state)
{
    const ModelSpec m = preset_bound1();
    double r = 0.1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(kappa(m, 1.5, r));
        r = r < 1.9 ? r + 1e-3 : 0.1;
    }
}
BENCHMARK(BM_Kappa);

static void BM_AdjustmentCoefficient(benchmark::State& state)
{
    const ModelSpec m = preset_bound1();
    for (auto _ : state) benchmark::DoNotOptimize(adjustment_coefficient(m, 1.5));
}
BENCHMARK(BM_AdjustmentCoefficient);

static void BM_RStar(benchmark::State& state)
{
    const ModelSpec m = preset_bound1();
    for (auto _ : state) benchmark::DoNotOptimize(r_star(m));
}
BENCHMARK(BM_RStar)->Unit(benchmark::kMillisecond);

static void BM_SampleGamma(benchmark::State& state)
{
    const Distribution g = Gamma{static_cast<double>(state.range(0)) / 2.0, 1.0};
    RngStream s(1, 0);
    for (auto _ : state) benchmark::DoNotOptimize(sample(g, s));
}
BENCHMARK(BM_SampleGamma)->Arg(1)->Arg(2)->Arg(4);

static void BM_SampleTiltedBeta(benchmark::State& state)
{
    const Distribution b = tilt(Distribution(Beta{2.0, 2.0}), 1.0);
    RngStream s(1, 0);
    for (auto _ : state) benchmark::DoNotOptimize(sample(b, s));
}
BENCHMARK(BM_SampleTiltedBeta);

static void BM_TiltedPath(benchmark::State& state)
{
    const TiltedModel q(preset_bound1(), 1.5, XiMode::identity);
    const StopRule stop = StopRule::ruin_or_claim_cap(kDefaultClaimCap);
    std::uint64_t i = 0;
    for (auto _ : state) {
        RngStream s(1, i++);
        benchmark::DoNotOptimize(simulate_path(q, std::nullopt, static_cast<double>(state.range(0)), stop, s));
    }
}
BENCHMARK(BM_TiltedPath)->Arg(1)->Arg(10)->Arg(100);

static void BM_EstimateIS(benchmark::State& state)
{
    const ModelSpec m = preset_bound1();
    RunOptions o;
    o.n = 10'000;
    o.workers = static_cast<unsigned>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(estimate_ruin_is(m, 3.0, RChoice::r_star(), XiMode::identity, o));
}
BENCHMARK(BM_EstimateIS)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
