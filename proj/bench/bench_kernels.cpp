// Serial vs OpenMP kernels on the built-in models.

#include <benchmark/benchmark.h>

#include "gibbslab/builtins.hpp"
#include "gibbslab/gibbs.hpp"
#include "gibbslab/sampler.hpp"
#include "gibbslab/stats.hpp"

using namespace gibbslab;

namespace {

const GibbsMeasure& ising() {
    static const GibbsMeasure g = gibbs_measure(builtin_model("ising").potential);
    return g;
}

kernels::Execution mode(const benchmark::State& s) {
    return s.range(0) ? kernels::Execution::Parallel : kernels::Execution::Serial;
}

void BM_BirkhoffDistribution(benchmark::State& state) {
    const auto psi = *builtin_model("ising").observable;
    for (auto _ : state)
        benchmark::DoNotOptimize(exact_birkhoff_distribution(ising().measure, psi, 1024, mode(state)));
}
BENCHMARK(BM_BirkhoffDistribution)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_GibbsScan(benchmark::State& state) {
    const Model m = builtin_model("ising");
    for (auto _ : state)
        benchmark::DoNotOptimize(gibbs_ratio_scan(ising().measure, m.potential, ising().pressure, 14, mode(state)));
}
BENCHMARK(BM_GibbsScan)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Wasserstein(benchmark::State& state) {
    const auto a = gibbs_measure(builtin_model("bernoulli", {.p = 0.7}).potential);
    const auto b = gibbs_measure(builtin_model("bernoulli", {.p = 0.8}).potential);
    for (auto _ : state) benchmark::DoNotOptimize(wasserstein_distance(a.measure, b.measure, 0.5, 16, mode(state)));
}
BENCHMARK(BM_Wasserstein)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_EmpiricalBirkhoff(benchmark::State& state) {
    const auto psi = *builtin_model("ising").observable;
    const SampleConfig cfg{7, 256, 20000};
    for (auto _ : state)
        benchmark::DoNotOptimize(empirical_birkhoff(ising().measure, psi, cfg, nullptr, mode(state)));
}
BENCHMARK(BM_EmpiricalBirkhoff)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
