#include <benchmark/benchmark.h>

#include "smartsize/smartsize.hpp"

using namespace smartsize;

namespace {

const NixPosterior kPost = nix_posterior({}, 2.0, 143.5, 66);
const AnalysisPrior kAnalysis{0.0, 100.0};
const DesignPrior kDesign{2.0, 0.5};

void BM_MarginalPower(benchmark::State& state) {
  long n = 300;
  for (auto _ : state) {
    benchmark::DoNotOptimize(marginal_power(n, kAnalysis, kDesign, 0.05, kPost));
  }
}
BENCHMARK(BM_MarginalPower);

// Reused node set, as inside the sample-size search.
void BM_PowerFunctionEval(benchmark::State& state) {
  const PowerFunction power(kAnalysis, kDesign, 0.05, kPost);
  long n = 100;
  for (auto _ : state) {
    benchmark::DoNotOptimize(power(n));
    n = n == 1000 ? 100 : n + 1;
  }
}
BENCHMARK(BM_PowerFunctionEval);

void BM_BayesSampleSize(benchmark::State& state) {
  for (auto _ : state) {
    const PowerFunction power(kAnalysis, {2.0, 0.0}, 0.05, kPost);
    benchmark::DoNotOptimize(bayes_sample_size(0.9, power).n);
  }
}
BENCHMARK(BM_BayesSampleSize);

void BM_GenTrialAndEstimate(benchmark::State& state) {
  const auto scenario = builtin_scenario(1);
  RandomStream rng(1);
  for (auto _ : state) {
    const auto data = gen_trial(scenario, state.range(0), 0.05, rng);
    benchmark::DoNotOptimize(contrast_estimate(data, first_compared_strategy(), second_compared_strategy()));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GenTrialAndEstimate)->Arg(66)->Arg(300)->Arg(3000);

void BM_PilotBalanced(benchmark::State& state) {
  RandomStream rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(pilot_n(0.5, 0.5, 6, 0.9, 0, rng).n);
}
BENCHMARK(BM_PilotBalanced);

void BM_PilotMultinomial(benchmark::State& state) {
  for (auto _ : state) {
    RandomStream rng(1);
    benchmark::DoNotOptimize(pilot_n(0.5, 0.5, 6, 0.9, state.range(0), rng, PilotAllocation::Multinomial).n);
  }
}
BENCHMARK(BM_PilotMultinomial)->Arg(20'000)->Unit(benchmark::kMillisecond);

void BM_FrequentistN(benchmark::State& state) {
  FreqSizingInput in{0.41256, 0.5, 0.05, 0.1};
  for (auto _ : state) {
    benchmark::DoNotOptimize(frequentist_n(in));
  }
}
BENCHMARK(BM_FrequentistN);

}  // namespace
BENCHMARK_MAIN();
