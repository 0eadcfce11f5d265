#include <benchmark/benchmark.h>

#include <random>

#include "intentbench/metrics.hpp"

using namespace intentbench;

namespace {

metrics::LabelPair random_pair(std::size_t n, int clusters, int labels) {
  std::mt19937_64 rng(7);
  metrics::LabelPair p;
  for (std::size_t i = 0; i < n; ++i) {
    p.predicted.push_back(static_cast<int>(rng() % static_cast<unsigned>(clusters)));
    p.reference.push_back("intent_" + std::to_string(rng() % static_cast<unsigned>(labels)));
  }
  return p;
}

void BM_Evaluate(benchmark::State& state) {
  const auto p = random_pair(static_cast<std::size_t>(state.range(0)), 30, 22);
  for (auto _ : state) benchmark::DoNotOptimize(metrics::evaluate(p));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Evaluate)->Arg(1000)->Arg(10000);

void BM_HungarianAccuracy(benchmark::State& state) {
  const auto clusters = static_cast<int>(state.range(0));
  const auto p = random_pair(5000, clusters, 22);
  for (auto _ : state) benchmark::DoNotOptimize(metrics::hungarian_accuracy(p));
}
BENCHMARK(BM_HungarianAccuracy)->Arg(10)->Arg(50)->Arg(200);

}  // namespace
BENCHMARK_MAIN();
