#include <benchmark/benchmark.h>

#include <random>

#include "intentbench/cluster.hpp"

using namespace intentbench;

namespace {

// Unit-normalized Gaussian rows, shaped like sentence embeddings.
RowMatrix embedding_like(Index n, Index d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  RowMatrix x(n, d);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < d; ++j) x(i, j) = g(rng);
    x.row(i).normalize();
  }
  return x;
}

void BM_KMeans(benchmark::State& state) {
  const auto x = embedding_like(state.range(0), 384, 1);
  cluster::KMeansConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(cluster::kmeans(x, 30, cfg));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_KMeans)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_Bisecting(benchmark::State& state) {
  const auto x = embedding_like(state.range(0), 384, 2);
  for (auto _ : state) benchmark::DoNotOptimize(cluster::bisecting_kmeans(x, 30));
}
BENCHMARK(BM_Bisecting)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_AgglomerativeWard(benchmark::State& state) {
  const auto x = embedding_like(state.range(0), 384, 3);
  for (auto _ : state) benchmark::DoNotOptimize(cluster::agglomerative(x, 30, cluster::Linkage::Ward));
}
BENCHMARK(BM_AgglomerativeWard)->Arg(500)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_Birch(benchmark::State& state) {
  const auto x = embedding_like(state.range(0), 384, 4);
  for (auto _ : state) benchmark::DoNotOptimize(cluster::birch(x, 0.5, 50, 30));
}
BENCHMARK(BM_Birch)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_Spectral(benchmark::State& state) {
  const auto x = embedding_like(state.range(0), 384, 5);
  for (auto _ : state) benchmark::DoNotOptimize(cluster::spectral(x, 30, cluster::Affinity{}, 42));
}
BENCHMARK(BM_Spectral)->Arg(500)->Unit(benchmark::kMillisecond);

void BM_Silhouette(benchmark::State& state) {
  const auto x = embedding_like(state.range(0), 384, 6);
  const auto r = cluster::kmeans(x, 30);
  for (auto _ : state) benchmark::DoNotOptimize(cluster::silhouette(x, r));
}
BENCHMARK(BM_Silhouette)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

}  // namespace
