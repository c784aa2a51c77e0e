#include "ktrr/ktrr.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace ktrr;

DataMatrix random_data(Index m, Index n, std::uint64_t seed) {
  Rng rng(seed);
  DataMatrix X(m, n);
  for (Index k = 0; k < X.size(); ++k) X.data()[k] = rng.uniform();
  return X;
}

void BM_KernelMatrix(benchmark::State& state) {
  const DataMatrix X = random_data(1024, state.range(0), 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(compute_kernel_matrix(X, {KernelKind::gaussian, std::nullopt}));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_KernelMatrix)->RangeMultiplier(2)->Range(100, 800)->Unit(benchmark::kMillisecond)->Complexity();

void BM_FitKtrr(benchmark::State& state) {
  const KernelMatrix K = compute_kernel_matrix(random_data(20, state.range(0), 2), {KernelKind::gaussian, {}});
  for (auto _ : state) benchmark::DoNotOptimize(fit_ktrr(K, {0.1, 5}));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_FitKtrr)->RangeMultiplier(2)->Range(100, 1600)->Unit(benchmark::kMillisecond)->Complexity(benchmark::oNCubed);

void BM_Threshold(benchmark::State& state) {
  const KernelMatrix K = compute_kernel_matrix(random_data(20, state.range(0), 3), {KernelKind::gaussian, {}});
  const auto C = fit_ktrr(K, {0.1, 5});
  for (auto _ : state) benchmark::DoNotOptimize(hard_threshold(C, 5));
}
BENCHMARK(BM_Threshold)->Arg(400)->Arg(1600)->Unit(benchmark::kMillisecond);

void BM_Embedding(benchmark::State& state) {
  const KernelMatrix K = compute_kernel_matrix(random_data(20, state.range(0), 4), {KernelKind::gaussian, {}});
  const auto W = build_affinity(hard_threshold(fit_ktrr(K, {0.1, 5}), 5));
  const auto L = normalized_laplacian(W);
  for (auto _ : state) benchmark::DoNotOptimize(spectral_embedding(L.values, 10));
}
BENCHMARK(BM_Embedding)->Arg(200)->Arg(800)->Unit(benchmark::kMillisecond);

void BM_KMeans(benchmark::State& state) {
  Rng rng(5);
  Matrix P(state.range(0), 10);
  for (Index k = 0; k < P.size(); ++k) P.data()[k] = rng.normal();
  KMeansParams params{10, static_cast<int>(state.range(1)), 100, 6};
  for (auto _ : state) benchmark::DoNotOptimize(kmeans(P, params));
}
BENCHMARK(BM_KMeans)->Args({500, 10})->Args({500, 100})->Args({2000, 10})->Unit(benchmark::kMillisecond);

void BM_PipelineCircles(benchmark::State& state) {
  const auto ds = synthetic::concentric_circles(state.range(0), 1.0, 5.0, 0.05, 7);
  PipelineOptions opt;
  opt.num_clusters = 2;
  opt.kmeans.restarts = 50;
  for (auto _ : state) benchmark::DoNotOptimize(cluster_pipeline(ds.X, opt));
}
BENCHMARK(BM_PipelineCircles)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
