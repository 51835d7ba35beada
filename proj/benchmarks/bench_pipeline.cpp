#include <benchmark/benchmark.h>

#include "graphdm/dmap.hpp"
#include "graphdm/evolve.hpp"
#include "graphdm/generators.hpp"
#include "graphdm/rng.hpp"
#include "graphdm/spectral.hpp"

using namespace graphdm;

static void BM_SpectralCoarse(benchmark::State& state) {
  const Graph g = generate_er(static_cast<int>(state.range(0)), 0.5, 7);
  for (auto _ : state) {
    auto c = spectral_coarse(g);
    benchmark::DoNotOptimize(c);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SpectralCoarse)->Arg(50)->Arg(100)->Arg(200)->Complexity();

static void BM_SValuesGrid(benchmark::State& state) {
  const Graph g = generate_er(100, 0.5, 7);
  const SpectralCoarse c = spectral_coarse(g);
  const LambdaGrid grid = default_lambda_grid(100);
  for (auto _ : state) {
    auto rows = s_values(c, grid);
    benchmark::DoNotOptimize(rows);
  }
}
BENCHMARK(BM_SValuesGrid);

static void BM_EvolveSteps(benchmark::State& state) {
  const Graph g0 = generate_er(100, 0.5, 3);
  Rng rng(11);
  for (auto _ : state) {
    Graph g = evolve_many(g0, state.range(0), 0.1, rng);
    benchmark::DoNotOptimize(g);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_EvolveSteps)->Arg(1000)->Arg(10000);

static void BM_DmapFit(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  std::vector<GraphRecord> recs(m);
  Rng param_stream(1);
  for (int i = 0; i < m; ++i) {
    recs[i].id = "g" + std::to_string(i);
    recs[i].graph = generate_er(60, param_stream.uniform01(), 100 + i);
  }
  const DistanceMatrix dm =
      pairwise_distances(recs, MetricConfig{Metric::kSubgraph, {}});
  const double eps = median_epsilon(dm);
  for (auto _ : state) {
    auto model = fit_dmap(dm, eps, 10);
    benchmark::DoNotOptimize(model);
  }
  state.SetComplexityN(m);
}
BENCHMARK(BM_DmapFit)->Arg(100)->Arg(200)->Arg(400)->Complexity();

BENCHMARK_MAIN();
