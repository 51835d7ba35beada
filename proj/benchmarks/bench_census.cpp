#include <benchmark/benchmark.h>

#include "graphdm/census.hpp"
#include "graphdm/generators.hpp"

using namespace graphdm;

static void BM_CensusEsu(benchmark::State& state) {
  const Graph g = generate_er(static_cast<int>(state.range(0)), 0.5, 42);
  for (auto _ : state) {
    auto counts = census_counts(g);
    benchmark::DoNotOptimize(counts);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_CensusEsu)->Arg(16)->Arg(32)->Arg(64)->Arg(100)->Complexity();

static void BM_CensusFast(benchmark::State& state) {
  const Graph g = generate_er(static_cast<int>(state.range(0)), 0.5, 42);
  for (auto _ : state) {
    auto counts = census_counts_fast(g);
    benchmark::DoNotOptimize(counts);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_CensusFast)->Arg(16)->Arg(32)->Arg(64)->Arg(100)->Arg(200)->Complexity();

static void BM_SubgraphDistance(benchmark::State& state) {
  const DensityVector a = census_fast(generate_er(100, 0.4, 1));
  const DensityVector b = census_fast(generate_er(100, 0.6, 2));
  for (auto _ : state) {
    double d = subgraph_distance(a, b);
    benchmark::DoNotOptimize(d);
  }
}
BENCHMARK(BM_SubgraphDistance);

BENCHMARK_MAIN();
