#include <benchmark/benchmark.h>

#include "rcm/clusters.hpp"
#include "rcm/coloring.hpp"
#include "rcm/exact.hpp"
#include "rcm/sampler.hpp"

using namespace rcm;

namespace {

void BM_SwendsenWangSweep(benchmark::State& state) {
  const int t = static_cast<int>(state.range(0));
  const auto g = BoxGeometry::cube(2, t, BoundaryMode::wired);
  const FKParams prm = FKParams::make(0.8, 2.0, Boundary::wired);
  ChainState st = initial_state(g, Algorithm::swendsen_wang, 1);
  SwendsenWangSweeper sw(g, prm);
  for (auto _ : state) {
    sw.sweep(st);
    benchmark::DoNotOptimize(st.edges.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.num_vertices()));
}
BENCHMARK(BM_SwendsenWangSweep)->Arg(16)->Arg(32)->Arg(64);

void BM_SweenySweep(benchmark::State& state) {
  const int t = static_cast<int>(state.range(0));
  const auto g = BoxGeometry::cube(2, t, BoundaryMode::free);
  const FKParams prm = FKParams::make(0.5, 1.5);
  ChainState st = initial_state(g, Algorithm::sweeny, 1);
  SweenySweeper sw(g, prm);
  for (auto _ : state) {
    sw.sweep(st);
    benchmark::DoNotOptimize(st.edges.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.num_edges()));
}
BENCHMARK(BM_SweenySweep)->Arg(8)->Arg(16);

void BM_Components(benchmark::State& state) {
  const int t = static_cast<int>(state.range(0));
  const auto g = BoxGeometry::cube(2, t, BoundaryMode::wired);
  Rng rng(3);
  EdgeConfig w(g.num_edges());
  for (auto& b : w) b = rng.bernoulli(0.6) ? 1 : 0;
  for (auto _ : state) benchmark::DoNotOptimize(components(g, w));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.num_vertices()));
}
BENCHMARK(BM_Components)->Arg(16)->Arg(64)->Arg(128);

void BM_ColorClusters(benchmark::State& state) {
  const auto g = BoxGeometry::cube(2, 64, BoundaryMode::wired);
  Rng rng(4);
  EdgeConfig w(g.num_edges());
  for (auto& b : w) b = rng.bernoulli(0.6) ? 1 : 0;
  const auto dec = components(g, w);
  const ColorParams cp = ColorParams::uniform(3);
  for (auto _ : state) benchmark::DoNotOptimize(color_clusters(dec, cp, 0, rng));
}
BENCHMARK(BM_ColorClusters);

void BM_Enumerate(benchmark::State& state) {
  const auto sides = std::vector<int>{3, static_cast<int>(state.range(0))};
  const auto g = BoxGeometry::rectangle(sides, BoundaryMode::free);
  const FKParams prm = FKParams::make(0.5, 2.0);
  for (auto _ : state) benchmark::DoNotOptimize(enumerate(g, prm));
  state.SetLabel(std::to_string(g.num_edges()) + " edges");
}
BENCHMARK(BM_Enumerate)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
