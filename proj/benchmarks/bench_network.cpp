#include <benchmark/benchmark.h>

#include <cstdint>
#include <string>
#include <vector>

#include "cyclecheck/graph.hpp"
#include "cyclecheck/grid.hpp"
#include "cyclecheck/ingest.hpp"
#include "cyclecheck/matching.hpp"

namespace {

using namespace cyclecheck;

// n x n node lattice at 20 m spacing with punched holes, so the builder sees
// shared endpoints and the simplifier sees real degree-2 chains.
std::vector<EdgeRecord> lattice_records(int n, double shift = 0.0) {
  std::vector<EdgeRecord> recs;
  std::int64_t id = 0;
  auto add = [&](double x1, double y1, double x2, double y2) {
    EdgeRecord r;
    r.edge_id = id;
    r.source_id = "w" + std::to_string(id);
    r.geometry = {{x1 + shift, y1 + shift}, {x2 + shift, y2 + shift}};
    r.bidirectional = (id % 3) == 0;
    ++id;
    recs.push_back(std::move(r));
  };
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if ((i * 31 + j * 17) % 11 == 0) continue;
      if (i + 1 < n) add(i * 20.0, j * 20.0, (i + 1) * 20.0, j * 20.0);
      if (j + 1 < n) add(i * 20.0, j * 20.0, i * 20.0, (j + 1) * 20.0);
    }
  }
  return recs;
}

StudyArea square_area(double size) {
  StudyArea a;
  a.boundary.ring = {{0, 0}, {size, 0}, {size, size}, {0, size}};
  a.crs_label = "local";
  a.declared_unit = "meter";
  return a;
}

}  // namespace

static void BM_BuildGraph(benchmark::State& state) {
  const auto recs = lattice_records(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_graph(recs, 0.001));
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<std::int64_t>(recs.size()));
}
BENCHMARK(BM_BuildGraph)->Arg(16)->Arg(50);

static void BM_Simplify(benchmark::State& state) {
  const auto recs = lattice_records(static_cast<int>(state.range(0)));
  const NetworkGraph g = build_graph(recs, 0.001);
  for (auto _ : state) {
    benchmark::DoNotOptimize(simplify(g));
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<std::int64_t>(g.edges().size()));
}
BENCHMARK(BM_Simplify)->Arg(16)->Arg(50);

static void BM_Hausdorff(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  geo::Polyline a, b;
  for (int i = 0; i <= n; ++i) {
    a.push_back({i * 10.0, (i % 2) * 4.0});
    b.push_back({i * 10.0, (i % 2) * 4.0 + 3.0});
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(undirected_hausdorff(a, b));
  }
}
BENCHMARK(BM_Hausdorff)->Arg(4)->Arg(32);

static void BM_MatchSegments(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const NetworkGraph ga = simplify(build_graph(lattice_records(n), 0.001));
  const NetworkGraph gb =
      simplify(build_graph(lattice_records(n, 2.0), 0.001));
  const MatchParams params;
  const auto sa = segmentize(ga, params.segment_length);
  const auto sb = segmentize(gb, params.segment_length);
  for (auto _ : state) {
    benchmark::DoNotOptimize(match_segments(sa, sb, params));
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<std::int64_t>(sa.size()));
}
BENCHMARK(BM_MatchSegments)->Arg(16)->Arg(30);

static void BM_CellDensity(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const NetworkGraph g = simplify(build_graph(lattice_records(n), 0.001));
  const AnalysisGrid grid = make_grid(square_area(n * 20.0), 100.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(cell_density(g, grid));
  }
}
BENCHMARK(BM_CellDensity)->Arg(16)->Arg(50);

BENCHMARK_MAIN();
