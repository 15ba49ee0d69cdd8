#include <benchmark/benchmark.h>

#include <random>

#include "cyclecheck/geometry.hpp"

namespace geo = cyclecheck::geo;

namespace {

geo::Polyline random_polyline(std::mt19937& rng, int vertices) {
  std::uniform_real_distribution<double> step(-20.0, 20.0);
  geo::Polyline line;
  geo::Point p{0, 0};
  for (int i = 0; i < vertices; ++i) {
    line.push_back(p);
    p.x += step(rng);
    p.y += step(rng);
  }
  return line;
}

}  // namespace

static void BM_PolylineDistance(benchmark::State& state) {
  std::mt19937 rng(7);
  const auto a = random_polyline(rng, static_cast<int>(state.range(0)));
  const auto b = random_polyline(rng, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(geo::polyline_polyline_distance(a, b));
  }
}
BENCHMARK(BM_PolylineDistance)->Arg(16)->Arg(64);

static void BM_Densify(benchmark::State& state) {
  std::mt19937 rng(7);
  const auto line = random_polyline(rng, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(geo::densify(line, 1.0));
  }
}
BENCHMARK(BM_Densify)->Arg(64)->Arg(256);

BENCHMARK_MAIN();
