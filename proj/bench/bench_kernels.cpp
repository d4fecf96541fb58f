#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <vector>

#include "heisgeo/geodesic_solver.hpp"
#include "heisgeo/heisenberg.hpp"
#include "heisgeo/kernels.hpp"

using namespace heisgeo;

namespace {

std::vector<Point> walk(std::size_t n) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-0.01, 0.01);
  std::vector<Point> pts{{0, 0, 0}};
  for (std::size_t i = 1; i < n; ++i) {
    const Point& b = pts.back();
    pts.push_back({b.x + u(rng), b.y + u(rng), b.z + u(rng)});
  }
  return pts;
}

std::vector<double> params(std::size_t n) {
  std::vector<double> t(n);
  for (std::size_t i = 0; i < n; ++i) t[i] = static_cast<double>(i) / static_cast<double>(n - 1);
  return t;
}

template <bool Parallel>
void BM_PolygonalSum(benchmark::State& state) {
  const auto pts = walk(static_cast<std::size_t>(state.range(0)));
  const Metric m = koranyi_metric();
  for (auto _ : state)
    benchmark::DoNotOptimize(Parallel ? kernels::omp::polygonal_sum(pts, m) : kernels::serial::polygonal_sum(pts, m));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Parallel>
void BM_LipschitzRatio(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto pts = walk(n);
  const auto t = params(n);
  const Metric m = koranyi_metric();
  for (auto _ : state)
    benchmark::DoNotOptimize(Parallel ? kernels::omp::max_lipschitz_ratio(pts, t, m)
                                      : kernels::serial::max_lipschitz_ratio(pts, t, m));
  state.SetItemsProcessed(state.iterations() * state.range(0) * (state.range(0) - 1) / 2);
}

template <bool Parallel>
void BM_RelaxSweep(benchmark::State& state) {
  const auto base = walk(static_cast<std::size_t>(state.range(0)));
  const Metric m = koranyi_metric();
  for (auto _ : state) {
    auto v = base;
    for (int parity : {1, 0})
      benchmark::DoNotOptimize(Parallel ? kernels::omp::relax_parity(v, parity, 1e-3, m)
                                        : kernels::serial::relax_parity(v, parity, 1e-3, m));
  }
}

void BM_SolveVertical(benchmark::State& state) {
  SolverConfig cfg;
  cfg.parallel = state.range(1) != 0;
  for (auto _ : state)
    benchmark::DoNotOptimize(solve_cc_geodesic({0, 0, 0}, {0, 0, kExampleHeight}, static_cast<std::size_t>(state.range(0)), cfg));
}

}  // namespace

BENCHMARK(BM_PolygonalSum<false>)->Range(1 << 10, 1 << 18);
BENCHMARK(BM_PolygonalSum<true>)->Range(1 << 10, 1 << 18);
BENCHMARK(BM_LipschitzRatio<false>)->Range(64, 1024);
BENCHMARK(BM_LipschitzRatio<true>)->Range(64, 1024);
BENCHMARK(BM_RelaxSweep<false>)->Range(64, 1 << 14);
BENCHMARK(BM_RelaxSweep<true>)->Range(64, 1 << 14);
BENCHMARK(BM_SolveVertical)->Args({64, 0})->Args({256, 0})->Args({256, 1})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
