#include <benchmark/benchmark.h>

#include "fracstable/char_exponent.hpp"
#include "fracstable/classifier.hpp"
#include "fracstable/integrability.hpp"
#include "fracstable/registry.hpp"
#include "fracstable/simulate.hpp"

using namespace fracstable;

static void BM_KernelValue(benchmark::State& state) {
  KernelSpec spec = make_registry_kernel("tent", 1.6, 0.5);
  double u = 0.1;
  for (auto _ : state) {
    double g = kernel_value(spec, 0, 0.3, u);
    benchmark::DoNotOptimize(g);
    u = u < 100.0 ? u * 1.0001 : 0.1;
  }
}
BENCHMARK(BM_KernelValue);

static void BM_SasVariate(benchmark::State& state) {
  RngStream rng(7, 0);
  for (auto _ : state) {
    double x = sas_variate(rng, 1.6);
    benchmark::DoNotOptimize(x);
  }
}
BENCHMARK(BM_SasVariate);

static void BM_IncrementScale(benchmark::State& state) {
  KernelSpec spec = make_registry_kernel("tent", 1.6, 0.5);
  QuadratureConfig cfg;
  for (auto _ : state) {
    NormReport r = increment_scale(spec, 1.0, cfg);
    benchmark::DoNotOptimize(r.value);
  }
}
BENCHMARK(BM_IncrementScale);

static void BM_CharExponentPair(benchmark::State& state) {
  KernelSpec spec = make_registry_kernel("tent", 1.6, 0.5);
  QuadratureConfig cfg;
  std::vector<double> t{0.5, 1.5}, theta{1.0, -1.0};
  for (auto _ : state) {
    CharExponentResult r = char_exponent(spec, t, theta, cfg);
    benchmark::DoNotOptimize(r.value);
  }
}
BENCHMARK(BM_CharExponentPair);

static void BM_FixedPointFit(benchmark::State& state) {
  KernelSpec spec = make_registry_kernel("tent", 1.6, 0.5);
  KernelSection sec = section_of(spec, 0);
  ClassifierConfig cfg;
  cfg.threads = 1;
  for (auto _ : state) {
    AffineFitResult r = fixed_point_residual(sec, 1.6, 1.1, cfg);
    benchmark::DoNotOptimize(r.residual);
  }
}
BENCHMARK(BM_FixedPointFit);

static void BM_SimulatePaths(benchmark::State& state) {
  KernelSpec spec = make_registry_kernel("tent", 1.6, 0.5);
  SimulationGrid grid;
  grid.t_grid = {1.0, 2.0};
  grid.u_cells = 500;
  grid.v_cells = 8;
  grid.u_max = 50.0;
  grid.seed = 11;
  for (auto _ : state) {
    PathEnsemble ens =
        simulate_paths(spec, grid, static_cast<std::size_t>(state.range(0)), 1);
    benchmark::DoNotOptimize(ens.values.data());
  }
}
BENCHMARK(BM_SimulatePaths)->Arg(64)->Arg(256);

BENCHMARK_MAIN();
