// Serial reference vs OpenMP path for the three hot kernels. Run with
// OMP_NUM_THREADS or CURVFUN_THREADS unset to use every core.

#include "curvfun/functionals.hpp"
#include "curvfun/randpoly.hpp"

#include <benchmark/benchmark.h>

using namespace curvfun;

namespace {

Execution exec_of(const benchmark::State& state) {
  return state.range(0) == 0 ? Execution::serial : Execution::parallel;
}

void label(benchmark::State& state) { state.SetLabel(state.range(0) == 0 ? "serial" : "parallel"); }

void BM_CurvatureField(benchmark::State& state) {
  const auto body = make_perturbed_ball(3, 1, 0.1);
  const auto rule = default_rule(3);
  for (auto _ : state) {
    CurvatureField f(body, rule, exec_of(state));
    benchmark::DoNotOptimize(f.points().data());
  }
  label(state);
}
BENCHMARK(BM_CurvatureField)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_WeightedAsa(benchmark::State& state) {
  const CurvatureField field(make_perturbed_ball(3, 1, 0.1), sphere_rule(128, 256));
  const WeightIndex index(3, 2, 1.0, {0, 1});
  for (auto _ : state) benchmark::DoNotOptimize(weighted_asa(field, index, 2.0, exec_of(state)).value);
  label(state);
}
BENCHMARK(BM_WeightedAsa)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_ExpectedDeficit(benchmark::State& state) {
  const BoundaryDensity density(make_ellipsoid_axes(2, {2.0, 1.0}), WeightIndex::zero(2), 1.0, default_rule(2));
  for (auto _ : state) benchmark::DoNotOptimize(expected_deficit(density, 1000, 256, 1, exec_of(state)).mean);
  label(state);
}
BENCHMARK(BM_ExpectedDeficit)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
