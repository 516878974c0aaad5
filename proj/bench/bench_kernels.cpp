// Serial reference against the OpenMP kernels. Arg 0 = serial, 1 = openmp.

#include <benchmark/benchmark.h>

#include "dirlab/carleson.hpp"
#include "dirlab/norms.hpp"
#include "dirlab/zoo.hpp"

using namespace dirlab;

namespace {

ExecPolicy policy_of(const benchmark::State& state) {
  return state.range(0) == 0 ? ExecPolicy::serial : ExecPolicy::openmp;
}

void BM_NormRadialFab(benchmark::State& state) {
  const auto f = zoo::make_fab({1.0, 0.25});
  norms::NormOptions opt;
  opt.policy = policy_of(state);
  for (auto _ : state) benchmark::DoNotOptimize(norms::norm_radial(f, {0.5, 3.0}, opt).value_p_power);
}

void BM_NormRadialBlaschke(benchmark::State& state) {
  const auto f = zoo::make_blaschke({0.5, Complex(0.0, -0.7)});
  norms::NormOptions opt;
  opt.policy = policy_of(state);
  for (auto _ : state) benchmark::DoNotOptimize(norms::norm_radial(f, {0.5, 1.0}, opt).value_p_power);
}

void BM_RatioScan(benchmark::State& state) {
  const auto g = carleson::default_scan_grid(1);
  for (auto _ : state) benchmark::DoNotOptimize(carleson::ratio_scan(0.2, 1.5, g.a, g.w, policy_of(state)).max_ratio);
}

void BM_ArsLhs(benchmark::State& state) {
  const carleson::BoxMeasureParams P{0.5, 2.0, {0.9, 0.0}};
  for (auto _ : state)
    benchmark::DoNotOptimize(carleson::ars_lhs(P, 0.5, Complex(0.8, 0.0), 20000, 7, policy_of(state)).value);
}

}  // namespace

BENCHMARK(BM_NormRadialFab)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_NormRadialBlaschke)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RatioScan)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ArsLhs)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
