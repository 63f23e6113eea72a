#include <benchmark/benchmark.h>

#include "sl2flow/charts.hpp"
#include "sl2flow/classify.hpp"
#include "sl2flow/dynamics.hpp"
#include "sl2flow/random.hpp"

namespace {

using namespace sl2flow;

void BM_Mat2Multiply(benchmark::State& state) {
  Sampler rng(1);
  const Mat2 a = rng.mat2(2.0), b = rng.mat2(2.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(a * b);
  }
}
BENCHMARK(BM_Mat2Multiply);

void BM_RhsAmbient(benchmark::State& state) {
  Sampler rng(2);
  const PhaseState s = rng.d_state();
  for (auto _ : state) {
    benchmark::DoNotOptimize(rhs_ambient(s, 1.0));
  }
}
BENCHMARK(BM_RhsAmbient);

void BM_RhsReduced(benchmark::State& state) {
  const ReducedState rs{{1.1, 0.2, 0.3}, {0.4, 0.9, 1.7}, Regime::X2NonZero};
  for (auto _ : state) {
    benchmark::DoNotOptimize(rhs_hamsys2(rs, 1.0));
  }
}
BENCHMARK(BM_RhsReduced);

void BM_ReducedRoundTrip(benchmark::State& state) {
  Sampler rng(3);
  const PhaseState s = rng.d_state();
  for (auto _ : state) {
    benchmark::DoNotOptimize(reduced_to_ambient(ambient_to_reduced(s)));
  }
}
BENCHMARK(BM_ReducedRoundTrip);

void BM_IntegrateAmbient100(benchmark::State& state) {
  Sampler rng(4);
  const PhaseState s = rng.d_state();
  const auto times = linspace(0.0, 100.0, 101);
  for (auto _ : state) {
    benchmark::DoNotOptimize(integrate(s, 1.0, times));
  }
}
BENCHMARK(BM_IntegrateAmbient100);

void BM_IntegrateReduced100(benchmark::State& state) {
  const ReducedState rs{{1.1, 0.0, 0.0}, {0.4, 0.9, 1.7}, Regime::X2NonZero};
  const auto times = linspace(0.0, 100.0, 101);
  for (auto _ : state) {
    benchmark::DoNotOptimize(integrate_reduced(rs, 1.0, times));
  }
}
BENCHMARK(BM_IntegrateReduced100);

void BM_Classify(benchmark::State& state) {
  Sampler rng(5);
  const PhaseState s = rng.d_state();
  for (auto _ : state) {
    benchmark::DoNotOptimize(classify(s, 1.0));
  }
}
BENCHMARK(BM_Classify);

void BM_Frequencies(benchmark::State& state) {
  const PhaseState s =
      reduced_to_ambient({{1.2, 0.0, 0.0}, {0.4, 1.0, 2.0}, Regime::X2NonZero});
  for (auto _ : state) {
    benchmark::DoNotOptimize(frequencies(s, 1.0));
  }
}
BENCHMARK(BM_Frequencies);

void BM_LevelCurve(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        level_curve(ReducedHamiltonian::H0, 1.0, 0.0, 4.0, 5.0));
  }
}
BENCHMARK(BM_LevelCurve);

}  // namespace

BENCHMARK_MAIN();
