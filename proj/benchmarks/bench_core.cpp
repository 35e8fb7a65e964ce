#include <benchmark/benchmark.h>

#include "backflow/backflow.hpp"
#include "backflow/eigenproblem.hpp"
#include "backflow/numerics.hpp"
#include "backflow/observables.hpp"

using namespace backflow;

namespace {

const GaussianSuperposition kGs{14.0, 3.0, 1.9, kPi, 1.0};

void BM_Kernel(benchmark::State& state) {
  double u = 0.3, acc = 0.0;
  for (auto _ : state) {
    acc += backflow_kernel(u, 1.7);
    u += 1e-9;
  }
  benchmark::DoNotOptimize(acc);
}
BENCHMARK(BM_Kernel);

void BM_Erfc(benchmark::State& state) {
  const Complex z(1.3, -4.2);
  for (auto _ : state) benchmark::DoNotOptimize(erfc_complex(z));
}
BENCHMARK(BM_Erfc);

void BM_DeltaMax(benchmark::State& state) {
  const double u = static_cast<double>(state.range(0));
  const int n = default_eigen_nodes(u);
  for (auto _ : state) benchmark::DoNotOptimize(delta_max(0.0, u, n).delta_max);
  state.counters["nodes"] = n;
}
BENCHMARK(BM_DeltaMax)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_DensityMatrixCurrentSetup(benchmark::State& state) {
  const auto spec = DensityMatrixSpec::pure(MomentumState(kGs));
  for (auto _ : state) {
    const DensityMatrixCurrent j(Milburn{0.01}, spec, 0.2);
    benchmark::DoNotOptimize(j.node_count());
  }
}
BENCHMARK(BM_DensityMatrixCurrentSetup)->Unit(benchmark::kMicrosecond);

void BM_DensityMatrixCurrentEval(benchmark::State& state) {
  const DensityMatrixCurrent j(Milburn{0.01}, DensityMatrixSpec::pure(MomentumState(kGs)), 0.2);
  double t = 0.05;
  for (auto _ : state) {
    benchmark::DoNotOptimize(j(t));
    t += 1e-7;
  }
  state.counters["nodes"] = static_cast<double>(j.node_count());
}
BENCHMARK(BM_DensityMatrixCurrentEval)->Unit(benchmark::kMicrosecond);

void BM_ScaledCurrentEval(benchmark::State& state) {
  const ScaledCurrent j(bm_state(1.0), 1.0, 5.0, 0.1);
  double t = 0.01;
  for (auto _ : state) {
    benchmark::DoNotOptimize(j(t));
    t += 1e-7;
  }
  state.counters["nodes"] = static_cast<double>(j.node_count());
}
BENCHMARK(BM_ScaledCurrentEval)->Unit(benchmark::kMicrosecond);

void BM_DetectIntervals(benchmark::State& state) {
  const ScaledCurrent j(bm_state(1.0), 1.0, 0.0, 0.1);
  for (auto _ : state)
    benchmark::DoNotOptimize(detect_intervals([&](double t) { return j(t); }, 0.1, 256, 1e-9).first_amount);
}
BENCHMARK(BM_DetectIntervals)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
