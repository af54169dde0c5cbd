#include <benchmark/benchmark.h>

#include "warpverify/ode_family.hpp"

namespace {

using namespace warpverify;

void BM_IntegrateFamily(benchmark::State& state) {
  const FamilyParams fp(3, 1.0, 3);
  const double t1 = 0.1 * static_cast<double>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(integrate_family(fp, FamilyState(0.0, 1.0, 2.0, 1.0), t1));
  }
}
BENCHMARK(BM_IntegrateFamily)->Arg(2)->Arg(8);

void BM_OmegaVelocities(benchmark::State& state) {
  const FamilyParams fp(3, 1.0, 3);
  double w = 0.9;
  for (auto _ : state) {
    benchmark::DoNotOptimize(omega_velocities(w, 1.1, 2.3, fp));
  }
}
BENCHMARK(BM_OmegaVelocities);

void BM_QuadratureRates(benchmark::State& state) {
  const FamilyParams fp(3, 1.0, 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(quadrature_rates(0.9, fp));
  }
}
BENCHMARK(BM_QuadratureRates);

void BM_ScalingTransform(benchmark::State& state) {
  const FamilyParams fp(3, 1.0, 3);
  const Trajectory traj = integrate_family(fp, FamilyState(0.0, 1.0, 2.0, 1.0), 0.8);
  for (auto _ : state) {
    benchmark::DoNotOptimize(scaling_transform(traj, 2.0, 3.0, 1.0));
  }
}
BENCHMARK(BM_ScalingTransform);

}  // namespace
