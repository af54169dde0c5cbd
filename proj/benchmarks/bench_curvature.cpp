#include <benchmark/benchmark.h>

#include <random>

#include "warpverify/curvature.hpp"
#include "warpverify/einstein_conditions.hpp"
#include "warpverify/ode_family.hpp"
#include "warpverify/warp_spec.hpp"

namespace {

using namespace warpverify;

WarpSpec family_spec(int q, int n2) {
  const FamilyParams fp(q, 1.0, n2);
  const Trajectory traj = integrate_family(fp, FamilyState(0.0, 1.0, 2.0, 1.0), 0.8);
  return reconstruct_profiles(traj, fp);
}

void BM_RicciNumericFD(benchmark::State& state) {
  const WarpSpec spec = family_spec(static_cast<int>(state.range(0)), static_cast<int>(state.range(0)));
  const MetricField g = build_metric(spec);
  std::mt19937_64 rng(1);
  const ChartPoint p = spec.domain().sample(rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ricci(g, p));
  }
}
BENCHMARK(BM_RicciNumericFD)->Arg(3)->Arg(4);

void BM_RicciNumericAD(benchmark::State& state) {
  const WarpSpec spec = family_spec(static_cast<int>(state.range(0)), static_cast<int>(state.range(0)));
  const MetricField g = build_metric(spec).with_scheme(DiffScheme::ForwardAD);
  std::mt19937_64 rng(1);
  const ChartPoint p = spec.domain().sample(rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ricci(g, p));
  }
}
BENCHMARK(BM_RicciNumericAD)->Arg(3)->Arg(4);

void BM_RicciClosedForm(benchmark::State& state) {
  const WarpSpec spec = family_spec(static_cast<int>(state.range(0)), static_cast<int>(state.range(0)));
  std::mt19937_64 rng(1);
  const ChartPoint p = spec.domain().sample(rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ricci_closed_form(spec, p));
  }
}
BENCHMARK(BM_RicciClosedForm)->Arg(3)->Arg(4);

void BM_ConditionResiduals(benchmark::State& state) {
  const WarpSpec spec = family_spec(3, 3);
  std::mt19937_64 rng(1);
  const ChartPoint p = spec.domain().sample(rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(einstein_condition_residuals(spec, p));
  }
}
BENCHMARK(BM_ConditionResiduals);

}  // namespace
