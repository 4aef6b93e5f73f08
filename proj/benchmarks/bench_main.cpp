#include <benchmark/benchmark.h>

#include "vprof/profiles.hpp"
#include "vprof/reduction.hpp"
#include "vprof/sode.hpp"
#include "vprof/structure.hpp"

namespace {

using namespace vprof;

void BM_SingularOdeField(benchmark::State& st) {
  const SingularOde ode = tw_singular_ode(GasModel{}, 0.3);
  const Eigen::VectorXd U = ExtendedState{1.2, -0.4, 0.9, {0.3, -0.2}}.vec();
  for (auto _ : st) benchmark::DoNotOptimize(ode.F(U));
}
BENCHMARK(BM_SingularOdeField);

void BM_IntegrateDirect(benchmark::State& st) {
  const SingularOde ode = steady_singular_ode(GasModel{});
  const Eigen::VectorXd U = ExtendedState{1.0, 0.6, 1.0, {0.05, -0.03}}.vec();
  IntegratorOptions o;
  o.tol = 1e-10;
  for (auto _ : st) benchmark::DoNotOptimize(integrate_direct(ode, U, 0.0, 3.0, o));
}
BENCHMARK(BM_IntegrateDirect);

void BM_IntegrateRescaledTowardSingularity(benchmark::State& st) {
  const SingularOde ode = steady_singular_ode(GasModel{});
  const Eigen::VectorXd U = ExtendedState{1.0, 0.05, 1.0, {-2.0, 0.0}}.vec();
  for (auto _ : st) benchmark::DoNotOptimize(integrate_rescaled(ode, U, 0.0, 1e3, 0.0));
}
BENCHMARK(BM_IntegrateRescaledTowardSingularity);

void BM_CheckStructure(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(check_structure(GasModel{}, StateBox{}, n, 1));
  st.SetItemsProcessed(st.iterations() * n);
}
BENCHMARK(BM_CheckStructure)->Arg(100)->Arg(500);

void BM_SolveRh(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(solve_rh(GasModel{}, {1.0, 0.0, 1.0}, 1, 0.3));
}
BENCHMARK(BM_SolveRh);

void BM_ShockProfile(benchmark::State& st) {
  const double strength = static_cast<double>(st.range(0)) / 10.0;
  const RHPair pair = solve_rh(GasModel{}, {1.0, 0.0, 1.0}, 1, strength);
  for (auto _ : st) benchmark::DoNotOptimize(shock_profile(GasModel{}, pair));
}
BENCHMARK(BM_ShockProfile)->Arg(1)->Arg(3)->Arg(6)->Unit(benchmark::kMillisecond);

void BM_GilbargOracle(benchmark::State& st) {
  const RHPair pair = solve_rh(GasModel{}, {1.0, 0.0, 1.0}, 1, 0.3);
  for (auto _ : st) benchmark::DoNotOptimize(gilbarg_oracle(GasModel{}, pair));
}
BENCHMARK(BM_GilbargOracle)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
