#include <benchmark/benchmark.h>

#include "cpi/evolution.hpp"

namespace {

const cpi::DissipationParams kParams{0.1e-21, 0.05e-21, 0.02e-21, 0.74e-21, 0.03e-21, 0.8e-21};
const cpi::HamiltonianParams kHam{0.0, 3e-21};
constexpr double kT = 1.0 / 5.83e-21;

void BM_PropagateExact(benchmark::State& state) {
  const cpi::PropagationRequest req{cpi::entrance_state_plus(), kHam, kParams, kT};
  for (auto _ : state) benchmark::DoNotOptimize(cpi::propagate_exact(req));
}
BENCHMARK(BM_PropagateExact);

void BM_PropagatePerturbative(benchmark::State& state) {
  const cpi::PropagationRequest req{cpi::entrance_state_plus(), kHam, kParams, kT};
  for (auto _ : state) benchmark::DoNotOptimize(cpi::propagate_perturbative(req));
}
BENCHMARK(BM_PropagatePerturbative);

void BM_PropagatorMatrix(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(cpi::propagator_matrix(kHam, kParams, kT));
}
BENCHMARK(BM_PropagatorMatrix);

void BM_ExtendedMinEigenvalue(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(cpi::extended_min_eigenvalue(kHam, kParams, kT));
}
BENCHMARK(BM_ExtendedMinEigenvalue);

}  // namespace

BENCHMARK_MAIN();
