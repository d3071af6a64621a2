#include <benchmark/benchmark.h>

#include "cpi/generator.hpp"

namespace {

const cpi::DissipationParams kParams{0.1e-21, 0.05e-21, 0.02e-21, 0.74e-21, 0.03e-21, 0.8e-21};

void BM_CheckCompletePositivity(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(cpi::check_complete_positivity(kParams));
}
BENCHMARK(BM_CheckCompletePositivity);

void BM_KossakowskiMinEigenvalue(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(cpi::kossakowski_min_eigenvalue(kParams));
}
BENCHMARK(BM_KossakowskiMinEigenvalue);

void BM_FullGenerator(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(cpi::full_generator({0.0, 3e-21}, kParams));
}
BENCHMARK(BM_FullGenerator);

}  // namespace

BENCHMARK_MAIN();
