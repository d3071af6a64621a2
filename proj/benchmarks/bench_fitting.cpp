#include <numbers>

#include <benchmark/benchmark.h>

#include "cpi/fitting.hpp"

namespace {

using std::numbers::pi;

void BM_FitPattern(benchmark::State& state) {
  const cpi::PatternParams truth{{942.0, 0.17, 0.02, 0.09}, {366.0, 0.46, 0.06, 0.03}};
  const auto grid = cpi::phase_grid(-3 * pi, 3 * pi, static_cast<int>(state.range(0)));
  const auto data = cpi::synthesize_counts(truth, grid, 1.0, 1);
  for (auto _ : state) benchmark::DoNotOptimize(cpi::fit_pattern(data));
}
BENCHMARK(BM_FitPattern)->Arg(32)->Arg(256);

void BM_Analyze(benchmark::State& state) {
  const cpi::PatternParams truth{{942.0, 0.17, 0.02, 0.09}, {366.0, 0.46, 0.06, 0.03}};
  const auto data = cpi::synthesize_counts(truth, cpi::phase_grid(-3 * pi, 3 * pi, 32), 1.0, 1);
  cpi::AnalysisOptions opt;
  opt.contrast_plus = cpi::Measured{0.19, 0.02};
  opt.contrast_minus = cpi::Measured{0.54, 0.03};
  opt.simplified = true;
  for (auto _ : state) benchmark::DoNotOptimize(cpi::analyze(data, opt));
}
BENCHMARK(BM_Analyze);

}  // namespace

BENCHMARK_MAIN();
