// Serial reference against OpenMP kernels.

#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "fbbm/grid.hpp"
#include "fbbm/kernels.hpp"
#include "fbbm/stein.hpp"

namespace {

using fbbm::kernels::Exec;

void BM_SteinGrid(benchmark::State& st, Exec exec) {
  const auto n = static_cast<std::size_t>(st.range(0));
  const auto grid = fbbm::make_grid(n, 20.0);
  const auto f = fbbm::sample(grid, [](double x) { return std::exp(-x * x); });
  const auto df = fbbm::sample(grid, [](double x) { return -2.0 * x * std::exp(-x * x); });
  std::vector<double> out(n);
  for (auto _ : st) {
    if (exec == Exec::Parallel)
      fbbm::kernels::stein_grid_omp(f.values, df.values, grid->dx(), 0.5, out);
    else
      fbbm::kernels::stein_grid_serial(f.values, df.values, grid->dx(), 0.5, out);
    benchmark::DoNotOptimize(out.data());
  }
  st.SetComplexityN(static_cast<long>(n));
}

void BM_TrigEval(benchmark::State& st, Exec exec) {
  const auto n = static_cast<std::size_t>(st.range(0));
  const auto grid = fbbm::make_grid(n, 20.0);
  const auto spec = fbbm::forward(fbbm::sample(grid, [](double x) { return std::exp(-x * x); }));
  std::vector<double> pts(n), out(n);
  for (std::size_t i = 0; i < n; ++i) pts[i] = -19.0 + 38.0 * static_cast<double>(i) / n;
  for (auto _ : st) {
    if (exec == Exec::Parallel)
      fbbm::kernels::trig_eval_omp(spec.coeffs, grid->xis(), 20.0, pts, out);
    else
      fbbm::kernels::trig_eval_serial(spec.coeffs, grid->xis(), 20.0, pts, out);
    benchmark::DoNotOptimize(out.data());
  }
}

void BM_SteinProbes(benchmark::State& st, Exec exec) {
  const auto g = fbbm::power_times_cutoff(0.5, {});
  std::vector<double> etas;
  for (int i = 0; i < st.range(0); ++i) etas.push_back(std::pow(10.0, -3.0 + 5.0 * i / st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(fbbm::stein_probe_sweep(g, etas, 0.25, exec));
}

}  // namespace

BENCHMARK_CAPTURE(BM_SteinGrid, serial, Exec::Serial)->Arg(1024)->Arg(4096);
BENCHMARK_CAPTURE(BM_SteinGrid, omp, Exec::Parallel)->Arg(1024)->Arg(4096);
BENCHMARK_CAPTURE(BM_TrigEval, serial, Exec::Serial)->Arg(1024)->Arg(4096);
BENCHMARK_CAPTURE(BM_TrigEval, omp, Exec::Parallel)->Arg(1024)->Arg(4096);
BENCHMARK_CAPTURE(BM_SteinProbes, serial, Exec::Serial)->Arg(40);
BENCHMARK_CAPTURE(BM_SteinProbes, omp, Exec::Parallel)->Arg(40);

BENCHMARK_MAIN();
