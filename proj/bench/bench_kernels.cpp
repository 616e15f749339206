// Serial reference vs OpenMP kernels: the sweep over grid points and the
// number-basis Hamiltonian apply.

#include <benchmark/benchmark.h>

#include "unruh/oracles.hpp"
#include "unruh/sweep.hpp"

namespace {

unruh::SweepGrid small_grid() {
  unruh::SweepGrid g;
  g.a0_values = unruh::log_space(0.5, 5.0, 4);
  g.omega0_values = unruh::log_space(0.1, 0.8, 4);
  g.n_modes = 10;
  return g;
}

void BM_SweepSerial(benchmark::State& state) {
  const auto grid = small_grid();
  for (auto _ : state) benchmark::DoNotOptimize(unruh::run_sweep_serial(grid));
}
BENCHMARK(BM_SweepSerial)->Unit(benchmark::kMillisecond);

void BM_SweepOpenMP(benchmark::State& state) {
  const auto grid = small_grid();
  for (auto _ : state) benchmark::DoNotOptimize(unruh::run_sweep(grid));
}
BENCHMARK(BM_SweepOpenMP)->Unit(benchmark::kMillisecond);

void fock_apply(benchmark::State& state, bool parallel) {
  unruh::CellConfig base;
  base.lambda0 = 0.05;
  base.n_modes = 3;
  const unruh::FockHamiltonian h(base, 3, static_cast<int>(state.range(0)));
  unruh::FockState psi(h.dimension(), {1.0, 0.5});
  unruh::FockState out;
  for (auto _ : state) {
    if (parallel) {
      h.apply(0.3, psi, out);
    } else {
      h.apply_serial(0.3, psi, out);
    }
    benchmark::DoNotOptimize(out.data());
  }
}

void BM_FockApplySerial(benchmark::State& state) { fock_apply(state, false); }
void BM_FockApplyOpenMP(benchmark::State& state) { fock_apply(state, true); }
BENCHMARK(BM_FockApplySerial)->Arg(8)->Arg(16);
BENCHMARK(BM_FockApplyOpenMP)->Arg(8)->Arg(16);

}  // namespace

BENCHMARK_MAIN();
