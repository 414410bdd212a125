#include <benchmark/benchmark.h>

#include "fracgreen/verify.hpp"

using namespace fracgreen;

static void BM_fft_apply(benchmark::State& state) {
  int n = int(state.range(0));
  GridPtr g = make_grid(1, n, 16.0);
  HomogeneousSymbol sym = HomogeneousSymbol::frac_laplacian(1, 0.5);
  SymbolFn m = regularize_symbol(sym);
  MuFunction u = make_mu_function(0.6, BumpSpec{}, g);
  for (auto _ : state) {
    Field out = fft_apply(m, u.realized, 1.0);
    benchmark::DoNotOptimize(out.v.data());
  }
}
BENCHMARK(BM_fft_apply)->Arg(1024)->Arg(4096)->Arg(16384);

static void BM_wh_decompose(benchmark::State& state) {
  int n = int(state.range(0));
  GridPtr g = make_grid(1, n, 16.0);
  HomogeneousSymbol sym =
      HomogeneousSymbol::frac_laplacian_drift(1, {0.5});
  TransmissionData td = compute_transmission(sym);
  SymbolFn q = reduced_symbol(regularize_symbol(sym), td);
  for (auto _ : state) {
    SymbolDecomposition dec = wh_decompose(q, td, g);
    benchmark::DoNotOptimize(dec.f_plus.data());
  }
}
BENCHMARK(BM_wh_decompose)->Arg(1024)->Arg(4096)->Arg(16384);

static void BM_apply_L_factored(benchmark::State& state) {
  int n = int(state.range(0));
  GridPtr g = make_grid(1, n, 16.0);
  HomogeneousSymbol sym =
      HomogeneousSymbol::frac_laplacian_drift(1, {0.5});
  TransmissionData td = compute_transmission(sym);
  MuFunction u = make_mu_function(td.mu, BumpSpec{}, g);
  for (auto _ : state) {
    ApplyResult r = apply_L(sym, u.realized, ApplyRoute::factored, td);
    benchmark::DoNotOptimize(r.out.v.data());
  }
}
BENCHMARK(BM_apply_L_factored)->Arg(1024)->Arg(4096);

BENCHMARK_MAIN();
