#include <benchmark/benchmark.h>

#include "ris/specfun.hpp"

static void BM_BesselI0(benchmark::State& state) {
  const double x = static_cast<double>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(ris::specfun::bessel_i0(x));
  }
}
BENCHMARK(BM_BesselI0)->Arg(1)->Arg(10)->Arg(100)->Arg(700);

static void BM_BesselK1(benchmark::State& state) {
  const double x = static_cast<double>(state.range(0)) / 10.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(ris::specfun::bessel_k1(x));
  }
}
BENCHMARK(BM_BesselK1)->Arg(1)->Arg(15)->Arg(100)->Arg(4000);

static void BM_LogBinomial(benchmark::State& state) {
  const std::int64_t n = state.range(0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ris::specfun::log_binomial(n, n / 2));
  }
}
BENCHMARK(BM_LogBinomial)->Arg(32)->Arg(1000)->Arg(1000000);

BENCHMARK_MAIN();
