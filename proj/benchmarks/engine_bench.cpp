#include <benchmark/benchmark.h>

#include "ris/closedform.hpp"
#include "ris/model.hpp"
#include "ris/montecarlo.hpp"
#include "ris/upsilon.hpp"

namespace {

ris::model::Scenario bench_scenario(int j, int m) {
  ris::model::Scenario s;
  s.n_ris = 4;
  s.blocks_per_ris = j;
  s.elements_per_ris = m;
  s.tx_power_db = 30.0;
  s.noise_power_db = 10.0;
  s.rho1 = s.rho2 = 0.1;
  s.lambda_u = s.lambda_b = 0.5;
  s.fail_prob = 0.2;
  s.gamma_t_in = 3.0;
  s.dist_user_m = s.dist_bs_m = 4.0;
  s.pathloss_exp = 2.0;
  s.seed = 1;
  return ris::model::validate(std::move(s));
}

}  // namespace

static void BM_TrialSnr(benchmark::State& state) {
  const auto s = bench_scenario(4, static_cast<int>(state.range(0)));
  const ris::montecarlo::Engine eng(s);
  std::uint64_t t = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(eng.trial_snr(1, t++));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_TrialSnr)->Arg(16)->Arg(32)->Arg(64);

static void BM_UpsilonDirect(benchmark::State& state) {
  const auto s = bench_scenario(1, static_cast<int>(state.range(0)));
  const auto active = ris::upsilon::all_active(s.m_prime);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ris::upsilon::upsilon_direct(s.blocks[0], s.budget, active).total);
  }
}
BENCHMARK(BM_UpsilonDirect)->Arg(8)->Arg(16)->Arg(32);

static void BM_BlockEvaluator(benchmark::State& state) {
  const auto s = bench_scenario(1, static_cast<int>(state.range(0)));
  const ris::upsilon::BlockEvaluator ev(s.blocks[0], s.budget);
  const std::vector<int> failed{0, 3, 5};
  for (auto _ : state) {
    benchmark::DoNotOptimize(ev.total(failed));
  }
}
BENCHMARK(BM_BlockEvaluator)->Arg(8)->Arg(16)->Arg(32);

static void BM_OutageClosedForm(benchmark::State& state) {
  const auto s = bench_scenario(static_cast<int>(state.range(0)), 32);
  const double ups = ris::upsilon::upsilon_direct(s.blocks[0], s.budget).total;
  for (auto _ : state) {
    benchmark::DoNotOptimize(ris::closedform::outage_closed_form(s, ups).raw);
  }
}
BENCHMARK(BM_OutageClosedForm)->Arg(2)->Arg(4)->Arg(8);

static void BM_OutageWithFailures(benchmark::State& state) {
  const auto s = bench_scenario(4, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        ris::closedform::outage_with_failures(s, s.blocks[0]).probability);
  }
}
BENCHMARK(BM_OutageWithFailures)->Arg(16)->Arg(32)->Arg(64);
