#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <numeric>

#include "oracles.hpp"
#include "ris/montecarlo.hpp"

using namespace ris;
using namespace ris::montecarlo;

namespace {

model::Scenario mc_scenario(double lambda, double rho, double p,
                            model::PhaseMode pm = model::PhaseMode::random, int n_ris = 4,
                            int j = 2) {
  model::Scenario s;
  s.n_ris = n_ris;
  s.blocks_per_ris = j;
  s.elements_per_ris = 8 * j;
  s.tx_power_db = 30.0;
  s.noise_power_db = 10.0;
  s.rho1 = rho;
  s.rho2 = rho;
  s.lambda_u = lambda;
  s.lambda_b = lambda;
  s.fail_prob = p;
  s.gamma_t_in = 3.0;
  s.dist_user_m = 4.0;
  s.dist_bs_m = 4.0;
  s.pathloss_exp = 2.0;
  s.phase_mode = pm;
  s.seed = 1;
  return model::validate(std::move(s));
}

// 8-point Gauss-Legendre on [-1, 1]
constexpr double kGlX[8] = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
                            -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                            0.7966664774136267,  0.9602898564975363};
constexpr double kGlW[8] = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                            0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                            0.2223810344533745, 0.1012285362903763};

double cell_mass(double lambda, double rho, double x0, double x1, double y0, double y1) {
  const double hx = 0.5 * (x1 - x0), cx = 0.5 * (x1 + x0);
  const double hy = 0.5 * (y1 - y0), cy = 0.5 * (y1 + y0);
  double acc = 0.0;
  for (int i = 0; i < 8; ++i) {
    for (int k = 0; k < 8; ++k) {
      acc += kGlW[i] * kGlW[k] *
             joint_gain_pdf(lambda, rho, cx + hx * kGlX[i], cy + hy * kGlX[k]);
    }
  }
  return acc * hx * hy;
}

}  // namespace

TEST_CASE("correlated pair: marginals and squared-magnitude correlation") {
  const std::size_t n = 1000000;
  for (double rho : {0.0, 0.5, 0.9}) {
    rng::SplitMix64 gen(0xC0FFEEull + static_cast<std::uint64_t>(rho * 10));
    std::vector<double> outdated(n), instant(n);
    const double lambda = 0.7;
    for (std::size_t i = 0; i < n; ++i) {
      const auto g = draw_correlated_pair(gen, lambda, rho);
      outdated[i] = g.outdated;
      instant[i] = g.instant;
    }
    const double corr = oracles::correlation(outdated, instant);
    if (rho == 0.0) {
      CHECK(std::abs(corr) < 0.005);
    } else {
      CHECK(std::abs(corr - rho * rho) < 0.01);
    }
    const double mean = std::accumulate(instant.begin(), instant.end(), 0.0) / n;
    CHECK(std::abs(mean - lambda) / lambda < 0.005);
  }
}

TEST_CASE("correlated pair marginal passes a KS test against Exp(lambda)") {
  const std::size_t n = 100000;
  rng::SplitMix64 gen(31337ull);
  std::vector<double> instant(n);
  for (std::size_t i = 0; i < n; ++i) instant[i] = draw_correlated_pair(gen, 0.05, 0.1).instant;
  const double d = oracles::ks_statistic_exponential(std::move(instant), 0.05);
  CHECK(d < oracles::ks_critical_1pct(n));
}

TEST_CASE("2-D histogram of the pair matches the joint density (chi-square at 1%)") {
  const double lambda = 1.0, rho = 0.5;
  const std::size_t n = 200000;
  rng::SplitMix64 gen(777ull);
  const int nb = 6;
  const double edge = 2.5 * lambda;
  std::vector<double> counts(static_cast<std::size_t>(nb) * nb, 0.0);
  double outside = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto g = draw_correlated_pair(gen, lambda, rho);
    const int bx = static_cast<int>(g.instant / edge * nb);
    const int by = static_cast<int>(g.outdated / edge * nb);
    if (bx >= nb || by >= nb) {
      outside += 1.0;
    } else {
      counts[static_cast<std::size_t>(bx) * nb + by] += 1.0;
    }
  }
  double chi2 = 0.0;
  int cells = 0;
  double mass_in = 0.0;
  for (int bx = 0; bx < nb; ++bx) {
    for (int by = 0; by < nb; ++by) {
      const double m = cell_mass(lambda, rho, bx * edge / nb, (bx + 1) * edge / nb,
                                 by * edge / nb, (by + 1) * edge / nb);
      mass_in += m;
      const double e = m * n;
      REQUIRE(e > 10.0);
      const double o = counts[static_cast<std::size_t>(bx) * nb + by];
      chi2 += (o - e) * (o - e) / e;
      ++cells;
    }
  }
  const double e_out = (1.0 - mass_in) * n;
  chi2 += (outside - e_out) * (outside - e_out) / e_out;
  ++cells;
  CHECK(chi2 < oracles::chi2_critical_99(cells - 1));
}

TEST_CASE("joint density integrates to one") {
  // the slowest decay runs along the diagonal at rate 2/((1+rho)*lambda),
  // so 24*lambda leaves ~1e-13 outside
  const double lambda = 0.8, rho = 0.6;
  const int nb = 48;
  const double edge = 24.0 * lambda;
  double mass = 0.0;
  for (int i = 0; i < nb; ++i) {
    for (int k = 0; k < nb; ++k) {
      mass += cell_mass(lambda, rho, i * edge / nb, (i + 1) * edge / nb, k * edge / nb,
                        (k + 1) * edge / nb);
    }
  }
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("run_trial with a single block always selects it") {
  const auto s = mc_scenario(0.05, 0.1, 0.0, model::PhaseMode::random, 1, 1);
  const Engine eng(s);
  for (std::uint64_t t = 0; t < 25; ++t) {
    const auto d = eng.run_trial(9, t);
    CHECK(d.selected_linear == 0);
    CHECK(d.selected_k == 1);
    CHECK(d.selected_j == 1);
    CHECK(d.selected_snr >= 0.0);
  }
}

TEST_CASE("run_trial with p=1 yields zero SNR and certain outage") {
  const auto s = mc_scenario(0.05, 0.1, 1.0);
  const Engine eng(s);
  const auto d = eng.run_trial(5, 0);
  for (int q : d.fail_count) CHECK(q == s.m_prime);
  CHECK(d.selected_snr == 0.0);
  CHECK(eng.estimate_outage(3.0, 20000, 5).outage_prob == 1.0);
}

TEST_CASE("selection on nearly-fresh CSI beats a fixed block") {
  // identical blocks (aligned phases); selection gain shows in the mean
  const auto s = mc_scenario(0.5, 0.999, 0.0, model::PhaseMode::aligned);
  const Engine eng(s);
  double sel = 0.0, fixed = 0.0;
  const int n = 100000;
  for (int t = 0; t < n; ++t) {
    const auto d = eng.run_trial(123, static_cast<std::uint64_t>(t));
    sel += d.selected_snr;
    fixed += d.upsilon[0] * d.u_side[0].instant * d.b_side[0].instant;
  }
  CHECK(sel / n > 1.5 * fixed / n);
}

TEST_CASE("estimate_outage degenerate thresholds") {
  const auto s = mc_scenario(0.05, 0.1, 0.0);
  const Engine eng(s);
  CHECK(eng.estimate_outage(0.0, 10000, 3).outage_prob == 0.0);
  CHECK(eng.estimate_outage(1e30, 10000, 3).outage_prob == 1.0);
}

TEST_CASE("bit-exact reproducibility, including across worker counts") {
  const auto s = mc_scenario(0.3, 0.1, 0.2);
  const Engine eng(s);
  const auto a = eng.estimate_outage(3.0, 20000, 42, 1);
  const auto b = eng.estimate_outage(3.0, 20000, 42, 1);
  CHECK(a.outage_prob == b.outage_prob);
  CHECK(a.ci_halfwidth == b.ci_halfwidth);
  for (int workers : {2, 3, 8}) {
    const auto c = eng.estimate_outage(3.0, 20000, 42, workers);
    CHECK(c.outage_prob == a.outage_prob);
    CHECK(c.ci_halfwidth == a.ci_halfwidth);
  }
}

TEST_CASE("estimates from disjoint seeds agree within combined confidence") {
  const auto s = mc_scenario(0.3, 0.1, 0.0);
  const Engine eng(s);
  const auto a = eng.estimate_outage(3.0, 50000, 1001);
  const auto b = eng.estimate_outage(3.0, 50000, 2002);
  CHECK(std::abs(a.outage_prob - b.outage_prob) < 3.0 * (a.ci_halfwidth + b.ci_halfwidth));
}

TEST_CASE("empirical cdf is monotone in gamma_T under shared draws") {
  const auto s = mc_scenario(0.3, 0.1, 0.1);
  const Engine eng(s);
  const std::vector<double> gammas{0.1, 0.5, 1.0, 2.0, 3.0, 5.0, 10.0, 30.0};
  const auto est = eng.estimate_outage_multi(gammas, 20000, 7);
  for (std::size_t i = 1; i < est.size(); ++i) {
    CHECK(est[i].outage_prob >= est[i - 1].outage_prob);
  }
}

TEST_CASE("outage trends under common random numbers: p and distance") {
  // failure probability
  double prev = -1.0;
  for (double p : {0.0, 0.2, 0.5, 0.7}) {
    const auto s = mc_scenario(1.0, 0.1, p);
    const auto est = Engine(s).estimate_outage(3.0, 20000, 99);
    CHECK(est.outage_prob >= prev);
    prev = est.outage_prob;
  }
  // user-RIS distance: per-trial SNR scales by d^-delta, so the ordering
  // is exact for a common seed
  prev = -1.0;
  for (double d : {1.0, 2.0, 4.0, 6.0, 8.0}) {
    auto s = mc_scenario(0.3, 0.1, 0.0);
    s.validated = false;
    s.blocks.clear();
    s.dist_user_m = d;
    s = model::validate(std::move(s));
    const auto est = Engine(s).estimate_outage(3.0, 20000, 99);
    CHECK(est.outage_prob >= prev);
    prev = est.outage_prob;
  }
}

TEST_CASE("RIS_OUTAGE_THREADS caps the default worker count") {
  const char* saved = std::getenv("RIS_OUTAGE_THREADS");
  setenv("RIS_OUTAGE_THREADS", "1", 1);
  CHECK(resolve_worker_count(0) == 1);
  // an explicit request is honored as-is
  CHECK(resolve_worker_count(6) == 6);
  if (saved) {
    setenv("RIS_OUTAGE_THREADS", saved, 1);
  } else {
    unsetenv("RIS_OUTAGE_THREADS");
  }
}

TEST_CASE("free-function surface matches the engine") {
  const auto s = mc_scenario(0.3, 0.1, 0.2);
  const auto a = estimate_outage(s, 3.0, 5000, 11);
  const auto b = Engine(s).estimate_outage(3.0, 5000, 11);
  CHECK(a.outage_prob == b.outage_prob);
  const auto d1 = run_trial(s, 11, 0);
  const auto d2 = Engine(s).run_trial(11, 0);
  CHECK(d1.selected_linear == d2.selected_linear);
  CHECK(d1.selected_snr == d2.selected_snr);
}
