#include "ris/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <thread>

#include "ris/specfun.hpp"

namespace ris::montecarlo {
namespace {

struct Complex2 {
  double re, im;
  double norm() const { return re * re + im * im; }
};

// one correlated pair from 4 standard normals, in the documented order
GainPair draw_pair_impl(rng::SplitMix64& gen, double lambda, double rho) {
  const auto n01 = gen.next_normal_pair();
  const auto n23 = gen.next_normal_pair();
  const double sc = std::sqrt(0.5 * lambda);
  const Complex2 ht{sc * n01.z0, sc * n01.z1};  // outdated gain
  const Complex2 w{sc * n23.z0, sc * n23.z1};   // innovation
  const double mix = std::sqrt(1.0 - rho * rho);
  const Complex2 h{rho * ht.re + mix * w.re, rho * ht.im + mix * w.im};
  return {ht.norm(), h.norm()};
}

}  // namespace

GainPair draw_correlated_pair(rng::SplitMix64& gen, double lambda, double rho) {
  if (!(lambda > 0.0)) throw std::domain_error("draw_correlated_pair: lambda must be > 0");
  if (!(rho >= 0.0 && rho < 1.0)) throw std::domain_error("draw_correlated_pair: rho must lie in [0,1)");
  return draw_pair_impl(gen, lambda, rho);
}

double joint_gain_pdf(double lambda, double rho, double x, double y) {
  if (!(lambda > 0.0)) throw std::domain_error("joint_gain_pdf: lambda must be > 0");
  if (!(rho >= 0.0 && rho < 1.0)) throw std::domain_error("joint_gain_pdf: rho must lie in [0,1)");
  if (x < 0.0 || y < 0.0) return 0.0;
  const double c = rho * rho;
  const double omc = 1.0 - c;
  const double arg = 2.0 * std::sqrt(c * x * y) / (omc * lambda);
  // exp(-(x+y)/((1-c) lambda)) I0(arg) without overflow: fold exp(arg) of
  // the scaled I0 into the exponent, which is then always <= 0
  const double expo = arg - (x + y) / (omc * lambda);
  return specfun::bessel_i0_scaled(arg) * std::exp(expo) / (omc * lambda * lambda);
}

int resolve_worker_count(int requested) {
  if (requested > 0) return requested;
  int n = static_cast<int>(std::thread::hardware_concurrency());
  if (n < 1) n = 1;
  if (const char* env = std::getenv("RIS_OUTAGE_THREADS")) {
    const int cap = std::atoi(env);
    if (cap >= 1) n = std::min(n, cap);
  }
  return n;
}

Engine::Engine(model::Scenario scn) : scn_(std::move(scn)) {
  if (!scn_.validated) scn_ = model::validate(std::move(scn_));
  evals_.reserve(scn_.blocks.size());
  for (const auto& b : scn_.blocks) evals_.emplace_back(b, scn_.budget);
}

TrialDraw Engine::run_trial(std::uint64_t seed, std::uint64_t trial) const {
  const int nb = scn_.n_paths();
  TrialDraw t;
  t.u_side.resize(nb);
  t.b_side.resize(nb);
  t.fail_count.resize(nb);
  t.upsilon.resize(nb);
  t.outdated_snr.resize(nb);

  std::vector<int> failed;
  failed.reserve(static_cast<std::size_t>(scn_.m_prime));
  int best = 0;
  double best_metric = -1.0;
  for (int b = 0; b < nb; ++b) {
    rng::SplitMix64 gains(rng::derive_stream(seed, trial, static_cast<std::uint64_t>(b), kGainStream));
    t.u_side[b] = draw_pair_impl(gains, scn_.lambda_u, scn_.rho1);
    t.b_side[b] = draw_pair_impl(gains, scn_.lambda_b, scn_.rho2);

    rng::SplitMix64 fails(rng::derive_stream(seed, trial, static_cast<std::uint64_t>(b), kFailStream));
    failed.clear();
    for (int e = 0; e < scn_.m_prime; ++e) {
      if (fails.next_unit() < scn_.fail_prob) failed.push_back(e);
    }
    t.fail_count[b] = static_cast<int>(failed.size());
    t.upsilon[b] = evals_[static_cast<std::size_t>(b)].total(failed);
    t.outdated_snr[b] = t.upsilon[b] * t.u_side[b].outdated;
    if (t.outdated_snr[b] > best_metric) {
      best_metric = t.outdated_snr[b];
      best = b;
    }
  }
  t.selected_linear = best;
  t.selected_k = best / scn_.blocks_per_ris + 1;
  t.selected_j = best % scn_.blocks_per_ris + 1;
  t.selected_snr = t.upsilon[best] * t.u_side[best].instant * t.b_side[best].instant;
  return t;
}

double Engine::trial_snr(std::uint64_t seed, std::uint64_t trial) const {
  const int nb = scn_.n_paths();
  int best = 0;
  double best_metric = -1.0;
  double best_instant = 0.0;
  GainPair best_b{};
  std::vector<int> failed;
  failed.reserve(static_cast<std::size_t>(scn_.m_prime));
  double best_upsilon = 0.0;
  for (int b = 0; b < nb; ++b) {
    rng::SplitMix64 gains(rng::derive_stream(seed, trial, static_cast<std::uint64_t>(b), kGainStream));
    const GainPair u = draw_pair_impl(gains, scn_.lambda_u, scn_.rho1);
    const GainPair bb = draw_pair_impl(gains, scn_.lambda_b, scn_.rho2);

    rng::SplitMix64 fails(rng::derive_stream(seed, trial, static_cast<std::uint64_t>(b), kFailStream));
    failed.clear();
    for (int e = 0; e < scn_.m_prime; ++e) {
      if (fails.next_unit() < scn_.fail_prob) failed.push_back(e);
    }
    const double ups = evals_[static_cast<std::size_t>(b)].total(failed);
    const double metric = ups * u.outdated;
    if (metric > best_metric) {
      best_metric = metric;
      best = b;
      best_upsilon = ups;
      best_instant = u.instant;
      best_b = bb;
    }
  }
  (void)best;
  return best_upsilon * best_instant * best_b.instant;
}

McEstimate Engine::estimate_outage(double gamma_t, std::uint64_t trials, std::uint64_t seed,
                                   int workers) const {
  const double g[1] = {gamma_t};
  return estimate_outage_multi(std::span<const double>(g, 1), trials, seed, workers)[0];
}

std::vector<McEstimate> Engine::estimate_outage_multi(std::span<const double> gamma_ts,
                                                      std::uint64_t trials, std::uint64_t seed,
                                                      int workers) const {
  if (trials == 0) throw std::domain_error("estimate_outage: trials must be >= 1");
  const int nw = std::max(1, std::min<int>(resolve_worker_count(workers),
                                           static_cast<int>(std::min<std::uint64_t>(trials, 256))));
  const std::size_t ng = gamma_ts.size();
  std::vector<std::vector<std::uint64_t>> counts(static_cast<std::size_t>(nw),
                                                 std::vector<std::uint64_t>(ng, 0));

  auto work = [&](int w) {
    const std::uint64_t lo = trials * static_cast<std::uint64_t>(w) / static_cast<std::uint64_t>(nw);
    const std::uint64_t hi =
        trials * static_cast<std::uint64_t>(w + 1) / static_cast<std::uint64_t>(nw);
    auto& mine = counts[static_cast<std::size_t>(w)];
    for (std::uint64_t t = lo; t < hi; ++t) {
      const double snr = trial_snr(seed, t);
      for (std::size_t i = 0; i < ng; ++i) {
        if (snr < gamma_ts[i]) ++mine[i];
      }
    }
  };

  if (nw == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(nw));
    for (int w = 0; w < nw; ++w) pool.emplace_back(work, w);
    for (auto& th : pool) th.join();
  }

  std::vector<McEstimate> out(ng);
  for (std::size_t i = 0; i < ng; ++i) {
    std::uint64_t c = 0;
    for (int w = 0; w < nw; ++w) c += counts[static_cast<std::size_t>(w)][i];
    const double p = static_cast<double>(c) / static_cast<double>(trials);
    out[i].outage_prob = p;
    out[i].trials = trials;
    out[i].ci_halfwidth = 1.96 * std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
    out[i].seed = seed;
  }
  return out;
}

std::vector<double> Engine::sample_snr(std::uint64_t trials, std::uint64_t seed) const {
  std::vector<double> v(trials);
  for (std::uint64_t t = 0; t < trials; ++t) v[t] = trial_snr(seed, t);
  return v;
}

TrialDraw run_trial(const model::Scenario& scn, std::uint64_t seed, std::uint64_t trial) {
  return Engine(scn).run_trial(seed, trial);
}

McEstimate estimate_outage(const model::Scenario& scn, double gamma_t, std::uint64_t trials,
                           std::uint64_t seed) {
  return Engine(scn).estimate_outage(gamma_t, trials, seed);
}

}  // namespace ris::montecarlo
