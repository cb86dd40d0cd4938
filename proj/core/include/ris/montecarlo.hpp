#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ris/model.hpp"
#include "ris/rng.hpp"
#include "ris/upsilon.hpp"

// Stochastic oracle: simulates correlated outdated/instantaneous Rayleigh
// links for every block, applies the argmax selection on outdated U-side
// SNR, injects element failures, and estimates empirical outage.
//
// Per-trial draw contract (fixed, part of reproducibility): for each block
// b (linear index (k-1)*J + (j-1)), the gain stream
// SplitMix64(derive_stream(seed, trial, b, kGainStream)) yields, in order,
// two normal pairs for the U side (outdated gain, then innovation) and two
// for the B side; the failure stream (tag kFailStream) yields M' uniforms,
// element e failing when u_e < p. Trials are therefore independent of
// worker count and scheduling.

namespace ris::montecarlo {

inline constexpr std::uint64_t kGainStream = 0x6761696eull;  // "gain"
inline constexpr std::uint64_t kFailStream = 0x6661696cull;  // "fail"

struct GainPair {
  double outdated = 0.0;
  double instant = 0.0;
};

// Correlated exponential pair via the complex-Gaussian construction:
// h~ and the innovation w are circular Gaussians with E|.|^2 = lambda,
// h = rho*h~ + sqrt(1-rho^2)*w. Marginals are Exp(mean lambda); the
// squared magnitudes have correlation rho^2.
GainPair draw_correlated_pair(rng::SplitMix64& gen, double lambda, double rho);

// Exact joint density of (instant, outdated) under the construction above
// (bivariate exponential with power correlation rho^2); uses the scaled I0
// so large arguments stay finite.
double joint_gain_pdf(double lambda, double rho, double x, double y);

struct TrialDraw {
  std::vector<GainPair> u_side;      // per block
  std::vector<GainPair> b_side;      // per block
  std::vector<int> fail_count;       // per block q
  std::vector<double> upsilon;       // per block, with that trial's failures removed
  std::vector<double> outdated_snr;  // selection metric Upsilon_q * |g~_U|^2
  int selected_k = 1;                // 1-based
  int selected_j = 1;
  int selected_linear = 0;
  double selected_snr = 0.0;         // Upsilon_q(k*,j*) * |g_U|^2 * |g_B|^2
};

struct McEstimate {
  double outage_prob = 0.0;
  std::uint64_t trials = 0;
  double ci_halfwidth = 0.0;  // 95% normal approximation
  std::uint64_t seed = 0;
};

// Number of workers actually used for `requested` (0 = auto): auto takes
// hardware concurrency capped by the RIS_OUTAGE_THREADS env var; an
// explicit request is honored as-is.
int resolve_worker_count(int requested);

class Engine {
 public:
  explicit Engine(model::Scenario scn);

  const model::Scenario& scenario() const { return scn_; }

  TrialDraw run_trial(std::uint64_t seed, std::uint64_t trial) const;
  double trial_snr(std::uint64_t seed, std::uint64_t trial) const;

  McEstimate estimate_outage(double gamma_t, std::uint64_t trials, std::uint64_t seed,
                             int workers = 0) const;
  // shared trial draws across all thresholds (empirical cdf, exact
  // monotonicity under a common seed)
  std::vector<McEstimate> estimate_outage_multi(std::span<const double> gamma_ts,
                                                std::uint64_t trials, std::uint64_t seed,
                                                int workers = 0) const;
  std::vector<double> sample_snr(std::uint64_t trials, std::uint64_t seed) const;

 private:
  model::Scenario scn_;
  std::vector<upsilon::BlockEvaluator> evals_;
};

// single-call conveniences matching the spec surface
TrialDraw run_trial(const model::Scenario& scn, std::uint64_t seed, std::uint64_t trial);
McEstimate estimate_outage(const model::Scenario& scn, double gamma_t, std::uint64_t trials,
                           std::uint64_t seed);

}  // namespace ris::montecarlo
