#pragma once

#include <string>

#include "ris/model.hpp"
#include "ris/upsilon.hpp"

// Analytical outage pipeline: distributions of the best link selected on
// outdated CSI, the closed-form outage probability, and the
// failure-marginalized outage via total probability.

namespace ris::closedform {

// Parameters of the selected (best-of-n_paths) link distribution.
struct SelectedLinkDist {
  int n_paths = 1;     // N*J
  double rho = 0.0;    // CSI correlation, in [0,1)
  double lambda = 1.0; // average SNR per link
};

enum class Method { closed_form, monte_carlo };

struct OutageResult {
  double probability = 0.0;  // clamped to [0,1]
  double raw = 0.0;          // unclamped value, kept for diagnostics
  Method method = Method::closed_form;
  double ci_halfwidth = 0.0; // 0 for closed form
  int terms_used = 0;
  bool ill_conditioned = false;   // raw outside [-0.01, 1.01] or heavy cancellation
  double cancellation_digits = 0; // log10(largest |term| / |raw|)
  std::string notes;              // short diagnostic text, empty when clean

  std::string flags() const;  // stable single-line rendering of the above
};

// Alternating binomial sums beyond this path count lose all double
// precision (condition number ~ 2^(NJ)).
inline constexpr int kMaxPaths = 60;

// CDF of the outdated CSI of the selected link,
//   F(x) = NJ sum_s (-1)^s C(NJ-1,s)/(s+1) (1 - e^{-(s+1)x/lambda}),
// algebraically (1 - e^{-x/lambda})^{NJ}.
double outdated_best_cdf(const SelectedLinkDist& d, double x);

// PDF/CDF of the instantaneous CSI of the selected link under outdated
// selection, evaluated exactly as printed.
double instantaneous_pdf(const SelectedLinkDist& d, double x);
double instantaneous_cdf(const SelectedLinkDist& d, double x);

// Binomial failure pmf P(Q=q) = C(M',q) p^q (1-p)^(M'-q), log-space.
double failure_pmf(int m_prime, double p, int q);

// The closed-form outage probability at the scenario's threshold for a
// path with deterministic aggregate upsilon. Evaluates the double
// alternating sum term by term with compensated accumulation; throws
// std::domain_error when NJ > kMaxPaths.
OutageResult outage_closed_form(const model::Scenario& scn, const upsilon::UpsilonValue& upsilon);
OutageResult outage_closed_form(const model::Scenario& scn, double upsilon_total);
OutageResult outage_closed_form(const model::Scenario& scn, double upsilon_total, double gamma_t);

// Failure-marginalized outage: sum_q P(Q=q) F^q(gamma_T) with the
// first-q-failed convention; the no-signal branches (q = M', or a
// vanishing aggregate) contribute F = 1.
OutageResult outage_with_failures(const model::Scenario& scn, const model::RisBlockConfig& block);
OutageResult outage_with_failures(const model::Scenario& scn, const model::RisBlockConfig& block,
                                  double gamma_t);

}  // namespace ris::closedform
