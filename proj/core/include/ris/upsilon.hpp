#pragma once

#include <complex>
#include <span>
#include <vector>

#include "ris/model.hpp"

// The deterministic aggregate Upsilon: Omega * |sum_{l,s,m} zeta|^2 over
// the active (non-failed) elements of one block, computed two independent
// ways (direct triple sum; diagonal + cross-pair expansion) that must
// agree, plus an incremental evaluator for the Monte Carlo hot path.

namespace ris::upsilon {

struct UpsilonValue {
  double total = 0.0;       // Omega * |sum zeta|^2
  double diag_sum = 0.0;    // sum |zeta|^2 over active triples (no Omega)
  double cross_sum = 0.0;   // 2 * sum over unordered distinct triple pairs of Re(zeta * conj(zeta'))
  int active_elements = 0;  // M' - q
};

// Largest block size accepted by the pair-enumeration route; it is
// O(M'^6) and exists for equivalence testing, not production use.
inline constexpr int kExpandedMaxMPrime = 40;

// One term of the triple sum, 0-based indices in [0, m_prime).
// |zeta| = sqrt(a_{l,s} a_{l,m}) * (d_U d_B)^{-delta/2},
// arg(zeta) = psi_m - theta_s - phi_m.
std::complex<double> zeta(const model::RisBlockConfig& block, int l, int s, int m);

// Omega * |triple sum|^2 over the given active subset (sorted 0-based
// indices). An empty subset carries no signal and yields 0.
UpsilonValue upsilon_direct(const model::RisBlockConfig& block, const model::LinearBudget& budget,
                            std::span<const int> active);

// Same value via sum |zeta|^2 + 2 sum of cross pairs, enumerating each
// unordered pair of distinct index triples exactly once. Agrees with
// upsilon_direct to ~1e-12 relative; throws std::domain_error above
// kExpandedMaxMPrime.
UpsilonValue upsilon_expanded(const model::RisBlockConfig& block, const model::LinearBudget& budget,
                              std::span<const int> active);

// convenience: all elements active
UpsilonValue upsilon_direct(const model::RisBlockConfig& block, const model::LinearBudget& budget);
UpsilonValue upsilon_expanded(const model::RisBlockConfig& block, const model::LinearBudget& budget);

std::vector<int> all_active(int m_prime);
std::vector<int> active_from_failed(int m_prime, std::span<const int> failed);

// Factored form of the same triple sum, O(M' * (q + 1)) per evaluation:
//   sum_{l,s,m} = sum_l (sum_s sqrt(a_{l,s}) e^{-i theta_s})
//                       (sum_m sqrt(a_{l,m}) e^{i (psi_m - phi_m)})
// with failed elements subtracted from the precomputed full row sums.
// Totals match upsilon_direct up to floating-point reassociation.
class BlockEvaluator {
 public:
  BlockEvaluator(const model::RisBlockConfig& block, const model::LinearBudget& budget);

  double total_all_active() const { return total_full_; }
  // failed: sorted unique 0-based element indices
  double total(std::span<const int> failed) const;
  int m_prime() const { return m_prime_; }

 private:
  int m_prime_;
  double scale_;  // Omega * (d_U d_B)^{-delta}
  std::vector<double> sqrt_corr_;                // sqrt(a_{l,s}), row-major
  std::vector<std::complex<double>> u_;          // e^{-i theta_s}
  std::vector<std::complex<double>> v_;          // e^{i (psi_m - phi_m)}
  std::vector<std::complex<double>> row_u_full_; // sum_s sqrt(a_{l,s}) u_s
  std::vector<std::complex<double>> row_v_full_; // sum_m sqrt(a_{l,m}) v_m
  double total_full_ = 0.0;
};

}  // namespace ris::upsilon
