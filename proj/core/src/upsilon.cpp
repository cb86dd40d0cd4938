#include "ris/upsilon.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ris::upsilon {
namespace {

double distance_factor(const model::RisBlockConfig& b) {
  return std::pow(b.dist_user_m * b.dist_bs_m, -b.pathloss_exp);
}

void check_index(const model::RisBlockConfig& b, int idx, const char* name) {
  if (idx < 0 || idx >= b.m_prime) {
    throw std::out_of_range(std::string("zeta: index ") + name + "=" + std::to_string(idx) +
                            " outside [0, " + std::to_string(b.m_prime) + ")");
  }
}

struct TripleTerms {
  std::vector<std::complex<double>> zetas;
  double diag = 0.0;  // sum |zeta|^2
};

TripleTerms collect_terms(const model::RisBlockConfig& block, std::span<const int> active) {
  TripleTerms t;
  t.zetas.reserve(active.size() * active.size() * active.size());
  for (int l : active) {
    for (int s : active) {
      for (int m : active) {
        const auto z = zeta(block, l, s, m);
        t.zetas.push_back(z);
        t.diag += std::norm(z);
      }
    }
  }
  return t;
}

}  // namespace

std::complex<double> zeta(const model::RisBlockConfig& block, int l, int s, int m) {
  check_index(block, l, "l");
  check_index(block, s, "s");
  check_index(block, m, "m");
  const double mag = std::sqrt(block.corr(l, s) * block.corr(l, m) * distance_factor(block));
  const double phase = block.phases_psi[m] - block.phases_theta[s] - block.phases_phi[m];
  return std::polar(mag, phase);
}

UpsilonValue upsilon_direct(const model::RisBlockConfig& block, const model::LinearBudget& budget,
                            std::span<const int> active) {
  UpsilonValue out;
  out.active_elements = static_cast<int>(active.size());
  if (active.empty()) return out;

  const auto terms = collect_terms(block, active);
  std::complex<double> sum{0.0, 0.0};
  for (const auto& z : terms.zetas) sum += z;
  out.total = budget.omega * std::norm(sum);
  out.diag_sum = terms.diag;
  out.cross_sum = std::norm(sum) - terms.diag;
  return out;
}

UpsilonValue upsilon_expanded(const model::RisBlockConfig& block, const model::LinearBudget& budget,
                              std::span<const int> active) {
  if (block.m_prime > kExpandedMaxMPrime) {
    throw std::domain_error("upsilon_expanded: M' = " + std::to_string(block.m_prime) +
                            " exceeds the pair-enumeration cap of " +
                            std::to_string(kExpandedMaxMPrime));
  }
  UpsilonValue out;
  out.active_elements = static_cast<int>(active.size());
  if (active.empty()) return out;

  const auto terms = collect_terms(block, active);
  double cross = 0.0;
  const std::size_t n = terms.zetas.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto zi = terms.zetas[i];
    for (std::size_t j = i + 1; j < n; ++j) {
      cross += zi.real() * terms.zetas[j].real() + zi.imag() * terms.zetas[j].imag();
    }
  }
  out.diag_sum = terms.diag;
  out.cross_sum = 2.0 * cross;
  out.total = budget.omega * (out.diag_sum + out.cross_sum);
  return out;
}

UpsilonValue upsilon_direct(const model::RisBlockConfig& block, const model::LinearBudget& budget) {
  const auto act = all_active(block.m_prime);
  return upsilon_direct(block, budget, act);
}

UpsilonValue upsilon_expanded(const model::RisBlockConfig& block, const model::LinearBudget& budget) {
  const auto act = all_active(block.m_prime);
  return upsilon_expanded(block, budget, act);
}

std::vector<int> all_active(int m_prime) {
  std::vector<int> v(static_cast<std::size_t>(m_prime));
  for (int i = 0; i < m_prime; ++i) v[static_cast<std::size_t>(i)] = i;
  return v;
}

std::vector<int> active_from_failed(int m_prime, std::span<const int> failed) {
  std::vector<int> act;
  act.reserve(static_cast<std::size_t>(m_prime));
  std::size_t fi = 0;
  for (int e = 0; e < m_prime; ++e) {
    if (fi < failed.size() && failed[fi] == e) {
      ++fi;
      continue;
    }
    act.push_back(e);
  }
  return act;
}

BlockEvaluator::BlockEvaluator(const model::RisBlockConfig& block,
                               const model::LinearBudget& budget)
    : m_prime_(block.m_prime), scale_(budget.omega * distance_factor(block)) {
  const int n = m_prime_;
  sqrt_corr_.resize(static_cast<std::size_t>(n) * n);
  u_.resize(n);
  v_.resize(n);
  for (int e = 0; e < n; ++e) {
    u_[e] = std::polar(1.0, -block.phases_theta[e]);
    v_[e] = std::polar(1.0, block.phases_psi[e] - block.phases_phi[e]);
  }
  for (int l = 0; l < n; ++l) {
    for (int s = 0; s < n; ++s) {
      sqrt_corr_[static_cast<std::size_t>(l) * n + s] = std::sqrt(block.corr(l, s));
    }
  }
  row_u_full_.assign(n, {0.0, 0.0});
  row_v_full_.assign(n, {0.0, 0.0});
  for (int l = 0; l < n; ++l) {
    std::complex<double> au{0.0, 0.0}, av{0.0, 0.0};
    for (int e = 0; e < n; ++e) {
      const double w = sqrt_corr_[static_cast<std::size_t>(l) * n + e];
      au += w * u_[e];
      av += w * v_[e];
    }
    row_u_full_[l] = au;
    row_v_full_[l] = av;
  }
  std::complex<double> sum{0.0, 0.0};
  for (int l = 0; l < n; ++l) sum += row_u_full_[l] * row_v_full_[l];
  total_full_ = scale_ * std::norm(sum);
}

double BlockEvaluator::total(std::span<const int> failed) const {
  if (failed.empty()) return total_full_;
  if (failed.size() == static_cast<std::size_t>(m_prime_)) return 0.0;

  std::complex<double> sum{0.0, 0.0};
  std::size_t fi = 0;
  for (int l = 0; l < m_prime_; ++l) {
    if (fi < failed.size() && failed[fi] == l) {
      ++fi;
      continue;
    }
    std::complex<double> au = row_u_full_[l];
    std::complex<double> av = row_v_full_[l];
    const double* row = &sqrt_corr_[static_cast<std::size_t>(l) * m_prime_];
    for (int f : failed) {
      au -= row[f] * u_[f];
      av -= row[f] * v_[f];
    }
    sum += au * av;
  }
  return scale_ * std::norm(sum);
}

}  // namespace ris::upsilon
