#include "ris/failure.hpp"

#include <numeric>
#include <stdexcept>

namespace ris::failure {

std::vector<int> FailurePattern::active() const {
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

FailurePattern sample_pattern(rng::SplitMix64& gen, int m_prime, double p) {
  if (m_prime < 0) throw std::domain_error("sample_pattern: m_prime must be >= 0");
  if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("sample_pattern: p must lie in [0,1]");
  FailurePattern pat;
  pat.m_prime = m_prime;
  for (int e = 0; e < m_prime; ++e) {
    if (gen.next_unit() < p) pat.failed.push_back(e);
  }
  return pat;
}

FailurePattern first_q_pattern(int m_prime, int q) {
  if (m_prime < 0 || q < 0 || q > m_prime) {
    throw std::domain_error("first_q_pattern: need 0 <= q <= m_prime");
  }
  FailurePattern pat;
  pat.m_prime = m_prime;
  pat.failed.resize(static_cast<std::size_t>(q));
  std::iota(pat.failed.begin(), pat.failed.end(), 0);
  return pat;
}

}  // namespace ris::failure
