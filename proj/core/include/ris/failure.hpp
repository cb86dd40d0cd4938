#pragma once

#include <vector>

#include "ris/rng.hpp"

// Element-failure combinatorics shared by the closed-form and Monte Carlo
// paths: i.i.d. per-element sampling and the first-q-failed convention.

namespace ris::failure {

struct FailurePattern {
  int m_prime = 0;
  std::vector<int> failed;  // sorted unique 0-based indices

  int q() const { return static_cast<int>(failed.size()); }
  std::vector<int> active() const;
};

// Each element fails independently with probability p; |failed| is
// Binomial(m_prime, p).
FailurePattern sample_pattern(rng::SplitMix64& gen, int m_prime, double p);

// failed = {0, ..., q-1}
FailurePattern first_q_pattern(int m_prime, int q);

}  // namespace ris::failure
