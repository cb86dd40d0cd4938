#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

// Scenario data model: population sizes, geometry, correlation, phases,
// link budget, failure probability and the outage threshold, plus
// validation and ingestion from the key-value config format.

namespace ris::model {

enum class CorrelationKind { identity, uniform, exponential_decay };
enum class PhaseMode { random, aligned };

std::string to_string(CorrelationKind kind);
std::string to_string(PhaseMode mode);

// Per-block configuration: element count, correlation matrix, phase
// vectors, distances and path loss exponent. Indices are 0-based in code;
// ris_index/block_index keep the 1-based labels used in reports.
struct RisBlockConfig {
  int ris_index = 1;
  int block_index = 1;
  int m_prime = 1;
  std::vector<double> correlation;  // m_prime x m_prime, row-major, symmetric, unit diagonal
  std::vector<double> phases_psi;   // adjustable RIS phases
  std::vector<double> phases_theta; // U-side channel phases
  std::vector<double> phases_phi;   // B-side channel phases
  double dist_user_m = 1.0;
  double dist_bs_m = 1.0;
  double pathloss_exp = 2.0;

  double corr(int l, int s) const { return correlation[static_cast<std::size_t>(l) * m_prime + s]; }
};

// Omega = P*nu/N0 in linear scale.
struct LinearBudget {
  double omega = 1.0;
};

struct Scenario {
  // population
  int n_ris = 1;            // N
  int blocks_per_ris = 1;   // J
  int elements_per_ris = 1; // M

  // link budget
  double tx_power_db = 0.0;    // P [dB]
  double noise_power_db = 0.0; // N0 [dB]
  double obstacle_coeff = 1.0; // nu in (0, 1]

  // CSI correlation and fading
  double rho1 = 0.0;
  double rho2 = 0.0;
  double lambda_u = 1.0;
  double lambda_b = 1.0;

  // element failure
  double fail_prob = 0.0;

  // threshold: exactly one of the two must be set before validation
  std::optional<double> target_rate;
  std::optional<double> gamma_t_in;

  // geometry shared by all blocks
  double dist_user_m = 1.0;
  double dist_bs_m = 1.0;
  double pathloss_exp = 2.0;

  CorrelationKind correlation_kind = CorrelationKind::identity;
  double correlation_param = 0.0;
  PhaseMode phase_mode = PhaseMode::random;
  std::uint64_t seed = 1;

  // derived by validate()
  int m_prime = 0;
  double gamma_t = 0.0;
  LinearBudget budget{};
  std::vector<RisBlockConfig> blocks;
  bool validated = false;

  int n_paths() const { return n_ris * blocks_per_ris; }
  const RisBlockConfig& block(int k, int j) const {  // 1-based (k, j)
    return blocks[static_cast<std::size_t>(k - 1) * blocks_per_ris + (j - 1)];
  }
};

// One message per violated invariant, each naming the offending field.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<std::string> issues);
  const std::vector<std::string>& issues() const { return issues_; }

 private:
  std::vector<std::string> issues_;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& origin, int line, const std::string& what);
  int line() const { return line_; }

 private:
  int line_;
};

// Checks every invariant, populates derived fields (M', gamma_T, Omega)
// and builds the per-block configs. Scenarios are immutable after this.
Scenario validate(Scenario raw);

// `key = value` per line, '#' comments; see README for the key list.
Scenario parse_scenario(std::istream& in, const std::string& origin);
Scenario load_scenario(const std::string& path);

// Emits the input fields in the config grammar; load(serialize(s)) == s.
std::string serialize(const Scenario& s);

// Correlation matrix generators. identity ignores the parameter; uniform(a)
// needs a in [0,1]; exponential_decay(c) needs c >= 0 and sets
// a_{l,s} = exp(-c |l-s|).
std::vector<double> make_correlation(CorrelationKind kind, double param, int m_prime);

}  // namespace ris::model
