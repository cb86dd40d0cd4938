#include "ris/model.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "ris/rng.hpp"

namespace ris::model {
namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// purpose tag for per-block phase streams in derive_stream
constexpr std::uint64_t kPhaseStream = 0x7068617365ull;  // "phase"

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string to_string(CorrelationKind kind) {
  switch (kind) {
    case CorrelationKind::identity: return "identity";
    case CorrelationKind::uniform: return "uniform";
    case CorrelationKind::exponential_decay: return "exponential-decay";
  }
  return "?";
}

std::string to_string(PhaseMode mode) {
  return mode == PhaseMode::random ? "random" : "aligned";
}

ValidationError::ValidationError(std::vector<std::string> issues)
    : std::runtime_error([&] {
        std::string msg = "scenario validation failed:";
        for (const auto& i : issues) msg += "\n  - " + i;
        return msg;
      }()),
      issues_(std::move(issues)) {}

ParseError::ParseError(const std::string& origin, int line, const std::string& what)
    : std::runtime_error(origin + ":" + std::to_string(line) + ": " + what), line_(line) {}

std::vector<double> make_correlation(CorrelationKind kind, double param, int m_prime) {
  if (m_prime < 1) throw std::domain_error("make_correlation: m_prime must be >= 1");
  if (kind == CorrelationKind::uniform && !(param >= 0.0 && param <= 1.0)) {
    throw std::domain_error("make_correlation: uniform parameter must lie in [0,1]");
  }
  if (kind == CorrelationKind::exponential_decay && !(param >= 0.0)) {
    throw std::domain_error("make_correlation: decay parameter must be >= 0");
  }
  std::vector<double> c(static_cast<std::size_t>(m_prime) * m_prime, 0.0);
  for (int l = 0; l < m_prime; ++l) {
    for (int s = 0; s < m_prime; ++s) {
      double v;
      if (l == s) {
        v = 1.0;
      } else {
        switch (kind) {
          case CorrelationKind::identity: v = 0.0; break;
          case CorrelationKind::uniform: v = param; break;
          case CorrelationKind::exponential_decay: v = std::exp(-param * std::abs(l - s)); break;
          default: v = 0.0;
        }
      }
      c[static_cast<std::size_t>(l) * m_prime + s] = v;
    }
  }
  return c;
}

Scenario validate(Scenario s) {
  std::vector<std::string> issues;
  auto check = [&](bool ok, const std::string& msg) {
    if (!ok) issues.push_back(msg);
  };

  check(s.n_ris >= 1, "n_ris: must be a positive integer, got " + std::to_string(s.n_ris));
  check(s.blocks_per_ris >= 1,
        "blocks_per_ris: must be a positive integer, got " + std::to_string(s.blocks_per_ris));
  check(s.elements_per_ris >= 1,
        "elements_per_ris: must be a positive integer, got " + std::to_string(s.elements_per_ris));
  if (s.blocks_per_ris >= 1 && s.elements_per_ris >= 1 &&
      s.elements_per_ris % s.blocks_per_ris != 0) {
    issues.push_back("elements_per_ris: M mod J != 0 (" + std::to_string(s.elements_per_ris) +
                     " mod " + std::to_string(s.blocks_per_ris) + " = " +
                     std::to_string(s.elements_per_ris % s.blocks_per_ris) +
                     "); block size M' = M/J must be integral");
  }
  check(std::isfinite(s.tx_power_db), "tx_power_db: must be finite");
  check(std::isfinite(s.noise_power_db), "noise_power_db: must be finite");
  check(std::isfinite(s.obstacle_coeff) && s.obstacle_coeff > 0.0 && s.obstacle_coeff <= 1.0,
        "obstacle_coeff: must lie in (0,1], got " + fmt_double(s.obstacle_coeff));
  check(std::isfinite(s.rho1) && s.rho1 >= 0.0 && s.rho1 < 1.0,
        "rho1: must lie in [0,1), got " + fmt_double(s.rho1));
  check(std::isfinite(s.rho2) && s.rho2 >= 0.0 && s.rho2 < 1.0,
        "rho2: must lie in [0,1), got " + fmt_double(s.rho2));
  check(std::isfinite(s.lambda_u) && s.lambda_u > 0.0,
        "lambda_u: must be > 0, got " + fmt_double(s.lambda_u));
  check(std::isfinite(s.lambda_b) && s.lambda_b > 0.0,
        "lambda_b: must be > 0, got " + fmt_double(s.lambda_b));
  check(std::isfinite(s.fail_prob) && s.fail_prob >= 0.0 && s.fail_prob <= 1.0,
        "fail_prob: must lie in [0,1], got " + fmt_double(s.fail_prob));
  if (s.target_rate.has_value() == s.gamma_t_in.has_value()) {
    issues.push_back("target_rate/gamma_t: exactly one of the two must be given");
  } else if (s.target_rate) {
    check(std::isfinite(*s.target_rate) && *s.target_rate > 0.0,
          "target_rate: must be > 0, got " + fmt_double(*s.target_rate));
  } else {
    check(std::isfinite(*s.gamma_t_in) && *s.gamma_t_in > 0.0,
          "gamma_t: must be > 0, got " + fmt_double(*s.gamma_t_in));
  }
  check(std::isfinite(s.dist_user_m) && s.dist_user_m > 0.0,
        "dist_user_m: must be > 0, got " + fmt_double(s.dist_user_m));
  check(std::isfinite(s.dist_bs_m) && s.dist_bs_m > 0.0,
        "dist_bs_m: must be > 0, got " + fmt_double(s.dist_bs_m));
  check(std::isfinite(s.pathloss_exp) && s.pathloss_exp > 0.0,
        "pathloss_exp: must be > 0, got " + fmt_double(s.pathloss_exp));
  if (s.correlation_kind == CorrelationKind::uniform) {
    check(std::isfinite(s.correlation_param) && s.correlation_param >= 0.0 &&
              s.correlation_param <= 1.0,
          "correlation_param: uniform kind needs a value in [0,1], got " +
              fmt_double(s.correlation_param));
  } else if (s.correlation_kind == CorrelationKind::exponential_decay) {
    check(std::isfinite(s.correlation_param) && s.correlation_param >= 0.0,
          "correlation_param: exponential-decay kind needs a value >= 0, got " +
              fmt_double(s.correlation_param));
  }

  if (!issues.empty()) throw ValidationError(std::move(issues));

  s.m_prime = s.elements_per_ris / s.blocks_per_ris;
  s.gamma_t = s.target_rate ? std::exp2(2.0 * *s.target_rate) - 1.0 : *s.gamma_t_in;
  s.budget.omega =
      std::pow(10.0, (s.tx_power_db - s.noise_power_db) / 10.0) * s.obstacle_coeff;

  s.blocks.clear();
  s.blocks.reserve(static_cast<std::size_t>(s.n_paths()));
  const auto corr = make_correlation(s.correlation_kind, s.correlation_param, s.m_prime);
  for (int k = 1; k <= s.n_ris; ++k) {
    for (int j = 1; j <= s.blocks_per_ris; ++j) {
      RisBlockConfig b;
      b.ris_index = k;
      b.block_index = j;
      b.m_prime = s.m_prime;
      b.correlation = corr;
      b.dist_user_m = s.dist_user_m;
      b.dist_bs_m = s.dist_bs_m;
      b.pathloss_exp = s.pathloss_exp;
      b.phases_psi.assign(s.m_prime, 0.0);
      b.phases_theta.assign(s.m_prime, 0.0);
      b.phases_phi.assign(s.m_prime, 0.0);
      if (s.phase_mode == PhaseMode::random) {
        rng::SplitMix64 g(rng::derive_stream(s.seed, static_cast<std::uint64_t>(k),
                                             static_cast<std::uint64_t>(j), kPhaseStream));
        for (auto& v : b.phases_psi) v = g.next_angle();
        for (auto& v : b.phases_theta) v = g.next_angle();
        for (auto& v : b.phases_phi) v = g.next_angle();
      }
      s.blocks.push_back(std::move(b));
    }
  }
  s.validated = true;
  return s;
}

namespace {

struct RawEntry {
  std::string value;
  int line;
};

}  // namespace

Scenario parse_scenario(std::istream& in, const std::string& origin) {
  std::map<std::string, RawEntry> kv;
  std::string line;
  int lineno = 0;
  bool any_content = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    auto trim = [](std::string t) {
      const auto a = t.find_first_not_of(" \t\r");
      const auto b = t.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : t.substr(a, b - a + 1);
    };
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    any_content = true;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw ParseError(origin, lineno, "expected `key = value`, got `" + stripped + "`");
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty()) throw ParseError(origin, lineno, "empty key");
    if (value.empty()) throw ParseError(origin, lineno, "empty value for key `" + key + "`");
    if (kv.count(key)) throw ParseError(origin, lineno, "duplicate key `" + key + "`");
    kv[key] = {value, lineno};
  }
  if (!any_content) throw ParseError(origin, lineno ? lineno : 1, "empty scenario file");

  Scenario s;
  auto take = [&](const char* key) -> std::optional<RawEntry> {
    auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    auto e = it->second;
    kv.erase(it);
    return e;
  };
  auto parse_double = [&](const char* key, const RawEntry& e) {
    try {
      std::size_t pos = 0;
      const double v = std::stod(e.value, &pos);
      if (pos != e.value.size()) throw std::invalid_argument("trailing characters");
      return v;
    } catch (const std::exception&) {
      throw ParseError(origin, e.line, std::string("field `") + key +
                                           "`: not a number: `" + e.value + "`");
    }
  };
  auto parse_int = [&](const char* key, const RawEntry& e) {
    try {
      std::size_t pos = 0;
      const long v = std::stol(e.value, &pos, 10);
      if (pos != e.value.size()) throw std::invalid_argument("trailing characters");
      return static_cast<int>(v);
    } catch (const std::exception&) {
      throw ParseError(origin, e.line, std::string("field `") + key +
                                           "`: not an integer: `" + e.value + "`");
    }
  };
  auto req = [&](const char* key) {
    auto e = take(key);
    if (!e) throw ParseError(origin, 0, std::string("missing required key `") + key + "`");
    return *e;
  };

  s.n_ris = parse_int("n_ris", req("n_ris"));
  s.blocks_per_ris = parse_int("blocks_per_ris", req("blocks_per_ris"));
  s.elements_per_ris = parse_int("elements_per_ris", req("elements_per_ris"));
  s.tx_power_db = parse_double("tx_power_db", req("tx_power_db"));
  s.noise_power_db = parse_double("noise_power_db", req("noise_power_db"));
  if (auto e = take("obstacle_coeff")) s.obstacle_coeff = parse_double("obstacle_coeff", *e);
  s.rho1 = parse_double("rho1", req("rho1"));
  s.rho2 = parse_double("rho2", req("rho2"));
  s.lambda_u = parse_double("lambda_u", req("lambda_u"));
  s.lambda_b = parse_double("lambda_b", req("lambda_b"));
  s.fail_prob = parse_double("fail_prob", req("fail_prob"));
  if (auto e = take("target_rate")) s.target_rate = parse_double("target_rate", *e);
  if (auto e = take("gamma_t")) s.gamma_t_in = parse_double("gamma_t", *e);
  s.dist_user_m = parse_double("dist_user_m", req("dist_user_m"));
  s.dist_bs_m = parse_double("dist_bs_m", req("dist_bs_m"));
  s.pathloss_exp = parse_double("pathloss_exp", req("pathloss_exp"));
  if (auto e = take("correlation_kind")) {
    if (e->value == "identity") s.correlation_kind = CorrelationKind::identity;
    else if (e->value == "uniform") s.correlation_kind = CorrelationKind::uniform;
    else if (e->value == "exponential-decay") s.correlation_kind = CorrelationKind::exponential_decay;
    else throw ParseError(origin, e->line,
                          "correlation_kind: expected identity|uniform|exponential-decay, got `" +
                              e->value + "`");
  }
  if (auto e = take("correlation_param")) s.correlation_param = parse_double("correlation_param", *e);
  if (auto e = take("phase_mode")) {
    if (e->value == "random") s.phase_mode = PhaseMode::random;
    else if (e->value == "aligned") s.phase_mode = PhaseMode::aligned;
    else throw ParseError(origin, e->line,
                          "phase_mode: expected random|aligned, got `" + e->value + "`");
  }
  if (auto e = take("seed")) {
    try {
      std::size_t pos = 0;
      s.seed = std::stoull(e->value, &pos, 10);
      if (pos != e->value.size()) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      throw ParseError(origin, e->line, "field `seed`: not an unsigned integer: `" + e->value + "`");
    }
  }

  if (!kv.empty()) {
    const auto& [key, entry] = *kv.begin();
    throw ParseError(origin, entry.line, "unknown key `" + key + "`");
  }
  return validate(std::move(s));
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, 0, "cannot open scenario file");
  return parse_scenario(in, path);
}

std::string serialize(const Scenario& s) {
  std::ostringstream out;
  out << "n_ris = " << s.n_ris << "\n";
  out << "blocks_per_ris = " << s.blocks_per_ris << "\n";
  out << "elements_per_ris = " << s.elements_per_ris << "\n";
  out << "tx_power_db = " << fmt_double(s.tx_power_db) << "\n";
  out << "noise_power_db = " << fmt_double(s.noise_power_db) << "\n";
  out << "obstacle_coeff = " << fmt_double(s.obstacle_coeff) << "\n";
  out << "rho1 = " << fmt_double(s.rho1) << "\n";
  out << "rho2 = " << fmt_double(s.rho2) << "\n";
  out << "lambda_u = " << fmt_double(s.lambda_u) << "\n";
  out << "lambda_b = " << fmt_double(s.lambda_b) << "\n";
  out << "fail_prob = " << fmt_double(s.fail_prob) << "\n";
  if (s.target_rate) out << "target_rate = " << fmt_double(*s.target_rate) << "\n";
  if (s.gamma_t_in) out << "gamma_t = " << fmt_double(*s.gamma_t_in) << "\n";
  out << "dist_user_m = " << fmt_double(s.dist_user_m) << "\n";
  out << "dist_bs_m = " << fmt_double(s.dist_bs_m) << "\n";
  out << "pathloss_exp = " << fmt_double(s.pathloss_exp) << "\n";
  out << "correlation_kind = " << to_string(s.correlation_kind) << "\n";
  out << "correlation_param = " << fmt_double(s.correlation_param) << "\n";
  out << "phase_mode = " << to_string(s.phase_mode) << "\n";
  out << "seed = " << s.seed << "\n";
  return out.str();
}

}  // namespace ris::model
