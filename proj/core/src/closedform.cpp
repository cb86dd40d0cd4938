#include "ris/closedform.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <vector>

#include "ris/failure.hpp"
#include "ris/specfun.hpp"

namespace ris::closedform {
namespace {

// Neumaier variant of Kahan summation: exact enough for alternating
// binomial sums up to the kMaxPaths cap.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

void check_dist(const SelectedLinkDist& d) {
  if (d.n_paths < 1) throw std::domain_error("SelectedLinkDist: n_paths must be >= 1");
  if (d.n_paths > kMaxPaths) {
    throw std::domain_error("SelectedLinkDist: n_paths = " + std::to_string(d.n_paths) +
                            " exceeds the precision cap of " + std::to_string(kMaxPaths));
  }
  if (!(d.rho >= 0.0 && d.rho < 1.0)) throw std::domain_error("SelectedLinkDist: rho must lie in [0,1)");
  if (!(d.lambda > 0.0)) throw std::domain_error("SelectedLinkDist: lambda must be > 0");
}

std::vector<double> log_binomials(int n) {
  std::vector<double> lc(static_cast<std::size_t>(n) + 1);
  for (int s = 0; s <= n; ++s) lc[static_cast<std::size_t>(s)] = specfun::log_binomial(n, s);
  return lc;
}

double sign_of(int s) { return (s & 1) ? -1.0 : 1.0; }

}  // namespace

std::string OutageResult::flags() const {
  if (!ill_conditioned && notes.empty()) return "";
  std::string out;
  if (ill_conditioned) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "ill_conditioned(raw=%.6g;cancel=%.1fdigits)", raw,
                  cancellation_digits);
    out = buf;
  }
  if (!notes.empty()) {
    if (!out.empty()) out += ";";
    out += notes;
  }
  return out;
}

double outdated_best_cdf(const SelectedLinkDist& d, double x) {
  check_dist(d);
  if (!(x >= 0.0)) throw std::domain_error("outdated_best_cdf: x must be >= 0");
  const int n = d.n_paths - 1;
  const auto lc = log_binomials(n);
  CompensatedSum acc;
  for (int s = 0; s <= n; ++s) {
    const double w = sign_of(s) * std::exp(lc[static_cast<std::size_t>(s)]) / (s + 1.0);
    acc.add(w * -std::expm1(-(s + 1.0) * x / d.lambda));
  }
  return d.n_paths * acc.value();
}

double instantaneous_pdf(const SelectedLinkDist& d, double x) {
  check_dist(d);
  if (!(x >= 0.0)) throw std::domain_error("instantaneous_pdf: x must be >= 0");
  const int n = d.n_paths - 1;
  const double r = 1.0 - d.rho * d.rho;
  const double l2 = d.lambda * d.lambda;
  const auto lc = log_binomials(n);
  CompensatedSum acc;
  for (int s = 0; s <= n; ++s) {
    const double ap = s + s * d.rho * d.rho + 1.0;  // s + s rho^2 + 1
    const double a = l2 + ap;
    acc.add(sign_of(s) * std::exp(lc[static_cast<std::size_t>(s)] - a * x / (ap * r * d.lambda)) / ap);
  }
  return d.n_paths / d.lambda * acc.value();
}

double instantaneous_cdf(const SelectedLinkDist& d, double x) {
  check_dist(d);
  if (!(x >= 0.0)) throw std::domain_error("instantaneous_cdf: x must be >= 0");
  const int n = d.n_paths - 1;
  const double r = 1.0 - d.rho * d.rho;
  const double l2 = d.lambda * d.lambda;
  const auto lc = log_binomials(n);
  CompensatedSum acc;
  for (int s = 0; s <= n; ++s) {
    const double ap = s + s * d.rho * d.rho + 1.0;
    const double a = l2 + ap;
    acc.add(sign_of(s) * std::exp(lc[static_cast<std::size_t>(s)]) / a *
            -std::expm1(-a * x / (ap * r * d.lambda)));
  }
  return d.n_paths * r * acc.value();
}

double failure_pmf(int m_prime, double p, int q) {
  if (m_prime < 0 || q < 0 || q > m_prime) {
    throw std::domain_error("failure_pmf: need 0 <= q <= m_prime");
  }
  if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("failure_pmf: p must lie in [0,1]");
  if (p == 0.0) return q == 0 ? 1.0 : 0.0;
  if (p == 1.0) return q == m_prime ? 1.0 : 0.0;
  return std::exp(specfun::log_binomial(m_prime, q) + q * std::log(p) +
                  (m_prime - q) * std::log1p(-p));
}

OutageResult outage_closed_form(const model::Scenario& scn, double upsilon_total, double gamma_t) {
  const int nj = scn.n_paths();
  if (nj > kMaxPaths) {
    throw std::domain_error("outage_closed_form: NJ = " + std::to_string(nj) +
                            " exceeds the precision cap of " + std::to_string(kMaxPaths));
  }

  OutageResult out;
  out.method = Method::closed_form;

  if (!(gamma_t > 0.0)) {  // SNR is nonnegative and the comparison is strict
    out.probability = 0.0;
    out.raw = 0.0;
    return out;
  }
  if (!(upsilon_total > 0.0)) {  // no deterministic signal path: certain outage
    out.probability = 1.0;
    out.raw = 1.0;
    out.notes = "upsilon=0";
    return out;
  }

  const double rho1 = scn.rho1, rho2 = scn.rho2;
  const double lu = scn.lambda_u, lb = scn.lambda_b;
  const double r1 = 1.0 - rho1 * rho1;
  const double r2 = 1.0 - rho2 * rho2;
  const double lu2 = lu * lu, lb2 = lb * lb;
  const int n = nj - 1;
  const auto lc = log_binomials(n);

  const double prefactor = static_cast<double>(nj) * nj * r1 / lb;

  CompensatedSum acc;
  double max_term = 0.0;
  for (int s = 0; s <= n; ++s) {
    const double ap = s + s * rho1 * rho1 + 1.0;  // s + s rho1^2 + 1
    const double a = lu2 + ap;                    // lambda_U^2 + s + s rho1^2 + 1
    for (int sp = 0; sp <= n; ++sp) {
      const double bp = sp + sp * rho2 * rho2 + 1.0;
      const double b = lb2 + bp;

      const double coef = sign_of(s + sp) *
                          std::exp(lc[static_cast<std::size_t>(s)] + lc[static_cast<std::size_t>(sp)]) /
                          (a * bp);
      const double t1 = bp * r2 * lb / b;
      const double pre =
          std::sqrt(4.0 * a * bp * r2 * lb * gamma_t / (b * ap * r1 * lu * upsilon_total));
      const double z =
          std::sqrt(4.0 * a * b * gamma_t / (ap * r1 * bp * r2 * lb * lu * upsilon_total));
      const double k1 = specfun::bessel_k1_ex(z).value;
      const double term = coef * (t1 - pre * k1);
      acc.add(term);
      max_term = std::max(max_term, std::abs(term));
    }
  }

  out.raw = prefactor * acc.value();
  out.terms_used = nj * nj;
  out.probability = std::min(1.0, std::max(0.0, out.raw));
  if (out.raw != 0.0) {
    out.cancellation_digits = std::log10(std::max(1.0, max_term / std::abs(out.raw)));
  } else {
    out.cancellation_digits = max_term > 0.0 ? 17.0 : 0.0;
  }
  out.ill_conditioned =
      out.raw < -0.01 || out.raw > 1.01 || out.cancellation_digits > 6.0;
  return out;
}

OutageResult outage_closed_form(const model::Scenario& scn, double upsilon_total) {
  return outage_closed_form(scn, upsilon_total, scn.gamma_t);
}

OutageResult outage_closed_form(const model::Scenario& scn, const upsilon::UpsilonValue& u) {
  return outage_closed_form(scn, u.total, scn.gamma_t);
}

OutageResult outage_with_failures(const model::Scenario& scn, const model::RisBlockConfig& block,
                                  double gamma_t) {
  const int mp = block.m_prime;
  OutageResult out;
  out.method = Method::closed_form;

  CompensatedSum prob, raw;
  std::string bad_q;
  for (int q = 0; q <= mp; ++q) {
    const double w = failure_pmf(mp, scn.fail_prob, q);
    if (w == 0.0) continue;
    if (q == mp) {
      prob.add(w);
      raw.add(w);
      out.terms_used += 1;
      continue;
    }
    const auto active = failure::first_q_pattern(mp, q).active();
    const auto ups = upsilon::upsilon_direct(block, scn.budget, active);
    const auto r = outage_closed_form(scn, ups.total, gamma_t);
    prob.add(w * r.probability);
    raw.add(w * r.raw);
    out.terms_used += r.terms_used;
    out.cancellation_digits = std::max(out.cancellation_digits, r.cancellation_digits);
    if (r.ill_conditioned) {
      out.ill_conditioned = true;
      bad_q += (bad_q.empty() ? "" : ",") + std::to_string(q);
    }
  }
  out.raw = raw.value();
  out.probability = std::min(1.0, std::max(0.0, prob.value()));
  if (!bad_q.empty()) out.notes = "ill_conditioned_q={" + bad_q + "}";
  return out;
}

OutageResult outage_with_failures(const model::Scenario& scn, const model::RisBlockConfig& block) {
  return outage_with_failures(scn, block, scn.gamma_t);
}

}  // namespace ris::closedform
