#include "ris/specfun.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace ris::specfun {
namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kEulerGamma = 0.57721566490153286060651209008240243;

void require_finite_nonneg(double x, const char* fn) {
  if (!std::isfinite(x) || x < 0.0) {
    throw std::domain_error(std::string(fn) + ": argument must be finite and >= 0, got " +
                            std::to_string(x));
  }
}

// Power series sum_k (x^2/4)^k / (k!)^2. All terms positive, so the
// accumulation never cancels; converges for every x, ~O(x) terms.
double i0_series(double x) {
  const double q = 0.25 * x * x;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 2000; ++k) {
    term *= q / (static_cast<double>(k) * static_cast<double>(k));
    sum += term;
    if (term < sum * 1e-18) break;
  }
  return sum;
}

// Asymptotic tail of exp(-x) I0(x) for large x; used only where the
// truncation floor is far below double precision (x >= 50).
double i0_scaled_asymptotic(double x) {
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k <= 40; ++k) {
    const double num = 2.0 * k - 1.0;
    term *= num * num / (8.0 * k * x);
    sum += term;
    if (term < sum * 1e-18) break;
  }
  return sum / std::sqrt(2.0 * kPi * x);
}

// I1(x) by power series; only needed by the small-x K1 branch.
double i1_series(double x) {
  const double q = 0.25 * x * x;
  double term = 0.5 * x;  // k = 0 term of (x/2) sum_k q^k / (k!(k+1)!)
  double sum = term;
  for (int k = 1; k < 200; ++k) {
    term *= q / (static_cast<double>(k) * static_cast<double>(k + 1));
    sum += term;
    if (term < sum * 1e-18) break;
  }
  return sum;
}

// K1 series for x < 2:
//   K1(x) = ln(x/2) I1(x) + 1/x - (x/4) sum_k [psi(k+1)+psi(k+2)] q^k / (k!(k+1)!)
// with q = x^2/4. The ln term vanishes at x = 2, so no cancellation blowup
// anywhere on the branch.
double k1_small(double x) {
  const double q = 0.25 * x * x;
  double psi_a = -kEulerGamma;        // psi(1)
  double psi_b = 1.0 - kEulerGamma;   // psi(2)
  double fact = 1.0;                  // k!(k+1)!
  double pow_q = 1.0;
  double sum = psi_a + psi_b;
  for (int k = 1; k < 200; ++k) {
    psi_a += 1.0 / k;
    psi_b += 1.0 / (k + 1.0);
    fact *= static_cast<double>(k) * static_cast<double>(k + 1);
    pow_q *= q;
    const double term = (psi_a + psi_b) * pow_q / fact;
    sum += term;
    if (std::abs(term) < std::abs(sum) * 1e-18) break;
  }
  return std::log(0.5 * x) * i1_series(x) + 1.0 / x - 0.25 * x * sum;
}

// Thompson–Barnett CF2 evaluation of K0, K1 at order mu = 0, valid and
// rapidly convergent for x >= 2. Returns K1.
double k1_cf2(double x) {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  double b = 2.0 * (1.0 + x);
  double d = 1.0 / b;
  double delh = d;
  double h = delh;
  double q1 = 0.0;
  double q2 = 1.0;
  const double a1 = 0.25;  // 1/4 - mu^2 at mu = 0
  double q = a1;
  double c = a1;
  double a = -a1;
  double s = 1.0 + q * delh;
  for (int i = 2; i <= 20000; ++i) {
    a -= 2.0 * (i - 1);
    c = -a * c / i;
    const double qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += 2.0;
    d = 1.0 / (b + a * d);
    delh = (b * d - 1.0) * delh;
    h += delh;
    const double dels = q * delh;
    s += dels;
    if (std::abs(dels / s) <= eps) break;
  }
  h = a1 * h;
  const double k0 = std::sqrt(kPi / (2.0 * x)) * std::exp(-x) / s;
  return k0 * (x + 0.5 - h) / x;
}

}  // namespace

double bessel_i0(double x) {
  require_finite_nonneg(x, "bessel_i0");
  if (x > kBesselOverflowArg) {
    throw std::overflow_error("bessel_i0: x = " + std::to_string(x) +
                              " exceeds the unscaled range (x > 700); use bessel_i0_scaled");
  }
  return i0_series(x);
}

double bessel_i0_scaled(double x) {
  require_finite_nonneg(x, "bessel_i0_scaled");
  if (x < 50.0) return std::exp(-x) * i0_series(x);
  return i0_scaled_asymptotic(x);
}

double bessel_k1(double x) { return bessel_k1_ex(x).value; }

K1Result bessel_k1_ex(double x) {
  if (!std::isfinite(x) || x <= 0.0) {
    throw std::domain_error("bessel_k1: argument must be finite and > 0, got " +
                            std::to_string(x));
  }
  const bool underflow = x > kBesselOverflowArg;
  const double value = (x < 2.0) ? k1_small(x) : k1_cf2(x);
  return {value, underflow};
}

double log_factorial(std::int64_t n) {
  if (n < 0) throw std::domain_error("log_factorial: n must be >= 0");
  if (n <= 20) {
    std::uint64_t f = 1;
    for (std::int64_t i = 2; i <= n; ++i) f *= static_cast<std::uint64_t>(i);
    return std::log(static_cast<double>(f));
  }
  return std::lgamma(static_cast<double>(n) + 1.0);
}

double log_binomial(std::int64_t n, std::int64_t k) {
  if (n < 0 || k < 0 || k > n) {
    throw std::domain_error("log_binomial: need 0 <= k <= n, got n=" + std::to_string(n) +
                            " k=" + std::to_string(k));
  }
  k = std::min(k, n - k);
  if (k == 0) return 0.0;

  if (n <= 64) {
    // exact integer binomial; C(64,32) still fits in 64 bits
    std::uint64_t c = 1;
    for (std::int64_t i = 1; i <= k; ++i) {
      const unsigned __int128 p = static_cast<unsigned __int128>(c) *
                                  static_cast<unsigned __int128>(n - k + i);
      c = static_cast<std::uint64_t>(p / static_cast<unsigned __int128>(i));
    }
    return std::log(static_cast<double>(c));
  }

  if (k <= 10000) {
    // sum of logs keeps the relative error near eps even when the result is
    // small compared to lgamma(n)
    double sum = 0.0;
    for (std::int64_t i = 1; i <= k; ++i) {
      sum += std::log(static_cast<double>(n - k + i)) - std::log(static_cast<double>(i));
    }
    return sum;
  }

  return std::lgamma(static_cast<double>(n) + 1.0) -
         std::lgamma(static_cast<double>(k) + 1.0) -
         std::lgamma(static_cast<double>(n - k) + 1.0);
}

}  // namespace ris::specfun
