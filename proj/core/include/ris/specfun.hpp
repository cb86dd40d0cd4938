#pragma once

#include <cstdint>

// Scalar special functions used by the outage closed form and the
// correlated-fading joint density: modified Bessel functions I0 and K1,
// log-factorials and log-binomials.
//
// All functions are pure and thread-safe.

namespace ris::specfun {

// Largest argument for which exp(x)-scaled quantities are served unscaled.
inline constexpr double kBesselOverflowArg = 700.0;

// I0(x), modified Bessel function of the first kind, order zero.
// Requires x >= 0 and finite. Relative error below 1e-14 on [0, 700].
// Throws std::overflow_error for x > 700 (exp(x) would dwarf the double
// range; a silent infinity usually means a misconfigured scenario).
double bessel_i0(double x);

// exp(-x) * I0(x), valid for any finite x >= 0, never overflows.
double bessel_i0_scaled(double x);

struct K1Result {
  double value;
  bool underflow;  // set for x > 700 where K1 drifts into the subnormal range
};

// K1(x), modified Bessel function of the second kind, order one.
// Requires x > 0. Relative error below 1e-13 on (1e-8, 700].
// Throws std::domain_error for x <= 0.
double bessel_k1(double x);
K1Result bessel_k1_ex(double x);

// ln(n!), exact-integer path for small n, lgamma beyond.
double log_factorial(std::int64_t n);

// ln C(n, k). Requires 0 <= k <= n. Exact-integer path for n <= 64
// (so exp() of it reproduces the integer binomial), log-sum path for
// moderate min(k, n-k), lgamma for the rest; relative error <= 1e-12
// up to n = 10^6.
double log_binomial(std::int64_t n, std::int64_t k);

}  // namespace ris::specfun
