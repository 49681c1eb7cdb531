#pragma once

// Complex elementary and special functions used by the volume formulas:
// the principal-branch logarithm and the dilogarithm Li2 on the cut plane
// C \ [1, inf).

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace hyptet {

using Complex = std::complex<double>;

inline bool is_finite(Complex z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

// log z with imaginary part in (-pi, pi].  Rejects z = 0 and non-finite input.
inline Complex principal_log(Complex z) {
  if (!is_finite(z)) throw std::domain_error("principal_log: non-finite argument");
  if (z.real() == 0.0 && z.imag() == 0.0)
    throw std::domain_error("principal_log: argument is zero");
  return std::log(z);
}

namespace detail {

// Direct power series sum_{n>=1} z^n / n^2, converges fast for |z| <= 0.5.
inline Complex dilog_power_series(Complex z) {
  Complex term = z;
  Complex sum = z;
  for (int n = 2; n < 64; ++n) {
    term *= z;
    const Complex add = term / static_cast<double>(n * n);
    sum += add;
    if (std::norm(add) < 1e-34 * std::norm(sum)) break;
  }
  return sum;
}

// Series in u = -log(1-z): Li2(z) = sum_k B_k u^{k+1} / (k+1)!  (B_k Bernoulli).
// Converges for |u| < 2*pi; used on the annulus 0.5 < |z| <= 1, Re z <= 1/2
// where |u| <= 1.8.  Coefficients B_k/(k+1)!.
inline Complex dilog_log_series(Complex z) {
  static constexpr double c[] = {
      1.0,                       // k = 0
      -0.25,                     // k = 1
      2.7777777777777776e-02,    // k = 2
      -2.7777777777777778e-04,   // k = 4
      4.7241118669690098e-06,    // k = 6
      -9.1857730746619636e-08,   // k = 8
      1.8978869988971000e-09,    // k = 10
      -4.0647616451442256e-11,   // k = 12
      8.9216910204564525e-13,    // k = 14
      -1.9939295860721074e-14,   // k = 16
      4.5189800296199182e-16,    // k = 18
      -1.0356517612181247e-17,   // k = 20
      2.3952186210261870e-19,    // k = 22
      -5.5817858743250093e-21,   // k = 24
      1.3091507554183213e-22,    // k = 26
      -3.0874198024267403e-24,   // k = 28
      7.3159756527022034e-26,    // k = 30
      -1.7408456572340010e-27,   // k = 32
      4.1576356446138997e-29,    // k = 34
      -9.9621484882846221e-31,   // k = 36
      2.3940344248961653e-32,    // k = 38
      -5.7683473553673901e-34,   // k = 40
      1.3931794796470080e-35,    // k = 42
  };
  const Complex u = -std::log(1.0 - z);
  const Complex u2 = u * u;
  Complex sum = u * (c[0] + u * c[1]);
  Complex up = u * u2;  // u^3, continues with u^{2m+1}
  for (std::size_t m = 2; m < sizeof(c) / sizeof(c[0]); ++m) {
    const Complex add = c[m] * up;
    sum += add;
    if (std::norm(add) < 1e-34 * std::norm(sum)) break;
    up *= u2;
  }
  return sum;
}

}  // namespace detail

// Dilogarithm Li2(z), principal branch (cut along [1, inf); boundary values
// follow the IEEE signed-zero convention of std::log).  Absolute accuracy is
// better than 1e-13 for |z| <= 10.
//
// Evaluation: power series on |z| <= 0.5; inversion |z| > 1 and reflection
// Re z > 1/2 map most arguments into that disk; the remaining near-circle
// annulus (which the two functional equations cannot leave, e.g. around
// z = exp(±i*pi/3)) uses the log series.
inline Complex dilog(Complex z) {
  constexpr double pi2_6 = std::numbers::pi * std::numbers::pi / 6.0;
  if (!is_finite(z)) throw std::domain_error("dilog: non-finite argument");
  if (z.real() == 1.0 && z.imag() == 0.0) return Complex(pi2_6, 0.0);
  const double az = std::abs(z);
  if (az <= 0.5) return detail::dilog_power_series(z);
  if (az > 1.0) {
    const Complex lz = std::log(-z);
    return -pi2_6 - 0.5 * lz * lz - dilog(1.0 / z);
  }
  if (z.real() > 0.5)
    return pi2_6 - std::log(z) * std::log(1.0 - z) - dilog(1.0 - z);
  return detail::dilog_log_series(z);
}

}  // namespace hyptet
