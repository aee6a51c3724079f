#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "../error.hpp"

namespace bpguard::stats {

// log Γ(x) for x > 0 (Lanczos, g = 7). std::lgamma writes the global
// signgam on glibc, so it is avoided to keep these functions reentrant.
inline double log_gamma(double x) {
  static constexpr std::array<double, 9> kCoef = {
      0.99999999999980993,  676.5203681218851,   -1259.1392167224028,
      771.32342877765313,   -176.61502916214059, 12.507343278686905,
      -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
  if (x < 0.5) {
    // Reflection; only reached for 0 < x < 0.5.
    return std::log(std::numbers::pi / std::sin(std::numbers::pi * x)) - log_gamma(1.0 - x);
  }
  x -= 1.0;
  double a = kCoef[0];
  const double t = x + 7.5;
  for (int i = 1; i < 9; ++i) a += kCoef[i] / (x + i);
  return 0.5 * std::log(2.0 * std::numbers::pi) + (x + 0.5) * std::log(t) - t + std::log(a);
}

namespace detail {

// Continued fraction for I_x(a, b), modified Lentz.
inline double beta_continued_fraction(double a, double b, double x) {
  constexpr int kMaxIter = 500;
  constexpr double kEps = 1e-12;
  constexpr double kTiny = 1e-300;
  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) return h;
  }
  throw Error("beta-no-convergence", "incomplete beta continued fraction did not converge");
}

}  // namespace detail

// Regularized incomplete beta I_x(a, b).
inline double incomplete_beta(double x, double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw Error("bad-parameter", "incomplete beta needs a, b > 0");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double log_front = log_gamma(a + b) - log_gamma(a) - log_gamma(b) + a * std::log(x) +
                           b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * detail::beta_continued_fraction(a, b, x) / a;
  return 1.0 - front * detail::beta_continued_fraction(b, a, 1.0 - x) / b;
}

namespace detail {
inline void check_dfs(double d1, double d2) {
  if (!(d1 >= 1.0) || !(d2 >= 1.0) || !std::isfinite(d1) || !std::isfinite(d2))
    throw Error("bad-degrees-of-freedom", "F distribution needs d1, d2 >= 1");
}
}  // namespace detail

// P(F_{d1,d2} <= x).
inline double f_cdf(double x, double d1, double d2) {
  detail::check_dfs(d1, d2);
  if (std::isnan(x)) throw Error("bad-parameter", "f_cdf of NaN");
  if (x <= 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  // Pick the argument that avoids cancellation in 1 - y.
  const double y = d1 * x / (d1 * x + d2);
  if (y < 0.5) return incomplete_beta(y, d1 / 2.0, d2 / 2.0);
  return 1.0 - incomplete_beta(d2 / (d1 * x + d2), d2 / 2.0, d1 / 2.0);
}

// P(F_{d1,d2} > x), accurate in the far upper tail.
inline double f_sf(double x, double d1, double d2) {
  detail::check_dfs(d1, d2);
  if (std::isnan(x)) throw Error("bad-parameter", "f_sf of NaN");
  if (x <= 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  const double y = d2 / (d1 * x + d2);
  if (y < 0.5) return incomplete_beta(y, d2 / 2.0, d1 / 2.0);
  return 1.0 - incomplete_beta(d1 * x / (d1 * x + d2), d1 / 2.0, d2 / 2.0);
}

inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

inline double normal_pdf(double z) {
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

}  // namespace bpguard::stats
