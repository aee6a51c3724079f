#pragma once

// Independent reference computations used by the tests. They follow the
// textbook definitions directly and share no code with the library.

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

using Rows = std::vector<std::vector<double>>;

inline Rows random_rows(std::mt19937_64& gen, std::size_t n, std::size_t p, double lo = 0.0,
                        double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Rows r(n, std::vector<double>(p));
  for (auto& row : r)
    for (auto& v : row) v = u(gen);
  return r;
}

inline Rows gaussian_rows(std::mt19937_64& gen, std::size_t n, std::size_t p) {
  std::normal_distribution<double> g;
  Rows r(n, std::vector<double>(p));
  for (auto& row : r)
    for (auto& v : row) v = g(gen);
  return r;
}

// Kahan summation, iterated back to front.
inline double sum(const std::vector<double>& xs) {
  double s = 0.0, c = 0.0;
  for (auto it = xs.rbegin(); it != xs.rend(); ++it) {
    const double y = *it - c;
    const double t = s + y;
    c = (t - s) - y;
    s = t;
  }
  return s;
}

inline std::vector<double> column(const Rows& r, std::size_t j) {
  std::vector<double> c;
  for (const auto& row : r) c.push_back(row[j]);
  return c;
}

// Double loop over observation pairs: cov = Σ_{i<k} (x_i - x_k)(y_i - y_k) / (n (n-1)).
inline double pairwise_covariance(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = i + 1; k < n; ++k) s += (x[i] - x[k]) * (y[i] - y[k]);
  return s / (static_cast<double>(n) * static_cast<double>(n - 1));
}

// Gauss-Jordan inverse with partial pivoting.
inline Rows inverse(Rows a) {
  const std::size_t n = a.size();
  Rows inv(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1.0;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    std::swap(a[c], a[piv]);
    std::swap(inv[c], inv[piv]);
    const double d = a[c][c];
    for (std::size_t k = 0; k < n; ++k) {
      a[c][k] /= d;
      inv[c][k] /= d;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c) continue;
      const double f = a[r][c];
      for (std::size_t k = 0; k < n; ++k) {
        a[r][k] -= f * a[c][k];
        inv[r][k] -= f * inv[c][k];
      }
    }
  }
  return inv;
}

// (x_i - x̄)ᵀ W⁻¹ (x_i - x̄) with W the sample covariance.
inline std::vector<double> mahalanobis_t2(const Rows& x) {
  const std::size_t n = x.size(), p = x[0].size();
  std::vector<double> m(p);
  for (std::size_t j = 0; j < p; ++j) m[j] = sum(column(x, j)) / static_cast<double>(n);
  Rows w(p, std::vector<double>(p));
  for (std::size_t a = 0; a < p; ++a)
    for (std::size_t b = 0; b < p; ++b) w[a][b] = pairwise_covariance(column(x, a), column(x, b));
  const Rows wi = inverse(w);
  std::vector<double> t2(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t a = 0; a < p; ++a)
      for (std::size_t b = 0; b < p; ++b) t2[i] += (x[i][a] - m[a]) * wi[a][b] * (x[i][b] - m[b]);
  return t2;
}

struct Anova {
  double ss_between, ss_within, ss_total, f;
};

// Sums of squares straight from the definitions, total computed on its own.
inline Anova anova(const std::vector<std::vector<double>>& groups) {
  std::vector<double> all;
  for (const auto& g : groups) all.insert(all.end(), g.begin(), g.end());
  const double grand = sum(all) / static_cast<double>(all.size());
  Anova r{0, 0, 0, 0};
  for (double v : all) r.ss_total += (v - grand) * (v - grand);
  for (const auto& g : groups) {
    const double m = sum(g) / static_cast<double>(g.size());
    r.ss_between += static_cast<double>(g.size()) * (m - grand) * (m - grand);
    for (double v : g) r.ss_within += (v - m) * (v - m);
  }
  const double dfb = static_cast<double>(groups.size() - 1);
  const double dfw = static_cast<double>(all.size() - groups.size());
  r.f = (r.ss_between / dfb) / (r.ss_within / dfw);
  return r;
}

inline double f_density(double x, double d1, double d2) {
  if (x <= 0.0) return 0.0;
  const double lb = std::lgamma(d1 / 2) + std::lgamma(d2 / 2) - std::lgamma((d1 + d2) / 2);
  return std::exp(0.5 * d1 * std::log(d1 / d2) + (0.5 * d1 - 1) * std::log(x) -
                  0.5 * (d1 + d2) * std::log1p(d1 * x / d2) - lb);
}

namespace detail {
inline double simpson(const std::function<double(double)>& f, double a, double b, double fa, double fm,
                      double fb, double whole, double eps, int depth) {
  const double m = 0.5 * (a + b), lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6 * (fa + 4 * flm + fm), right = (b - m) / 6 * (fm + 4 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15 * eps)
    return left + right + (left + right - whole) / 15;
  return simpson(f, a, m, fa, flm, fm, left, eps / 2, depth - 1) +
         simpson(f, m, b, fm, frm, fb, right, eps / 2, depth - 1);
}
}  // namespace detail

inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double eps = 1e-13) {
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  return detail::simpson(f, a, b, fa, fm, fb, (b - a) / 6 * (fa + 4 * fm + fb), eps, 50);
}

// P(F <= x). Substituting x = u² removes the x^(d1/2-1) singularity at 0
// for d1 = 1.
inline double f_cdf_by_quadrature(double x, double d1, double d2) {
  if (x <= 0.0) return 0.0;
  const double lb = std::lgamma(d1 / 2) + std::lgamma(d2 / 2) - std::lgamma((d1 + d2) / 2);
  const double at_zero = d1 == 1 ? 2 * std::exp(0.5 * std::log(1 / d2) - lb) : 0.0;
  const auto g = [&](double u) { return u <= 0.0 ? at_zero : 2 * u * f_density(u * u, d1, d2); };
  const double r = std::sqrt(x);
  // Split at the density mode region so the adaptive rule sees the peak.
  return adaptive_simpson(g, 0.0, r / 2) + adaptive_simpson(g, r / 2, r);
}

}  // namespace oracle
