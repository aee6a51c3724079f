#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <vector>

#include "hypothesis.hpp"
#include "special.hpp"

namespace bpguard::stats {

namespace detail {

// 10-point Gauss-Legendre nodes/weights on [-1, 1].
inline constexpr std::array<double, 5> kGlNodes = {
    0.1488743389816312, 0.4333953941292472, 0.6794095682990244, 0.8650633666889845,
    0.9739065285171717};
inline constexpr std::array<double, 5> kGlWeights = {
    0.2955242247147529, 0.2692667193099963, 0.2190863625159820, 0.1494513491505806,
    0.0666713443086881};

template <typename F>
double gauss_legendre(F&& f, double lo, double hi, int panels) {
  const double width = (hi - lo) / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double mid = lo + (p + 0.5) * width, half = 0.5 * width;
    double s = 0.0;
    for (std::size_t i = 0; i < kGlNodes.size(); ++i) {
      s += kGlWeights[i] * (f(mid - half * kGlNodes[i]) + f(mid + half * kGlNodes[i]));
    }
    total += s * half;
  }
  return total;
}

// P(range of k iid standard normals <= w). Φ and φ at the fixed
// quadrature nodes are tabulated once per quantile search.
class NormalRangeGrid {
 public:
  explicit NormalRangeGrid(int k) : k_(k) {
    constexpr double lo = -8.5, hi = 8.5;
    constexpr int panels = 12;
    const double width = (hi - lo) / panels, half = width / 2.0;
    for (int p = 0; p < panels; ++p) {
      const double mid = lo + (p + 0.5) * width;
      for (std::size_t i = 0; i < kGlNodes.size(); ++i)
        for (double sign : {-1.0, 1.0}) {
          const double z = mid + sign * half * kGlNodes[i];
          z_.push_back(z);
          phi_.push_back(normal_cdf(z));
          weight_.push_back(kGlWeights[i] * half * normal_pdf(z));
        }
    }
  }

  double cdf(double w) const {
    if (w <= 0.0) return 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i < z_.size(); ++i) {
      const double inner = phi_[i] - normal_cdf(z_[i] - w);
      if (inner <= 0.0) continue;
      double term = 1.0;
      for (int e = 1; e < k_; ++e) term *= inner;
      total += weight_[i] * term;
    }
    return std::clamp(k_ * total, 0.0, 1.0);
  }

 private:
  int k_;
  std::vector<double> z_, phi_, weight_;
};

inline double studentized_range_cdf(const NormalRangeGrid& grid, double q, double df) {
  if (q <= 0.0) return 0.0;
  if (df > 25000.0) return grid.cdf(q);
  const double half = df / 2.0;
  const double log_norm = std::log(2.0) + half * std::log(half) - log_gamma(half);
  const auto density = [&](double s) {
    if (s <= 0.0) return 0.0;
    return std::exp(log_norm + (df - 1.0) * std::log(s) - half * s * s);
  };
  const double sigma = 1.0 / std::sqrt(2.0 * df);
  const double lo = std::max(0.0, 1.0 - 12.0 * sigma);
  const double hi = 1.0 + 12.0 * sigma + (df < 10 ? 4.0 : 0.0);
  const double v = gauss_legendre([&](double s) { return density(s) * grid.cdf(q * s); }, lo,
                                  hi, df < 10 ? 16 : 8);
  return std::clamp(v, 0.0, 1.0);
}

}  // namespace detail

// P(Q_{k,df} <= q) for the studentized range, by integrating the normal
// range distribution against the density of s = sqrt(chi2_df / df).
inline double studentized_range_cdf(double q, int k, double df) {
  if (k < 2) throw Error("bad-parameter", "studentized range needs k >= 2");
  if (!(df >= 1.0)) throw Error("bad-degrees-of-freedom", "studentized range needs df >= 1");
  return detail::studentized_range_cdf(detail::NormalRangeGrid(k), q, df);
}

// q with P(Q_{k,df} <= q) = 1 - alpha.
inline double studentized_range_quantile(int k, double df, double alpha = kDefaultAlpha) {
  check_alpha(alpha);
  if (k < 2) throw Error("bad-parameter", "studentized range needs k >= 2");
  if (!(df >= 2.0)) throw Error("bad-degrees-of-freedom", "studentized range needs df >= 2");
  const double target = 1.0 - alpha;
  const detail::NormalRangeGrid grid(k);
  const auto g = [&](double q) { return detail::studentized_range_cdf(grid, q, df) - target; };

  double lo = 0.0, glo = -target;
  double hi = 2.0, ghi = g(hi);
  int guard = 0;
  while (ghi < 0.0) {
    lo = hi;
    glo = ghi;
    hi *= 2.0;
    ghi = g(hi);
    if (++guard > 20) throw Error("quantile-no-convergence", "could not bracket quantile");
  }
  // Illinois false position.
  int side = 0;
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = (lo * ghi - hi * glo) / (ghi - glo);
    const double gm = g(mid);
    if (std::abs(hi - lo) < 1e-9 || std::abs(gm) < 1e-12) return mid;
    if ((gm < 0.0) == (glo < 0.0)) {
      lo = mid;
      glo = gm;
      if (side == -1) ghi /= 2.0;
      side = -1;
    } else {
      hi = mid;
      ghi = gm;
      if (side == 1) glo /= 2.0;
      side = 1;
    }
  }
  throw Error("quantile-no-convergence", "studentized range quantile did not converge");
}

struct TukeyPair {
  std::size_t group_a = 0;
  std::size_t group_b = 0;
  double mean_diff = 0.0;  // mean_a - mean_b
  double q_statistic = 0.0;
  bool significant = false;
};

struct TukeyResult {
  std::vector<TukeyPair> pairwise;
  std::optional<std::size_t> outlier_group;
  std::vector<double> group_means;
  std::vector<std::size_t> group_sizes;
  double ms_within = 0.0;
  double q_critical = 0.0;
};

// Tukey-Kramer honest significant difference over k >= 2 groups.
// The outlier is the group involved in the most significant pairs; ties go
// to the group whose mean lies farthest from the median of group means, then
// to the lowest index.
inline TukeyResult tukey_hsd(const Groups& groups, double alpha = kDefaultAlpha) {
  check_alpha(alpha);
  if (groups.size() < 2) throw Error("insufficient-group", "Tukey needs at least two groups");
  TukeyResult r;
  std::size_t total_n = 0;
  double ss_within = 0.0;
  for (const auto& g : groups) {
    if (g.size() < 2) throw Error("insufficient-group", "every group needs two values");
    const double m = mean(g);
    r.group_means.push_back(m);
    r.group_sizes.push_back(g.size());
    total_n += g.size();
    for (double x : g) ss_within += (x - m) * (x - m);
  }
  const std::size_t k = groups.size();
  const double df = static_cast<double>(total_n - k);
  r.ms_within = ss_within / df;
  if (!(r.ms_within > 0.0))
    throw Error("degenerate-variance", "zero within-group variance in every group");
  r.q_critical = studentized_range_quantile(static_cast<int>(k), df, alpha);

  std::vector<int> hits(k, 0);
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = a + 1; b < k; ++b) {
      TukeyPair pair{a, b, r.group_means[a] - r.group_means[b], 0.0, false};
      const double se = std::sqrt(r.ms_within / 2.0 *
                                  (1.0 / static_cast<double>(r.group_sizes[a]) +
                                   1.0 / static_cast<double>(r.group_sizes[b])));
      pair.q_statistic = std::abs(pair.mean_diff) / se;
      pair.significant = pair.q_statistic > r.q_critical;
      if (pair.significant) {
        ++hits[a];
        ++hits[b];
      }
      r.pairwise.push_back(pair);
    }

  std::vector<double> sorted_means = r.group_means;
  std::sort(sorted_means.begin(), sorted_means.end());
  const double median = k % 2 ? sorted_means[k / 2]
                              : 0.5 * (sorted_means[k / 2 - 1] + sorted_means[k / 2]);
  for (std::size_t g = 0; g < k; ++g) {
    if (hits[g] == 0) continue;
    if (!r.outlier_group) {
      r.outlier_group = g;
      continue;
    }
    const std::size_t best = *r.outlier_group;
    if (hits[g] > hits[best] ||
        (hits[g] == hits[best] &&
         std::abs(r.group_means[g] - median) > std::abs(r.group_means[best] - median)))
      r.outlier_group = g;
  }
  return r;
}

}  // namespace bpguard::stats
