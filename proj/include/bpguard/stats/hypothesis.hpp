#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "descriptive.hpp"
#include "special.hpp"

namespace bpguard::stats {

inline constexpr double kDefaultAlpha = 0.05;

struct FTestResult {
  bool h = false;  // true: reject equal variances
  double p_value = 1.0;
  double variance_ratio = 1.0;
};

inline void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error("bad-alpha", "alpha must lie in (0, 1)");
}

// Two-sided variance-ratio test of var(a) == var(b).
inline FTestResult two_sample_f_test(std::span<const double> a, std::span<const double> b,
                                     double alpha = kDefaultAlpha) {
  check_alpha(alpha);
  if (a.size() < 2 || b.size() < 2)
    throw Error("insufficient-observations", "F-test needs two values per sample");
  const double vb = sample_variance(b);
  if (!(vb > 0.0)) throw Error("degenerate-variance", "second sample has zero variance");
  const double ratio = sample_variance(a) / vb;
  const double d1 = static_cast<double>(a.size() - 1), d2 = static_cast<double>(b.size() - 1);
  const double p = std::min(1.0, 2.0 * std::min(f_cdf(ratio, d1, d2), f_sf(ratio, d1, d2)));
  return {p < alpha, p, ratio};
}

struct AnovaResult {
  double f_statistic = 0.0;
  double p_value = 1.0;
  std::size_t df_between = 0;
  std::size_t df_within = 0;
  double ss_between = 0.0;
  double ss_within = 0.0;
  double ss_total = 0.0;
};

using Groups = std::vector<std::vector<double>>;

// One-way analysis of variance over k >= 2 groups.
inline AnovaResult one_way_anova(const Groups& groups, double alpha = kDefaultAlpha) {
  check_alpha(alpha);
  if (groups.size() < 2) throw Error("insufficient-group", "ANOVA needs at least two groups");
  std::size_t total_n = 0;
  double grand_sum = 0.0;
  for (const auto& g : groups) {
    if (g.size() < 2) throw Error("insufficient-group", "every group needs two values");
    total_n += g.size();
    for (double x : g) grand_sum += x;
  }
  const double grand_mean = grand_sum / static_cast<double>(total_n);

  AnovaResult r;
  for (const auto& g : groups) {
    const double m = mean(g);
    r.ss_between += static_cast<double>(g.size()) * (m - grand_mean) * (m - grand_mean);
    for (double x : g) r.ss_within += (x - m) * (x - m);
  }
  r.ss_total = r.ss_between + r.ss_within;
  r.df_between = groups.size() - 1;
  r.df_within = total_n - groups.size();

  if (!(r.ss_between > 0.0)) {
    r.f_statistic = 0.0;
    r.p_value = 1.0;
  } else if (!(r.ss_within > 0.0)) {
    r.f_statistic = std::numeric_limits<double>::infinity();
    r.p_value = 0.0;
  } else {
    r.f_statistic = (r.ss_between / static_cast<double>(r.df_between)) /
                    (r.ss_within / static_cast<double>(r.df_within));
    r.p_value = f_sf(r.f_statistic, static_cast<double>(r.df_between),
                     static_cast<double>(r.df_within));
  }
  return r;
}

}  // namespace bpguard::stats
