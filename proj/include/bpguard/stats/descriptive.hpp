#pragma once

#include <cmath>
#include <numeric>
#include <span>
#include <vector>

#include "matrix.hpp"

namespace bpguard::stats {

inline std::vector<double> column_means(const SampleMatrix& samples) {
  if (samples.rows() == 0 || samples.cols() == 0)
    throw Error("empty-sample", "column_means needs at least one observation");
  std::vector<double> mean(samples.cols(), 0.0);
  for (std::size_t i = 0; i < samples.rows(); ++i) {
    auto r = samples.row(i);
    for (std::size_t j = 0; j < mean.size(); ++j) mean[j] += r[j];
  }
  for (double& m : mean) m /= static_cast<double>(samples.rows());
  return mean;
}

// Sample covariance with n-1 degrees of freedom.
inline Matrix covariance_matrix(const SampleMatrix& samples) {
  const std::size_t n = samples.rows();
  if (n < 2)
    throw Error("insufficient-observations", "covariance needs n >= 2");
  const std::size_t p = samples.cols();
  const auto mean = column_means(samples);
  Matrix cov(p, p);
  std::vector<double> centered(p);
  for (std::size_t i = 0; i < n; ++i) {
    auto r = samples.row(i);
    for (std::size_t j = 0; j < p; ++j) centered[j] = r[j] - mean[j];
    for (std::size_t a = 0; a < p; ++a)
      for (std::size_t b = a; b < p; ++b) cov(a, b) += centered[a] * centered[b];
  }
  const double denom = static_cast<double>(n - 1);
  for (std::size_t a = 0; a < p; ++a)
    for (std::size_t b = a; b < p; ++b) {
      cov(a, b) /= denom;
      cov(b, a) = cov(a, b);
    }
  return cov;
}

inline double mean(std::span<const double> xs) {
  if (xs.empty()) throw Error("empty-sample", "mean of empty vector");
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

inline double sample_variance(std::span<const double> xs) {
  if (xs.size() < 2)
    throw Error("insufficient-observations", "variance needs at least two values");
  const double m = mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return ss / static_cast<double>(xs.size() - 1);
}

}  // namespace bpguard::stats
