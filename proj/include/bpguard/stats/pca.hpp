#pragma once

#include <algorithm>
#include <vector>

#include "descriptive.hpp"
#include "eigen.hpp"

namespace bpguard::stats {

// Principal components of an observation matrix, all p components kept.
struct PcaModel {
  std::vector<double> mean;      // length p
  Matrix coefficients;           // p x p, orthonormal columns
  std::vector<double> latents;   // length p, non-increasing
  Matrix scores;                 // n x p, centered data in component space
};

using TSquaredVector = std::vector<double>;

inline PcaModel pca(const SampleMatrix& samples) {
  PcaModel model;
  model.mean = column_means(samples);
  auto eig = eigendecompose_symmetric(covariance_matrix(samples));
  // Jacobi can leave tiny negative round-off on a singular covariance.
  for (double& l : eig.latents) l = std::max(l, 0.0);
  model.latents = std::move(eig.latents);
  model.coefficients = std::move(eig.vectors);

  const std::size_t n = samples.rows(), p = samples.cols();
  model.scores = Matrix(n, p);
  std::vector<double> centered(p);
  for (std::size_t i = 0; i < n; ++i) {
    auto r = samples.row(i);
    for (std::size_t j = 0; j < p; ++j) centered[j] = r[j] - model.mean[j];
    for (std::size_t c = 0; c < p; ++c) {
      double s = 0.0;
      for (std::size_t j = 0; j < p; ++j) s += centered[j] * model.coefficients(j, c);
      model.scores(i, c) = s;
    }
  }
  return model;
}

// Hotelling T² per observation: squared distance from the center of the
// component space, each axis scaled by its latent. Components with
// latent <= 1e-10 * max latent contribute nothing.
inline TSquaredVector hotelling_t2(const PcaModel& model) {
  const std::size_t n = model.scores.rows(), p = model.scores.cols();
  double max_latent = 0.0;
  for (double l : model.latents) max_latent = std::max(max_latent, l);
  const double eps = 1e-10 * max_latent;

  TSquaredVector t2(n, 0.0);
  for (std::size_t j = 0; j < p; ++j) {
    const double lambda = model.latents[j];
    if (!(lambda > eps)) continue;
    for (std::size_t i = 0; i < n; ++i) {
      const double s = model.scores(i, j);
      t2[i] += s * s / lambda;
    }
  }
  return t2;
}

}  // namespace bpguard::stats
