#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "matrix.hpp"

namespace bpguard::stats {

struct EigenDecomposition {
  std::vector<double> latents;  // descending
  Matrix vectors;               // column j pairs with latents[j]
};

// Cyclic Jacobi rotations for a small symmetric matrix. Converges when the
// off-diagonal Frobenius norm falls below 1e-12 (relative to the matrix
// norm) or after 100 sweeps. Each eigenvector is sign-normalised so that its
// largest-magnitude entry is positive.
inline EigenDecomposition eigendecompose_symmetric(const Matrix& m) {
  const std::size_t p = m.rows();
  if (m.cols() != p) throw Error("not-symmetric", "matrix is not square");
  double scale = 0.0;
  for (double v : m.data()) scale = std::max(scale, std::abs(v));
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = i + 1; j < p; ++j)
      if (std::abs(m(i, j) - m(j, i)) > 1e-9 * std::max(1.0, scale))
        throw Error("not-symmetric", "asymmetric input to eigendecomposition");

  Matrix a = m;
  Matrix v = Matrix::identity(p);
  constexpr int kMaxSweeps = 100;
  constexpr double kTol = 1e-12;

  double total = 0.0;
  for (double x : a.data()) total += x * x;
  const double threshold = kTol * std::max(std::sqrt(total), 1e-300);

  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t j = i + 1; j < p; ++j) off += 2.0 * a(i, j) * a(i, j);
    if (std::sqrt(off) <= threshold) break;

    for (std::size_t k = 0; k < p; ++k)
      for (std::size_t l = k + 1; l < p; ++l) {
        const double akl = a(k, l);
        if (akl == 0.0) continue;
        const double theta = (a(l, l) - a(k, k)) / (2.0 * akl);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t r = 0; r < p; ++r) {
          const double ark = a(r, k), arl = a(r, l);
          a(r, k) = c * ark - s * arl;
          a(r, l) = s * ark + c * arl;
        }
        for (std::size_t r = 0; r < p; ++r) {
          const double akr = a(k, r), alr = a(l, r);
          a(k, r) = c * akr - s * alr;
          a(l, r) = s * akr + c * alr;
        }
        for (std::size_t r = 0; r < p; ++r) {
          const double vrk = v(r, k), vrl = v(r, l);
          v(r, k) = c * vrk - s * vrl;
          v(r, l) = s * vrk + c * vrl;
        }
      }
  }

  std::vector<std::size_t> order(p);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return a(x, x) > a(y, y); });

  EigenDecomposition out{std::vector<double>(p), Matrix(p, p)};
  for (std::size_t j = 0; j < p; ++j) {
    const std::size_t src = order[j];
    out.latents[j] = a(src, src);
    std::size_t big = 0;
    for (std::size_t r = 1; r < p; ++r)
      if (std::abs(v(r, src)) > std::abs(v(big, src))) big = r;
    const double sign = v(big, src) < 0 ? -1.0 : 1.0;
    for (std::size_t r = 0; r < p; ++r) out.vectors(r, j) = sign * v(r, src);
  }
  return out;
}

}  // namespace bpguard::stats
