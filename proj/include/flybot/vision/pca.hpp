#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "flybot/error.hpp"
#include "flybot/matrix.hpp"

namespace flybot::vision {

struct EigenDecomposition {
  std::vector<double> values;  // descending
  Matrix vectors;              // one eigenvector per row, same order as values
};

/// Cyclic Jacobi eigen-decomposition of a symmetric matrix. Sweeps until the
/// off-diagonal Frobenius norm drops below `tolerance` times the total norm.
inline EigenDecomposition symmetric_eigen(Matrix a, double tolerance = 1e-12, int max_sweeps = 100) {
  const std::size_t n = a.rows();
  Matrix v(n, n);
  for (std::size_t i = 0; i < n; ++i) v(i, i) = 1.0;

  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) s += a(i, j) * a(i, j);
    return std::sqrt(s);
  };
  double total = 0.0;
  for (double x : a.data()) total += x * x;
  total = std::sqrt(total);

  for (int sweep = 0; sweep < max_sweeps && off_norm() > tolerance * total; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i) > a(j, j); });
  EigenDecomposition out{std::vector<double>(n), Matrix(n, n)};
  for (std::size_t r = 0; r < n; ++r) {
    out.values[r] = a(order[r], order[r]);
    for (std::size_t k = 0; k < n; ++k) out.vectors(r, k) = v(k, order[r]);
  }
  return out;
}

struct PcaResult {
  Matrix components;  // k x dim, orthonormal rows
  Matrix projected;   // samples x k
  std::vector<double> mean;
  std::vector<double> variances;  // eigenvalues of the kept components
};

/// Projects mean-centered rows of `vectors` onto the top-k covariance
/// eigenvectors. Each component's sign is fixed so its largest-magnitude
/// entry is positive.
inline PcaResult pca_project(const Matrix& vectors, std::size_t k) {
  const std::size_t m = vectors.rows();
  const std::size_t dim = vectors.cols();
  if (m < 2) throw Error(ErrorCode::InsufficientData, "PCA needs at least two vectors");
  if (k < 1 || k > dim) throw Error(ErrorCode::BadComponentCount, "k must be in [1, dim]");

  std::vector<double> mean(dim, 0.0);
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t c = 0; c < dim; ++c) mean[c] += vectors(r, c);
  for (double& v : mean) v /= static_cast<double>(m);

  Matrix centered(m, dim);
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t c = 0; c < dim; ++c) centered(r, c) = vectors(r, c) - mean[c];

  Matrix cov(dim, dim);
  bool any = false;
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = i; j < dim; ++j) {
      double s = 0.0;
      for (std::size_t r = 0; r < m; ++r) s += centered(r, i) * centered(r, j);
      s /= static_cast<double>(m - 1);
      cov(i, j) = cov(j, i) = s;
      any = any || s != 0.0;
    }
  }
  if (!any) throw Error(ErrorCode::ZeroVariance, "all vectors are identical");

  const EigenDecomposition eig = symmetric_eigen(cov);
  PcaResult out{Matrix(k, dim), Matrix(m, k), mean, {}};
  for (std::size_t i = 0; i < k; ++i) {
    const auto row = eig.vectors.row(i);
    std::size_t pivot = 0;
    for (std::size_t c = 1; c < dim; ++c)
      if (std::abs(row[c]) > std::abs(row[pivot])) pivot = c;
    const double sign = row[pivot] < 0.0 ? -1.0 : 1.0;
    for (std::size_t c = 0; c < dim; ++c) out.components(i, c) = sign * row[c];
    out.variances.push_back(eig.values[i]);
  }
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t i = 0; i < k; ++i) {
      double s = 0.0;
      for (std::size_t c = 0; c < dim; ++c) s += centered(r, c) * out.components(i, c);
      out.projected(r, i) = s;
    }
  }
  return out;
}

}  // namespace flybot::vision
