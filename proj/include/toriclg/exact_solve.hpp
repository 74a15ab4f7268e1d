#pragma once

#include <optional>
#include <utility>

#include <Eigen/Core>

namespace toriclg {

/// Gaussian elimination for field scalars where any nonzero pivot is exact
/// (rationals). Returns nullopt when the matrix is singular.
template <typename Scalar>
std::optional<Eigen::Matrix<Scalar, Eigen::Dynamic, 1>> solve_exact(
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> a,
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> b) {
  const Eigen::Index n = a.rows();
  for (Eigen::Index col = 0; col < n; ++col) {
    Eigen::Index pivot = col;
    while (pivot < n && a(pivot, col) == Scalar(0)) ++pivot;
    if (pivot == n) return std::nullopt;
    if (pivot != col) {
      a.row(pivot).swap(a.row(col));
      std::swap(b(pivot), b(col));
    }
    for (Eigen::Index r = col + 1; r < n; ++r) {
      if (a(r, col) == Scalar(0)) continue;
      Scalar f = a(r, col) / a(col, col);
      for (Eigen::Index c = col; c < n; ++c) a(r, c) -= f * a(col, c);
      b(r) -= f * b(col);
    }
  }
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> x(n);
  for (Eigen::Index r = n - 1; r >= 0; --r) {
    Scalar s = b(r);
    for (Eigen::Index c = r + 1; c < n; ++c) s -= a(r, c) * x(c);
    x(r) = s / a(r, r);
  }
  return x;
}

template <typename Scalar>
Scalar determinant_exact(Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> a) {
  const Eigen::Index n = a.rows();
  Scalar det(1);
  for (Eigen::Index col = 0; col < n; ++col) {
    Eigen::Index pivot = col;
    while (pivot < n && a(pivot, col) == Scalar(0)) ++pivot;
    if (pivot == n) return Scalar(0);
    if (pivot != col) {
      a.row(pivot).swap(a.row(col));
      det = -det;
    }
    det *= a(col, col);
    for (Eigen::Index r = col + 1; r < n; ++r) {
      if (a(r, col) == Scalar(0)) continue;
      Scalar f = a(r, col) / a(col, col);
      for (Eigen::Index c = col; c < n; ++c) a(r, c) -= f * a(col, c);
    }
  }
  return det;
}

}  // namespace toriclg
