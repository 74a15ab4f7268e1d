#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>
#include <Eigen/LU>
#include <Eigen/SVD>

#include "toriclg/critsolve.hpp"
#include "toriclg/error.hpp"
#include "toriclg/novikov.hpp"

namespace toriclg {

/// Finite-dimensional Z/2-graded unital Frobenius algebra in a fixed basis.
/// `n` is the dimension the pairing degrees refer to: <e_I, e_J> vanishes
/// unless deg I + deg J = n mod 2.
template <class Scalar>
struct FrobeniusAlgebraT {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  int n = 0;
  std::vector<int> degrees;
  Matrix pairing;
  std::vector<Scalar> structure;  // c^K_{IJ} at (I * dim + J) * dim + K
  int unit = 0;

  int dim() const { return static_cast<int>(degrees.size()); }

  Scalar& c(int i, int j, int k) { return structure[(static_cast<std::size_t>(i) * dim() + j) * dim() + k]; }
  const Scalar& c(int i, int j, int k) const {
    return structure[(static_cast<std::size_t>(i) * dim() + j) * dim() + k];
  }

  Vector multiply(const Vector& x, const Vector& y) const {
    Vector out = Vector::Zero(dim());
    for (int i = 0; i < dim(); ++i) {
      if (x(i) == Scalar(0)) continue;
      for (int j = 0; j < dim(); ++j) {
        if (y(j) == Scalar(0)) continue;
        for (int k = 0; k < dim(); ++k) out(k) += x(i) * y(j) * c(i, j, k);
      }
    }
    return out;
  }
};

using FrobeniusAlgebra = FrobeniusAlgebraT<Complex>;

/// Subsets of {1..n} as bitmasks, ordered by (size, lexicographic).
inline std::vector<unsigned> clifford_basis(int n) {
  std::vector<unsigned> masks;
  for (unsigned m = 0; m < (1u << n); ++m) masks.push_back(m);
  auto elements = [n](unsigned m) {
    std::vector<int> v;
    for (int i = 0; i < n; ++i) {
      if (m & (1u << i)) v.push_back(i);
    }
    return v;
  };
  std::sort(masks.begin(), masks.end(), [&](unsigned a, unsigned b) {
    if (std::popcount(a) != std::popcount(b)) return std::popcount(a) < std::popcount(b);
    return elements(a) < elements(b);
  });
  return masks;
}

/// #{(i, j) in a x b : i > j}
inline int inversions(unsigned a, unsigned b) {
  int count = 0;
  for (unsigned rest = a; rest; rest &= rest - 1) {
    const int i = std::countr_zero(rest);
    count += std::popcount(b & ((1u << i) - 1u));
  }
  return count;
}

/// Cliff(n; d): X_i X_j = -X_j X_i, X_i^2 = d_i, pairing <X_I, X_{I^c}> = (-1)^{*(I)}.
template <class Scalar>
FrobeniusAlgebraT<Scalar> clifford_algebra(const std::vector<Scalar>& d) {
  const int n = static_cast<int>(d.size());
  if (n < 1 || n > 6) throw Error(ErrorCode::Malformed, "Clifford rank must be between 1 and 6");
  for (int i = 0; i < n; ++i) {
    if (d[i] == Scalar(0)) throw Error(ErrorCode::ZeroD, "d_" + std::to_string(i + 1) + " is zero");
  }
  const auto masks = clifford_basis(n);
  const int dim = static_cast<int>(masks.size());
  std::vector<int> index(dim);
  for (int i = 0; i < dim; ++i) index[masks[i]] = i;

  FrobeniusAlgebraT<Scalar> alg;
  alg.n = n;
  alg.unit = 0;
  for (unsigned m : masks) alg.degrees.push_back(std::popcount(m) % 2);
  alg.structure.assign(static_cast<std::size_t>(dim) * dim * dim, Scalar(0));
  alg.pairing = FrobeniusAlgebraT<Scalar>::Matrix::Zero(dim, dim);
  const unsigned full = (1u << n) - 1u;
  for (int a = 0; a < dim; ++a) {
    for (int b = 0; b < dim; ++b) {
      const unsigned I = masks[a], J = masks[b];
      Scalar coeff = inversions(I, J) % 2 ? Scalar(-1) : Scalar(1);
      for (unsigned common = I & J; common; common &= common - 1) coeff *= d[std::countr_zero(common)];
      alg.c(a, b, index[I ^ J]) = coeff;
      if ((I ^ J) == full && (I & J) == 0u) alg.pairing(a, b) = inversions(I, J) % 2 ? Scalar(-1) : Scalar(1);
    }
  }
  return alg;
}

struct AlgebraCheck {
  double condition = 0.0;    // of the pairing matrix
  double associativity = 0.0;
  double frobenius = 0.0;
};

/// Checks the Frobenius algebra axioms; throws InvalidAlgebra or SingularPairing.
template <class Scalar>
AlgebraCheck validate_algebra(const FrobeniusAlgebraT<Scalar>& alg, double tol = 1e-9) {
  const int dim = alg.dim();
  if (dim < 1 || alg.pairing.rows() != dim || alg.pairing.cols() != dim ||
      alg.structure.size() != static_cast<std::size_t>(dim) * dim * dim) {
    throw Error(ErrorCode::InvalidAlgebra, "inconsistent basis, pairing and structure sizes");
  }
  if (alg.unit < 0 || alg.unit >= dim || alg.degrees[alg.unit] != 0) {
    throw Error(ErrorCode::InvalidAlgebra, "unit must be a degree-0 basis element");
  }
  for (int d : alg.degrees) {
    if (d != 0 && d != 1) throw Error(ErrorCode::InvalidAlgebra, "degrees are taken mod 2");
  }
  double scale = 0.0;
  for (const auto& v : alg.structure) scale = std::max(scale, static_cast<double>(std::abs(v)));
  const double gscale = alg.pairing.cwiseAbs().maxCoeff();

  AlgebraCheck out;
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      if (alg.pairing(i, j) != Scalar(0) && (alg.degrees[i] + alg.degrees[j] + alg.n) % 2 != 0) {
        throw Error(ErrorCode::InvalidAlgebra, "pairing does not respect the grading");
      }
      for (int k = 0; k < dim; ++k) {
        const Scalar delta = j == k ? Scalar(1) : Scalar(0);
        if (alg.c(alg.unit, j, k) != delta || alg.c(j, alg.unit, k) != delta) {
          throw Error(ErrorCode::InvalidAlgebra, "unit law fails");
        }
      }
    }
  }
  Eigen::JacobiSVD<typename FrobeniusAlgebraT<Scalar>::Matrix> svd(alg.pairing);
  const auto& sv = svd.singularValues();
  if (sv(dim - 1) <= 1e-14 * sv(0)) throw Error(ErrorCode::SingularPairing, "pairing matrix is singular");
  out.condition = static_cast<double>(sv(0) / sv(dim - 1));

  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      for (int k = 0; k < dim; ++k) {
        for (int l = 0; l < dim; ++l) {
          Scalar lhs(0), rhs(0);
          for (int m = 0; m < dim; ++m) {
            lhs += alg.c(i, j, m) * alg.c(m, k, l);
            rhs += alg.c(j, k, m) * alg.c(i, m, l);
          }
          out.associativity = std::max(out.associativity, static_cast<double>(std::abs(lhs - rhs)));
        }
        // <e_i e_j, e_k> - <e_i, e_j e_k>
        Scalar lhs(0), rhs(0);
        for (int m = 0; m < dim; ++m) {
          lhs += alg.c(i, j, m) * alg.pairing(m, k);
          rhs += alg.pairing(i, m) * alg.c(j, k, m);
        }
        out.frobenius = std::max(out.frobenius, static_cast<double>(std::abs(lhs - rhs)));
      }
    }
  }
  out.associativity /= std::max(scale * scale, 1e-300);
  out.frobenius /= std::max(scale * gscale, 1e-300);
  if (out.associativity > tol) throw Error(ErrorCode::InvalidAlgebra, "product is not associative");
  if (out.frobenius > tol) throw Error(ErrorCode::InvalidAlgebra, "pairing is not invariant");
  return out;
}

namespace detail {

template <class Scalar>
typename FrobeniusAlgebraT<Scalar>::Matrix inverse_pairing(const FrobeniusAlgebraT<Scalar>& alg) {
  Eigen::FullPivLU<typename FrobeniusAlgebraT<Scalar>::Matrix> lu(alg.pairing);
  if (!lu.isInvertible()) throw Error(ErrorCode::SingularPairing, "pairing matrix is singular");
  return lu.inverse();
}

template <class Scalar>
int z_sign(const FrobeniusAlgebraT<Scalar>& alg, int i1, int j2) {
  return (alg.degrees[i1] * alg.degrees[j2] + alg.n * (alg.n - 1) / 2) % 2 ? -1 : 1;
}

}  // namespace detail

/// Z(C) = sum (-1)^* g^{I1 J1} g^{I2 J2} g^{I3 0} g^{J3 0} <e_I1 e_I2, e_I3> <e_J1 e_J2, e_J3>
/// with * = deg e_I1 deg e_J2 + n(n-1)/2. The I3 and J3 sums are contracted first.
template <class Scalar>
Scalar trace_Z(const FrobeniusAlgebraT<Scalar>& alg) {
  const int dim = alg.dim();
  const auto ginv = detail::inverse_pairing(alg);
  // B(I1, I2) = sum_{I3} g^{I3 0} <e_I1 e_I2, e_I3>
  typename FrobeniusAlgebraT<Scalar>::Matrix b = FrobeniusAlgebraT<Scalar>::Matrix::Zero(dim, dim);
  for (int i1 = 0; i1 < dim; ++i1) {
    for (int i2 = 0; i2 < dim; ++i2) {
      for (int k = 0; k < dim; ++k) {
        const Scalar ck = alg.c(i1, i2, k);
        if (ck == Scalar(0)) continue;
        for (int i3 = 0; i3 < dim; ++i3) b(i1, i2) += ginv(i3, alg.unit) * ck * alg.pairing(k, i3);
      }
    }
  }
  Scalar z(0);
  for (int i1 = 0; i1 < dim; ++i1) {
    for (int j1 = 0; j1 < dim; ++j1) {
      if (ginv(i1, j1) == Scalar(0)) continue;
      for (int i2 = 0; i2 < dim; ++i2) {
        if (b(i1, i2) == Scalar(0)) continue;
        for (int j2 = 0; j2 < dim; ++j2) {
          if (ginv(i2, j2) == Scalar(0) || b(j1, j2) == Scalar(0)) continue;
          z += Scalar(detail::z_sign(alg, i1, j2)) * ginv(i1, j1) * ginv(i2, j2) * b(i1, i2) * b(j1, j2);
        }
      }
    }
  }
  return z;
}

/// The same sum evaluated term by term over all six indices (small algebras only).
template <class Scalar>
Scalar trace_Z_bruteforce(const FrobeniusAlgebraT<Scalar>& alg) {
  const int dim = alg.dim();
  const auto ginv = detail::inverse_pairing(alg);
  // <e_a e_b, e_c>
  std::vector<Scalar> triple(static_cast<std::size_t>(dim) * dim * dim, Scalar(0));
  for (int a = 0; a < dim; ++a)
    for (int b = 0; b < dim; ++b)
      for (int c = 0; c < dim; ++c)
        for (int k = 0; k < dim; ++k) triple[(a * dim + b) * dim + c] += alg.c(a, b, k) * alg.pairing(k, c);
  auto paired = [&](int a, int b, int c) { return triple[(a * dim + b) * dim + c]; };
  Scalar z(0);
  for (int i1 = 0; i1 < dim; ++i1)
    for (int i2 = 0; i2 < dim; ++i2)
      for (int i3 = 0; i3 < dim; ++i3)
        for (int j1 = 0; j1 < dim; ++j1)
          for (int j2 = 0; j2 < dim; ++j2)
            for (int j3 = 0; j3 < dim; ++j3) {
              z += Scalar(detail::z_sign(alg, i1, j2)) * ginv(i1, j1) * ginv(i2, j2) * ginv(i3, alg.unit) *
                   ginv(j3, alg.unit) * paired(i1, i2, i3) * paired(j1, j2, j3);
            }
  return z;
}

/// New basis e'_I = sum_J p(J, I) e_J. `p` must preserve degrees and fix the unit.
template <class Scalar>
FrobeniusAlgebraT<Scalar> change_basis(const FrobeniusAlgebraT<Scalar>& alg,
                                       const typename FrobeniusAlgebraT<Scalar>::Matrix& p) {
  const int dim = alg.dim();
  if (p.rows() != dim || p.cols() != dim) throw Error(ErrorCode::DimensionMismatch, "basis change size");
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      if (p(i, j) != Scalar(0) && alg.degrees[i] != alg.degrees[j]) {
        throw Error(ErrorCode::InvalidAlgebra, "basis change mixes degrees");
      }
      const Scalar unit_col = i == alg.unit ? Scalar(1) : Scalar(0);
      if (j == alg.unit && p(i, j) != unit_col) throw Error(ErrorCode::InvalidAlgebra, "basis change moves the unit");
    }
  }
  Eigen::FullPivLU<typename FrobeniusAlgebraT<Scalar>::Matrix> lu(p);
  if (!lu.isInvertible()) throw Error(ErrorCode::InvalidAlgebra, "basis change is singular");
  const auto pinv = lu.inverse();

  FrobeniusAlgebraT<Scalar> out = alg;
  out.pairing = p.transpose() * alg.pairing * p;
  out.structure.assign(alg.structure.size(), Scalar(0));
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      typename FrobeniusAlgebraT<Scalar>::Vector prod = alg.multiply(p.col(i), p.col(j));
      typename FrobeniusAlgebraT<Scalar>::Vector coords = pinv * prod;
      for (int k = 0; k < dim; ++k) out.c(i, j, k) = coords(k);
    }
  }
  // the unit law survives exactly
  for (int j = 0; j < dim; ++j) {
    for (int k = 0; k < dim; ++k) {
      out.c(out.unit, j, k) = j == k ? Scalar(1) : Scalar(0);
      out.c(j, out.unit, k) = j == k ? Scalar(1) : Scalar(0);
    }
  }
  return out;
}

/// Clifford model at a nondegenerate critical point: d_i = (Hessian eigenvalues) / 2,
/// sorted by modulus then argument. `t` must be one of the point's samples.
FrobeniusAlgebra floer_algebra(const CriticalPoint& point, const PotentialFunction& po, double t);

struct ResiduePairing {
  Complex simplified;  // 1 / det Hess
  Complex z_based;     // 1 / Z
};

ResiduePairing residue_pairings(const CriticalPoint& point, const PotentialFunction& po, double t);

/// |sum 1/Z| / max |1/Z| over the interior points; throws NotMorse.
double sum_formula_check(const std::vector<CriticalPoint>& points, const PotentialFunction& po, double t);

/// Row 0 is the unit (all ones); row j + 1 is the facet-j term of the
/// potential evaluated at each interior point (columns).
Eigen::MatrixXcd ks_matrix(const PotentialFunction& po, const std::vector<CriticalPoint>& points, double t);

/// Projective space only: entry (l, l') = sum_k ks(f_l) ks(f_l') / det Hess_k with
/// ks(f_l) = ks(f_1)^l; expected to be the antidiagonal identity.
Eigen::MatrixXcd pd_check(const PotentialFunction& po, const std::vector<CriticalPoint>& points, double t);

std::string algebra_to_json(const FrobeniusAlgebra& alg);
/// Parses {"n", "degrees", "pairing", "structure": [[I, J, K, [re, im]]], "unit"} and validates.
FrobeniusAlgebra algebra_from_json(std::string_view text);

}  // namespace toriclg
