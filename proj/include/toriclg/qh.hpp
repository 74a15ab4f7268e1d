#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "toriclg/critsolve.hpp"
#include "toriclg/error.hpp"
#include "toriclg/polytope.hpp"
#include "toriclg/potential.hpp"

namespace toriclg {

/// Z^members = T^omega prod_i Z_{cone_support[i]}^{multipliers[i]}.
struct QSRRelation {
  std::vector<int> members;  // 0-based facet indices
  std::vector<int> cone_support;
  std::vector<int> multipliers;
  Rational omega;
};

/// Quantum Stanley-Reisner presentation in the variables Z_1..Z_m.
struct QHPresentation {
  int variables = 0;
  std::vector<QSRRelation> qsr_relations;
  /// Row i holds the coefficients of sum_j v_{j,i} Z_j = 0.
  std::vector<std::vector<int>> linear_relations;
};

QHPresentation qsr_relations(const ToricData& td);

/// Human-readable relations with 1-based variable names, e.g. "Z1 Z4 = T^{2/3}".
std::vector<std::string> render(const QHPresentation& qh);

/// Evaluates z^P - T^omega z^P' at random (y, t) using the monomials z_j at the
/// basepoint of `po`; returns the largest |residual| / |z^P|. `omega_shift` is
/// added to every omega.
double qsr_identity_check(const ToricData& td, const PotentialFunction& po, int trials,
                          std::uint64_t seed = 0, const Rational& omega_shift = Rational(0));

/// Multiplication matrices of the generators of a classical presentation at
/// T = t: x for projective space, (x1, x2) for the sphere products, (Z1, Z2)
/// or (Z3, Z4) for the blow-up depending on `basis`.
std::vector<Eigen::MatrixXcd> generator_matrices(const ToricData& td, double t, int basis = 0);

/// Matrix of c_1 acting on a classical presentation of the quantum cohomology
/// ring at T = t. `basis` selects between the hand-reduced monomial bases
/// (only the blow-up has a second one).
Eigen::MatrixXcd c1_matrix(const ToricData& td, double t, int basis = 0);

struct C1Check {
  std::vector<Complex> eigenvalues_qh;
  std::vector<Complex> critical_values;
  double residual = 0.0;  // largest pairwise gap relative to the largest modulus
  double tolerance = 1e-8;
  bool match = false;
};

/// Eigenvalue multiset of c_1 against the critical values of the potential at
/// T = t. Built-in models only; throws UnsupportedModel or NotMorse.
C1Check c1_eigen_check(const ToricData& td, double t, const SolverConfig& cfg = {}, int basis = 0,
                       double tol = 1e-8);

/// Sorted lexicographically by (re, im) after rounding to 1e-10.
std::vector<Complex> sorted_multiset(std::vector<Complex> values);

/// Largest pairwise gap of two sorted multisets, relative to their largest
/// modulus; +inf when the sizes differ.
double multiset_distance(const std::vector<Complex>& a, const std::vector<Complex>& b);

}  // namespace toriclg
