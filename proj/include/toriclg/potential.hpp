#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "toriclg/novikov.hpp"
#include "toriclg/polytope.hpp"

namespace toriclg {

using Exponent = std::vector<int>;

/// Laurent polynomial in y_1..y_n with Novikov coefficients; zero
/// coefficients are never stored.
class LaurentPolynomial {
 public:
  explicit LaurentPolynomial(int n = 0) : n_(n) {}

  int dim() const { return n_; }
  const std::map<Exponent, Series>& terms() const { return terms_; }

  /// Adds `coeff * y^k`, merging with an existing monomial.
  void add(const Exponent& k, const Series& coeff);

 private:
  int n_;
  std::map<Exponent, Series> terms_;
};

enum class PotentialKind { LeadingOrder, F2Exact, Custom };

std::string to_string(PotentialKind kind);

struct PotentialFunction {
  std::optional<ToricData> toric;
  RationalVector basepoint;  // coordinates are y(u)_i = T^{-u_i} y_i
  LaurentPolynomial poly;
  PotentialKind kind = PotentialKind::Custom;
  std::vector<BulkTerm> bulk;

  int dim() const { return poly.dim(); }
};

/// z_j = T^{l_j(u)} y(u)^{v_j}; throws OutsideP when u is not in P.
LaurentPolynomial monomial_z(const ToricData& td, int j, const RationalVector& u);

/// sum_j e^{w_j} z_j, or the F2 closed form for PotentialKind::F2Exact.
PotentialFunction build_potential(const ToricData& td, const RationalVector& u,
                                  std::span<const BulkTerm> bulk = {},
                                  PotentialKind kind = PotentialKind::LeadingOrder);

/// Hand-written potential in absolute coordinates; `toric` (optional)
/// supplies the polytope for interior filtering.
PotentialFunction custom_potential(int n, const std::vector<std::pair<Exponent, Series>>& terms,
                                   std::optional<ToricData> toric = std::nullopt);

/// Parses {"dim": n, "terms": [{"powers": [..], "coeff": "<series literal>"}]}.
PotentialFunction load_custom_potential_json(std::string_view json_text,
                                             std::optional<ToricData> toric = std::nullopt);

/// The same function written in the coordinates y(u') (coefficients pick up T^{<u'-u,k>}).
PotentialFunction rebase(const PotentialFunction& po, const RationalVector& new_basepoint);

/// y_i d/dy_i of the potential, i = 1..n.
std::vector<LaurentPolynomial> log_derivatives(const PotentialFunction& po);

/// Potential specialized at T = t: exponent rows and complex coefficients.
/// Evaluation happens in log coordinates x = log y.
struct NumericPotential {
  Eigen::MatrixXd exponents;      // one row per monomial
  Eigen::VectorXcd coefficients;  // nv_eval at t

  NumericPotential(const LaurentPolynomial& poly, double t);

  Eigen::Index dim() const { return exponents.cols(); }
  /// Individual monomial values c_k e^{<k,x>}.
  Eigen::VectorXcd monomials(const Eigen::VectorXcd& x) const;
  Complex value(const Eigen::VectorXcd& x) const;
  Eigen::VectorXcd gradient(const Eigen::VectorXcd& x) const;
  Eigen::MatrixXcd hessian(const Eigen::VectorXcd& x) const;
};

/// Log coordinates of y; throws ZeroCoordinate on a vanishing entry.
Eigen::VectorXcd log_coordinates(const Eigen::VectorXcd& y);

Complex eval_potential(const PotentialFunction& po, const Eigen::VectorXcd& y, double t);

/// H_ij = sum_k k_i k_j c_k(t) y^k, the Hessian in x = log y.
Eigen::MatrixXcd hessian_x(const PotentialFunction& po, const Eigen::VectorXcd& y, double t);

/// Substitutes series values for y_i into a Laurent polynomial.
Series substitute(const LaurentPolynomial& poly, std::span<const Series> y);

}  // namespace toriclg
