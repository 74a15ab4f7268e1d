#include "toriclg/potential.hpp"

#include <json.hpp>

#include "toriclg/error.hpp"

namespace toriclg {

namespace {

Rational dot(const RationalVector& u, const Exponent& k) {
  Rational s(0);
  for (std::size_t i = 0; i < k.size(); ++i) s += u(static_cast<Eigen::Index>(i)) * Rational(k[i]);
  return s;
}

Exponent to_exponent(const Eigen::VectorXi& v) { return Exponent(v.data(), v.data() + v.size()); }

std::vector<Complex> bulk_factors(const ToricData& td, std::span<const BulkTerm> bulk) {
  std::vector<Complex> w(td.num_facets(), Complex(0.0, 0.0));
  for (const auto& b : bulk) {
    if (b.facet < 0 || b.facet >= td.num_facets()) {
      throw Error(ErrorCode::Malformed, "bulk facet index " + std::to_string(b.facet + 1) + " out of range");
    }
    w[b.facet] += b.w;
  }
  return w;
}

}  // namespace

std::string to_string(PotentialKind kind) {
  switch (kind) {
    case PotentialKind::LeadingOrder: return "leading-order";
    case PotentialKind::F2Exact: return "f2-exact";
    case PotentialKind::Custom: return "custom";
  }
  return "custom";
}

void LaurentPolynomial::add(const Exponent& k, const Series& coeff) {
  if (static_cast<int>(k.size()) != n_) {
    throw Error(ErrorCode::DimensionMismatch, "monomial exponent has wrong length");
  }
  auto it = terms_.find(k);
  if (it == terms_.end()) {
    if (!coeff.is_zero()) terms_.emplace(k, coeff);
    return;
  }
  it->second = nv_add(it->second, coeff);
  if (it->second.is_zero()) terms_.erase(it);
}

LaurentPolynomial monomial_z(const ToricData& td, int j, const RationalVector& u) {
  if (u.size() != td.dim) throw Error(ErrorCode::DimensionMismatch, "basepoint dimension");
  for (int i = 0; i < td.num_facets(); ++i) {
    if (td.affine(i, u) < Rational(0)) {
      throw Error(ErrorCode::OutsideP, "basepoint " + to_string(u) + " violates facet " + std::to_string(i + 1));
    }
  }
  LaurentPolynomial z(td.dim);
  z.add(to_exponent(td.facets[j].normal), Series::monomial(1.0, td.affine(j, u)));
  return z;
}

PotentialFunction build_potential(const ToricData& td, const RationalVector& u,
                                  std::span<const BulkTerm> bulk, PotentialKind kind) {
  if (u.size() != td.dim) throw Error(ErrorCode::DimensionMismatch, "basepoint dimension");
  if (!interior_test(td, u, Rational(0))) {
    throw Error(ErrorCode::NotInterior, "basepoint " + to_string(u) + " is not in the interior of P");
  }
  if (kind == PotentialKind::F2Exact && td.family != ModelFamily::Hirzebruch2) {
    throw Error(ErrorCode::F2Required, "f2-exact potential requested for model " + td.name);
  }
  if (kind == PotentialKind::Custom) {
    throw Error(ErrorCode::Malformed, "build_potential builds toric potentials only");
  }
  const auto w = bulk_factors(td, bulk);

  PotentialFunction po;
  po.toric = td;
  po.basepoint = u;
  po.kind = kind;
  po.bulk.assign(bulk.begin(), bulk.end());
  po.poly = LaurentPolynomial(td.dim);
  for (int j = 0; j < td.num_facets(); ++j) {
    const Rational ell = td.affine(j, u);
    Series coeff = nv_mul(nv_exp(Series::constant(w[j]).with_cutoff(kDefaultOrder)),
                          Series::monomial(1.0, ell));
    if (kind == PotentialKind::F2Exact && j == 3) {
      // The divisor with c_1 = 0 picks up the (1 + T^{2 alpha}) correction.
      Series correction = nv_add(Series::constant(1.0), Series::monomial(1.0, Rational(2) * *td.alpha));
      coeff = nv_mul(coeff, correction);
    }
    po.poly.add(to_exponent(td.facets[j].normal), coeff);
  }
  return po;
}

PotentialFunction custom_potential(int n, const std::vector<std::pair<Exponent, Series>>& terms,
                                   std::optional<ToricData> toric) {
  if (n < 1) throw Error(ErrorCode::Malformed, "dimension must be positive");
  if (terms.empty()) throw Error(ErrorCode::Malformed, "custom potential needs at least one term");
  if (toric && toric->dim != n) throw Error(ErrorCode::DimensionMismatch, "toric model dimension");
  PotentialFunction po;
  po.toric = std::move(toric);
  po.basepoint = RationalVector::Constant(n, Rational(0));
  po.kind = PotentialKind::Custom;
  po.poly = LaurentPolynomial(n);
  for (const auto& [k, c] : terms) {
    if (static_cast<int>(k.size()) != n) throw Error(ErrorCode::Malformed, "monomial powers have wrong length");
    po.poly.add(k, c);
  }
  if (po.poly.terms().empty()) throw Error(ErrorCode::Malformed, "all coefficients vanish");
  return po;
}

PotentialFunction load_custom_potential_json(std::string_view json_text, std::optional<ToricData> toric) {
  try {
    auto doc = nlohmann::json::parse(json_text);
    const int n = doc.at("dim").get<int>();
    std::vector<std::pair<Exponent, Series>> terms;
    for (const auto& t : doc.at("terms")) {
      terms.emplace_back(t.at("powers").get<Exponent>(), Series::parse(t.at("coeff").get<std::string>()));
    }
    return custom_potential(n, terms, std::move(toric));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Malformed, std::string("custom potential document: ") + e.what());
  }
}

PotentialFunction rebase(const PotentialFunction& po, const RationalVector& new_basepoint) {
  if (new_basepoint.size() != po.dim()) throw Error(ErrorCode::DimensionMismatch, "basepoint dimension");
  PotentialFunction out = po;
  out.basepoint = new_basepoint;
  out.poly = LaurentPolynomial(po.dim());
  const RationalVector delta = new_basepoint - po.basepoint;
  for (const auto& [k, c] : po.poly.terms()) out.poly.add(k, c.shifted(1.0, dot(delta, k)));
  return out;
}

std::vector<LaurentPolynomial> log_derivatives(const PotentialFunction& po) {
  std::vector<LaurentPolynomial> out;
  for (int i = 0; i < po.dim(); ++i) {
    LaurentPolynomial d(po.dim());
    for (const auto& [k, c] : po.poly.terms()) {
      if (k[i] != 0) d.add(k, nv_scale(c, static_cast<double>(k[i])));
    }
    out.push_back(std::move(d));
  }
  return out;
}

NumericPotential::NumericPotential(const LaurentPolynomial& poly, double t) {
  const auto m = static_cast<Eigen::Index>(poly.terms().size());
  exponents.resize(m, poly.dim());
  coefficients.resize(m);
  Eigen::Index r = 0;
  for (const auto& [k, c] : poly.terms()) {
    for (int i = 0; i < poly.dim(); ++i) exponents(r, i) = k[i];
    coefficients(r) = nv_eval(c, t);
    ++r;
  }
}

Eigen::VectorXcd NumericPotential::monomials(const Eigen::VectorXcd& x) const {
  Eigen::VectorXcd phase = exponents.cast<Complex>() * x;
  return coefficients.cwiseProduct(phase.array().exp().matrix());
}

Complex NumericPotential::value(const Eigen::VectorXcd& x) const { return monomials(x).sum(); }

Eigen::VectorXcd NumericPotential::gradient(const Eigen::VectorXcd& x) const {
  return exponents.cast<Complex>().transpose() * monomials(x);
}

Eigen::MatrixXcd NumericPotential::hessian(const Eigen::VectorXcd& x) const {
  const Eigen::MatrixXcd k = exponents.cast<Complex>();
  Eigen::MatrixXcd h = k.transpose() * monomials(x).asDiagonal() * k;
  // exact symmetry
  return (h + h.transpose()) / 2.0;
}

Eigen::VectorXcd log_coordinates(const Eigen::VectorXcd& y) {
  Eigen::VectorXcd x(y.size());
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    if (y(i) == Complex(0.0, 0.0)) {
      throw Error(ErrorCode::ZeroCoordinate, "coordinate y_" + std::to_string(i + 1) + " is zero");
    }
    x(i) = std::log(y(i));
  }
  return x;
}

Complex eval_potential(const PotentialFunction& po, const Eigen::VectorXcd& y, double t) {
  if (y.size() != po.dim()) throw Error(ErrorCode::DimensionMismatch, "point dimension");
  return NumericPotential(po.poly, t).value(log_coordinates(y));
}

Eigen::MatrixXcd hessian_x(const PotentialFunction& po, const Eigen::VectorXcd& y, double t) {
  if (y.size() != po.dim()) throw Error(ErrorCode::DimensionMismatch, "point dimension");
  return NumericPotential(po.poly, t).hessian(log_coordinates(y));
}

Series substitute(const LaurentPolynomial& poly, std::span<const Series> y) {
  if (static_cast<int>(y.size()) != poly.dim()) throw Error(ErrorCode::DimensionMismatch, "substitution arity");
  std::optional<Series> sum;
  double scale = 0.0;
  for (const auto& [k, c] : poly.terms()) {
    Series term = c;
    for (int i = 0; i < poly.dim(); ++i) {
      if (k[i] != 0) term = nv_mul(term, nv_pow(y[i], k[i]));
    }
    scale = std::max(scale, term.max_abs());
    sum = sum ? nv_add(*sum, term) : term;
  }
  return sum ? sum->chopped(scale) : Series();
}

}  // namespace toriclg
