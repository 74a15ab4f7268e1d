#include "toriclg/qh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>

namespace toriclg {

namespace {

std::string monomial_name(const std::vector<int>& vars, const std::vector<int>& powers) {
  std::string out;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (!out.empty()) out += ' ';
    out += "Z" + std::to_string(vars[i] + 1);
    if (!powers.empty() && powers[i] != 1) out += "^" + std::to_string(powers[i]);
  }
  return out;
}

// Companion matrix of x^k = c.
Eigen::MatrixXcd companion(int k, Complex c) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(k, k);
  for (int i = 1; i < k; ++i) m(i, i - 1) = 1.0;
  m(0, k - 1) = c;
  return m;
}

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

// Columns are the images of the basis vectors.
Eigen::MatrixXcd columns(std::initializer_list<std::initializer_list<Complex>> cols) {
  Eigen::MatrixXcd m(static_cast<Eigen::Index>(cols.begin()->size()), static_cast<Eigen::Index>(cols.size()));
  Eigen::Index c = 0;
  for (const auto& col : cols) {
    Eigen::Index r = 0;
    for (Complex v : col) m(r++, c) = v;
    ++c;
  }
  return m;
}

// Blow-up relations after eliminating Z3 = Z2, Z4 = Z1 - Z2:
//   Z1^2 = Z1 Z2 + q1,  Z2^2 = q2 Z1 - q2 Z2,  q1 = T^{2/3}, q2 = T^{1/3}.
// Basis {1, Z1, Z2, Z1 Z2}; Z1 (Z1 Z2) = q1 q2 + q1 Z2, Z2 (Z1 Z2) = q1 q2.
Eigen::MatrixXcd blowup_z1(double q1, double q2) {
  return columns({{0, 1, 0, 0}, {q1, 0, 0, 1}, {0, 0, 0, 1}, {q1 * q2, 0, q1, 0}});
}
Eigen::MatrixXcd blowup_z2(double q1, double q2) {
  return columns({{0, 0, 1, 0}, {0, 0, 0, 1}, {0, q2, -q2, 0}, {q1 * q2, 0, 0, 0}});
}

// Same ring in the variables Z3 = Z2, Z4 = Z1 - Z2:
//   Z4^2 = q1 - Z3 Z4,  Z3^2 = q2 Z4.
// Basis {1, Z3, Z4, Z3 Z4}; Z3 (Z3 Z4) = q1 q2 - q2 Z3 Z4,
// Z4 (Z3 Z4) = -q1 q2 + q1 Z3 + q2 Z3 Z4.
Eigen::MatrixXcd blowup_z3(double q1, double q2) {
  return columns({{0, 1, 0, 0}, {0, 0, q2, 0}, {0, 0, 0, 1}, {q1 * q2, 0, 0, -q2}});
}
Eigen::MatrixXcd blowup_z4(double q1, double q2) {
  return columns({{0, 0, 1, 0}, {0, 0, 0, 1}, {q1, 0, 0, -1}, {-q1 * q2, q1, 0, q2}});
}

}  // namespace

QHPresentation qsr_relations(const ToricData& td) {
  QHPresentation qh;
  qh.variables = td.num_facets();
  for (auto& pc : primitive_collections(td)) {
    qh.qsr_relations.push_back({pc.members, pc.cone_support, pc.multipliers, pc.omega});
  }
  for (int i = 0; i < td.dim; ++i) {
    std::vector<int> row;
    for (const auto& f : td.facets) row.push_back(f.normal(i));
    qh.linear_relations.push_back(std::move(row));
  }
  return qh;
}

std::vector<std::string> render(const QHPresentation& qh) {
  std::vector<std::string> out;
  for (const auto& r : qh.qsr_relations) {
    std::string rhs = r.omega.is_zero() ? "" : "T^{" + r.omega.to_string() + "}";
    const std::string tail = monomial_name(r.cone_support, r.multipliers);
    if (!tail.empty()) rhs += (rhs.empty() ? "" : " ") + tail;
    out.push_back(monomial_name(r.members, {}) + " = " + (rhs.empty() ? "1" : rhs));
  }
  for (const auto& row : qh.linear_relations) {
    std::string lhs;
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (row[j] == 0) continue;
      const int a = std::abs(row[j]);
      if (lhs.empty()) {
        lhs = row[j] < 0 ? "-" : "";
      } else {
        lhs += row[j] < 0 ? " - " : " + ";
      }
      lhs += (a == 1 ? "" : std::to_string(a) + " ") + "Z" + std::to_string(j + 1);
    }
    out.push_back((lhs.empty() ? "0" : lhs) + " = 0");
  }
  return out;
}

double qsr_identity_check(const ToricData& td, const PotentialFunction& po, int trials, std::uint64_t seed,
                          const Rational& omega_shift) {
  if (po.dim() != td.dim) throw Error(ErrorCode::DimensionMismatch, "potential and model dimensions differ");
  const int m = td.num_facets();
  std::vector<LaurentPolynomial> z;
  for (int j = 0; j < m; ++j) z.push_back(monomial_z(td, j, po.basepoint));
  const auto qh = qsr_relations(td);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> log_mod(std::log(0.5), std::log(2.0));
  std::uniform_real_distribution<double> phase(0.0, 2 * std::numbers::pi);
  std::uniform_real_distribution<double> t_dist(0.01, 0.5);
  double worst = 0.0;
  for (int trial = 0; trial < trials; ++trial) {
    Eigen::VectorXcd y(td.dim);
    for (int i = 0; i < td.dim; ++i) y(i) = std::polar(std::exp(log_mod(rng)), phase(rng));
    const double t = t_dist(rng);
    std::vector<Complex> zv;
    for (const auto& poly : z) {
      const auto& [k, coeff] = *poly.terms().begin();
      Complex v = nv_eval(coeff, t);
      for (int i = 0; i < td.dim; ++i) v *= std::pow(y(i), k[i]);
      zv.push_back(v);
    }
    for (const auto& r : qh.qsr_relations) {
      Complex lhs = 1.0;
      for (int j : r.members) lhs *= zv[j];
      Complex rhs = std::pow(t, (r.omega + omega_shift).to_double());
      for (std::size_t i = 0; i < r.cone_support.size(); ++i) rhs *= std::pow(zv[r.cone_support[i]], r.multipliers[i]);
      worst = std::max(worst, std::abs(lhs - rhs) / std::abs(lhs));
    }
  }
  return worst;
}

std::vector<Eigen::MatrixXcd> generator_matrices(const ToricData& td, double t, int basis) {
  if (basis != 0 && td.family != ModelFamily::BlowupCP2) {
    throw Error(ErrorCode::OutOfRange, "only the blow-up has an alternative basis");
  }
  switch (td.family) {
    case ModelFamily::ProjectiveSpace:
      return {companion(td.dim + 1, t)};
    case ModelFamily::SphereProduct:
    case ModelFamily::Hirzebruch2: {
      const double a = td.alpha->to_double();
      const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(2, 2);
      return {kron(companion(2, std::pow(t, 1 - a)), id), kron(id, companion(2, std::pow(t, 1 + a)))};
    }
    case ModelFamily::BlowupCP2: {
      const double q1 = std::pow(t, 2.0 / 3.0), q2 = std::cbrt(t);
      if (basis == 0) return {blowup_z1(q1, q2), blowup_z2(q1, q2)};
      if (basis == 1) return {blowup_z3(q1, q2), blowup_z4(q1, q2)};
      throw Error(ErrorCode::OutOfRange, "blow-up basis must be 0 or 1");
    }
    case ModelFamily::Custom: break;
  }
  throw Error(ErrorCode::UnsupportedModel, "no classical presentation for model " + td.name);
}

Eigen::MatrixXcd c1_matrix(const ToricData& td, double t, int basis) {
  const auto g = generator_matrices(td, t, basis);
  switch (td.family) {
    case ModelFamily::ProjectiveSpace: return static_cast<double>(td.dim + 1) * g[0];
    case ModelFamily::BlowupCP2: return basis == 0 ? Eigen::MatrixXcd(2.0 * g[0] + g[1]) : Eigen::MatrixXcd(3.0 * g[0] + 2.0 * g[1]);
    default: return 2.0 * (g[0] + g[1]);
  }
}

std::vector<Complex> sorted_multiset(std::vector<Complex> values) {
  auto r = [](double v) { return std::round(v * 1e10) / 1e10; };
  std::sort(values.begin(), values.end(), [&](Complex a, Complex b) {
    if (r(a.real()) != r(b.real())) return r(a.real()) < r(b.real());
    return r(a.imag()) < r(b.imag());
  });
  return values;
}

double multiset_distance(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  double scale = 0.0, gap = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    scale = std::max({scale, std::abs(a[i]), std::abs(b[i])});
    gap = std::max(gap, std::abs(a[i] - b[i]));
  }
  return scale > 0.0 ? gap / scale : gap;
}

C1Check c1_eigen_check(const ToricData& td, double t, const SolverConfig& cfg, int basis, double tol) {
  const Eigen::MatrixXcd c1 = c1_matrix(td, t, basis);
  const auto kind = td.family == ModelFamily::Hirzebruch2 ? PotentialKind::F2Exact : PotentialKind::LeadingOrder;
  const auto po = build_potential(td, td.barycenter(), {}, kind);
  SolverConfig config = cfg;
  if (std::find(config.t_samples.begin(), config.t_samples.end(), t) == config.t_samples.end()) {
    config.t_samples.push_back(t);
    std::sort(config.t_samples.begin(), config.t_samples.end());
  }
  const auto points = solve_critical(po, config);
  jacobian_rank(points);

  C1Check out;
  out.tolerance = tol;
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(c1, false);
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) out.eigenvalues_qh.push_back(es.eigenvalues()(i));
  for (const auto& p : points) {
    if (p.interior) out.critical_values.push_back(p.crit_value.at(t));
  }
  out.eigenvalues_qh = sorted_multiset(out.eigenvalues_qh);
  out.critical_values = sorted_multiset(out.critical_values);
  out.residual = multiset_distance(out.eigenvalues_qh, out.critical_values);
  out.match = out.residual <= tol;
  return out;
}

}  // namespace toriclg
