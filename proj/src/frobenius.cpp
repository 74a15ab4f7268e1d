#include "toriclg/frobenius.hpp"

#include <Eigen/Eigenvalues>
#include <json.hpp>

namespace toriclg {

namespace {

const Eigen::VectorXcd& sample_at(const CriticalPoint& point, double t) {
  auto it = point.samples.find(t);
  if (it == point.samples.end()) {
    throw Error(ErrorCode::OutOfRange, "t = " + std::to_string(t) + " is not a sample of the critical point");
  }
  return it->second;
}

Eigen::MatrixXcd hessian_at(const CriticalPoint& point, const PotentialFunction& po, double t) {
  return hessian_x(absolute(po), sample_at(point, t), t);
}

std::vector<const CriticalPoint*> morse_interior(const std::vector<CriticalPoint>& points) {
  std::vector<const CriticalPoint*> out;
  for (const auto& p : points) {
    if (!p.interior) continue;
    if (!p.nondegenerate) throw Error(ErrorCode::NotMorse, "an interior critical point is degenerate");
    out.push_back(&p);
  }
  return out;
}

double rounded(double v) { return std::round(v * 1e9) / 1e9; }

}  // namespace

FrobeniusAlgebra floer_algebra(const CriticalPoint& point, const PotentialFunction& po, double t) {
  if (!point.nondegenerate) throw Error(ErrorCode::Degenerate, "critical point is degenerate");
  const Eigen::MatrixXcd h = hessian_at(point, po, t);
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(h, false);
  if (es.info() != Eigen::Success) throw Error(ErrorCode::Degenerate, "Hessian eigen-decomposition failed");
  std::vector<Complex> ev(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  const double top = std::abs(*std::max_element(ev.begin(), ev.end(), [](Complex a, Complex b) {
    return std::abs(a) < std::abs(b);
  }));
  std::sort(ev.begin(), ev.end(), [](Complex a, Complex b) {
    const double ma = rounded(std::abs(a)), mb = rounded(std::abs(b));
    if (ma != mb) return ma < mb;
    return rounded(std::arg(a)) < rounded(std::arg(b));
  });
  std::vector<Complex> d;
  for (Complex e : ev) {
    if (std::abs(e) <= 1e-12 * top) throw Error(ErrorCode::Degenerate, "Hessian has a zero eigenvalue");
    d.push_back(e / 2.0);
  }
  return clifford_algebra(d);
}

ResiduePairing residue_pairings(const CriticalPoint& point, const PotentialFunction& po, double t) {
  if (!point.nondegenerate) throw Error(ErrorCode::Degenerate, "critical point is degenerate");
  const Complex det = hessian_at(point, po, t).determinant();
  if (det == Complex(0.0, 0.0)) throw Error(ErrorCode::Degenerate, "Hessian determinant vanishes");
  return {1.0 / det, 1.0 / trace_Z(floer_algebra(point, po, t))};
}

double sum_formula_check(const std::vector<CriticalPoint>& points, const PotentialFunction& po, double t) {
  Complex sum{0.0, 0.0};
  double biggest = 0.0;
  for (const CriticalPoint* p : morse_interior(points)) {
    const Complex r = residue_pairings(*p, po, t).z_based;
    sum += r;
    biggest = std::max(biggest, std::abs(r));
  }
  return biggest > 0.0 ? std::abs(sum) / biggest : 0.0;
}

Eigen::MatrixXcd ks_matrix(const PotentialFunction& po, const std::vector<CriticalPoint>& points, double t) {
  if (!po.toric) throw Error(ErrorCode::UnsupportedModel, "Kodaira-Spencer values need toric data");
  const auto interior = morse_interior(points);
  const ToricData& td = *po.toric;
  const PotentialFunction abs_po = absolute(po);
  Eigen::MatrixXcd ks(td.num_facets() + 1, static_cast<Eigen::Index>(interior.size()));
  for (std::size_t c = 0; c < interior.size(); ++c) {
    const Eigen::VectorXcd& y = sample_at(*interior[c], t);
    ks(0, static_cast<Eigen::Index>(c)) = 1.0;
    for (int j = 0; j < td.num_facets(); ++j) {
      const Exponent k(td.facets[j].normal.data(), td.facets[j].normal.data() + td.dim);
      auto it = abs_po.poly.terms().find(k);
      Complex v = it == abs_po.poly.terms().end() ? Complex(0.0, 0.0) : nv_eval(it->second, t);
      for (int i = 0; i < td.dim; ++i) v *= std::pow(y(i), k[i]);
      ks(j + 1, static_cast<Eigen::Index>(c)) = v;
    }
  }
  return ks;
}

Eigen::MatrixXcd pd_check(const PotentialFunction& po, const std::vector<CriticalPoint>& points, double t) {
  if (!po.toric || po.toric->family != ModelFamily::ProjectiveSpace) {
    throw Error(ErrorCode::UnsupportedModel, "the duality check is implemented for projective space");
  }
  const int n = po.dim();
  const auto interior = morse_interior(points);
  const Eigen::MatrixXcd ks = ks_matrix(po, points, t);
  // f_1 is the class of the facet with normal e_n
  const Eigen::VectorXcd f1 = ks.row(n).transpose();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(n + 1, n + 1);
  for (std::size_t c = 0; c < interior.size(); ++c) {
    const Complex res = residue_pairings(*interior[c], po, t).simplified;
    for (int l = 0; l <= n; ++l) {
      for (int lp = 0; lp <= n; ++lp) {
        out(l, lp) += std::pow(f1(static_cast<Eigen::Index>(c)), l + lp) * res;
      }
    }
  }
  return out;
}

std::string algebra_to_json(const FrobeniusAlgebra& alg) {
  nlohmann::ordered_json doc;
  doc["n"] = alg.n;
  doc["degrees"] = alg.degrees;
  auto pair = [](Complex c) { return nlohmann::ordered_json::array({c.real(), c.imag()}); };
  nlohmann::ordered_json g = nlohmann::ordered_json::array();
  for (int i = 0; i < alg.dim(); ++i) {
    nlohmann::ordered_json row = nlohmann::ordered_json::array();
    for (int j = 0; j < alg.dim(); ++j) row.push_back(pair(alg.pairing(i, j)));
    g.push_back(row);
  }
  doc["pairing"] = g;
  nlohmann::ordered_json s = nlohmann::ordered_json::array();
  for (int i = 0; i < alg.dim(); ++i) {
    for (int j = 0; j < alg.dim(); ++j) {
      for (int k = 0; k < alg.dim(); ++k) {
        if (alg.c(i, j, k) != Complex(0.0, 0.0)) s.push_back({i, j, k, pair(alg.c(i, j, k))});
      }
    }
  }
  doc["structure"] = s;
  doc["unit"] = alg.unit;
  return doc.dump();
}

FrobeniusAlgebra algebra_from_json(std::string_view text) {
  FrobeniusAlgebra alg;
  try {
    const auto doc = nlohmann::json::parse(text);
    auto complex_of = [](const nlohmann::json& v) {
      if (v.is_number()) return Complex(v.get<double>(), 0.0);
      return Complex(v.at(0).get<double>(), v.at(1).get<double>());
    };
    alg.n = doc.at("n").get<int>();
    alg.degrees = doc.at("degrees").get<std::vector<int>>();
    const int dim = alg.dim();
    alg.unit = doc.value("unit", 0);
    const auto& g = doc.at("pairing");
    if (static_cast<int>(g.size()) != dim) throw Error(ErrorCode::InvalidAlgebra, "pairing has wrong size");
    alg.pairing.resize(dim, dim);
    for (int i = 0; i < dim; ++i) {
      if (static_cast<int>(g.at(i).size()) != dim) throw Error(ErrorCode::InvalidAlgebra, "pairing row has wrong size");
      for (int j = 0; j < dim; ++j) alg.pairing(i, j) = complex_of(g.at(i).at(j));
    }
    alg.structure.assign(static_cast<std::size_t>(dim) * dim * dim, Complex(0.0, 0.0));
    for (const auto& entry : doc.at("structure")) {
      const int i = entry.at(0).get<int>(), j = entry.at(1).get<int>(), k = entry.at(2).get<int>();
      if (i < 0 || j < 0 || k < 0 || i >= dim || j >= dim || k >= dim) {
        throw Error(ErrorCode::InvalidAlgebra, "structure constant index out of range");
      }
      alg.c(i, j, k) = complex_of(entry.at(3));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidAlgebra, std::string("algebra document: ") + e.what());
  }
  validate_algebra(alg);
  return alg;
}

}  // namespace toriclg
