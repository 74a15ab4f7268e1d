#include "toriclg/polytope.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <numeric>
#include <regex>
#include <sstream>

#include <json.hpp>

#include "toriclg/error.hpp"
#include "toriclg/exact_solve.hpp"

namespace toriclg {

namespace {

using RationalMatrix = Eigen::Matrix<Rational, Eigen::Dynamic, Eigen::Dynamic>;

std::string facet_set_name(const std::vector<int>& idx) {
  std::string s = "{";
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(idx[i] + 1);
  }
  return s + "}";
}

RationalMatrix normal_rows(const std::vector<Facet>& facets, const std::vector<int>& idx, int dim) {
  RationalMatrix a(static_cast<Eigen::Index>(idx.size()), dim);
  for (std::size_t r = 0; r < idx.size(); ++r) {
    for (int c = 0; c < dim; ++c) a(static_cast<Eigen::Index>(r), c) = Rational(facets[idx[r]].normal(c));
  }
  return a;
}

// Calls fn for each sorted k-subset of {0..m-1}.
template <typename Fn>
void for_each_subset(int m, int k, Fn&& fn) {
  std::vector<int> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  if (k > m) return;
  while (true) {
    fn(idx);
    int i = k - 1;
    while (i >= 0 && idx[i] == m - k + i) --i;
    if (i < 0) return;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

int integer_rank(const std::vector<Facet>& facets, int dim) {
  // Rank over Q via elimination on a copy.
  std::vector<int> all(facets.size());
  std::iota(all.begin(), all.end(), 0);
  RationalMatrix a = normal_rows(facets, all, dim);
  int rank = 0;
  for (int col = 0; col < dim && rank < a.rows(); ++col) {
    Eigen::Index pivot = rank;
    while (pivot < a.rows() && a(pivot, col).is_zero()) ++pivot;
    if (pivot == a.rows()) continue;
    a.row(pivot).swap(a.row(rank));
    for (Eigen::Index r = 0; r < a.rows(); ++r) {
      if (r == rank || a(r, col).is_zero()) continue;
      Rational f = a(r, col) / a(rank, col);
      for (int c = 0; c < dim; ++c) a(r, c) -= f * a(rank, c);
    }
    ++rank;
  }
  return rank;
}

}  // namespace

Rational ToricData::affine(int j, const RationalVector& u) const {
  Rational s(0);
  for (int i = 0; i < dim; ++i) s += Rational(facets[j].normal(i)) * u(i);
  return s - facets[j].offset;
}

double ToricData::affine(int j, const Eigen::VectorXd& u) const {
  return facets[j].normal.cast<double>().dot(u) - facets[j].offset.to_double();
}

RationalVector ToricData::barycenter() const {
  RationalVector c = RationalVector::Constant(dim, Rational(0));
  for (const auto& v : vertices) c += v.point;
  return c / Rational(static_cast<std::int64_t>(vertices.size()));
}

ToricData make_toric(std::string name, int dim, std::vector<Facet> facets) {
  if (dim < 1) throw Error(ErrorCode::Malformed, "dimension must be positive");
  if (static_cast<int>(facets.size()) < dim + 1) {
    throw Error(ErrorCode::Unbounded, "fewer than dim+1 facets cannot bound a polytope");
  }
  for (std::size_t j = 0; j < facets.size(); ++j) {
    const auto& f = facets[j];
    if (f.normal.size() != dim) {
      throw Error(ErrorCode::Malformed, "facet " + std::to_string(j + 1) + " normal has wrong length");
    }
    int g = 0;
    for (int i = 0; i < dim; ++i) g = std::gcd(g, std::abs(f.normal(i)));
    if (g != 1) {
      throw Error(ErrorCode::Malformed, "facet " + std::to_string(j + 1) + " normal is not primitive");
    }
  }

  ToricData td;
  td.name = std::move(name);
  td.dim = dim;
  td.facets = std::move(facets);
  const int m = td.num_facets();

  for_each_subset(m, dim, [&](const std::vector<int>& idx) {
    RationalMatrix a = normal_rows(td.facets, idx, dim);
    RationalVector b(dim);
    for (int r = 0; r < dim; ++r) b(r) = td.facets[idx[r]].offset;
    auto sol = solve_exact<Rational>(a, b);
    if (!sol) return;
    for (int j = 0; j < m; ++j) {
      if (td.affine(j, *sol) < Rational(0)) return;
    }
    for (const auto& v : td.vertices) {
      if (v.point == *sol) return;
    }
    Vertex v{*sol, {}};
    for (int j = 0; j < m; ++j) {
      if (td.affine(j, *sol).is_zero()) v.active.push_back(j);
    }
    td.vertices.push_back(std::move(v));
  });

  if (td.vertices.empty()) {
    if (integer_rank(td.facets, dim) < dim) {
      throw Error(ErrorCode::Unbounded, "facet normals do not span; polytope contains a line");
    }
    throw Error(ErrorCode::EmptyInterior, "no feasible vertex among facet sets");
  }

  for (const auto& v : td.vertices) {
    if (static_cast<int>(v.active.size()) != dim) {
      throw Error(ErrorCode::NotSmooth, "vertex " + to_string(v.point) + " has active facets " +
                                            facet_set_name(v.active));
    }
    Rational det = determinant_exact<Rational>(normal_rows(td.facets, v.active, dim));
    if (abs(det) != Rational(1)) {
      throw Error(ErrorCode::NotSmooth, "normals of facets " + facet_set_name(v.active) +
                                            " have determinant " + det.to_string());
    }
    // Every edge leaving the vertex must end at another facet.
    RationalMatrix a = normal_rows(td.facets, v.active, dim);
    for (int k = 0; k < dim; ++k) {
      RationalVector e = RationalVector::Constant(dim, Rational(0));
      e(k) = Rational(1);
      RationalVector dir = *solve_exact<Rational>(a, e);
      bool blocked = false;
      for (int j = 0; j < m && !blocked; ++j) {
        Rational s(0);
        for (int i = 0; i < dim; ++i) s += Rational(td.facets[j].normal(i)) * dir(i);
        blocked = s < Rational(0);
      }
      if (!blocked) {
        throw Error(ErrorCode::Unbounded, "unbounded edge at vertex " + to_string(v.point) +
                                              " (facets " + facet_set_name(v.active) + ")");
      }
    }
  }

  RationalVector center = td.barycenter();
  for (int j = 0; j < m; ++j) {
    bool used = std::any_of(td.vertices.begin(), td.vertices.end(), [&](const Vertex& v) {
      return std::find(v.active.begin(), v.active.end(), j) != v.active.end();
    });
    if (!used) {
      throw Error(ErrorCode::Malformed, "facet " + std::to_string(j + 1) + " is redundant");
    }
    if (!(td.affine(j, center) > Rational(0))) {
      throw Error(ErrorCode::EmptyInterior, "vertices lie on facet " + std::to_string(j + 1));
    }
  }
  return td;
}

namespace {

Facet facet(std::initializer_list<int> normal, Rational offset) {
  Eigen::VectorXi v(static_cast<Eigen::Index>(normal.size()));
  Eigen::Index i = 0;
  for (int x : normal) v(i++) = x;
  return {v, offset};
}

ToricData projective_space(int n) {
  if (n < 1 || n > 3) throw Error(ErrorCode::UnsupportedModel, "cpn(n) requires 1 <= n <= 3");
  std::vector<Facet> facets;
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXi v = Eigen::VectorXi::Zero(n);
    v(i) = 1;
    facets.push_back({v, Rational(0)});
  }
  facets.push_back({Eigen::VectorXi::Constant(n, -1), Rational(-1)});
  auto td = make_toric("cpn(" + std::to_string(n) + ")", n, std::move(facets));
  td.family = ModelFamily::ProjectiveSpace;
  return td;
}

ToricData sphere_product(Rational alpha) {
  if (alpha < Rational(0) || !(alpha < Rational(1))) {
    throw Error(ErrorCode::UnsupportedModel, "s2xs2(alpha) requires 0 <= alpha < 1");
  }
  auto td = make_toric("s2xs2(" + alpha.to_string() + ")", 2,
                       {facet({1, 0}, 0), facet({0, 1}, 0), facet({-1, 0}, alpha - Rational(1)),
                        facet({0, -1}, -(Rational(1) + alpha))});
  td.family = ModelFamily::SphereProduct;
  td.alpha = alpha;
  return td;
}

ToricData hirzebruch2(Rational alpha) {
  if (!(alpha > Rational(0)) || !(alpha < Rational(1))) {
    throw Error(ErrorCode::UnsupportedModel, "f2(alpha) requires 0 < alpha < 1");
  }
  auto td = make_toric("f2(" + alpha.to_string() + ")", 2,
                       {facet({1, 0}, 0), facet({0, 1}, 0), facet({-1, -2}, -2),
                        facet({0, -1}, alpha - Rational(1))});
  td.family = ModelFamily::Hirzebruch2;
  td.alpha = alpha;
  return td;
}

ToricData blowup_cp2() {
  auto td = make_toric("blowup_cp2", 2,
                       {facet({1, 0}, 0), facet({0, 1}, 0), facet({-1, -1}, -1),
                        facet({-1, 0}, Rational(-2, 3))});
  td.family = ModelFamily::BlowupCP2;
  return td;
}

bool same_facets(const ToricData& a, const ToricData& b) {
  if (a.dim != b.dim || a.num_facets() != b.num_facets()) return false;
  for (int j = 0; j < a.num_facets(); ++j) {
    if (a.facets[j].normal != b.facets[j].normal || a.facets[j].offset != b.facets[j].offset) {
      return false;
    }
  }
  return true;
}

Rational json_rational(const nlohmann::json& j) {
  if (j.is_string()) return Rational::parse(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  throw Error(ErrorCode::Malformed, "expected rational as \"p/q\" string or integer");
}

}  // namespace

ToricData builtin_model(std::string_view name) {
  static const std::regex pattern(R"(^\s*([a-z0-9_]+)\s*(?:\(\s*([^)]*)\s*\))?\s*$)");
  std::string s(name);
  std::smatch m;
  if (!std::regex_match(s, m, pattern)) {
    throw Error(ErrorCode::UnsupportedModel, "unknown model '" + s + "'");
  }
  const std::string family = m[1];
  const std::string arg = m[2];
  if (family == "cpn") {
    if (arg.empty()) throw Error(ErrorCode::UnsupportedModel, "cpn needs a dimension, e.g. cpn(2)");
    Rational n = Rational::parse(arg);
    if (!n.is_integer()) throw Error(ErrorCode::UnsupportedModel, "cpn dimension must be an integer");
    return projective_space(static_cast<int>(n.num()));
  }
  if (family == "s2xs2") return sphere_product(arg.empty() ? Rational(0) : Rational::parse(arg));
  if (family == "f2") {
    if (arg.empty()) throw Error(ErrorCode::UnsupportedModel, "f2 needs alpha, e.g. f2(1/4)");
    return hirzebruch2(Rational::parse(arg));
  }
  if (family == "blowup_cp2" && arg.empty()) return blowup_cp2();
  throw Error(ErrorCode::UnsupportedModel, "unknown model '" + s + "'");
}

ToricData load_toric_json(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Malformed, std::string("model document: ") + e.what());
  }
  try {
    const std::string name = doc.value("name", std::string("custom"));
    const int dim = doc.at("dim").get<int>();
    std::vector<Facet> facets;
    for (const auto& f : doc.at("facets")) {
      auto normal = f.at("normal").get<std::vector<int>>();
      Eigen::VectorXi v(static_cast<Eigen::Index>(normal.size()));
      for (std::size_t i = 0; i < normal.size(); ++i) v(static_cast<Eigen::Index>(i)) = normal[i];
      facets.push_back({v, json_rational(f.at("lambda"))});
    }
    ToricData td = make_toric(name, dim, std::move(facets));

    std::optional<ToricData> reference;
    if (doc.contains("alpha")) {
      const Rational alpha = json_rational(doc.at("alpha"));
      td.alpha = alpha;
      if (name.rfind("s2xs2", 0) == 0) {
        reference = sphere_product(alpha);
      } else {
        reference = hirzebruch2(alpha);
      }
    } else {
      try {
        reference = builtin_model(name);
      } catch (const Error&) {
      }
    }
    if (reference && same_facets(*reference, td)) {
      td.family = reference->family;
      td.alpha = reference->alpha;
    }

    if (doc.contains("bulk")) {
      for (const auto& b : doc.at("bulk")) {
        const int j = b.at("facet").get<int>();
        if (j < 1 || j > td.num_facets()) {
          throw Error(ErrorCode::Malformed, "bulk facet index " + std::to_string(j) + " out of range");
        }
        auto w = b.at("w").get<std::vector<double>>();
        if (w.size() != 2) throw Error(ErrorCode::Malformed, "bulk w must be [re, im]");
        td.bulk.push_back({j - 1, Complex(w[0], w[1])});
      }
    }
    return td;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Malformed, std::string("model document: ") + e.what());
  }
}

ToricData load_toric(std::string_view name_or_json) {
  auto first = name_or_json.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && name_or_json[first] == '{') return load_toric_json(name_or_json);
  return builtin_model(name_or_json);
}

VertexRank vertices_and_rank(const ToricData& td) {
  VertexRank out;
  for (const auto& v : td.vertices) out.vertices.push_back(v.point);
  out.rank = static_cast<int>(td.vertices.size());
  return out;
}

std::vector<PrimitiveCollection> primitive_collections(const ToricData& td) {
  const int m = td.num_facets();
  const int n = td.dim;
  if (m > 14) throw Error(ErrorCode::OutOfRange, "primitive collections limited to 14 facets");

  std::vector<char> is_face(std::size_t{1} << m, 0);
  for (const auto& v : td.vertices) {
    std::uint32_t mask = 0;
    for (int j : v.active) mask |= 1u << j;
    for (std::uint32_t sub = mask;; sub = (sub - 1) & mask) {
      is_face[sub] = 1;
      if (sub == 0) break;
    }
  }

  std::vector<PrimitiveCollection> out;
  for (std::uint32_t s = 1; s < (1u << m); ++s) {
    if (is_face[s]) continue;
    bool minimal = true;
    for (int j = 0; j < m && minimal; ++j) {
      if ((s >> j & 1u) && !is_face[s & ~(1u << j)]) minimal = false;
    }
    if (!minimal) continue;

    PrimitiveCollection pc;
    Eigen::VectorXi sum = Eigen::VectorXi::Zero(n);
    for (int j = 0; j < m; ++j) {
      if (s >> j & 1u) {
        pc.members.push_back(j);
        sum += td.facets[j].normal;
      }
    }

    bool found = false;
    for (const auto& v : td.vertices) {
      RationalMatrix cols(n, n);
      for (int c = 0; c < n; ++c) {
        for (int r = 0; r < n; ++r) cols(r, c) = Rational(td.facets[v.active[c]].normal(r));
      }
      RationalVector rhs(n);
      for (int r = 0; r < n; ++r) rhs(r) = Rational(sum(r));
      auto k = solve_exact<Rational>(cols, rhs);
      if (!k) continue;
      bool nonneg = true;
      for (int c = 0; c < n; ++c) nonneg = nonneg && !((*k)(c) < Rational(0)) && (*k)(c).is_integer();
      if (!nonneg) continue;
      for (int c = 0; c < n; ++c) {
        if (!(*k)(c).is_zero()) {
          pc.cone_support.push_back(v.active[c]);
          pc.multipliers.push_back(static_cast<int>((*k)(c).num()));
        }
      }
      found = true;
      break;
    }
    if (!found) {
      throw Error(ErrorCode::NoConeDecomposition,
                  "no nonnegative cone decomposition for collection " + facet_set_name(pc.members));
    }

    auto omega_at = [&](const RationalVector& u) {
      Rational w(0);
      for (int j : pc.members) w += td.affine(j, u);
      for (std::size_t i = 0; i < pc.cone_support.size(); ++i) {
        w -= Rational(pc.multipliers[i]) * td.affine(pc.cone_support[i], u);
      }
      return w;
    };
    pc.omega = omega_at(td.vertices.front().point);
    for (const auto& v : td.vertices) {
      if (omega_at(v.point) != pc.omega) {
        throw Error(ErrorCode::Malformed, "omega of collection " + facet_set_name(pc.members) +
                                              " depends on the vertex");
      }
    }
    out.push_back(std::move(pc));
  }
  return out;
}

bool interior_test(const ToricData& td, const RationalVector& u, const Rational& eps) {
  if (u.size() != td.dim) {
    throw Error(ErrorCode::DimensionMismatch, "point has dimension " + std::to_string(u.size()) +
                                                  ", model has " + std::to_string(td.dim));
  }
  for (int j = 0; j < td.num_facets(); ++j) {
    if (!(td.affine(j, u) > eps)) return false;
  }
  return true;
}

}  // namespace toriclg
