#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "toriclg/novikov.hpp"
#include "toriclg/rational.hpp"

namespace toriclg {

/// Which built-in family a model belongs to; drives the independent
/// quantum-cohomology presentations.
enum class ModelFamily { Custom, ProjectiveSpace, SphereProduct, Hirzebruch2, BlowupCP2 };

/// Half-space <u, normal> >= offset.
struct Facet {
  Eigen::VectorXi normal;
  Rational offset;
};

struct Vertex {
  RationalVector point;
  std::vector<int> active;  // sorted facet indices with l_j(point) = 0
};

/// Degree-2 bulk parameter w on the divisor of facet `facet` (0-based).
struct BulkTerm {
  int facet = 0;
  Complex w{0.0, 0.0};
};

/// Moment polytope P = {u | <u, v_j> >= lambda_j} of a compact toric manifold.
struct ToricData {
  std::string name;
  int dim = 0;
  std::vector<Facet> facets;
  std::vector<Vertex> vertices;
  ModelFamily family = ModelFamily::Custom;
  std::optional<Rational> alpha;  // F2 and S2xS2 parameter
  std::vector<BulkTerm> bulk;     // bulk carried by the model document

  int num_facets() const { return static_cast<int>(facets.size()); }

  /// l_j(u) = <u, v_j> - lambda_j.
  Rational affine(int j, const RationalVector& u) const;
  double affine(int j, const Eigen::VectorXd& u) const;

  /// Vertex barycenter; the monotone/balanced fiber for every built-in.
  RationalVector barycenter() const;
};

struct PrimitiveCollection {
  std::vector<int> members;       // 0-based facet indices
  std::vector<int> cone_support;  // facets with nonzero multiplier
  std::vector<int> multipliers;   // aligned with cone_support, all > 0
  Rational omega;
};

/// Validates the facet list and enumerates vertices; throws Unbounded,
/// EmptyInterior, NotSmooth or Malformed.
ToricData make_toric(std::string name, int dim, std::vector<Facet> facets);

/// Built-in catalog: cpn(n) for n <= 3, s2xs2(alpha), blowup_cp2, f2(alpha).
ToricData builtin_model(std::string_view name);

/// Parses the JSON model document.
ToricData load_toric_json(std::string_view json_text);

/// Built-in name or path/JSON text (anything starting with '{' is parsed as JSON).
ToricData load_toric(std::string_view name_or_json);

struct VertexRank {
  std::vector<RationalVector> vertices;
  int rank = 0;
};
VertexRank vertices_and_rank(const ToricData& td);

std::vector<PrimitiveCollection> primitive_collections(const ToricData& td);

inline const Rational kDefaultInteriorEps{1, 1000000};

bool interior_test(const ToricData& td, const RationalVector& u,
                   const Rational& eps = kDefaultInteriorEps);

}  // namespace toriclg
