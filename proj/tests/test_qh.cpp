#include <doctest.h>

#include <numbers>

#include "toriclg/qh.hpp"

using namespace toriclg;

namespace {

constexpr double kPi = std::numbers::pi;

PotentialFunction leading(const ToricData& td) { return build_potential(td, td.barycenter()); }

}  // namespace

TEST_CASE("presentations of the built-in models") {
  SUBCASE("projective line") {
    auto qh = qsr_relations(builtin_model("cpn(1)"));
    CHECK(qh.variables == 2);
    REQUIRE(qh.qsr_relations.size() == 1);
    CHECK(qh.qsr_relations[0].members == std::vector<int>{0, 1});
    CHECK(qh.qsr_relations[0].cone_support.empty());
    CHECK(qh.qsr_relations[0].omega == Rational(1));
    CHECK(render(qh) == std::vector<std::string>{"Z1 Z2 = T^{1}", "Z1 - Z2 = 0"});
  }
  SUBCASE("projective plane") {
    auto qh = qsr_relations(builtin_model("cpn(2)"));
    REQUIRE(qh.qsr_relations.size() == 1);
    CHECK(qh.qsr_relations[0].members == std::vector<int>{0, 1, 2});
    CHECK(qh.linear_relations == std::vector<std::vector<int>>{{1, 0, -1}, {0, 1, -1}});
    CHECK(render(qh) == std::vector<std::string>{"Z1 Z2 Z3 = T^{1}", "Z1 - Z3 = 0", "Z2 - Z3 = 0"});
  }
  SUBCASE("square") {
    auto qh = qsr_relations(builtin_model("s2xs2(0)"));
    CHECK(render(qh) == std::vector<std::string>{"Z1 Z3 = T^{1}", "Z2 Z4 = T^{1}", "Z1 - Z3 = 0", "Z2 - Z4 = 0"});
  }
  SUBCASE("blow-up") {
    auto qh = qsr_relations(builtin_model("blowup_cp2"));
    CHECK(render(qh) ==
          std::vector<std::string>{"Z2 Z3 = T^{1/3} Z4", "Z1 Z4 = T^{2/3}", "Z1 - Z3 - Z4 = 0", "Z2 - Z3 = 0"});
  }
  SUBCASE("Hirzebruch surface") {
    auto td = builtin_model("f2(1/4)");
    auto qh = qsr_relations(td);
    const auto pcs = primitive_collections(td);
    REQUIRE(qh.qsr_relations.size() == pcs.size());
    for (std::size_t i = 0; i < pcs.size(); ++i) {
      CHECK(qh.qsr_relations[i].members == pcs[i].members);
      CHECK(qh.qsr_relations[i].omega == pcs[i].omega);
    }
    CHECK(render(qh) ==
          std::vector<std::string>{"Z1 Z3 = T^{1/2} Z4^2", "Z2 Z4 = T^{3/4}", "Z1 - Z3 = 0", "Z2 - 2 Z3 - Z4 = 0"});
  }
}

TEST_CASE("linear relations are the facet normals") {
  for (const char* name : {"cpn(1)", "cpn(2)", "cpn(3)", "s2xs2(1/3)", "blowup_cp2", "f2(1/4)"}) {
    auto td = builtin_model(name);
    auto qh = qsr_relations(td);
    REQUIRE(static_cast<int>(qh.linear_relations.size()) == td.dim);
    for (int i = 0; i < td.dim; ++i) {
      for (int j = 0; j < td.num_facets(); ++j) CHECK(qh.linear_relations[i][j] == td.facets[j].normal(i));
    }
  }
}

TEST_CASE("monomials satisfy the quantum Stanley-Reisner relations") {
  for (const char* name : {"cpn(1)", "cpn(2)", "cpn(3)", "s2xs2(0)", "s2xs2(1/3)", "blowup_cp2", "f2(1/4)"}) {
    CAPTURE(name);
    auto td = builtin_model(name);
    CHECK(qsr_identity_check(td, leading(td), 100, 3) < 1e-12);
    CHECK(qsr_identity_check(td, leading(td), 100, 3, Rational(1, 100)) > 1e-3);
  }
  auto td = builtin_model("blowup_cp2");
  RationalVector u(2);
  u << Rational(1, 7), Rational(1, 2);
  CHECK(qsr_identity_check(td, build_potential(td, u), 100, 4) < 1e-12);
  CHECK_THROWS_AS(qsr_identity_check(td, leading(builtin_model("cpn(3)")), 1), Error);
}

TEST_CASE("blow-up multiplication tables are consistent") {
  const auto td = builtin_model("blowup_cp2");
  const double t = 0.1, q1 = std::pow(t, 2.0 / 3.0), q2 = std::cbrt(t);
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(4, 4);
  auto rel = [](const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); };

  const auto g = generator_matrices(td, t, 0);
  const Eigen::MatrixXcd z1 = g[0], z2 = g[1], z3 = z2, z4 = z1 - z2;
  CHECK(rel(z1 * z2 - z2 * z1) < 1e-15);
  CHECK(rel(z1 * z4 - q1 * id) < 1e-15);
  CHECK(rel(z2 * z3 - q2 * z4) < 1e-15);
  CHECK(rel(z1 * id.col(0) - id.col(1)) == 0.0);
  CHECK(rel(z1 * z2 * id.col(0) - id.col(3)) == 0.0);

  const auto h = generator_matrices(td, t, 1);
  const Eigen::MatrixXcd w3 = h[0], w4 = h[1], w1 = w3 + w4, w2 = w3;
  CHECK(rel(w3 * w4 - w4 * w3) < 1e-15);
  CHECK(rel(w1 * w4 - q1 * id) < 1e-15);
  CHECK(rel(w2 * w3 - q2 * w4) < 1e-15);
  CHECK(rel(w3 * w4 * id.col(0) - id.col(3)) == 0.0);

  CHECK(rel(c1_matrix(td, t, 0) - (2.0 * z1 + z2)) == 0.0);
  CHECK(rel(c1_matrix(td, t, 1) - (3.0 * w3 + 2.0 * w4)) == 0.0);
  auto a = c1_eigen_check(td, t, {}, 0);
  auto b = c1_eigen_check(td, t, {}, 1);
  CHECK(a.match);
  CHECK(b.match);
  CHECK(multiset_distance(a.eigenvalues_qh, b.eigenvalues_qh) < 1e-10);
}

TEST_CASE("c1 eigenvalues are the critical values") {
  for (const char* name : {"cpn(1)", "cpn(2)", "cpn(3)", "s2xs2(0)", "s2xs2(1/3)", "blowup_cp2", "f2(1/4)"}) {
    for (double t : {0.05, 0.1}) {
      CAPTURE(name);
      CAPTURE(t);
      auto check = c1_eigen_check(builtin_model(name), t);
      CHECK(check.match);
      CHECK(check.residual < 1e-8);
    }
  }
}

TEST_CASE("closed-form spectra") {
  SUBCASE("projective plane") {
    const double t = 0.1;
    auto check = c1_eigen_check(builtin_model("cpn(2)"), t);
    std::vector<Complex> expected;
    for (int k = 0; k < 3; ++k) expected.push_back(3.0 * std::cbrt(t) * std::polar(1.0, 2 * kPi * k / 3));
    CHECK(multiset_distance(check.eigenvalues_qh, sorted_multiset(expected)) < 1e-12);
    CHECK(multiset_distance(check.critical_values, sorted_multiset(expected)) < 1e-8);
  }
  SUBCASE("projective line") {
    const double t = 0.05;
    auto check = c1_eigen_check(builtin_model("cpn(1)"), t);
    const std::vector<Complex> expected{-2 * std::sqrt(t), 2 * std::sqrt(t)};
    CHECK(multiset_distance(check.critical_values, expected) < 1e-8);
  }
  SUBCASE("Hirzebruch surface") {
    for (double t : {0.05, 0.1}) {
      auto check = c1_eigen_check(builtin_model("f2(1/4)"), t);
      std::vector<Complex> expected;
      for (double s1 : {1.0, -1.0}) {
        for (double s2 : {1.0, -1.0}) expected.push_back(s1 * 2 * std::pow(t, 0.375) * (1 + s2 * std::pow(t, 0.25)));
      }
      CHECK(multiset_distance(check.critical_values, sorted_multiset(expected)) < 1e-8);
      CHECK(multiset_distance(check.eigenvalues_qh, sorted_multiset(expected)) < 1e-12);
    }
  }
}

TEST_CASE("multiset comparison") {
  const std::vector<Complex> a{{1, 0}, {0, 1}, {-1, 0}};
  auto s = sorted_multiset(a);
  CHECK(s == std::vector<Complex>{{-1, 0}, {0, 1}, {1, 0}});
  CHECK(multiset_distance(s, s) == 0.0);
  CHECK(multiset_distance(s, {{1, 0}}) == std::numeric_limits<double>::infinity());
  CHECK(multiset_distance(s, sorted_multiset({{1, 0}, {0, 1}, {-1, 1e-6}})) == doctest::Approx(1e-6));
}

TEST_CASE("unsupported models") {
  auto td = load_toric(R"({"name":"square","dim":2,"facets":[
    {"normal":[1,0],"lambda":0},{"normal":[0,1],"lambda":0},
    {"normal":[-1,0],"lambda":"-2"},{"normal":[0,-1],"lambda":"-1"}]})");
  try {
    c1_eigen_check(td, 0.1);
    FAIL("expected UnsupportedModel");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnsupportedModel);
  }
  CHECK_THROWS_AS(c1_matrix(builtin_model("cpn(2)"), 0.1, 1), Error);
}
