#include <doctest.h>

#include <numbers>
#include <random>

#include "toriclg/frobenius.hpp"

using namespace toriclg;

namespace {

constexpr double kPi = std::numbers::pi;

double rel(Complex a, Complex b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

std::vector<Complex> random_d(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> mod(0.2, 3.0), ang(0, 2 * kPi);
  std::vector<Complex> d;
  for (int i = 0; i < n; ++i) d.push_back(std::polar(mod(rng), ang(rng)));
  return d;
}

// Multiplies X_I X_J by sorting the concatenated generator word: adjacent
// transpositions cost a sign, equal neighbours contract to d_i.
std::pair<unsigned, Complex> reduce_word(unsigned a, unsigned b, const std::vector<Complex>& d) {
  std::vector<int> w;
  for (unsigned m : {a, b}) {
    for (int i = 0; i < 8; ++i) {
      if (m & (1u << i)) w.push_back(i);
    }
  }
  Complex coeff{1.0, 0.0};
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t p = 0; p + 1 < w.size(); ++p) {
      if (w[p] > w[p + 1]) {
        std::swap(w[p], w[p + 1]);
        coeff = -coeff;
        changed = true;
      } else if (w[p] == w[p + 1]) {
        coeff *= d[w[p]];
        w.erase(w.begin() + static_cast<long>(p), w.begin() + static_cast<long>(p) + 2);
        changed = true;
        break;
      }
    }
  }
  unsigned mask = 0;
  for (int i : w) mask |= 1u << i;
  return {mask, coeff};
}

int index_of(int n, unsigned mask) {
  const auto basis = clifford_basis(n);
  return static_cast<int>(std::find(basis.begin(), basis.end(), mask) - basis.begin());
}

FrobeniusAlgebra random_change(const FrobeniusAlgebra& alg, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  const int dim = alg.dim();
  FrobeniusAlgebra::Matrix p = FrobeniusAlgebra::Matrix::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      if (alg.degrees[i] == alg.degrees[j]) p(i, j) = Complex(g(rng), g(rng));
    }
  }
  p.col(alg.unit).setZero();
  p(alg.unit, alg.unit) = 1.0;
  return change_basis(alg, p);
}

}  // namespace

TEST_CASE("basis order") {
  auto b = clifford_basis(3);
  CHECK(b == std::vector<unsigned>{0b000, 0b001, 0b010, 0b100, 0b011, 0b101, 0b110, 0b111});
}

TEST_CASE("small Clifford algebras") {
  const Complex d1(0.7, 0.2), d2(-1.3, 0.5);
  auto one = clifford_algebra(std::vector<Complex>{d1});
  CHECK(one.c(1, 1, 0) == d1);
  CHECK(one.pairing(0, 1) == Complex(1.0));
  CHECK(one.degrees == std::vector<int>{0, 1});

  auto two = clifford_algebra(std::vector<Complex>{d1, d2});
  // basis 1, X1, X2, X12
  CHECK(two.c(1, 2, 3) == Complex(1.0));
  CHECK(two.c(2, 1, 3) == Complex(-1.0));
  CHECK(two.c(3, 3, 0) == -d1 * d2);
  CHECK(two.pairing(1, 2) == Complex(1.0));
  CHECK(two.pairing(2, 1) == Complex(-1.0));
  CHECK(two.pairing(0, 3) == Complex(1.0));
  CHECK(two.pairing(3, 0) == Complex(1.0));

  CHECK_THROWS_AS(clifford_algebra(std::vector<Complex>{d1, 0.0}), Error);
  try {
    clifford_algebra(std::vector<Complex>{0.0});
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ZeroD);
  }
}

TEST_CASE("structure constants agree with word reduction") {
  std::mt19937_64 rng(5);
  for (int n = 1; n <= 4; ++n) {
    const auto d = random_d(rng, n);
    auto alg = clifford_algebra(d);
    const auto basis = clifford_basis(n);
    for (int a = 0; a < alg.dim(); ++a) {
      for (int b = 0; b < alg.dim(); ++b) {
        const auto [mask, coeff] = reduce_word(basis[a], basis[b], d);
        const int k = index_of(n, mask);
        for (int c = 0; c < alg.dim(); ++c) CHECK(std::abs(alg.c(a, b, c) - (c == k ? coeff : Complex(0.0))) <= 1e-14 * std::abs(coeff));
      }
    }
  }
}

TEST_CASE("Clifford algebras satisfy the Frobenius axioms") {
  std::mt19937_64 rng(6);
  for (int n = 1; n <= 4; ++n) {
    auto check = validate_algebra(clifford_algebra(random_d(rng, n)));
    CHECK(check.associativity < 1e-12);
    CHECK(check.frobenius < 1e-12);
    CHECK(check.condition == doctest::Approx(1.0));
  }
}

TEST_CASE("trace equals 2^n prod d") {
  std::mt19937_64 rng(8);
  for (int n = 1; n <= 4; ++n) {
    for (int trial = 0; trial < 50; ++trial) {
      const auto d = random_d(rng, n);
      Complex expected = std::pow(2.0, n);
      for (Complex x : d) expected *= x;
      CHECK(rel(trace_Z(clifford_algebra(d)), expected) < 1e-10);
    }
  }
  CHECK(trace_Z(clifford_algebra(std::vector<double>{1.5})) == doctest::Approx(3.0));
  CHECK(trace_Z(clifford_algebra(std::vector<double>{1.5, -2.0, 0.5})) == doctest::Approx(-12.0));
}

TEST_CASE("contracted and term-by-term traces agree") {
  std::mt19937_64 rng(9);
  for (int n = 1; n <= 3; ++n) {
    auto alg = random_change(clifford_algebra(random_d(rng, n)), rng);
    CHECK(rel(trace_Z(alg), trace_Z_bruteforce(alg)) < 1e-10);
  }
}

TEST_CASE("trace is basis independent") {
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + trial % 4;
    auto alg = clifford_algebra(random_d(rng, n));
    auto moved = random_change(alg, rng);
    CHECK(rel(trace_Z(moved), trace_Z(alg)) < 1e-8);
    CHECK_NOTHROW(validate_algebra(moved, 1e-8));
  }
}

TEST_CASE("invalid basis changes and algebras") {
  auto alg = clifford_algebra(std::vector<Complex>{1.0, 2.0});
  FrobeniusAlgebra::Matrix p = FrobeniusAlgebra::Matrix::Identity(4, 4);
  p(1, 0) = 1.0;
  CHECK_THROWS_AS(change_basis(alg, p), Error);
  p = FrobeniusAlgebra::Matrix::Identity(4, 4);
  p(0, 1) = 1.0;  // X1' = X1 + 1 mixes degrees
  CHECK_THROWS_AS(change_basis(alg, p), Error);

  auto broken = alg;
  broken.c(1, 2, 3) = 2.0;
  CHECK_THROWS_AS(validate_algebra(broken), Error);
  auto singular = alg;
  singular.pairing.setZero();
  try {
    validate_algebra(singular);
    FAIL("expected SingularPairing");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SingularPairing);
  }
  CHECK_THROWS_AS(trace_Z(singular), Error);
}

TEST_CASE("algebra JSON round trip") {
  std::mt19937_64 rng(12);
  auto alg = clifford_algebra(random_d(rng, 3));
  const std::string text = algebra_to_json(alg);
  auto back = algebra_from_json(text);
  CHECK(algebra_to_json(back) == text);
  CHECK(rel(trace_Z(back), trace_Z(alg)) < 1e-14);
  CHECK_THROWS_AS(algebra_from_json(R"({"n":1,"degrees":[0,1],"pairing":[[0,1]],"structure":[]})"), Error);
  CHECK_THROWS_AS(algebra_from_json("not json"), Error);
}

TEST_CASE("Floer algebras of toric critical points") {
  SUBCASE("projective line") {
    auto td = load_toric("cpn(1)");
    auto po = build_potential(td, td.barycenter());
    for (const auto& p : solve_critical(po)) {
      for (const auto& [t, y] : p.samples) {
        auto alg = floer_algebra(p, po, t);
        const Complex d = alg.c(1, 1, 0);
        CHECK(rel(d, y(0) / std::sqrt(t) * std::sqrt(t)) < 1e-8);
        CHECK(std::abs(std::abs(d) - std::sqrt(t)) < 1e-10);
      }
    }
  }
  SUBCASE("projective plane: Z equals the Hessian determinant") {
    auto td = load_toric("cpn(2)");
    auto po = build_potential(td, td.barycenter());
    for (const auto& p : solve_critical(po)) {
      for (const auto& [t, y] : p.samples) {
        const Complex zeta = y(0) / std::cbrt(t);
        auto alg = floer_algebra(p, po, t);
        CHECK(rel(alg.c(1, 1, 0), std::cbrt(t) * zeta / 2.0) < 1e-8);
        CHECK(rel(alg.c(2, 2, 0), 3.0 * std::cbrt(t) * zeta / 2.0) < 1e-8);
        CHECK(rel(trace_Z(alg), 3.0 * std::pow(t, 2.0 / 3.0) * zeta * zeta) < 1e-8);
      }
    }
  }
  SUBCASE("Hirzebruch case y1 y2 = 1 gives Z = 4t") {
    auto td = load_toric("f2(1/4)");
    auto po = build_potential(td, td.barycenter(), {}, PotentialKind::F2Exact);
    int found = 0;
    for (const auto& p : solve_critical(po)) {
      const auto& y = p.samples.at(0.1);
      if (std::abs(y(0) * y(1) / std::pow(0.1, 1.0) - 1.0) > 1e-6) continue;
      ++found;
      for (double t : {0.05, 0.1}) CHECK(rel(trace_Z(floer_algebra(p, po, t)), 4 * t) < 1e-8);
    }
    CHECK(found == 2);
  }
  SUBCASE("degenerate points are refused") {
    CriticalPoint p;
    p.nondegenerate = false;
    auto td = load_toric("cpn(1)");
    CHECK_THROWS_AS(floer_algebra(p, build_potential(td, td.barycenter()), 0.1), Error);
  }
}

TEST_CASE("residue pairings") {
  for (int n = 1; n <= 3; ++n) {
    auto td = load_toric("cpn(" + std::to_string(n) + ")");
    auto po = build_potential(td, td.barycenter());
    for (const auto& p : solve_critical(po)) {
      for (const auto& [t, y] : p.samples) {
        const Complex zeta = y(0) / std::pow(t, 1.0 / (n + 1));
        const Complex expected = std::pow(t, -double(n) / (n + 1)) * std::pow(zeta, -n) / double(n + 1);
        auto r = residue_pairings(p, po, t);
        CHECK(rel(r.simplified, expected) < 1e-8);
        CHECK(rel(r.z_based, r.simplified) < 1e-8);
      }
    }
  }
  for (const char* name : {"s2xs2(1/3)", "blowup_cp2", "f2(1/4)"}) {
    auto td = load_toric(name);
    auto po = build_potential(td, td.barycenter(), {},
                              td.family == ModelFamily::Hirzebruch2 ? PotentialKind::F2Exact : PotentialKind::LeadingOrder);
    for (const auto& p : solve_critical(po)) {
      for (const auto& [t, y] : p.samples) {
        auto r = residue_pairings(p, po, t);
        CHECK(rel(r.z_based, r.simplified) < 1e-8);
      }
    }
  }
}

TEST_CASE("blow-up trace closed form and sum formula") {
  auto td = load_toric("blowup_cp2");
  auto po = build_potential(td, td.barycenter());
  auto pts = solve_critical(po);
  for (const auto& p : pts) {
    for (const auto& [t, y] : p.samples) {
      const Complex y2 = y(1) / std::cbrt(t);
      const Complex z = 1.0 / residue_pairings(p, po, t).z_based;
      CHECK(std::abs(z / std::pow(t, 2.0 / 3.0) - (4.0 - y2 * y2 * y2) / y2) < 1e-8);
    }
  }
  for (double t : {0.05, 0.1, 0.2}) CHECK(sum_formula_check(pts, po, t) < 1e-9);

  auto cp2 = load_toric("cpn(2)");
  auto po2 = build_potential(cp2, cp2.barycenter());
  CHECK(sum_formula_check(solve_critical(po2), po2, 0.1) < 1e-9);
  auto cp1 = load_toric("cpn(1)");
  auto po1 = build_potential(cp1, cp1.barycenter());
  CHECK(sum_formula_check(solve_critical(po1), po1, 0.1) < 1e-12);
}

TEST_CASE("Kodaira-Spencer values and Poincare duality") {
  for (int n = 1; n <= 3; ++n) {
    auto td = load_toric("cpn(" + std::to_string(n) + ")");
    auto po = build_potential(td, td.barycenter());
    auto pts = solve_critical(po);
    for (double t : {0.05, 0.1, 0.2}) {
      auto ks = ks_matrix(po, pts, t);
      REQUIRE(ks.rows() == n + 2);
      REQUIRE(ks.cols() == n + 1);
      for (Eigen::Index c = 0; c < ks.cols(); ++c) {
        CHECK(ks(0, c) == Complex(1.0));
        const Complex f1 = ks(n, c);
        const Complex zeta = pts[static_cast<std::size_t>(c)].samples.at(t)(n - 1) / std::pow(t, 1.0 / (n + 1));
        CHECK(rel(f1, std::pow(t, 1.0 / (n + 1)) * zeta) < 1e-8);
        CHECK(rel(std::pow(f1, n + 1), Complex(t)) < 1e-8);
      }
      auto pd = pd_check(po, pts, t);
      for (int l = 0; l <= n; ++l) {
        for (int lp = 0; lp <= n; ++lp) {
          CHECK(std::abs(pd(l, lp) - (l + lp == n ? 1.0 : 0.0)) < 1e-7);
        }
      }
    }
  }
  auto bl = load_toric("blowup_cp2");
  auto pb = build_potential(bl, bl.barycenter());
  CHECK_THROWS_AS(pd_check(pb, solve_critical(pb), 0.1), Error);
}
