#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "toriclg/critsolve.hpp"
#include "toriclg/error.hpp"
#include "toriclg/frobenius.hpp"
#include "toriclg/novikov.hpp"
#include "toriclg/polytope.hpp"
#include "toriclg/potential.hpp"
#include "toriclg/qh.hpp"
#include "toriclg/report.hpp"

using namespace toriclg;
using json = nlohmann::ordered_json;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      if (pass) detail = what;
      pass = false;
    }
  }
};

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", x);
  return buf;
}

PotentialFunction model_potential(const ToricData& td) {
  const auto kind = td.family == ModelFamily::Hirzebruch2 ? PotentialKind::F2Exact : PotentialKind::LeadingOrder;
  return build_potential(td, td.barycenter(), {}, kind);
}

std::vector<const CriticalPoint*> interior(const std::vector<CriticalPoint>& points) {
  std::vector<const CriticalPoint*> out;
  for (const auto& p : points) {
    if (p.interior) out.push_back(&p);
  }
  return out;
}

// Index k with y close to t^{1/(n+1)} e^{2 pi i k/(n+1)}, or -1.
int root_index(Complex y, double t, int n, double tol) {
  for (int k = 0; k <= n; ++k) {
    const Complex want = std::pow(t, 1.0 / (n + 1)) * std::polar(1.0, 2 * kPi * k / (n + 1));
    if (std::abs(y - want) <= tol * std::abs(want)) return k;
  }
  return -1;
}

Outcome ac1() {
  Outcome o;
  double worst = 0.0;
  for (int n = 1; n <= 3; ++n) {
    const auto td = load_toric("cpn(" + std::to_string(n) + ")");
    const auto points = solve_critical(model_potential(td));
    const auto in = interior(points);
    o.require(static_cast<int>(in.size()) == n + 1, "cpn(" + std::to_string(n) + ") interior count");
    std::vector<bool> seen(n + 1, false);
    for (const auto* p : in) {
      for (Eigen::Index i = 0; i < p->valuation.size(); ++i) {
        o.require(p->valuation(i) == Rational(1, n + 1), "valuation");
      }
      int k0 = -1;
      for (double t : {0.05, 0.1, 0.2}) {
        const Eigen::VectorXcd& y = p->samples.at(t);
        const int k = root_index(y(0), t, n, 1e-8);
        o.require(k >= 0, "coordinate is not a root of t");
        if (k < 0) continue;
        if (k0 < 0) k0 = k;
        o.require(k == k0, "branch changes across t");
        const Complex want = std::pow(t, 1.0 / (n + 1)) * std::polar(1.0, 2 * kPi * k / (n + 1));
        for (Eigen::Index i = 0; i < y.size(); ++i) worst = std::max(worst, std::abs(y(i) - want) / std::abs(want));
      }
      if (k0 >= 0) {
        o.require(!seen[k0], "repeated root");
        seen[k0] = true;
      }
    }
  }
  o.require(worst <= 1e-8, "coordinate error " + sci(worst));
  if (o.pass) o.detail = "max relative error " + sci(worst);
  return o;
}

Outcome ac2() {
  Outcome o;
  double residue = 0.0, off = 0.0, diag = 0.0;
  for (int n = 1; n <= 3; ++n) {
    const auto td = load_toric("cpn(" + std::to_string(n) + ")");
    const auto po = model_potential(td);
    const auto points = solve_critical(po);
    for (double t : {0.05, 0.1, 0.2}) {
      for (const auto* p : interior(points)) {
        const int k = root_index(p->samples.at(t)(0), t, n, 1e-8);
        o.require(k >= 0, "unrecognised critical point");
        if (k < 0) continue;
        const Complex want = std::pow(t, -double(n) / (n + 1)) * std::polar(1.0, -2 * kPi * k * n / (n + 1)) /
                             static_cast<double>(n + 1);
        const Complex got = residue_pairings(*p, po, t).simplified;
        residue = std::max(residue, std::abs(got - want) / std::abs(want));
      }
      const Eigen::MatrixXcd m = pd_check(po, points, t);
      for (int l = 0; l <= n; ++l) {
        for (int lp = 0; lp <= n; ++lp) {
          if (l + lp == n) {
            diag = std::max(diag, std::abs(m(l, lp) - 1.0));
          } else {
            off = std::max(off, std::abs(m(l, lp)));
          }
        }
      }
    }
  }
  o.require(residue <= 1e-8, "residue error " + sci(residue));
  o.require(diag <= 1e-7, "duality diagonal error " + sci(diag));
  o.require(off < 1e-7, "duality off-diagonal " + sci(off));
  if (o.pass) o.detail = "residue " + sci(residue) + ", duality " + sci(std::max(diag, off));
  return o;
}

Outcome ac3() {
  Outcome o;
  const auto td = load_toric("blowup_cp2");
  const auto po = model_potential(td);
  const auto points = solve_critical(po);
  const auto in = interior(points);
  o.require(in.size() == 4, "interior count " + std::to_string(in.size()));
  double quartic = 0.0, closed = 0.0, sum = 0.0;
  for (double t : {0.05, 0.1, 0.2}) {
    for (const auto* p : in) {
      const Complex y2 = p->samples.at(t)(1) / std::cbrt(t);
      quartic = std::max(quartic, std::abs(std::pow(y2, 4) + std::pow(y2, 3) - 1.0));
      const Complex want = (4.0 - std::pow(y2, 3)) / y2;
      const Complex z = trace_Z(floer_algebra(*p, po, t)) / std::pow(t, 2.0 / 3.0);
      closed = std::max(closed, std::abs(z - want) / std::abs(want));
    }
    sum = std::max(sum, sum_formula_check(points, po, t));
  }
  o.require(quartic <= 1e-8, "quartic residual " + sci(quartic));
  o.require(closed <= 1e-8, "Z closed form " + sci(closed));
  o.require(sum < 1e-9, "sum formula " + sci(sum));
  if (o.pass) o.detail = "quartic " + sci(quartic) + ", Z " + sci(closed) + ", sum " + sci(sum);
  return o;
}

Outcome ac4() {
  Outcome o;
  const auto td = load_toric("f2(1/4)");
  const auto points = solve_critical(model_potential(td));
  const auto in = interior(points);
  o.require(in.size() == 4, "interior count");
  double values = 0.0, dets = 0.0;
  for (double t : {0.05, 0.1}) {
    std::vector<Complex> got_v, got_d, want_v, want_d;
    for (const auto* p : in) {
      got_v.push_back(p->crit_value.at(t));
      got_d.push_back(p->hess_det.at(t));
    }
    for (double s1 : {1.0, -1.0}) {
      for (double s2 : {1.0, -1.0}) {
        want_v.push_back(s1 * 2 * std::pow(t, 3.0 / 8.0) * (1 + s2 * std::pow(t, 0.25)));
        want_d.push_back(s1 * s2 * 4 * t);
      }
    }
    values = std::max(values, multiset_distance(sorted_multiset(got_v), sorted_multiset(want_v)));
    dets = std::max(dets, multiset_distance(sorted_multiset(got_d), sorted_multiset(want_d)));
  }
  o.require(values <= 1e-8, "critical values " + sci(values));
  o.require(dets <= 1e-8, "Hessian determinants " + sci(dets));
  if (o.pass) o.detail = "values " + sci(values) + ", determinants " + sci(dets);
  return o;
}

Outcome ac5() {
  Outcome o;
  const std::vector<std::pair<std::string, int>> cases{{"cpn(1)", 2},     {"cpn(2)", 3},     {"cpn(3)", 4},
                                                       {"s2xs2(0)", 4},   {"s2xs2(1/3)", 4}, {"blowup_cp2", 4},
                                                       {"f2(1/4)", 4}};
  std::string counts;
  for (const auto& [name, want] : cases) {
    const auto td = load_toric(name);
    const int rank = jacobian_rank(solve_critical(model_potential(td)));
    o.require(rank == want && rank == static_cast<int>(td.vertices.size()), name + " rank " + std::to_string(rank));
    counts += (counts.empty() ? "" : ",") + std::to_string(rank);
  }
  const std::vector<std::pair<Exponent, Series>> terms{
      {{1, 0}, Series::constant(1.0)},
      {{0, 1}, Series::constant(1.0)},
      {{1, 1}, Series::constant(1.0)},
      {{-1, -1}, Series::monomial(1.0, Rational(1))},
  };
  const auto points = solve_critical(custom_potential(2, terms, load_toric("cpn(2)")));
  int in = 0, excluded = 0;
  for (const auto& p : points) {
    if (p.interior) {
      ++in;
    } else if (p.valuation(0).is_zero() && p.valuation(1).is_zero()) {
      ++excluded;
    }
  }
  o.require(in == 3, "boundary control interior count " + std::to_string(in));
  o.require(excluded == 1, "boundary control excluded families " + std::to_string(excluded));
  if (o.pass) o.detail = "ranks {" + counts + "}, boundary control 3 interior + 1 excluded";
  return o;
}

Outcome ac6() {
  Outcome o;
  double worst = 0.0;
  for (const char* name : {"cpn(1)", "cpn(2)", "cpn(3)", "s2xs2(0)", "s2xs2(1/3)", "f2(1/4)", "blowup_cp2"}) {
    const auto td = load_toric(name);
    for (double t : {0.05, 0.1}) {
      const auto check = c1_eigen_check(td, t);
      worst = std::max(worst, check.residual);
      o.require(check.match, std::string(name) + " at t=" + sci(t) + ": " + sci(check.residual));
      if (td.family == ModelFamily::BlowupCP2) {
        const auto other = c1_eigen_check(td, t, {}, 1);
        worst = std::max(worst, other.residual);
        o.require(other.match, "blow-up second basis");
      }
    }
  }
  if (o.pass) o.detail = "max multiset distance " + sci(worst);
  return o;
}

Outcome ac7() {
  Outcome o;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> mod(0.2, 3.0), ang(0, 2 * kPi);
  std::normal_distribution<double> g;
  auto random_d = [&](int n) {
    std::vector<Complex> d;
    for (int i = 0; i < n; ++i) d.push_back(std::polar(mod(rng), ang(rng)));
    return d;
  };
  double oracle = 0.0;
  for (int n = 1; n <= 4; ++n) {
    for (int trial = 0; trial < 50; ++trial) {
      const auto d = random_d(n);
      Complex want = std::pow(2.0, n);
      for (Complex x : d) want *= x;
      const auto alg = clifford_algebra(d);
      oracle = std::max({oracle, std::abs(trace_Z_bruteforce(alg) - want) / std::abs(want),
                         std::abs(trace_Z(alg) - want) / std::abs(want)});
    }
  }
  double invariance = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const auto alg = clifford_algebra(random_d(1 + trial % 4));
    FrobeniusAlgebra::Matrix p = FrobeniusAlgebra::Matrix::Zero(alg.dim(), alg.dim());
    for (int i = 0; i < alg.dim(); ++i) {
      for (int j = 0; j < alg.dim(); ++j) {
        if (alg.degrees[i] == alg.degrees[j]) p(i, j) = Complex(g(rng), g(rng));
      }
    }
    p.col(alg.unit).setZero();
    p(alg.unit, alg.unit) = 1.0;
    const Complex before = trace_Z(alg), after = trace_Z(change_basis(alg, p));
    invariance = std::max(invariance, std::abs(after - before) / std::abs(before));
  }
  o.require(oracle <= 1e-10, "oracle " + sci(oracle));
  o.require(invariance <= 1e-8, "basis invariance " + sci(invariance));
  if (o.pass) o.detail = "oracle " + sci(oracle) + ", invariance " + sci(invariance);
  return o;
}

Series random_series(std::mt19937_64& rng, bool nonnegative) {
  std::uniform_int_distribution<int> count(1, 5), den(1, 12), num(nonnegative ? 0 : -6, 24);
  std::normal_distribution<double> coeff(0.0, 1.0);
  std::vector<Term> terms;
  const int k = count(rng);
  for (int i = 0; i < k; ++i) terms.push_back({Rational(num(rng), den(rng)), Complex(coeff(rng), coeff(rng))});
  Rational lead = terms.front().exponent;
  for (const auto& t : terms) lead = min(lead, t.exponent);
  return Series(std::move(terms), lead + Rational(3));
}

// Largest coefficient of a - b below the common cutoff, relative to the larger operand.
double distance(const Series& a, const Series& b) {
  const Rational c = min(a.cutoff(), b.cutoff());
  const Series d = a.truncated(c) - b.truncated(c);
  const double scale = std::max({a.max_abs(), b.max_abs(), 1e-300});
  double worst = 0.0;
  for (const auto& t : d.terms()) worst = std::max(worst, std::abs(t.coeff) / scale);
  return worst;
}

Outcome ac8() {
  Outcome o;
  std::mt19937_64 rng(8);
  int axioms = 0;
  double ring = 0.0, inverse = 0.0, exponential = 0.0;
  for (int i = 0; i < 100; ++i) {
    const Series a = random_series(rng, false), b = random_series(rng, false), c = random_series(rng, false);
    axioms += *nv_valuation(a * b) != *nv_valuation(a) + *nv_valuation(b);
    const auto vs = nv_valuation(a + b);
    axioms += vs && *vs < min(*nv_valuation(a), *nv_valuation(b));
    const Series inv = nv_inv(a);
    axioms += *nv_valuation(inv) != -*nv_valuation(a);
    ring = std::max({ring, distance(a * b, b * a), distance((a * b) * c, a * (b * c)),
                     distance(a * (b + c), a * b + a * c), distance(a + b, b + a)});
    const Series one = a * inv;
    inverse = std::max(inverse, distance(one, Series::constant(1.0).with_cutoff(one.cutoff())));
    const Series p = random_series(rng, true), q = random_series(rng, true);
    exponential = std::max(exponential, distance(nv_exp(p + q), nv_exp(p) * nv_exp(q)));
  }
  o.require(axioms == 0, std::to_string(axioms) + " valuation axiom failures");
  o.require(ring <= 1e-9, "ring laws " + sci(ring));
  o.require(inverse <= 1e-9, "inverse " + sci(inverse));
  o.require(exponential <= 1e-9, "exp " + sci(exponential));
  if (o.pass) o.detail = "ring " + sci(ring) + ", inverse " + sci(inverse) + ", exp " + sci(exponential);
  return o;
}

Outcome ac9() {
  Outcome o;
  double worst = 0.0, control = std::numeric_limits<double>::infinity();
  for (const char* name : {"cpn(1)", "cpn(2)", "cpn(3)", "s2xs2(0)", "s2xs2(1/3)", "f2(1/4)", "blowup_cp2"}) {
    const auto td = load_toric(name);
    const auto po = build_potential(td, td.barycenter());
    const double r = qsr_identity_check(td, po, 100, 9);
    const double perturbed = qsr_identity_check(td, po, 100, 9, Rational(1, 100));
    worst = std::max(worst, r);
    control = std::min(control, perturbed);
    o.require(r < 1e-12, std::string(name) + " residual " + sci(r));
    o.require(perturbed > 1e-3, std::string(name) + " perturbed omega not detected");
  }
  if (o.pass) o.detail = "max residual " + sci(worst) + ", min perturbed residual " + sci(control);
  return o;
}

std::string verify_report(const std::string& seed, int& code) {
  std::ostringstream out, err;
  code = run_command({"verify", "--seed", seed}, out, err);
  return out.str();
}

double max_difference(const json& a, const json& b) {
  if (a.is_number() && b.is_number()) {
    const double x = a.get<double>(), y = b.get<double>();
    return std::abs(x - y) / std::max({1.0, std::abs(x), std::abs(y)});
  }
  if (a.type() != b.type() || a.size() != b.size()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  if (a.is_object()) {
    for (auto it = a.begin(); it != a.end(); ++it) {
      if (!b.contains(it.key())) return std::numeric_limits<double>::infinity();
      worst = std::max(worst, max_difference(it.value(), b[it.key()]));
    }
  } else if (a.is_array()) {
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, max_difference(a[i], b[i]));
  } else if (a != b) {
    return std::numeric_limits<double>::infinity();
  }
  return worst;
}

Outcome ac10() {
  Outcome o;
  int c1 = 0, c2 = 0, c3 = 0;
  const std::string a = verify_report("3", c1), b = verify_report("3", c2), c = verify_report("11", c3);
  o.require(c1 == 0 && c2 == 0 && c3 == 0, "verify exit codes " + std::to_string(c1) + std::to_string(c2) +
                                                std::to_string(c3));
  o.require(a == b, "same seed reports differ");
  json da = json::parse(a), dc = json::parse(c);
  da.erase("parameters");
  dc.erase("parameters");
  const auto& va = da["verdicts"];
  const auto& vc = dc["verdicts"];
  bool same = va.size() == vc.size();
  for (std::size_t i = 0; same && i < va.size(); ++i) same = va[i]["name"] == vc[i]["name"] && va[i]["pass"] == vc[i]["pass"];
  o.require(same, "verdicts differ between seeds");
  const double diff = max_difference(da, dc);
  o.require(diff < 1e-8, "values differ by " + sci(diff));
  if (o.pass) o.detail = "byte-identical for equal seeds, max difference " + sci(diff) + " across seeds";
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
    double budget;  // seconds, 0 when untimed
  };
  const std::vector<Criterion> criteria{
      {"cpn critical points", ac1, 10.0},
      {"cpn residue pairing and duality", ac2, 0.0},
      {"blow-up quartic, Z and sum formula", ac3, 0.0},
      {"Hirzebruch critical values and determinants", ac4, 0.0},
      {"rank counts and boundary exclusion", ac5, 0.0},
      {"c1 eigenvalues equal critical values", ac6, 0.0},
      {"Clifford trace oracle and basis invariance", ac7, 30.0},
      {"Novikov property suite", ac8, 1.0},
      {"quantum Stanley-Reisner identities", ac9, 0.0},
      {"determinism across runs and seeds", ac10, 0.0},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto& c = criteria[i];
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.budget > 0 && secs >= c.budget) {
      o.pass = false;
      o.detail += " (over " + sci(c.budget) + " s budget)";
    }
    std::printf("AC%-2zu %s  %s: %s [%.2f s]\n", i + 1, o.pass ? "PASS" : "FAIL", c.name, o.detail.c_str(), secs);
    failed += !o.pass;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
