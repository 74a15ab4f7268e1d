#include "toriclg/report.hpp"

#include <algorithm>
#include <cmath>
#include <charconv>
#include <fstream>
#include <limits>
#include <numbers>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "toriclg/critsolve.hpp"
#include "toriclg/error.hpp"
#include "toriclg/frobenius.hpp"
#include "toriclg/qh.hpp"

namespace toriclg {

namespace {

using json = nlohmann::ordered_json;

constexpr double kPi = std::numbers::pi;

const std::vector<std::string> kCommands{"info", "potential", "critical", "residue", "z-trace", "qsr", "c1check", "verify"};
const std::vector<std::string> kBuiltins{"cpn(1)",     "cpn(2)",     "cpn(3)",  "s2xs2(0)",
                                         "s2xs2(1/3)", "blowup_cp2", "f2(1/4)"};

struct Options {
  std::string command;
  std::string model;
  std::string input;
  std::string algebra;
  std::vector<double> t{0.05, 0.1, 0.2};
  std::string u;
  std::vector<std::string> bulk;
  std::string alpha;
  std::uint64_t seed = 0;
  std::string cutoff;
  int starts = 0;
  std::string format = "json";
  std::optional<double> tol;
};

// Sampling stream for the identity checks; --seed only drives the solver.
constexpr std::uint64_t kCheckSeed = 20240601;

struct Verdict {
  std::string name;
  bool pass = false;
  double residual = 0.0;
  double tolerance = 0.0;
  bool above = false;  // negative control: passes when the residual exceeds the tolerance
};

// The model and potential a command works on.
struct Subject {
  std::string name;
  std::optional<ToricData> td;
  PotentialFunction po;
};

class Report {
 public:
  Report(const Options& opts, json doc) : opts_(opts), doc_(std::move(doc)) {}

  json& doc() { return doc_; }

  // Passes when residual <= tolerance; --tol replaces non-exact tolerances.
  void below(const std::string& name, double residual, double tolerance) {
    if (opts_.tol && tolerance > 0.0) tolerance = *opts_.tol;
    verdicts_.push_back({name, residual <= tolerance, residual, tolerance, false});
  }
  void above(const std::string& name, double residual, double threshold) {
    verdicts_.push_back({name, residual > threshold, residual, threshold, true});
  }

  bool pass() const {
    return std::all_of(verdicts_.begin(), verdicts_.end(), [](const Verdict& v) { return v.pass; });
  }
  const std::vector<Verdict>& verdicts() const { return verdicts_; }

  json finish() {
    json list = json::array();
    for (const auto& v : verdicts_) {
      list.push_back({{"name", v.name},
                      {"pass", v.pass},
                      {"residual", v.residual},
                      {"tolerance", v.tolerance},
                      {"comparison", v.above ? ">" : "<="}});
    }
    doc_["verdicts"] = list;
    doc_["pass"] = pass();
    return doc_;
  }

 private:
  const Options& opts_;
  json doc_;
  std::vector<Verdict> verdicts_;
};

json cjson(Complex c) { return json::array({c.real(), c.imag()}); }

json cvec(const Eigen::VectorXcd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(cjson(v(i)));
  return out;
}

json cvec(const std::vector<Complex>& v) {
  json out = json::array();
  for (Complex c : v) out.push_back(cjson(c));
  return out;
}

json rvec(const RationalVector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i).to_string());
  return out;
}

json one_based(const std::vector<int>& idx) {
  json out = json::array();
  for (int i : idx) out.push_back(i + 1);
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Usage, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Shortest text that reads back to the same double.
std::string fmt(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

bool is_input_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::Usage:
    case ErrorCode::Parse:
    case ErrorCode::Malformed:
    case ErrorCode::Unbounded:
    case ErrorCode::EmptyInterior:
    case ErrorCode::NotSmooth:
    case ErrorCode::NoConeDecomposition:
    case ErrorCode::DimensionMismatch:
    case ErrorCode::OutsideP:
    case ErrorCode::NotInterior:
    case ErrorCode::F2Required:
    case ErrorCode::UnsupportedModel:
    case ErrorCode::InvalidAlgebra:
    case ErrorCode::SingularPairing:
    case ErrorCode::ZeroD:
    case ErrorCode::OutOfRange:
      return true;
    default:
      return false;
  }
}

std::vector<BulkTerm> parse_bulk(const std::vector<std::string>& specs, int facets) {
  std::vector<BulkTerm> out;
  for (const auto& s : specs) {
    const auto eq = s.find('='), comma = s.find(',');
    if (eq == std::string::npos || comma == std::string::npos || comma < eq) {
      throw Error(ErrorCode::Usage, "--bulk expects j=re,im, got '" + s + "'");
    }
    try {
      const int j = std::stoi(s.substr(0, eq));
      const double re = std::stod(s.substr(eq + 1, comma - eq - 1)), im = std::stod(s.substr(comma + 1));
      if (j < 1 || j > facets) throw Error(ErrorCode::Usage, "--bulk facet " + std::to_string(j) + " out of range");
      out.push_back({j - 1, Complex(re, im)});
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::Usage, "--bulk expects j=re,im, got '" + s + "'");
    }
  }
  return out;
}

std::string model_name(const Options& opts) {
  std::string name = opts.model;
  if (!opts.alpha.empty()) {
    if (name.find('(') != std::string::npos) throw Error(ErrorCode::Usage, "--alpha given twice");
    name += "(" + Rational::parse(opts.alpha).to_string() + ")";
  }
  return name;
}

Subject toric_subject(const Options& opts, ToricData td) {
  Subject s;
  s.name = td.name;
  const RationalVector u = opts.u.empty() ? td.barycenter() : parse_rational_vector(opts.u);
  std::vector<BulkTerm> bulk = td.bulk;
  for (const auto& b : parse_bulk(opts.bulk, td.num_facets())) bulk.push_back(b);
  const auto kind = td.family == ModelFamily::Hirzebruch2 ? PotentialKind::F2Exact : PotentialKind::LeadingOrder;
  s.po = build_potential(td, u, bulk, kind);
  s.td = std::move(td);
  return s;
}

Subject load_subject(const Options& opts) {
  if (!opts.input.empty()) {
    const std::string text = read_file(opts.input);
    json doc;
    try {
      doc = json::parse(text);
    } catch (const json::exception& e) {
      throw Error(ErrorCode::Malformed, opts.input + ": " + e.what());
    }
    if (doc.contains("terms")) {
      if (!opts.bulk.empty() || !opts.u.empty()) throw Error(ErrorCode::Usage, "custom potentials take no --bulk or --u");
      std::optional<ToricData> td;
      if (!opts.model.empty()) td = load_toric(model_name(opts));
      Subject s;
      s.name = opts.input;
      s.po = load_custom_potential_json(text, td);
      s.td = td;
      return s;
    }
    if (!opts.model.empty()) throw Error(ErrorCode::Usage, "--model and --input both name a model");
    return toric_subject(opts, load_toric_json(text));
  }
  if (opts.model.empty()) throw Error(ErrorCode::Usage, "--model or --input is required");
  return toric_subject(opts, load_toric(model_name(opts)));
}

SolverConfig solver_config(const Options& opts) {
  SolverConfig cfg;
  cfg.t_samples = opts.t;
  cfg.seed = opts.seed;
  if (opts.starts > 0) cfg.starts = opts.starts;
  cfg.validate();
  return cfg;
}

const ToricData& require_toric(const Subject& s, const std::string& what) {
  if (!s.td) throw Error(ErrorCode::UnsupportedModel, what + " needs toric data");
  return *s.td;
}

std::vector<const CriticalPoint*> interior_points(const std::vector<CriticalPoint>& points) {
  std::vector<const CriticalPoint*> out;
  for (const auto& p : points) {
    if (p.interior) out.push_back(&p);
  }
  return out;
}

// Sections

json info_section(const Subject& s) {
  json out;
  out["dim"] = s.po.dim();
  out["kind"] = to_string(s.po.kind);
  if (!s.td) {
    out["terms"] = s.po.poly.terms().size();
    return out;
  }
  const ToricData& td = *s.td;
  out["alpha"] = td.alpha ? json(td.alpha->to_string()) : json(nullptr);
  json facets = json::array();
  for (int j = 0; j < td.num_facets(); ++j) {
    std::vector<int> normal(td.facets[j].normal.data(), td.facets[j].normal.data() + td.dim);
    facets.push_back({{"index", j + 1}, {"normal", normal}, {"lambda", td.facets[j].offset.to_string()}});
  }
  out["facets"] = facets;
  json vertices = json::array();
  for (const auto& v : td.vertices) vertices.push_back(rvec(v.point));
  out["vertices"] = vertices;
  out["rank"] = vertices_and_rank(td).rank;
  out["barycenter"] = rvec(td.barycenter());
  json pcs = json::array();
  for (const auto& pc : primitive_collections(td)) {
    pcs.push_back({{"members", one_based(pc.members)},
                   {"cone_support", one_based(pc.cone_support)},
                   {"multipliers", pc.multipliers},
                   {"omega", pc.omega.to_string()}});
  }
  out["primitive_collections"] = pcs;
  return out;
}

json potential_section(const Subject& s, const std::optional<Rational>& cutoff) {
  json out;
  out["basepoint"] = rvec(s.po.basepoint);
  out["kind"] = to_string(s.po.kind);
  json bulk = json::array();
  for (const auto& b : s.po.bulk) bulk.push_back({{"facet", b.facet + 1}, {"w", cjson(b.w)}});
  out["bulk"] = bulk;
  json terms = json::array();
  for (const auto& [k, c] : s.po.poly.terms()) {
    const Series coeff = cutoff && *cutoff < c.cutoff() ? c.truncated(*cutoff) : c;
    terms.push_back({{"powers", k}, {"coeff", coeff.to_string()}, {"cutoff", coeff.cutoff().to_string()}});
  }
  out["terms"] = terms;
  return out;
}

json point_json(const CriticalPoint& p, int index) {
  json out;
  out["index"] = index;
  out["valuation"] = rvec(p.valuation);
  out["leading"] = cvec(p.leading);
  out["interior"] = p.interior;
  out["nondegenerate"] = p.nondegenerate;
  out["multiplicity"] = p.multiplicity;
  out["residual"] = p.residual;
  json samples = json::array();
  for (const auto& [t, y] : p.samples) {
    samples.push_back({{"t", t}, {"y", cvec(y)}, {"crit_value", cjson(p.crit_value.at(t))}, {"hess_det", cjson(p.hess_det.at(t))}});
  }
  out["samples"] = samples;
  if (p.lifted) {
    json lifted = json::array();
    for (const auto& s : *p.lifted) lifted.push_back(s.to_string(true));
    out["lifted"] = lifted;
  }
  return out;
}

json points_json(const std::vector<CriticalPoint>& points) {
  json out = json::array();
  for (std::size_t i = 0; i < points.size(); ++i) out.push_back(point_json(points[i], static_cast<int>(i)));
  return out;
}

void critical_verdicts(Report& r, const Subject& s, const std::vector<CriticalPoint>& points, const std::string& prefix) {
  const auto interior = interior_points(points);
  int degenerate = 0;
  double grad = 0.0;
  for (const auto* p : interior) {
    if (!p->nondegenerate) ++degenerate;
    grad = std::max(grad, p->residual);
  }
  if (s.td) {
    r.below(prefix + "count", std::abs(static_cast<double>(interior.size()) - vertices_and_rank(*s.td).rank), 0.0);
  }
  r.below(prefix + "morse", degenerate, 0.0);
  r.below(prefix + "gradient_residual", grad, 1e-10);
}

struct PairingData {
  json section;
  double z_vs_det = 0.0;
  std::map<double, double> sum_formula;
};

PairingData pairings(const Subject& s, const std::vector<CriticalPoint>& points, const SolverConfig& cfg) {
  PairingData out;
  out.section = json::array();
  const auto interior = interior_points(points);
  for (std::size_t i = 0; i < points.size(); ++i) {
    const CriticalPoint& p = points[i];
    if (!p.interior || !p.nondegenerate) continue;
    json per_t = json::array();
    for (double t : cfg.t_samples) {
      const auto res = residue_pairings(p, s.po, t);
      out.z_vs_det = std::max(out.z_vs_det, std::abs(res.simplified - res.z_based) / std::abs(res.simplified));
      per_t.push_back({{"t", t}, {"simplified", cjson(res.simplified)}, {"z_based", cjson(res.z_based)}});
    }
    out.section.push_back({{"index", static_cast<int>(i)}, {"pairings", per_t}});
  }
  for (double t : cfg.t_samples) out.sum_formula[t] = sum_formula_check(points, s.po, t);
  return out;
}

void pairing_verdicts(Report& r, const PairingData& d, const std::string& prefix) {
  r.below(prefix + "z_equals_det", d.z_vs_det, 1e-8);
  double worst = 0.0;
  for (const auto& [t, v] : d.sum_formula) worst = std::max(worst, v);
  r.below(prefix + "sum_formula", worst, 1e-9);
}

json ztrace_section(const Subject& s, const std::vector<CriticalPoint>& points, const SolverConfig& cfg, double& worst) {
  json out = json::array();
  worst = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const CriticalPoint& p = points[i];
    if (!p.interior || !p.nondegenerate) continue;
    json per_t = json::array();
    for (double t : cfg.t_samples) {
      const auto alg = floer_algebra(p, s.po, t);
      std::vector<Complex> d;
      for (int k = 1; k <= alg.n; ++k) d.push_back(alg.c(k, k, 0));
      const Complex z = trace_Z(alg), det = p.hess_det.at(t);
      worst = std::max(worst, std::abs(z - det) / std::abs(det));
      per_t.push_back({{"t", t}, {"d", cvec(d)}, {"Z", cjson(z)}, {"hess_det", cjson(det)}});
    }
    out.push_back({{"index", static_cast<int>(i)}, {"traces", per_t}});
  }
  return out;
}

json qsr_section(Report& r, const Subject& s, std::uint64_t seed, const std::string& prefix) {
  const ToricData& td = require_toric(s, "qsr");
  const auto qh = qsr_relations(td);
  json out;
  json rels = json::array();
  for (const auto& q : qh.qsr_relations) {
    rels.push_back({{"members", one_based(q.members)},
                    {"cone_support", one_based(q.cone_support)},
                    {"multipliers", q.multipliers},
                    {"omega", q.omega.to_string()}});
  }
  out["variables"] = qh.variables;
  out["qsr_relations"] = rels;
  out["linear_relations"] = qh.linear_relations;
  out["rendered"] = render(qh);
  const double residual = qsr_identity_check(td, s.po, 100, seed);
  const double perturbed = qsr_identity_check(td, s.po, 100, seed, Rational(1, 100));
  out["identity_residual"] = residual;
  out["perturbed_residual"] = perturbed;
  r.below(prefix + "qsr_identity", residual, 1e-12);
  r.above(prefix + "qsr_perturbed_omega_detected", perturbed, 1e-3);
  return out;
}

json c1_section(Report& r, const Subject& s, const SolverConfig& cfg, const std::string& prefix) {
  const ToricData& td = require_toric(s, "c1check");
  if (!s.po.bulk.empty()) throw Error(ErrorCode::UnsupportedModel, "c1check takes no bulk deformation");
  json out = json::array();
  for (double t : cfg.t_samples) {
    const auto check = c1_eigen_check(td, t, cfg);
    out.push_back({{"t", t},
                   {"eigenvalues_qh", cvec(check.eigenvalues_qh)},
                   {"critical_values", cvec(check.critical_values)},
                   {"residual", check.residual},
                   {"match", check.match}});
    r.below(prefix + "c1_eigenvalues(t=" + fmt(t) + ")", check.residual, check.tolerance);
  }
  return out;
}

// Closed forms for the built-in families.
void family_verdicts(Report& r, const Subject& s, const std::vector<CriticalPoint>& points, const SolverConfig& cfg,
                     const std::string& prefix) {
  if (!s.td || !s.po.bulk.empty()) return;
  const ToricData& td = *s.td;
  const auto interior = interior_points(points);
  if (td.family == ModelFamily::ProjectiveSpace) {
    const int n = td.dim;
    double roots = 0.0, residue = 0.0;
    int bad_val = 0;
    for (const auto* p : interior) {
      for (Eigen::Index i = 0; i < p->valuation.size(); ++i) bad_val += p->valuation(i) != Rational(1, n + 1);
      for (double t : cfg.t_samples) {
        const Eigen::VectorXcd& y = p->samples.at(t);
        roots = std::max(roots, std::abs(std::pow(y(0), n + 1) - t) / t);
        for (Eigen::Index i = 1; i < y.size(); ++i) roots = std::max(roots, std::abs(y(i) - y(0)) / std::abs(y(0)));
        const Complex expected = std::pow(y(0), -n) / static_cast<double>(n + 1);
        const Complex got = residue_pairings(*p, s.po, t).simplified;
        residue = std::max(residue, std::abs(got - expected) / std::abs(expected));
      }
    }
    double pd = 0.0;
    for (double t : cfg.t_samples) {
      const Eigen::MatrixXcd m = pd_check(s.po, points, t);
      for (int l = 0; l <= n; ++l) {
        for (int lp = 0; lp <= n; ++lp) pd = std::max(pd, std::abs(m(l, lp) - (l + lp == n ? 1.0 : 0.0)));
      }
    }
    r.below(prefix + "cpn_roots_of_unity", roots, 1e-8);
    r.below(prefix + "cpn_valuations", bad_val, 0.0);
    r.below(prefix + "cpn_residue_formula", residue, 1e-8);
    r.below(prefix + "cpn_poincare_duality", pd, 1e-7);
  } else if (td.family == ModelFamily::BlowupCP2) {
    double quartic = 0.0, closed = 0.0;
    for (const auto* p : interior) {
      for (double t : cfg.t_samples) {
        const Complex y2 = p->samples.at(t)(1) / std::cbrt(t);
        quartic = std::max(quartic, std::abs(std::pow(y2, 4) + std::pow(y2, 3) - 1.0));
        const Complex expected = (4.0 - std::pow(y2, 3)) / y2;
        const Complex z = trace_Z(floer_algebra(*p, s.po, t)) / std::pow(t, 2.0 / 3.0);
        closed = std::max(closed, std::abs(z - expected) / std::abs(expected));
      }
    }
    r.below(prefix + "blowup_quartic", quartic, 1e-8);
    r.below(prefix + "z_closed_form", closed, 1e-8);
  } else if (td.family == ModelFamily::Hirzebruch2) {
    const double a = td.alpha->to_double();
    double values = 0.0, dets = 0.0;
    for (double t : cfg.t_samples) {
      std::vector<Complex> got_v, got_d, want_v, want_d;
      for (const auto* p : interior) {
        got_v.push_back(p->crit_value.at(t));
        got_d.push_back(p->hess_det.at(t));
      }
      for (double s1 : {1.0, -1.0}) {
        for (double s2 : {1.0, -1.0}) {
          want_v.push_back(s1 * 2 * std::pow(t, (1 - a) / 2) + s2 * 2 * std::pow(t, (1 + a) / 2));
          want_d.push_back(s1 * 4 * t);
        }
      }
      values = std::max(values, multiset_distance(sorted_multiset(got_v), sorted_multiset(want_v)));
      dets = std::max(dets, multiset_distance(sorted_multiset(got_d), sorted_multiset(want_d)));
    }
    r.below(prefix + "f2_critical_values", values, 1e-8);
    r.below(prefix + "f2_hessian_determinants", dets, 1e-8);
  }
}

// Model-independent suites run by a full verify.

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

double series_distance(const Series& a, const Series& b) {
  const Rational c = min(a.cutoff(), b.cutoff());
  const Series d = nv_sub(a.truncated(c), b.truncated(c));
  const double scale = std::max({a.max_abs(), b.max_abs(), 1e-300});
  double worst = 0.0;
  for (const auto& t : d.terms()) worst = std::max(worst, std::abs(t.coeff) / scale);
  return worst;
}

void novikov_suite(Report& r, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  int valuation_failures = 0;
  double ring = 0.0, inverse = 0.0, exponential = 0.0;
  for (int i = 0; i < 100; ++i) {
    const Series a = random_series(rng, false), b = random_series(rng, false), c = random_series(rng, false);
    if (*nv_valuation(a * b) != *nv_valuation(a) + *nv_valuation(b)) ++valuation_failures;
    const auto vs = nv_valuation(a + b);
    if (vs && *vs < min(*nv_valuation(a), *nv_valuation(b))) ++valuation_failures;
    ring = std::max({ring, series_distance(a * b, b * a), series_distance((a * b) * c, a * (b * c)),
                     series_distance(a * (b + c), a * b + a * c), series_distance(a + b, b + a)});
    const Series one = a * nv_inv(a);
    inverse = std::max(inverse, series_distance(one, Series::constant(1.0).with_cutoff(one.cutoff())));
    const Series p = random_series(rng, true), q = random_series(rng, true);
    exponential = std::max(exponential, series_distance(nv_exp(p + q), nv_exp(p) * nv_exp(q)));
  }
  r.below("novikov/valuation_axioms", valuation_failures, 0.0);
  r.below("novikov/ring_laws", ring, 1e-9);
  r.below("novikov/inverse", inverse, 1e-9);
  r.below("novikov/exp", exponential, 1e-9);
}

void clifford_suite(Report& r, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
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
      Complex expected = std::pow(2.0, n);
      for (Complex x : d) expected *= x;
      const auto alg = clifford_algebra(d);
      const Complex z = n <= 3 ? trace_Z_bruteforce(alg) : trace_Z(alg);
      oracle = std::max(oracle, std::abs(z - expected) / std::abs(expected));
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
  r.below("clifford/trace_oracle", oracle, 1e-10);
  r.below("clifford/basis_invariance", invariance, 1e-8);
}

void boundary_control(Report& r, const SolverConfig& cfg) {
  const std::vector<std::pair<Exponent, Series>> terms{
      {{1, 0}, Series::constant(1.0)},
      {{0, 1}, Series::constant(1.0)},
      {{1, 1}, Series::constant(1.0)},
      {{-1, -1}, Series::monomial(1.0, Rational(1))},
  };
  const auto points = solve_critical(custom_potential(2, terms, load_toric("cpn(2)")), cfg);
  int interior = 0, excluded_at_origin = 0;
  for (const auto& p : points) {
    if (p.interior) {
      ++interior;
    } else if (p.valuation(0).is_zero() && p.valuation(1).is_zero()) {
      ++excluded_at_origin;
    }
  }
  r.below("boundarycrit/interior_count", std::abs(interior - 3), 0.0);
  r.below("boundarycrit/excluded_boundary_family", std::abs(excluded_at_origin - 1), 0.0);
}

json verify_model(Report& r, const Subject& s, const SolverConfig& cfg, std::uint64_t seed, const std::string& prefix) {
  json out;
  out["model"] = s.name;
  const auto points = solve_critical(s.po, cfg);
  out["critical_points"] = points_json(points);
  critical_verdicts(r, s, points, prefix);
  const auto pd = pairings(s, points, cfg);
  out["pairings"] = pd.section;
  pairing_verdicts(r, pd, prefix);
  family_verdicts(r, s, points, cfg, prefix);
  if (s.td) {
    out["qsr"] = qsr_section(r, s, seed, prefix);
    if (s.td->family != ModelFamily::Custom && s.po.bulk.empty()) out["c1"] = c1_section(r, s, cfg, prefix);
  }
  return out;
}

// Output

void write_csv(std::ostream& out, const std::string& command, const json& doc, const Report& r) {
  if (command == "potential") {
    const auto& terms = doc["potential"]["terms"];
    const int n = doc["potential"]["basepoint"].size();
    for (int i = 0; i < n; ++i) out << "k" << i + 1 << ",";
    out << "coefficient\n";
    for (const auto& t : terms) {
      for (const auto& k : t["powers"]) out << k.get<int>() << ",";
      out << csv_field(t["coeff"].get<std::string>()) << "\n";
    }
    return;
  }
  if (command == "critical") {
    out << "index,t,valuation,interior,nondegenerate,multiplicity,y,crit_value_re,crit_value_im,hess_det_re,hess_det_im\n";
    for (const auto& p : doc["critical_points"]) {
      std::string val;
      for (const auto& v : p["valuation"]) val += (val.empty() ? "" : ";") + v.get<std::string>();
      for (const auto& smp : p["samples"]) {
        std::string y;
        for (const auto& c : smp["y"]) {
          y += (y.empty() ? "" : ";") + fmt(c[0].get<double>()) + (c[1].get<double>() < 0 ? "" : "+") +
               fmt(c[1].get<double>()) + "i";
        }
        out << p["index"].get<int>() << "," << fmt(smp["t"].get<double>()) << "," << val << ","
            << (p["interior"].get<bool>() ? "true" : "false") << ","
            << (p["nondegenerate"].get<bool>() ? "true" : "false") << "," << p["multiplicity"].get<int>() << ","
            << y << "," << fmt(smp["crit_value"][0].get<double>()) << "," << fmt(smp["crit_value"][1].get<double>())
            << "," << fmt(smp["hess_det"][0].get<double>()) << "," << fmt(smp["hess_det"][1].get<double>()) << "\n";
      }
    }
    return;
  }
  if (command == "info" && doc["info"].contains("facets")) {
    out << "facet,normal,lambda\n";
    for (const auto& f : doc["info"]["facets"]) {
      std::string normal;
      for (const auto& k : f["normal"]) normal += (normal.empty() ? "" : ";") + std::to_string(k.get<int>());
      out << f["index"].get<int>() << "," << normal << "," << f["lambda"].get<std::string>() << "\n";
    }
    return;
  }
  out << "name,pass,residual,comparison,tolerance\n";
  for (const auto& v : r.verdicts()) {
    out << csv_field(v.name) << "," << (v.pass ? "true" : "false") << "," << fmt(v.residual) << ","
        << (v.above ? ">" : "<=") << "," << fmt(v.tolerance) << "\n";
  }
}

json parameters(const Options& opts, const SolverConfig& cfg) {
  json p;
  p["t_samples"] = cfg.t_samples;
  p["seed"] = cfg.seed;
  p["starts"] = cfg.starts ? json(*cfg.starts) : json(nullptr);
  p["cutoff"] = opts.cutoff.empty() ? json(nullptr) : json(Rational::parse(opts.cutoff).to_string());
  p["u"] = opts.u.empty() ? json(nullptr) : rvec(parse_rational_vector(opts.u));
  p["tol"] = opts.tol ? json(*opts.tol) : json(nullptr);
  p["grad_tol"] = cfg.grad_tol;
  p["dedupe_tol"] = cfg.dedupe_tol;
  return p;
}

int execute(const Options& opts, std::ostream& out) {
  const SolverConfig cfg = solver_config(opts);
  std::optional<Rational> cutoff;
  if (!opts.cutoff.empty()) cutoff = Rational::parse(opts.cutoff);

  json head;
  head["schema"] = 1;
  head["command"] = opts.command;
  std::optional<Subject> subject;
  if (opts.command == "z-trace" && !opts.algebra.empty()) {
    head["model"] = opts.algebra;
  } else if (opts.command == "verify" && opts.model.empty() && opts.input.empty()) {
    head["model"] = "all";
  } else {
    subject = load_subject(opts);
    head["model"] = subject->name;
  }
  head["parameters"] = parameters(opts, cfg);
  Report r(opts, head);
  json& doc = r.doc();

  try {
    if (opts.command == "info") {
      doc["info"] = info_section(*subject);
    } else if (opts.command == "potential") {
      doc["potential"] = potential_section(*subject, cutoff);
    } else if (opts.command == "critical") {
      auto points = solve_critical(subject->po, cfg);
      if (cutoff) {
        for (auto& p : points) {
          if (p.interior && p.nondegenerate) p.lifted = lift_tadic(subject->po, p, *cutoff);
        }
      }
      doc["critical_points"] = points_json(points);
      critical_verdicts(r, *subject, points, "");
    } else if (opts.command == "residue") {
      const auto points = solve_critical(subject->po, cfg);
      const auto pd = pairings(*subject, points, cfg);
      doc["pairings"] = pd.section;
      pairing_verdicts(r, pd, "");
      if (subject->td && subject->td->family == ModelFamily::ProjectiveSpace) {
        json dual = json::array();
        for (double t : cfg.t_samples) {
          const Eigen::MatrixXcd m = pd_check(subject->po, points, t);
          json rows = json::array();
          for (Eigen::Index i = 0; i < m.rows(); ++i) rows.push_back(cvec(Eigen::VectorXcd(m.row(i).transpose())));
          dual.push_back({{"t", t}, {"matrix", rows}});
        }
        doc["poincare_duality"] = dual;
      }
    } else if (opts.command == "z-trace") {
      if (!opts.algebra.empty()) {
        const auto alg = algebra_from_json(read_file(opts.algebra));
        const auto check = validate_algebra(alg);
        doc["algebra"] = {{"n", alg.n},
                          {"Z", cjson(trace_Z(alg))},
                          {"condition", check.condition},
                          {"associativity", check.associativity},
                          {"frobenius", check.frobenius}};
        r.below("associativity", check.associativity, 1e-9);
        r.below("frobenius", check.frobenius, 1e-9);
      } else {
        const auto points = solve_critical(subject->po, cfg);
        double worst = 0.0;
        doc["z_traces"] = ztrace_section(*subject, points, cfg, worst);
        r.below("z_equals_det", worst, 1e-8);
      }
    } else if (opts.command == "qsr") {
      doc["qsr"] = qsr_section(r, *subject, kCheckSeed, "");
    } else if (opts.command == "c1check") {
      doc["c1"] = c1_section(r, *subject, cfg, "");
    } else if (opts.command == "verify") {
      if (subject) {
        doc["models"] = json::array({verify_model(r, *subject, cfg, kCheckSeed, "")});
      } else {
        json models = json::array();
        for (const auto& name : kBuiltins) {
          Options one = opts;
          one.model = name;
          models.push_back(verify_model(r, load_subject(one), cfg, kCheckSeed, name + "/"));
        }
        doc["models"] = models;
        boundary_control(r, cfg);
        clifford_suite(r, kCheckSeed);
        novikov_suite(r, kCheckSeed);
      }
    }
  } catch (const Error& e) {
    if (is_input_error(e.code())) throw;
    doc["error"] = {{"code", std::string(to_string(e.code()))}, {"message", e.what()}};
    r.below("completed", 1.0, 0.0);
  }

  const json final_doc = r.finish();
  if (opts.format == "csv") {
    write_csv(out, opts.command, final_doc, r);
  } else {
    out << final_doc.dump(2) << "\n";
  }
  return r.pass() ? 0 : 1;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options opts;
  CLI::App app{"Landau-Ginzburg potentials and mirror identities for compact toric manifolds", "toriclg"};
  app.add_option("command", opts.command, "info | potential | critical | residue | z-trace | qsr | c1check | verify")
      ->required()
      ->check(CLI::IsMember(kCommands));
  app.add_option("--model", opts.model, "built-in model name or inline JSON");
  app.add_option("--input", opts.input, "model or custom-potential JSON file");
  app.add_option("--algebra", opts.algebra, "Frobenius algebra JSON file for z-trace");
  app.add_option("--t", opts.t, "comma-separated values of T")->delimiter(',');
  app.add_option("--u", opts.u, "basepoint p/q,p/q");
  app.add_option("--bulk", opts.bulk, "bulk parameter j=re,im on facet j (1-based), repeatable");
  app.add_option("--alpha", opts.alpha, "parameter p/q for s2xs2 and f2");
  app.add_option("--seed", opts.seed, "random seed");
  app.add_option("--cutoff", opts.cutoff, "series cutoff p/q");
  app.add_option("--starts", opts.starts, "Newton starts")->check(CLI::PositiveNumber);
  app.add_option("--format", opts.format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--tol", opts.tol, "override verdict tolerances")->check(CLI::PositiveNumber);

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    return execute(opts, out);
  } catch (const Error& e) {
    err << "toriclg: " << e.what() << "\n";
    return is_input_error(e.code()) ? 2 : 1;
  } catch (const std::exception& e) {
    err << "toriclg: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace toriclg
