#include "toriclg/critsolve.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/LU>

#include "toriclg/error.hpp"

namespace toriclg {

namespace {

constexpr double kPi = std::numbers::pi;

// Potential in x = log y with coefficients c_k(t) = sum a T^e and their
// s-derivatives (s = log t).
class System {
 public:
  explicit System(const LaurentPolynomial& poly) : n_(poly.dim()) {
    k_.resize(static_cast<Eigen::Index>(poly.terms().size()), n_);
    Eigen::Index r = 0;
    for (const auto& [k, c] : poly.terms()) {
      for (int i = 0; i < n_; ++i) k_(r, i) = k[i];
      coeffs_.push_back(c);
      ++r;
    }
  }

  int dim() const { return n_; }

  void set_t(double t) {
    c_.resize(k_.rows());
    dc_.resize(k_.rows());
    for (Eigen::Index r = 0; r < k_.rows(); ++r) {
      Complex v{0.0, 0.0}, dv{0.0, 0.0};
      for (const auto& term : coeffs_[static_cast<std::size_t>(r)].terms()) {
        const double e = term.exponent.to_double();
        const Complex a = term.coeff * std::pow(t, e);
        v += a;
        dv += a * e;
      }
      c_(r) = v;
      dc_(r) = dv;
    }
  }

  Eigen::VectorXcd monomials(const Eigen::VectorXcd& x) const {
    Eigen::VectorXcd phase = k_.cast<Complex>() * x;
    return c_.cwiseProduct(phase.array().exp().matrix());
  }
  Eigen::VectorXcd gradient(const Eigen::VectorXcd& m) const { return k_.cast<Complex>().transpose() * m; }
  Eigen::MatrixXcd hessian(const Eigen::VectorXcd& m) const {
    const Eigen::MatrixXcd k = k_.cast<Complex>();
    Eigen::MatrixXcd h = k.transpose() * m.asDiagonal() * k;
    return (h + h.transpose()) / 2.0;
  }
  // d/ds of the gradient at fixed x
  Eigen::VectorXcd gradient_s(const Eigen::VectorXcd& x) const {
    Eigen::VectorXcd phase = k_.cast<Complex>() * x;
    return k_.cast<Complex>().transpose() * dc_.cwiseProduct(phase.array().exp().matrix());
  }
  // max_k |k_i m_k| per row
  Eigen::VectorXd row_scale(const Eigen::VectorXcd& m) const {
    Eigen::VectorXd s = Eigen::VectorXd::Zero(n_);
    for (Eigen::Index r = 0; r < k_.rows(); ++r) {
      for (int i = 0; i < n_; ++i) s(i) = std::max(s(i), std::abs(k_(r, i)) * std::abs(m(r)));
    }
    return s;
  }

 private:
  int n_;
  Eigen::MatrixXd k_;
  std::vector<Series> coeffs_;
  Eigen::VectorXcd c_, dc_;
};

double relative_residual(const System& sys, const Eigen::VectorXcd& m) {
  const Eigen::VectorXcd g = sys.gradient(m);
  const Eigen::VectorXd s = sys.row_scale(m);
  double worst = 0.0;
  for (int i = 0; i < sys.dim(); ++i) {
    if (s(i) == 0.0) return std::numeric_limits<double>::infinity();
    worst = std::max(worst, std::abs(g(i)) / s(i));
  }
  return worst;
}

bool finite(const Eigen::VectorXcd& v) { return v.allFinite(); }

// Row-equilibrated Newton step; nullopt when the Hessian is numerically singular.
std::optional<Eigen::VectorXcd> newton_step(const System& sys, const Eigen::VectorXcd& x) {
  const Eigen::VectorXcd m = sys.monomials(x);
  const Eigen::VectorXd s = sys.row_scale(m);
  if ((s.array() == 0.0).any()) return std::nullopt;
  const Eigen::VectorXd inv = s.cwiseInverse();
  Eigen::MatrixXcd h = inv.cast<Complex>().asDiagonal() * sys.hessian(m);
  Eigen::VectorXcd g = inv.cast<Complex>().asDiagonal() * sys.gradient(m);
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(h);
  if (!lu.isInvertible()) return std::nullopt;
  Eigen::VectorXcd step = lu.solve(g);
  if (!finite(step)) return std::nullopt;
  return step;
}

struct NewtonResult {
  Eigen::VectorXcd x;
  int iterations = 0;
};

std::optional<NewtonResult> newton(const System& sys, Eigen::VectorXcd x, double tol, int max_iter,
                                   double max_step) {
  for (int it = 0; it < max_iter; ++it) {
    if (relative_residual(sys, sys.monomials(x)) <= tol) {
      // one polishing step
      if (auto step = newton_step(sys, x); step && step->cwiseAbs().maxCoeff() < 1e-6) {
        Eigen::VectorXcd polished = x - *step;
        if (relative_residual(sys, sys.monomials(polished)) <= tol) x = polished;
      }
      return NewtonResult{x, it};
    }
    auto step = newton_step(sys, x);
    if (!step) return std::nullopt;
    const double len = step->cwiseAbs().maxCoeff();
    if (len > max_step) *step *= max_step / len;
    x -= *step;
    if (!finite(x) || x.real().cwiseAbs().maxCoeff() > 700.0) return std::nullopt;
  }
  return std::nullopt;
}

Eigen::VectorXcd to_y(const Eigen::VectorXcd& x) { return x.array().exp().matrix(); }

bool same_point(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b, double tol) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (std::abs(a(i) - b(i)) >= tol * std::abs(a(i))) return false;
  }
  return true;
}

void add_unique(std::vector<Eigen::VectorXcd>& xs, const Eigen::VectorXcd& x, double tol) {
  const Eigen::VectorXcd y = to_y(x);
  for (const auto& other : xs) {
    if (same_point(to_y(other), y, tol)) return;
  }
  xs.push_back(x);
}

struct Box {
  Eigen::VectorXd lo, hi;
};

Box start_box(const PotentialFunction& po) {
  const int n = po.dim();
  Box b{Eigen::VectorXd::Zero(n), Eigen::VectorXd::Ones(n)};
  if (po.toric && !po.toric->vertices.empty()) {
    b.lo = Eigen::VectorXd::Constant(n, std::numeric_limits<double>::infinity());
    b.hi = -b.lo;
    for (const auto& v : po.toric->vertices) {
      const Eigen::VectorXd p = to_double(v.point);
      b.lo = b.lo.cwiseMin(p);
      b.hi = b.hi.cwiseMax(p);
    }
  }
  const Eigen::VectorXd pad = 0.25 * (b.hi - b.lo).cwiseMax(Eigen::VectorXd::Constant(n, 1e-3));
  b.lo -= pad;
  b.hi += pad;
  return b;
}

std::vector<Eigen::VectorXcd> multistart(const System& sys, const Box& box, double t, int starts,
                                         std::uint64_t seed, const SolverConfig& cfg) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double log_t = std::log(t);
  const int n = sys.dim();
  std::vector<Eigen::VectorXcd> found;
  for (int s = 0; s < starts; ++s) {
    Eigen::VectorXcd x(n);
    for (int i = 0; i < n; ++i) {
      const double u = box.lo(i) + (box.hi(i) - box.lo(i)) * unit(rng);
      x(i) = Complex(u * log_t, 2.0 * kPi * unit(rng));
    }
    if (auto r = newton(sys, x, cfg.grad_tol, cfg.max_iter, 2.0)) add_unique(found, r->x, cfg.dedupe_tol);
  }
  return found;
}

// Continuation in s = log t with a tangent predictor and Newton corrector.
std::optional<Eigen::VectorXcd> track(System& sys, Eigen::VectorXcd x, double t_from, double t_to,
                                      const SolverConfig& cfg, double max_h) {
  const double s_end = std::log(t_to);
  double s = std::log(t_from);
  const double dir = s_end > s ? 1.0 : -1.0;
  double h = std::min(0.25, max_h);
  while (dir * (s_end - s) > 0.0) {
    const double step = std::min(h, dir * (s_end - s));
    sys.set_t(std::exp(s));
    const Eigen::VectorXcd m = sys.monomials(x);
    const Eigen::VectorXcd inv = sys.row_scale(m).cwiseInverse().cast<Complex>();
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(inv.asDiagonal() * sys.hessian(m));
    if (!lu.isInvertible()) return std::nullopt;
    const Eigen::VectorXcd tangent = -lu.solve(inv.asDiagonal() * sys.gradient_s(x));
    const Eigen::VectorXcd predicted = x + dir * step * tangent;
    const double s_next = s + dir * step;
    sys.set_t(std::exp(s_next));
    auto corrected = newton(sys, predicted, 1e-10, 8, 0.5);
    const bool ok = corrected && corrected->iterations <= 6 &&
                    (corrected->x - predicted).cwiseAbs().maxCoeff() < 0.1;
    if (!ok) {
      h = step / 2.0;
      if (h < 1e-9) return std::nullopt;
      continue;
    }
    x = corrected->x;
    s = s_next;
    if (corrected->iterations <= 3) h = std::min(step * 1.5, max_h);
  }
  sys.set_t(t_to);
  auto final = newton(sys, x, cfg.grad_tol, cfg.max_iter, 0.5);
  if (!final || (final->x - x).cwiseAbs().maxCoeff() > 1e-3) return std::nullopt;
  return final->x;
}

struct Ladder {
  std::vector<double> ts;  // decreasing, starting at the reference sample
};

// Tracks every reference solution down the ladder; entry [p][j] is the
// solution of point p at ladder[j].
std::vector<std::vector<Eigen::VectorXcd>> track_all(System& sys, const std::vector<Eigen::VectorXcd>& roots,
                                                     const Ladder& ladder, const SolverConfig& cfg) {
  for (double max_h : {2.0, 0.25}) {
    std::vector<std::vector<Eigen::VectorXcd>> paths;
    bool lost = false;
    for (const auto& x0 : roots) {
      std::vector<Eigen::VectorXcd> path{x0};
      for (std::size_t j = 1; j < ladder.ts.size() && !lost; ++j) {
        auto next = track(sys, path.back(), ladder.ts[j - 1], ladder.ts[j], cfg, max_h);
        if (!next) {
          lost = true;
        } else {
          path.push_back(*next);
        }
      }
      if (lost) break;
      paths.push_back(std::move(path));
    }
    // paths that merged indicate a jump between solution branches
    for (std::size_t j = 0; j < ladder.ts.size() && !lost; ++j) {
      for (std::size_t a = 0; a < paths.size() && !lost; ++a) {
        for (std::size_t b = a + 1; b < paths.size() && !lost; ++b) {
          if (same_point(to_y(paths[a][j]), to_y(paths[b][j]), cfg.dedupe_tol)) lost = true;
        }
      }
    }
    if (!lost) return paths;
  }
  throw Error(ErrorCode::TrackingLost, "continuation diverged or two solution paths merged");
}

struct Fit {
  RationalVector valuation;
  Eigen::VectorXcd leading;
};

Fit fit_valuation(const std::vector<Eigen::VectorXcd>& xs, const std::vector<double>& ts, const SolverConfig& cfg) {
  const std::size_t count = std::min<std::size_t>(3, ts.size());
  const std::size_t first = ts.size() - count;
  const int n = static_cast<int>(xs.front().size());
  Fit fit{RationalVector(n), Eigen::VectorXcd(n)};
  double mean_l = 0.0;
  for (std::size_t j = first; j < ts.size(); ++j) mean_l += std::log(ts[j]) / count;
  for (int i = 0; i < n; ++i) {
    double mean_y = 0.0;
    for (std::size_t j = first; j < ts.size(); ++j) mean_y += xs[j](i).real() / count;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t j = first; j < ts.size(); ++j) {
      const double dl = std::log(ts[j]) - mean_l;
      sxy += dl * (xs[j](i).real() - mean_y);
      sxx += dl * dl;
    }
    const double slope = sxy / sxx;
    double rms = 0.0;
    for (std::size_t j = first; j < ts.size(); ++j) {
      const double r = xs[j](i).real() - mean_y - slope * (std::log(ts[j]) - mean_l);
      rms += r * r / count;
    }
    rms = std::sqrt(rms);
    const Rational v = nearest_rational(slope, cfg.val_denom_bound);
    if (std::abs(slope - v.to_double()) > 1e-3 || rms > 1e-3) {
      throw Error(ErrorCode::ValuationUnstable,
                  "valuation of y_" + std::to_string(i + 1) + " estimated as " + std::to_string(slope) +
                      "; raise starts or add samples");
    }
    fit.valuation(i) = v;
    const double t_deep = ts.back();
    fit.leading(i) = std::exp(xs.back()(i)) / std::pow(t_deep, v.to_double());
  }
  return fit;
}

double gradient_norm_ratio(const System& sys, const Eigen::VectorXcd& x) {
  const Eigen::VectorXcd m = sys.monomials(x);
  const double scale = m.cwiseAbs().maxCoeff();
  return scale > 0.0 ? sys.gradient(m).norm() / scale : 0.0;
}

bool is_nondegenerate(const Eigen::MatrixXcd& h) {
  const double norm = h.norm();
  return std::abs(h.determinant()) > 1e-9 * std::pow(norm, static_cast<double>(h.rows()));
}

double rounded(double v) { return std::round(v * 1e9) / 1e9; }

double principal_arg(Complex z) {
  double a = rounded(std::arg(z));
  if (a <= -rounded(kPi)) a = rounded(kPi);
  return a;
}

bool point_less(const CriticalPoint& a, const CriticalPoint& b) {
  for (Eigen::Index i = 0; i < a.valuation.size(); ++i) {
    if (a.valuation(i) != b.valuation(i)) return a.valuation(i) < b.valuation(i);
  }
  const Eigen::VectorXcd& ya = a.samples.rbegin()->second;
  const Eigen::VectorXcd& yb = b.samples.rbegin()->second;
  for (Eigen::Index i = 0; i < ya.size(); ++i) {
    const double pa = principal_arg(ya(i)), pb = principal_arg(yb(i));
    if (pa != pb) return pa < pb;
  }
  for (Eigen::Index i = 0; i < ya.size(); ++i) {
    const double ma = rounded(std::abs(ya(i))), mb = rounded(std::abs(yb(i)));
    if (ma != mb) return ma < mb;
  }
  return false;
}

int expected_count(const PotentialFunction& po, const SolverConfig& cfg) {
  if (cfg.expected_count) return *cfg.expected_count;
  if (po.toric) return static_cast<int>(po.toric->vertices.size());
  return std::max(static_cast<int>(po.poly.terms().size()), po.dim() + 1);
}

}  // namespace

void SolverConfig::validate() const {
  if (t_samples.size() < 2) throw Error(ErrorCode::Malformed, "need at least two t samples");
  for (std::size_t i = 0; i < t_samples.size(); ++i) {
    if (!(t_samples[i] > 0.0 && t_samples[i] < 1.0)) throw Error(ErrorCode::OutOfRange, "t samples must lie in (0,1)");
    if (i > 0 && !(t_samples[i] > t_samples[i - 1])) {
      throw Error(ErrorCode::Malformed, "t samples must be strictly increasing");
    }
  }
  for (std::size_t i = 0; i < probes.size(); ++i) {
    if (!(probes[i] > 0.0 && probes[i] < t_samples.front())) {
      throw Error(ErrorCode::Malformed, "probe values must lie below the smallest sample");
    }
    if (i > 0 && !(probes[i] < probes[i - 1])) throw Error(ErrorCode::Malformed, "probes must be decreasing");
  }
  if (starts && *starts < 1) throw Error(ErrorCode::Malformed, "starts must be positive");
  if (!(grad_tol > 0.0) || !(dedupe_tol > 0.0)) throw Error(ErrorCode::Malformed, "tolerances must be positive");
  if (max_iter < 1 || val_denom_bound < 1) throw Error(ErrorCode::Malformed, "iteration and denominator bounds");
}

PotentialFunction absolute(const PotentialFunction& po) {
  return rebase(po, RationalVector::Constant(po.dim(), Rational(0)));
}

std::vector<CriticalPoint> solve_critical(const PotentialFunction& po, const SolverConfig& cfg) {
  cfg.validate();
  const PotentialFunction abs_po = absolute(po);
  System sys(abs_po.poly);
  const double t_ref = cfg.t_samples.back();
  const Box box = start_box(po);
  sys.set_t(t_ref);

  int starts = cfg.starts.value_or(60 * std::max(1, expected_count(po, cfg)));
  std::vector<Eigen::VectorXcd> roots;
  for (int attempt = 0;; ++attempt) {
    roots = multistart(sys, box, t_ref, starts, cfg.seed, cfg);
    if (!cfg.cross_check) break;
    auto other = multistart(sys, box, t_ref, starts, cfg.seed ^ 0x9e3779b97f4a7c15ULL, cfg);
    const std::size_t a = roots.size(), b = other.size();
    for (const auto& x : other) add_unique(roots, x, cfg.dedupe_tol);
    if (a == b && roots.size() == a) break;
    if (attempt == 1) {
      throw Error(ErrorCode::Underresolved, "solution count differs between seeds (" + std::to_string(a) + " vs " +
                                                std::to_string(b) + "); raise starts");
    }
    starts *= 2;
  }

  Ladder ladder;
  for (auto it = cfg.t_samples.rbegin(); it != cfg.t_samples.rend(); ++it) ladder.ts.push_back(*it);
  for (double p : cfg.probes) ladder.ts.push_back(p);
  const auto paths = track_all(sys, roots, ladder, cfg);

  std::vector<CriticalPoint> points;
  for (const auto& path : paths) {
    CriticalPoint cp;
    const std::size_t ns = cfg.t_samples.size();
    std::vector<Eigen::VectorXcd> fit_x;
    std::vector<double> fit_t;
    const std::size_t fit_from = cfg.probes.size() >= 2 ? ns : 0;
    for (std::size_t j = fit_from; j < ladder.ts.size(); ++j) {
      fit_x.push_back(path[j]);
      fit_t.push_back(ladder.ts[j]);
    }
    Fit fit = fit_valuation(fit_x, fit_t, cfg);
    cp.valuation = fit.valuation;
    cp.leading = fit.leading;
    cp.interior = po.toric ? interior_test(*po.toric, cp.valuation) : true;
    for (std::size_t j = 0; j < ns; ++j) {
      const double t = ladder.ts[j];
      sys.set_t(t);
      const Eigen::VectorXcd& x = path[j];
      const Eigen::VectorXcd m = sys.monomials(x);
      const Eigen::MatrixXcd h = sys.hessian(m);
      cp.samples[t] = to_y(x);
      cp.hess_det[t] = h.determinant();
      cp.crit_value[t] = m.sum();
      cp.residual = std::max(cp.residual, gradient_norm_ratio(sys, x));
      if (!is_nondegenerate(h)) cp.nondegenerate = false;
    }
    points.push_back(std::move(cp));
  }

  // degenerate clusters: merge approximations of the same point
  std::vector<CriticalPoint> merged;
  for (auto& cp : points) {
    bool absorbed = false;
    if (!cp.nondegenerate) {
      for (auto& other : merged) {
        if (!other.nondegenerate &&
            same_point(other.samples.at(t_ref), cp.samples.at(t_ref), 1e-3)) {
          ++other.multiplicity;
          absorbed = true;
          break;
        }
      }
    }
    if (!absorbed) merged.push_back(std::move(cp));
  }
  std::stable_sort(merged.begin(), merged.end(), point_less);
  return merged;
}

namespace {

// Gaussian elimination over Series, pivoting on the lowest valuation.
std::vector<Series> solve_series(std::vector<std::vector<Series>> a, std::vector<Series> b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = n;
    for (std::size_t r = col; r < n; ++r) {
      auto v = nv_valuation(a[r][col]);
      if (!v) continue;
      if (piv == n) {
        piv = r;
        continue;
      }
      auto pv = nv_valuation(a[piv][col]);
      if (*v < *pv || (*v == *pv && std::abs(a[r][col].terms().front().coeff) >
                                         std::abs(a[piv][col].terms().front().coeff))) {
        piv = r;
      }
    }
    if (piv == n) throw Error(ErrorCode::DegenerateLeading, "singular Jacobian over the Novikov field");
    std::swap(a[col], a[piv]);
    std::swap(b[col], b[piv]);
    const Series inv = nv_inv(a[col][col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      if (a[r][col].is_zero()) continue;
      const Series f = nv_mul(a[r][col], inv);
      for (std::size_t c = col; c < n; ++c) a[r][c] = nv_sub(a[r][c], nv_mul(f, a[col][c]));
      b[r] = nv_sub(b[r], nv_mul(f, b[col]));
    }
  }
  std::vector<Series> z(n);
  for (std::size_t i = n; i-- > 0;) {
    Series rhs = b[i];
    for (std::size_t c = i + 1; c < n; ++c) rhs = nv_sub(rhs, nv_mul(a[i][c], z[c]));
    z[i] = nv_mul(rhs, nv_inv(a[i][i]));
  }
  return z;
}

bool vanishes_below(const Series& s, const Rational& order) {
  if (s.cutoff() < order) return false;
  return s.is_zero() || !(s.terms().front().exponent < order);
}

}  // namespace

std::vector<Series> lift_tadic(const PotentialFunction& po, const CriticalPoint& point, const Rational& order) {
  const int n = po.dim();
  if (point.valuation.size() != n || point.leading.size() != n) {
    throw Error(ErrorCode::DimensionMismatch, "critical point dimension");
  }
  if (!point.nondegenerate) throw Error(ErrorCode::DegenerateLeading, "critical point is degenerate");
  // eta = T^{-val} y, i.e. the chart based at the valuation
  const PotentialFunction g = rebase(po, point.valuation);
  std::vector<std::pair<Exponent, Series>> terms(g.poly.terms().begin(), g.poly.terms().end());

  std::vector<Rational> row_val(n);
  for (int i = 0; i < n; ++i) {
    std::optional<Rational> m;
    for (const auto& [k, c] : terms) {
      if (k[i] == 0) continue;
      const Rational v = *nv_valuation(c);
      m = m ? min(*m, v) : v;
    }
    if (!m) throw Error(ErrorCode::DegenerateLeading, "potential does not depend on y_" + std::to_string(i + 1));
    row_val[i] = *m;
  }
  const Rational min_row = *std::min_element(row_val.begin(), row_val.end());
  const Rational work = order - min_row + Rational(1);

  std::vector<Series> eta;
  for (int i = 0; i < n; ++i) eta.push_back(Series::constant(point.leading(i)).with_cutoff(work));

  auto evaluate = [&](std::vector<Series>& f, std::vector<std::vector<Series>>& jac) {
    f.assign(n, Series(work + min_row + Rational(4)));
    jac.assign(n, std::vector<Series>(n, Series(work + min_row + Rational(4))));
    std::vector<double> scale(n, 0.0);
    for (const auto& [k, c] : terms) {
      Series mono = c;
      for (int i = 0; i < n; ++i) {
        if (k[i] != 0) mono = nv_mul(mono, nv_pow(eta[i], k[i]));
      }
      for (int i = 0; i < n; ++i) {
        if (k[i] == 0) continue;
        scale[i] = std::max(scale[i], std::abs(k[i]) * mono.max_abs());
        f[i] = nv_add(f[i], nv_scale(mono, double(k[i])));
        for (int j = 0; j < n; ++j) {
          if (k[j] != 0) jac[i][j] = nv_add(jac[i][j], nv_scale(mono, double(k[i] * k[j])));
        }
      }
    }
    for (int i = 0; i < n; ++i) f[i] = f[i].chopped(scale[i]);
  };

  std::vector<Series> f;
  std::vector<std::vector<Series>> jac;
  evaluate(f, jac);
  {
    Eigen::MatrixXcd lead(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) lead(i, j) = jac[i][j].coeff(row_val[i]);
    }
    if (!is_nondegenerate(lead)) {
      throw Error(ErrorCode::DegenerateLeading, "Hessian of the leading system is singular");
    }
  }

  for (int it = 0; it < 40; ++it) {
    bool done = true;
    for (int i = 0; i < n; ++i) done = done && vanishes_below(f[i], order);
    if (done) {
      // delta eta = J^{-1} F is only controlled below order - max row valuation
      const Rational certified = order - *std::max_element(row_val.begin(), row_val.end());
      std::vector<Series> y;
      for (int i = 0; i < n; ++i) y.push_back(eta[i].truncated(certified).shifted(1.0, point.valuation(i)));
      return y;
    }
    const std::vector<Series> z = solve_series(jac, f);
    bool moved = false;
    for (int i = 0; i < n; ++i) {
      const Series delta = nv_mul(eta[i], z[i]).truncated(work).chopped(eta[i].max_abs());
      if (!delta.is_zero()) moved = true;
      eta[i] = nv_sub(eta[i], delta).with_cutoff(work).chopped(eta[i].max_abs());
    }
    evaluate(f, jac);
    if (!moved) break;
  }
  throw Error(ErrorCode::OrderUnreachable,
              "residual does not vanish to order " + order.to_string() + " within the coefficient precision");
}

int jacobian_rank(const std::vector<CriticalPoint>& points) {
  int count = 0;
  for (const auto& p : points) {
    if (!p.interior) continue;
    if (!p.nondegenerate) {
      throw Error(ErrorCode::NotMorse, "an interior critical point is degenerate; count is only a lower bound");
    }
    ++count;
  }
  return count;
}

}  // namespace toriclg
