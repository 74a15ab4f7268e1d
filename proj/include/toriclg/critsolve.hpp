#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "toriclg/novikov.hpp"
#include "toriclg/potential.hpp"

namespace toriclg {

struct SolverConfig {
  std::vector<double> t_samples{0.05, 0.1, 0.2};
  std::optional<int> starts;          // default 60 x expected count
  std::optional<int> expected_count;  // default: vertex count, or the number of terms
  double grad_tol = 1e-12;
  double dedupe_tol = 1e-6;
  int max_iter = 200;
  std::uint64_t seed = 0;
  std::int64_t val_denom_bound = 60;
  /// Extra parameter values, far below the samples, used only to read off
  /// valuations and leading coefficients.
  std::vector<double> probes{1e-8, 1e-16, 1e-24, 1e-32};
  /// Rerun with a second seed and compare counts.
  bool cross_check = true;

  void validate() const;
};

/// A critical point tracked across the sample values of T. Coordinates are
/// absolute (basepoint 0) y-values.
struct CriticalPoint {
  std::map<double, Eigen::VectorXcd> samples;
  RationalVector valuation;
  Eigen::VectorXcd leading;  // ybar with y ~ ybar T^valuation
  bool interior = true;
  bool nondegenerate = true;
  int multiplicity = 1;
  std::map<double, Complex> hess_det;
  std::map<double, Complex> crit_value;
  double residual = 0.0;  // worst relative gradient norm over the samples
  std::optional<std::vector<Series>> lifted;
};

/// The potential rewritten in absolute coordinates (basepoint 0).
PotentialFunction absolute(const PotentialFunction& po);

/// All critical points, sorted by (valuation, arg y_1, |y|).
std::vector<CriticalPoint> solve_critical(const PotentialFunction& po, const SolverConfig& cfg = {});

/// T-adic Newton refinement of `point`: absolute series y_i with every
/// log-derivative vanishing to valuation >= order.
std::vector<Series> lift_tadic(const PotentialFunction& po, const CriticalPoint& point, const Rational& order);

/// Number of interior critical points; throws NotMorse when one is degenerate.
int jacobian_rank(const std::vector<CriticalPoint>& points);

}  // namespace toriclg
