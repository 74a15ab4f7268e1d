#pragma once

#include <complex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "toriclg/rational.hpp"

namespace toriclg {

using Complex = std::complex<double>;

/// Default truncation depth above the leading exponent for freshly built series.
inline const Rational kDefaultOrder{4};

/// Relative drop threshold for a coefficient, measured against the magnitudes it was summed from.
inline constexpr double kZeroTolerance = 1e-12;
inline constexpr double kAbsoluteFloor = 1e-300;

struct Term {
  Rational exponent;
  Complex coeff;
};

/// Truncated Novikov series sum a_i T^{e_i}: strictly increasing rational
/// exponents, complex coefficients, known exactly below `cutoff`.
class Series {
 public:
  /// The zero series, exact below `cutoff`.
  explicit Series(Rational cutoff = kDefaultOrder) : cutoff_(cutoff) {}

  /// Builds from unsorted terms; merges duplicates, drops cancelled or out-of-range terms.
  Series(std::vector<Term> terms, Rational cutoff);

  /// Drops coefficients at or below kZeroTolerance * scale.
  Series chopped(double scale) const;

  static Series monomial(Complex coeff, Rational exponent);
  static Series monomial(Complex coeff, Rational exponent, Rational cutoff);
  static Series constant(Complex c) { return monomial(c, Rational(0)); }

  /// Parses "(re,im)*T^(p/q) + (re,im) + ... [+ O(T^(p/q))]".
  static Series parse(std::string_view text);

  const std::vector<Term>& terms() const { return terms_; }
  const Rational& cutoff() const { return cutoff_; }
  bool is_zero() const { return terms_.empty(); }

  /// Coefficient of T^e (zero when absent).
  Complex coeff(const Rational& e) const;
  double max_abs() const;

  /// Drops terms at or beyond `c` and lowers the cutoff to `c`.
  Series truncated(const Rational& c) const;
  /// Sets the cutoff to `c`; extending it asserts the terms are exact to `c`.
  Series with_cutoff(const Rational& c) const;

  /// Multiplication by c T^e (exact, shifts the cutoff).
  Series shifted(Complex c, const Rational& e) const;

  std::string to_string(bool with_cutoff = false) const;

 private:
  std::vector<Term> terms_;
  Rational cutoff_;
};

Series nv_add(const Series& a, const Series& b);
Series nv_sub(const Series& a, const Series& b);
Series nv_neg(const Series& a);
Series nv_mul(const Series& a, const Series& b);
Series nv_scale(const Series& a, Complex c);

/// Multiplicative inverse; `cutoff` defaults to the relative precision of `a`
/// carried over to the inverse.
Series nv_inv(const Series& a, std::optional<Rational> cutoff = std::nullopt);
Series nv_exp(const Series& a);
Series nv_pow(const Series& a, int k);

/// Smallest exponent; nullopt stands for +infinity.
std::optional<Rational> nv_valuation(const Series& a);

Complex nv_eval(const Series& a, double t);

inline Series operator+(const Series& a, const Series& b) { return nv_add(a, b); }
inline Series operator-(const Series& a, const Series& b) { return nv_sub(a, b); }
inline Series operator-(const Series& a) { return nv_neg(a); }
inline Series operator*(const Series& a, const Series& b) { return nv_mul(a, b); }

std::string format_complex(Complex c);

}  // namespace toriclg
