#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>

#include <Eigen/Core>

namespace toriclg {

/// Exact rational with 64-bit components, always kept in lowest terms with a
/// positive denominator. Arithmetic that overflows throws Error(Overflow).
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t num) : num_(num), den_(1) {}  // NOLINT: implicit from integers
  Rational(std::int64_t num, std::int64_t den);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  bool is_zero() const { return num_ == 0; }
  bool is_integer() const { return den_ == 1; }

  /// Accepts "p", "p/q", "-p/q" with optional surrounding whitespace.
  static Rational parse(std::string_view text);
  std::string to_string() const;

  Rational operator-() const;
  Rational& operator+=(const Rational& o);
  Rational& operator-=(const Rational& o);
  Rational& operator*=(const Rational& o);
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

Rational abs(const Rational& r);
Rational min(const Rational& a, const Rational& b);
Rational max(const Rational& a, const Rational& b);

/// Nearest rational with denominator <= max_den; ties prefer the smaller denominator.
Rational nearest_rational(double x, std::int64_t max_den);

std::ostream& operator<<(std::ostream& os, const Rational& r);

using RationalVector = Eigen::Matrix<Rational, Eigen::Dynamic, 1>;

RationalVector parse_rational_vector(std::string_view text);  // "p/q,p/q,..."
std::string to_string(const RationalVector& v);
Eigen::VectorXd to_double(const RationalVector& v);

}  // namespace toriclg

namespace Eigen {

template <>
struct NumTraits<toriclg::Rational> : GenericNumTraits<toriclg::Rational> {
  using Real = toriclg::Rational;
  using NonInteger = toriclg::Rational;
  using Literal = toriclg::Rational;
  using Nested = toriclg::Rational;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 2,
    AddCost = 8,
    MulCost = 8,
  };
  static inline Real epsilon() { return 0; }
  static inline Real dummy_precision() { return 0; }
  static inline int digits10() { return 18; }
};

}  // namespace Eigen

template <>
struct std::hash<toriclg::Rational> {
  std::size_t operator()(const toriclg::Rational& r) const noexcept {
    return std::hash<std::int64_t>{}(r.num()) * 1000003u ^ std::hash<std::int64_t>{}(r.den());
  }
};
