#include "toriclg/rational.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

#include "toriclg/error.hpp"

namespace toriclg {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::ZeroSeries: return "ZeroSeries";
    case ErrorCode::NegativeValuation: return "NegativeValuation";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::Parse: return "Parse";
    case ErrorCode::Unbounded: return "Unbounded";
    case ErrorCode::EmptyInterior: return "EmptyInterior";
    case ErrorCode::NotSmooth: return "NotSmooth";
    case ErrorCode::Malformed: return "Malformed";
    case ErrorCode::NoConeDecomposition: return "NoConeDecomposition";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::OutsideP: return "OutsideP";
    case ErrorCode::NotInterior: return "NotInterior";
    case ErrorCode::F2Required: return "F2Required";
    case ErrorCode::ZeroCoordinate: return "ZeroCoordinate";
    case ErrorCode::ValuationUnstable: return "ValuationUnstable";
    case ErrorCode::TrackingLost: return "TrackingLost";
    case ErrorCode::Underresolved: return "Underresolved";
    case ErrorCode::DegenerateLeading: return "DegenerateLeading";
    case ErrorCode::OrderUnreachable: return "OrderUnreachable";
    case ErrorCode::NotMorse: return "NotMorse";
    case ErrorCode::ZeroD: return "ZeroD";
    case ErrorCode::SingularPairing: return "SingularPairing";
    case ErrorCode::InvalidAlgebra: return "InvalidAlgebra";
    case ErrorCode::Degenerate: return "Degenerate";
    case ErrorCode::UnsupportedModel: return "UnsupportedModel";
    case ErrorCode::Usage: return "Usage";
  }
  return "Unknown";
}

namespace {

using wide = __int128;

std::int64_t narrow(wide v) {
  if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min()) {
    throw Error(ErrorCode::Overflow, "rational component exceeds 64 bits");
  }
  return static_cast<std::int64_t>(v);
}

wide gcd_wide(wide a, wide b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    wide t = a % b;
    a = b;
    b = t;
  }
  return a;
}

Rational make(wide num, wide den) {
  if (den == 0) throw Error(ErrorCode::OutOfRange, "zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  wide g = gcd_wide(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  return Rational(narrow(num), narrow(den));
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw Error(ErrorCode::OutOfRange, "zero denominator");
  wide n = num, d = den;
  if (d < 0) {
    n = -n;
    d = -d;
  }
  wide g = gcd_wide(n, d);
  if (g > 1) {
    n /= g;
    d /= g;
  }
  num_ = narrow(n);
  den_ = narrow(d);
}

Rational Rational::operator-() const {
  return make(-static_cast<wide>(num_), den_);
}

Rational& Rational::operator+=(const Rational& o) {
  *this = make(static_cast<wide>(num_) * o.den_ + static_cast<wide>(o.num_) * den_,
               static_cast<wide>(den_) * o.den_);
  return *this;
}

Rational& Rational::operator-=(const Rational& o) {
  *this = make(static_cast<wide>(num_) * o.den_ - static_cast<wide>(o.num_) * den_,
               static_cast<wide>(den_) * o.den_);
  return *this;
}

Rational& Rational::operator*=(const Rational& o) {
  *this = make(static_cast<wide>(num_) * o.num_, static_cast<wide>(den_) * o.den_);
  return *this;
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.num_ == 0) throw Error(ErrorCode::OutOfRange, "division by zero rational");
  *this = make(static_cast<wide>(num_) * o.den_, static_cast<wide>(den_) * o.num_);
  return *this;
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  wide lhs = static_cast<wide>(a.num_) * b.den_;
  wide rhs = static_cast<wide>(b.num_) * a.den_;
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

Rational Rational::parse(std::string_view text) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
  };
  auto parse_int = [](std::string_view s) -> std::int64_t {
    if (s.empty()) throw Error(ErrorCode::Parse, "empty integer");
    std::size_t i = 0;
    bool neg = false;
    if (s[0] == '-' || s[0] == '+') {
      neg = s[0] == '-';
      i = 1;
    }
    if (i == s.size()) throw Error(ErrorCode::Parse, "bad integer '" + std::string(s) + "'");
    wide v = 0;
    for (; i < s.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(s[i]))) {
        throw Error(ErrorCode::Parse, "bad integer '" + std::string(s) + "'");
      }
      v = v * 10 + (s[i] - '0');
      if (v > std::numeric_limits<std::int64_t>::max()) {
        throw Error(ErrorCode::Overflow, "integer literal too large");
      }
    }
    return static_cast<std::int64_t>(neg ? -v : v);
  };
  text = trim(text);
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_int(text));
  return Rational(parse_int(trim(text.substr(0, slash))), parse_int(trim(text.substr(slash + 1))));
}

std::string Rational::to_string() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational abs(const Rational& r) { return r.num() < 0 ? -r : r; }
Rational min(const Rational& a, const Rational& b) { return b < a ? b : a; }
Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

Rational nearest_rational(double x, std::int64_t max_den) {
  if (!std::isfinite(x)) throw Error(ErrorCode::OutOfRange, "non-finite value");
  Rational best;
  double best_err = std::numeric_limits<double>::infinity();
  for (std::int64_t q = 1; q <= max_den; ++q) {
    double p = std::round(x * static_cast<double>(q));
    if (std::abs(p) > 9e15) throw Error(ErrorCode::Overflow, "value too large to round");
    double err = std::abs(x - p / static_cast<double>(q));
    if (err < best_err - 1e-15) {
      best_err = err;
      best = Rational(static_cast<std::int64_t>(p), q);
    }
  }
  return best;
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_string(); }

RationalVector parse_rational_vector(std::string_view text) {
  std::vector<Rational> parts;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto comma = text.find(',', start);
    auto piece = text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    parts.push_back(Rational::parse(piece));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  RationalVector v(static_cast<Eigen::Index>(parts.size()));
  for (std::size_t i = 0; i < parts.size(); ++i) v(static_cast<Eigen::Index>(i)) = parts[i];
  return v;
}

std::string to_string(const RationalVector& v) {
  std::ostringstream os;
  os << '(';
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) os << ',';
    os << v(i);
  }
  os << ')';
  return os.str();
}

Eigen::VectorXd to_double(const RationalVector& v) {
  Eigen::VectorXd out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) out(i) = v(i).to_double();
  return out;
}

}  // namespace toriclg
