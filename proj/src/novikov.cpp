#include "toriclg/novikov.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>

#include "toriclg/error.hpp"

namespace toriclg {

namespace {

double max_abs_of(const std::vector<Term>& terms) {
  double m = 0.0;
  for (const auto& t : terms) m = std::max(m, std::abs(t.coeff));
  return m;
}

std::string g17(double x) {
  if (x == 0.0) x = 0.0;  // drop negative zero
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

std::string format_complex(Complex c) { return "(" + g17(c.real()) + "," + g17(c.imag()) + ")"; }

Series::Series(std::vector<Term> terms, Rational cutoff) : cutoff_(cutoff) {
  std::sort(terms.begin(), terms.end(),
            [](const Term& a, const Term& b) { return a.exponent < b.exponent; });
  // A merged coefficient is zero when it is negligible against the sum of the
  // magnitudes that produced it.
  std::vector<Term> merged;
  std::vector<double> mass;
  merged.reserve(terms.size());
  for (const auto& t : terms) {
    if (!(t.exponent < cutoff_)) continue;
    if (!merged.empty() && merged.back().exponent == t.exponent) {
      merged.back().coeff += t.coeff;
      mass.back() += std::abs(t.coeff);
    } else {
      merged.push_back(t);
      mass.push_back(std::abs(t.coeff));
    }
  }
  for (std::size_t i = 0; i < merged.size(); ++i) {
    if (std::abs(merged[i].coeff) > std::max(kZeroTolerance * mass[i], kAbsoluteFloor)) terms_.push_back(merged[i]);
  }
}

Series Series::monomial(Complex coeff, Rational exponent) {
  return monomial(coeff, exponent, exponent + kDefaultOrder);
}

Series Series::monomial(Complex coeff, Rational exponent, Rational cutoff) {
  return Series({Term{exponent, coeff}}, cutoff);
}

Complex Series::coeff(const Rational& e) const {
  for (const auto& t : terms_) {
    if (t.exponent == e) return t.coeff;
  }
  return {0.0, 0.0};
}

double Series::max_abs() const { return max_abs_of(terms_); }

Series Series::truncated(const Rational& c) const {
  return Series(terms_, min(c, cutoff_));
}

Series Series::chopped(double scale) const {
  const double threshold = std::max(kZeroTolerance * scale, kAbsoluteFloor);
  std::vector<Term> kept;
  for (const auto& t : terms_) {
    if (std::abs(t.coeff) > threshold) kept.push_back(t);
  }
  return Series(std::move(kept), cutoff_);
}

Series Series::with_cutoff(const Rational& c) const { return Series(terms_, c); }

Series Series::shifted(Complex c, const Rational& e) const {
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_) out.push_back({t.exponent + e, t.coeff * c});
  return Series(std::move(out), cutoff_ + e);
}

std::string Series::to_string(bool with_cutoff) const {
  std::string out;
  for (const auto& t : terms_) {
    if (!out.empty()) out += " + ";
    out += format_complex(t.coeff);
    if (!t.exponent.is_zero()) out += "*T^(" + t.exponent.to_string() + ")";
  }
  if (out.empty()) out = "0";
  if (with_cutoff) out += " + O(T^(" + cutoff_.to_string() + "))";
  return out;
}

namespace {

class LiteralParser {
 public:
  explicit LiteralParser(std::string_view s) : s_(s) {}

  Series parse() {
    std::vector<Term> terms;
    std::optional<Rational> cutoff;
    skip_ws();
    if (at_end()) throw Error(ErrorCode::Parse, "empty series literal");
    if (s_.substr(pos_) == "0") return Series();
    bool first = true;
    while (true) {
      skip_ws();
      double sign = 1.0;
      if (!first || peek() == '-' || peek() == '+') {
        if (peek() == '+') {
          ++pos_;
        } else if (peek() == '-') {
          sign = -1.0;
          ++pos_;
        } else if (!first) {
          fail("expected '+' or '-'");
        }
        skip_ws();
      }
      first = false;
      if (peek() == 'O') {
        ++pos_;
        expect('(');
        skip_ws();
        expect('T');
        cutoff = parse_power();
        skip_ws();
        expect(')');
      } else {
        terms.push_back(parse_term(sign));
      }
      skip_ws();
      if (at_end()) break;
    }
    Rational c = cutoff ? *cutoff : kDefaultOrder;
    if (!cutoff && !terms.empty()) {
      Rational lead = terms.front().exponent;
      for (const auto& t : terms) lead = min(lead, t.exponent);
      c = lead + kDefaultOrder;
    }
    return Series(std::move(terms), c);
  }

 private:
  Term parse_term(double sign) {
    Complex coeff{1.0, 0.0};
    bool have_coeff = false;
    if (peek() == '(') {
      ++pos_;
      double re = parse_double();
      skip_ws();
      expect(',');
      double im = parse_double();
      skip_ws();
      expect(')');
      coeff = {re, im};
      have_coeff = true;
    } else if (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '.') {
      coeff = {parse_double(), 0.0};
      have_coeff = true;
    }
    skip_ws();
    Rational exponent{0};
    if (have_coeff && peek() == '*') {
      ++pos_;
      skip_ws();
      expect('T');
      exponent = parse_power();
    } else if (!have_coeff) {
      expect('T');
      exponent = parse_power();
    }
    return {exponent, coeff * sign};
  }

  Rational parse_power() {
    skip_ws();
    if (peek() != '^') return Rational(1);
    ++pos_;
    skip_ws();
    if (peek() == '(') {
      ++pos_;
      auto close = s_.find(')', pos_);
      if (close == std::string_view::npos) fail("unterminated exponent");
      Rational r = Rational::parse(s_.substr(pos_, close - pos_));
      pos_ = close + 1;
      return r;
    }
    std::size_t start = pos_;
    if (peek() == '-') ++pos_;
    while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    return Rational::parse(s_.substr(start, pos_ - start));
  }

  double parse_double() {
    skip_ws();
    std::string tmp(s_.substr(pos_));
    char* end = nullptr;
    double v = std::strtod(tmp.c_str(), &end);
    if (end == tmp.c_str()) fail("expected number");
    pos_ += static_cast<std::size_t>(end - tmp.c_str());
    return v;
  }

  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }
  char peek() const { return at_end() ? '\0' : s_[pos_]; }
  bool at_end() const { return pos_ >= s_.size(); }
  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorCode::Parse, msg + " at offset " + std::to_string(pos_) + " in '" +
                                      std::string(s_) + "'");
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

Series Series::parse(std::string_view text) { return LiteralParser(text).parse(); }

Series nv_add(const Series& a, const Series& b) {
  std::vector<Term> terms = a.terms();
  terms.insert(terms.end(), b.terms().begin(), b.terms().end());
  return Series(std::move(terms), min(a.cutoff(), b.cutoff()));
}

Series nv_neg(const Series& a) { return nv_scale(a, -1.0); }

Series nv_sub(const Series& a, const Series& b) { return nv_add(a, nv_neg(b)); }

Series nv_scale(const Series& a, Complex c) { return a.shifted(c, Rational(0)); }

Series nv_mul(const Series& a, const Series& b) {
  auto va = nv_valuation(a);
  auto vb = nv_valuation(b);
  Rational cutoff;
  if (va && vb) {
    cutoff = min(a.cutoff() + *vb, b.cutoff() + *va);
  } else if (va) {
    cutoff = b.cutoff() + *va;
  } else if (vb) {
    cutoff = a.cutoff() + *vb;
  } else {
    cutoff = a.cutoff() + b.cutoff();
  }
  std::vector<Term> terms;
  terms.reserve(a.terms().size() * b.terms().size());
  for (const auto& s : a.terms()) {
    for (const auto& t : b.terms()) {
      Rational e = s.exponent + t.exponent;
      if (e < cutoff) terms.push_back({e, s.coeff * t.coeff});
    }
  }
  return Series(std::move(terms), cutoff);
}

std::optional<Rational> nv_valuation(const Series& a) {
  if (a.is_zero()) return std::nullopt;
  return a.terms().front().exponent;
}

Series nv_inv(const Series& a, std::optional<Rational> cutoff) {
  if (a.is_zero()) throw Error(ErrorCode::ZeroSeries, "inverse of the zero series");
  const Term lead = a.terms().front();
  const Rational relative = a.cutoff() - lead.exponent;
  // a = c T^lead (1 + r), v(r) > 0; solve (1 + r) b = 1 exponent by exponent.
  std::vector<Term> r;
  for (std::size_t i = 1; i < a.terms().size(); ++i) {
    const Term& t = a.terms()[i];
    r.push_back({t.exponent - lead.exponent, t.coeff / lead.coeff});
  }
  std::set<Rational> support{Rational(0)};
  std::map<Rational, Complex> b;
  for (auto it = support.begin(); it != support.end(); ++it) {
    const Rational& e = *it;
    Complex sum = e.is_zero() ? Complex(1.0) : Complex(0.0);
    double mass = std::abs(sum);
    for (const auto& t : r) {
      if (e < t.exponent) break;
      auto prev = b.find(e - t.exponent);
      if (prev == b.end()) continue;
      sum -= t.coeff * prev->second;
      mass += std::abs(t.coeff * prev->second);
    }
    b[e] = std::abs(sum) > kZeroTolerance * mass ? sum : Complex(0.0);
    for (const auto& t : r) {
      const Rational next = e + t.exponent;
      if (next < relative) support.insert(next);
    }
  }
  std::vector<Term> terms;
  terms.reserve(b.size());
  for (const auto& [e, c] : b) terms.push_back({e - lead.exponent, c / lead.coeff});
  Series out(std::move(terms), relative - lead.exponent);
  if (cutoff) out = out.truncated(*cutoff);
  return out;
}

Series nv_exp(const Series& a) {
  Complex c{0.0, 0.0};
  std::vector<Term> rest;
  for (const auto& t : a.terms()) {
    if (t.exponent < Rational(0)) {
      throw Error(ErrorCode::NegativeValuation,
                  "exp of series with term T^(" + t.exponent.to_string() + ")");
    }
    if (t.exponent.is_zero()) {
      c = t.coeff;
    } else {
      rest.push_back(t);
    }
  }
  Series positive(std::move(rest), a.cutoff());
  Series sum = Series::constant(1.0).with_cutoff(a.cutoff());
  Series power = sum;
  for (int k = 1; !positive.is_zero(); ++k) {
    power = nv_scale(nv_mul(power, positive), 1.0 / k).truncated(a.cutoff());
    if (power.is_zero()) break;
    sum = nv_add(sum, power);
  }
  return nv_scale(sum, std::exp(c));
}

Series nv_pow(const Series& a, int k) {
  if (k < 0) return nv_pow(nv_inv(a), -k);
  Series result = Series::constant(1.0).with_cutoff(a.cutoff() - nv_valuation(a).value_or(Rational(0)));
  Series base = a;
  while (k > 0) {
    if (k & 1) result = nv_mul(result, base);
    k >>= 1;
    if (k) base = nv_mul(base, base);
  }
  return result;
}

Complex nv_eval(const Series& a, double t) {
  if (!(t > 0.0 && t < 1.0)) {
    throw Error(ErrorCode::OutOfRange, "evaluation parameter t must lie in (0,1)");
  }
  Complex sum{0.0, 0.0};
  for (const auto& term : a.terms()) sum += term.coeff * std::pow(t, term.exponent.to_double());
  return sum;
}

}  // namespace toriclg
