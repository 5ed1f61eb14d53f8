#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "parser.hpp"
#include "rational.hpp"
#include "util.hpp"

namespace loglim {

class ZeroBelowTruncation : public std::domain_error {
 public:
  ZeroBelowTruncation() : std::domain_error("series is indistinguishable from zero at its truncation order") {}
};

class ZeroSeries : public std::domain_error {
 public:
  ZeroSeries() : std::domain_error("the zero series has no valuation") {}
};

class RamificationOverflow : public std::domain_error {
 public:
  RamificationOverflow() : std::domain_error("exponent denominators exceed the ramification bound") {}
};

enum class Ordering { Less, Equal, Greater, Indeterminate };

inline const char* to_string(Ordering o) {
  switch (o) {
    case Ordering::Less: return "less";
    case Ordering::Equal: return "equal";
    case Ordering::Greater: return "greater";
    default: return "indeterminate";
  }
}

// Truncated Puiseux series sum c_i t^{e_i}. Exponents at or above the
// truncation order are unknown; a series without truncation is exact.
class PuiseuxSeries {
 public:
  using Term = std::pair<Rational, double>;
  static constexpr long kMaxRamification = 12;
  static constexpr long kDefaultOrder = 8;

  PuiseuxSeries() = default;  // exact zero

  PuiseuxSeries(std::vector<Term> terms, std::optional<Rational> truncation = std::nullopt)
      : terms_(std::move(terms)), trunc_(std::move(truncation)) {
    std::sort(terms_.begin(), terms_.end(), [](const Term& a, const Term& b) { return a.first < b.first; });
    std::vector<Term> merged;
    for (auto& t : terms_) {
      if (!std::isfinite(t.second)) throw std::invalid_argument("non-finite series coefficient");
      if (!merged.empty() && merged.back().first == t.first)
        merged.back().second += t.second;
      else
        merged.push_back(std::move(t));
    }
    terms_.clear();
    for (auto& t : merged)
      if (t.second != 0.0 && (!trunc_ || t.first < *trunc_)) terms_.push_back(std::move(t));
    check_ramification();
  }

  static PuiseuxSeries constant(double c) { return monomial(c, Rational(0)); }
  static PuiseuxSeries monomial(double c, const Rational& e) { return PuiseuxSeries({{e, c}}); }
  static PuiseuxSeries t() { return monomial(1.0, Rational(1)); }

  const std::vector<Term>& terms() const { return terms_; }
  const std::optional<Rational>& truncation() const { return trunc_; }
  bool exact() const { return !trunc_.has_value(); }
  bool is_exact_zero() const { return terms_.empty() && exact(); }
  bool is_unknown_zero() const { return terms_.empty() && !exact(); }

  Rational valuation() const {
    if (terms_.empty()) throw ZeroSeries();
    return terms_.front().first;
  }
  double leading_coefficient() const {
    if (terms_.empty()) throw ZeroSeries();
    return terms_.front().second;
  }

  PuiseuxSeries truncated(const Rational& order) const {
    std::optional<Rational> t = trunc_ && *trunc_ < order ? trunc_ : std::optional<Rational>(order);
    return PuiseuxSeries(terms_, t);
  }

  // Multiplies by t^s.
  PuiseuxSeries shifted(const Rational& s) const {
    std::vector<Term> out;
    for (const auto& [e, c] : terms_) out.push_back({e + s, c});
    std::optional<Rational> t;
    if (trunc_) t = *trunc_ + s;
    return PuiseuxSeries(std::move(out), t);
  }

  PuiseuxSeries scaled(double k) const {
    if (k == 0.0) return PuiseuxSeries();
    std::vector<Term> out;
    for (const auto& [e, c] : terms_) out.push_back({e, c * k});
    return PuiseuxSeries(std::move(out), trunc_);
  }

  double evaluate(double t) const {
    if (!(t > 0.0)) throw std::invalid_argument("series evaluated at non-positive t");
    double s = 0.0;
    for (const auto& [e, c] : terms_) s += c * std::pow(t, to_double(e));
    return s;
  }

  friend bool operator==(const PuiseuxSeries& a, const PuiseuxSeries& b) {
    return a.terms_ == b.terms_ && a.trunc_ == b.trunc_;
  }

 private:
  void check_ramification() const {
    Integer l(1);
    for (const auto& [e, c] : terms_) {
      l = lcm_integer(l, denominator(e));
      if (l > kMaxRamification) throw RamificationOverflow();
    }
  }

  std::vector<Term> terms_;
  std::optional<Rational> trunc_;
};

namespace detail {
inline std::optional<Rational> min_order(const std::optional<Rational>& a, const std::optional<Rational>& b) {
  if (!a) return b;
  if (!b) return a;
  return std::min(*a, *b);
}

// Sum without the zero check; coefficients that cancel to rounding level vanish.
inline PuiseuxSeries add_unchecked(const PuiseuxSeries& a, const PuiseuxSeries& b) {
  std::vector<PuiseuxSeries::Term> out;
  auto ia = a.terms().begin(), ib = b.terms().begin();
  while (ia != a.terms().end() || ib != b.terms().end()) {
    if (ib == b.terms().end() || (ia != a.terms().end() && ia->first < ib->first)) {
      out.push_back(*ia++);
    } else if (ia == a.terms().end() || ib->first < ia->first) {
      out.push_back(*ib++);
    } else {
      double s = ia->second + ib->second;
      double scale = std::abs(ia->second) + std::abs(ib->second);
      if (std::abs(s) > 4.0 * std::numeric_limits<double>::epsilon() * scale) out.push_back({ia->first, s});
      ++ia;
      ++ib;
    }
  }
  return PuiseuxSeries(std::move(out), min_order(a.truncation(), b.truncation()));
}
}  // namespace detail

inline PuiseuxSeries series_neg(const PuiseuxSeries& a) { return a.scaled(-1.0); }

inline PuiseuxSeries series_add(const PuiseuxSeries& a, const PuiseuxSeries& b) {
  PuiseuxSeries s = detail::add_unchecked(a, b);
  if (s.is_unknown_zero()) throw ZeroBelowTruncation();
  return s;
}

inline PuiseuxSeries series_sub(const PuiseuxSeries& a, const PuiseuxSeries& b) { return series_add(a, series_neg(b)); }

inline PuiseuxSeries series_mul(const PuiseuxSeries& a, const PuiseuxSeries& b) {
  if (a.is_exact_zero() || b.is_exact_zero()) return PuiseuxSeries();
  if (a.terms().empty() || b.terms().empty()) throw ZeroBelowTruncation();
  std::optional<Rational> trunc;
  if (a.truncation()) trunc = *a.truncation() + b.valuation();
  if (b.truncation()) trunc = detail::min_order(trunc, *b.truncation() + a.valuation());
  std::map<Rational, double> acc;
  for (const auto& [ea, ca] : a.terms())
    for (const auto& [eb, cb] : b.terms()) {
      Rational e = ea + eb;
      if (!trunc || e < *trunc) acc[e] += ca * cb;
    }
  std::vector<PuiseuxSeries::Term> out(acc.begin(), acc.end());
  PuiseuxSeries p(std::move(out), trunc);
  if (p.is_unknown_zero()) throw ZeroBelowTruncation();
  return p;
}

// (c t^v (1 + u))^alpha by the binomial series, to relative order
// min(a.trunc - v, kDefaultOrder) beyond the leading exponent.
inline PuiseuxSeries series_pow(const PuiseuxSeries& a, const Rational& alpha) {
  if (a.terms().empty()) throw ZeroSeries();
  double c = a.leading_coefficient();
  if (!(c > 0.0)) throw std::domain_error("series_pow needs a positive leading coefficient");
  Rational v = a.valuation();
  // exact non-negative integer powers of exact series stay exact
  if (a.exact() && denominator(alpha) == 1 && alpha >= 0) {
    PuiseuxSeries r = PuiseuxSeries::constant(1.0);
    for (long k = 0; k < numerator(alpha).convert_to<long>(); ++k) r = series_mul(r, a);
    return r;
  }
  Rational rel = Rational(PuiseuxSeries::kDefaultOrder);
  if (a.truncation()) rel = std::min(rel, Rational(*a.truncation() - v));
  std::optional<Rational> rel_trunc = rel;
  bool exact_monomial = a.exact() && a.terms().size() == 1;
  if (exact_monomial) rel_trunc = std::nullopt;

  // u = a / (c t^v) - 1, valuation > 0
  std::vector<PuiseuxSeries::Term> uterms;
  for (std::size_t i = 1; i < a.terms().size(); ++i) uterms.push_back({a.terms()[i].first - v, a.terms()[i].second / c});
  PuiseuxSeries u(uterms, rel_trunc);

  PuiseuxSeries sum = PuiseuxSeries(std::vector<PuiseuxSeries::Term>{{Rational(0), 1.0}}, rel_trunc);
  if (!u.terms().empty()) {
    Rational delta = u.valuation();
    double a_d = to_double(alpha);
    double binom = 1.0;
    PuiseuxSeries power = PuiseuxSeries::constant(1.0);
    for (long k = 1; Rational(k) * delta < rel; ++k) {
      binom *= (a_d - static_cast<double>(k - 1)) / static_cast<double>(k);
      power = series_mul(power, u).truncated(rel);
      if (binom != 0.0) sum = detail::add_unchecked(sum, power.scaled(binom));
    }
  }
  return sum.scaled(std::pow(c, to_double(alpha))).shifted(alpha * v);
}

inline PuiseuxSeries operator+(const PuiseuxSeries& a, const PuiseuxSeries& b) { return series_add(a, b); }
inline PuiseuxSeries operator-(const PuiseuxSeries& a, const PuiseuxSeries& b) { return series_sub(a, b); }
inline PuiseuxSeries operator-(const PuiseuxSeries& a) { return series_neg(a); }
inline PuiseuxSeries operator*(const PuiseuxSeries& a, const PuiseuxSeries& b) { return series_mul(a, b); }

inline Rational valuation(const PuiseuxSeries& a) { return a.valuation(); }

inline bool is_positive(const PuiseuxSeries& a) {
  if (a.is_unknown_zero()) throw ZeroBelowTruncation();
  if (a.is_exact_zero()) return false;
  return a.leading_coefficient() > 0.0;
}

// Order of the real closed field: t is positive and smaller than every positive real.
inline Ordering compare(const PuiseuxSeries& a, const PuiseuxSeries& b) {
  PuiseuxSeries d = detail::add_unchecked(a, series_neg(b));
  if (d.is_exact_zero()) return Ordering::Equal;
  if (d.is_unknown_zero()) return Ordering::Indeterminate;
  return d.leading_coefficient() > 0.0 ? Ordering::Greater : Ordering::Less;
}

using ValuedPoint = std::vector<PuiseuxSeries>;

// Non-archimedean Log: (-v(p_1), ..., -v(p_n)).
inline std::vector<Rational> log_map(const ValuedPoint& p) {
  std::vector<Rational> out;
  for (const auto& c : p) out.push_back(-c.valuation());
  return out;
}

inline std::string to_string(const PuiseuxSeries& a) {
  std::string s;
  for (const auto& [e, c] : a.terms()) {
    if (!s.empty()) s += c < 0 ? " - " : " + ";
    else if (c < 0) s += "-";
    s += format_double(std::abs(c));
    if (e != 0) s += "*t^" + (denominator(e) == 1 ? to_string(e) : "(" + to_string(e) + ")");
  }
  if (s.empty()) s = "0";
  if (a.truncation()) s += " + O(t^" + (denominator(*a.truncation()) == 1 ? to_string(*a.truncation()) : "(" + to_string(*a.truncation()) + ")") + ")";
  return s;
}

// Text form: c0*t^e0 + c1*t^e1 + ... with rational exponents written as
// t^e, t^p/q or t^(p/q); a bare number is a t^0 term and "t^e" has
// coefficient 1. An optional trailing "+ O(t^r)" sets the truncation order.
inline PuiseuxSeries parse_puiseux_series(const std::string& text) {
  std::size_t i = 0;
  auto skip = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  auto fail = [&](const std::string& msg) -> ParseError { return ParseError(msg, i); };
  auto read_rational = [&]() {
    skip();
    bool paren = i < text.size() && text[i] == '(';
    if (paren) ++i;
    skip();
    std::size_t start = i;
    if (i < text.size() && (text[i] == '-' || text[i] == '+')) ++i;
    while (i < text.size() && (std::isdigit(static_cast<unsigned char>(text[i])) || text[i] == '/' || text[i] == '.')) ++i;
    std::string lit = text.substr(start, i - start);
    skip();
    if (paren) {
      if (i >= text.size() || text[i] != ')') throw fail("expected ')'");
      ++i;
    }
    try {
      return parse_rational(lit);
    } catch (const std::invalid_argument&) {
      throw fail("malformed exponent '" + lit + "'");
    }
  };
  std::vector<PuiseuxSeries::Term> terms;
  std::optional<Rational> trunc;
  bool first = true;
  for (;;) {
    skip();
    if (i >= text.size()) break;
    double sign = 1.0;
    if (text[i] == '+' || text[i] == '-') {
      sign = text[i] == '-' ? -1.0 : 1.0;
      ++i;
      skip();
    } else if (!first) {
      throw fail("expected '+' or '-'");
    }
    first = false;
    if (i < text.size() && text[i] == 'O') {
      ++i;
      skip();
      if (i >= text.size() || text[i] != '(') throw fail("expected '(' after O");
      ++i;
      skip();
      if (i >= text.size() || text[i] != 't') throw fail("expected t in O(...)");
      ++i;
      skip();
      Rational r(0);
      if (i < text.size() && text[i] == '^') {
        ++i;
        r = read_rational();
      } else {
        r = 1;
      }
      skip();
      if (i >= text.size() || text[i] != ')') throw fail("expected ')'");
      ++i;
      trunc = r;
      continue;
    }
    double coeff = 1.0;
    bool have_number = false;
    if (i < text.size() && (std::isdigit(static_cast<unsigned char>(text[i])) || text[i] == '.')) {
      std::size_t start = i;
      while (i < text.size() && (std::isdigit(static_cast<unsigned char>(text[i])) || text[i] == '.' || text[i] == 'e' ||
                                 text[i] == 'E' ||
                                 ((text[i] == '-' || text[i] == '+') && (text[i - 1] == 'e' || text[i - 1] == 'E'))))
        ++i;
      std::string lit = text.substr(start, i - start);
      if (i < text.size() && text[i] == '/') {  // rational coefficient p/q
        ++i;
        std::size_t s2 = i;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
        lit += "/" + text.substr(s2, i - s2);
      }
      try {
        coeff = to_double(parse_rational(lit));
      } catch (const std::invalid_argument&) {
        throw fail("malformed coefficient '" + lit + "'");
      }
      have_number = true;
      skip();
    }
    Rational e(0);
    bool star = false;
    if (have_number && i < text.size() && text[i] == '*') {
      ++i;
      skip();
      star = true;
    }
    if (have_number && !star && i < text.size() && text[i] == 't') throw fail("expected '*' before t");
    if (i < text.size() && text[i] == 't') {
      ++i;
      skip();
      e = 1;
      if (i < text.size() && text[i] == '^') {
        ++i;
        e = read_rational();
      }
    } else if (star || !have_number) {
      throw fail("expected t");
    }
    terms.push_back({e, sign * coeff});
  }
  if (terms.empty() && !trunc) throw ParseError("empty series", 0);
  return PuiseuxSeries(std::move(terms), trunc);
}

// Polynomial with real coefficients and integer exponent vectors.
struct RealPolynomial {
  std::size_t dimension = 0;
  std::map<std::vector<int>, double> terms;

  double evaluate(const std::vector<double>& x) const {
    double s = 0.0;
    for (const auto& [w, c] : terms) {
      double m = c;
      for (std::size_t i = 0; i < w.size(); ++i) m *= std::pow(x[i], w[i]);
      s += m;
    }
    return s;
  }

  bool is_monomial() const { return terms.size() == 1; }
  bool single_sign() const {
    bool pos = false, neg = false;
    for (const auto& [w, c] : terms) (c > 0 ? pos : neg) = true;
    return !(pos && neg);
  }
};

inline std::string monomial_text(const std::vector<int>& w) {
  std::string s;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] == 0) continue;
    if (!s.empty()) s += "*";
    s += "x" + std::to_string(i + 1);
    if (w[i] != 1) s += "^" + std::to_string(w[i]);
  }
  return s;
}

inline std::string to_string(const RealPolynomial& p) {
  std::string s;
  for (auto it = p.terms.rbegin(); it != p.terms.rend(); ++it) {
    const auto& [w, c] = *it;
    std::string m = monomial_text(w);
    if (!s.empty()) s += c < 0 ? " - " : " + ";
    else if (c < 0) s += "-";
    double a = std::abs(c);
    if (m.empty())
      s += format_double(a);
    else if (a == 1.0)
      s += m;
    else
      s += format_double(a) + "*" + m;
  }
  return s.empty() ? "0" : s;
}

class PuiseuxPolynomial {
 public:
  explicit PuiseuxPolynomial(std::size_t n = 0) : n_(n) {}

  std::size_t dimension() const { return n_; }
  const std::map<std::vector<int>, PuiseuxSeries>& coefficients() const { return coeffs_; }

  // Adds c x^w; zero results are dropped.
  void add(const std::vector<int>& w, const PuiseuxSeries& c) {
    if (w.size() != n_) throw std::invalid_argument("exponent vector of wrong dimension");
    auto it = coeffs_.find(w);
    PuiseuxSeries s = it == coeffs_.end() ? c : series_add(it->second, c);
    if (s.is_exact_zero()) {
      if (it != coeffs_.end()) coeffs_.erase(it);
      return;
    }
    coeffs_.insert_or_assign(w, s);
  }

 private:
  std::size_t n_;
  std::map<std::vector<int>, PuiseuxSeries> coeffs_;
};

// One monomial per line: "omega = (i1,...,in); coeff = <series>". Blank
// lines and '#' comments are ignored.
inline PuiseuxPolynomial parse_puiseux_polynomial(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  std::optional<PuiseuxPolynomial> f;
  auto fail = [&](const std::string& msg) { return ParseError("line " + std::to_string(lineno) + ": " + msg, 0); };
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto semi = line.find(';');
    if (semi == std::string::npos) throw fail("expected ';' between omega and coeff");
    std::string lhs = line.substr(0, semi), rhs = line.substr(semi + 1);
    auto eq1 = lhs.find('='), eq2 = rhs.find('=');
    if (eq1 == std::string::npos || eq2 == std::string::npos) throw fail("expected 'omega = ...; coeff = ...'");
    auto key = [](std::string s) {
      s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }), s.end());
      return s;
    };
    if (key(lhs.substr(0, eq1)) != "omega" || key(rhs.substr(0, eq2)) != "coeff")
      throw fail("expected 'omega = ...; coeff = ...'");
    std::string om = key(lhs.substr(eq1 + 1));
    if (om.size() < 2 || om.front() != '(' || om.back() != ')') throw fail("omega must be a parenthesised tuple");
    std::vector<int> w;
    std::stringstream ss(om.substr(1, om.size() - 2));
    std::string part;
    while (std::getline(ss, part, ',')) {
      try {
        std::size_t used = 0;
        w.push_back(std::stoi(part, &used));
        if (used != part.size()) throw std::invalid_argument(part);
      } catch (const std::exception&) {
        throw fail("malformed exponent '" + part + "'");
      }
    }
    if (w.empty()) throw fail("empty omega");
    PuiseuxSeries c;
    try {
      c = parse_puiseux_series(rhs.substr(eq2 + 1));
    } catch (const ParseError& e) {
      throw fail(e.what());
    }
    if (!f) f.emplace(w.size());
    if (w.size() != f->dimension()) throw fail("omega of inconsistent dimension");
    f->add(w, c);
  }
  if (!f) throw ParseError("no monomials", 0);
  return *f;
}

inline PuiseuxPolynomial parse_puiseux_polynomial(const std::string& text) {
  std::istringstream in(text);
  return parse_puiseux_polynomial(in);
}

inline PuiseuxPolynomial load_puiseux_polynomial(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return parse_puiseux_polynomial(in);
}

inline std::string to_string(const PuiseuxPolynomial& f) {
  std::string s;
  for (const auto& [w, c] : f.coefficients()) {
    s += "omega = (";
    for (std::size_t i = 0; i < w.size(); ++i) s += (i ? "," : "") + std::to_string(w[i]);
    s += "); coeff = " + to_string(c) + "\n";
  }
  return s;
}

// Member of the patchworking family at a real parameter value.
inline RealPolynomial instantiate(const PuiseuxPolynomial& f, double t) {
  if (!(t > 0.0 && t < 1.0)) throw std::invalid_argument("t must lie in (0,1)");
  RealPolynomial p{f.dimension(), {}};
  for (const auto& [w, c] : f.coefficients()) {
    double v = c.evaluate(t);
    if (v != 0.0) p.terms[w] = v;
  }
  return p;
}

namespace detail {
inline Rational pairing(const std::vector<Rational>& lambda, const std::vector<int>& w) {
  if (lambda.size() != w.size()) throw std::invalid_argument("lambda of wrong dimension");
  Rational s(0);
  for (std::size_t i = 0; i < w.size(); ++i) s += lambda[i] * w[i];
  return s;
}
}  // namespace detail

// f(t^{-lambda_1} x_1, ..., t^{-lambda_n} x_n).
inline PuiseuxPolynomial twist(const PuiseuxPolynomial& f, const std::vector<Rational>& lambda) {
  PuiseuxPolynomial g(f.dimension());
  for (const auto& [w, c] : f.coefficients()) g.add(w, c.shifted(-detail::pairing(lambda, w)));
  return g;
}

inline Rational twisted_valuation(const PuiseuxPolynomial& f, const std::vector<Rational>& lambda) {
  if (f.coefficients().empty()) throw ZeroSeries();
  std::optional<Rational> mu;
  for (const auto& [w, c] : f.coefficients()) {
    Rational val = c.valuation() - detail::pairing(lambda, w);
    if (!mu || val < *mu) mu = val;
  }
  return *mu;
}

// Leading coefficients of the monomials of minimal v(c_w) - <lambda, w>.
inline RealPolynomial initial_form(const PuiseuxPolynomial& f, const std::vector<Rational>& lambda) {
  Rational mu = twisted_valuation(f, lambda);
  RealPolynomial p{f.dimension(), {}};
  for (const auto& [w, c] : f.coefficients())
    if (c.valuation() - detail::pairing(lambda, w) == mu) p.terms[w] = c.leading_coefficient();
  return p;
}

// Positive roots of a univariate real polynomial (negative exponents allowed).
// Sign changes on a log-spaced grid between the Cauchy bounds, refined by
// bisection; roots of even multiplicity are not detected.
inline std::vector<double> positive_roots(const RealPolynomial& p, std::size_t grid = 4000) {
  if (p.dimension != 1) throw std::invalid_argument("positive_roots needs a univariate polynomial");
  if (p.terms.size() < 2) return {};
  int lo_exp = p.terms.begin()->first[0], hi_exp = p.terms.rbegin()->first[0];
  double lead = p.terms.rbegin()->second, trail = p.terms.begin()->second;
  double upper = 0.0, lower = 0.0;
  for (const auto& [w, c] : p.terms) {
    if (w[0] != hi_exp) upper = std::max(upper, std::abs(c / lead));
    if (w[0] != lo_exp) lower = std::max(lower, std::abs(c / trail));
  }
  double a = std::log10(1.0 / (1.0 + lower)) - 1e-9, b = std::log10(1.0 + upper) + 1e-9;
  auto f = [&](double X) { return p.evaluate({std::pow(10.0, X)}); };
  std::vector<double> roots;
  double prev_x = a, prev = f(a);
  for (std::size_t k = 1; k <= grid; ++k) {
    double x = a + (b - a) * static_cast<double>(k) / static_cast<double>(grid);
    double v = f(x);
    if (v == 0.0) {
      roots.push_back(std::pow(10.0, x));
    } else if (prev != 0.0 && (v < 0.0) != (prev < 0.0)) {
      double l = prev_x, r = x, fl = prev;
      for (int it = 0; it < 200; ++it) {
        double m = 0.5 * (l + r);
        if (m == l || m == r) break;
        double fm = f(m);
        if ((fm < 0.0) == (fl < 0.0)) {
          l = m;
          fl = fm;
        } else {
          r = m;
        }
      }
      roots.push_back(std::pow(10.0, 0.5 * (l + r)));
    }
    prev_x = x;
    prev = v;
  }
  return roots;
}

enum class Membership { No, CandidateYes, Yes };

inline const char* to_string(Membership m) {
  switch (m) {
    case Membership::No: return "No";
    case Membership::Yes: return "Yes";
    default: return "CandidateYes";
  }
}

struct MembershipConfig {
  std::size_t samples = 20000;
  double box = 6.0;  // log10 box [-box, box]^n
  std::uint64_t seed = 1;
};

struct MembershipResult {
  Membership verdict = Membership::CandidateYes;
  RealPolynomial initial;
  std::optional<std::vector<double>> witness;  // positive zero of the initial form
};

// lambda in A(V(f)) iff the initial form has a zero in the positive orthant.
inline MembershipResult lambda_membership_hypersurface(const PuiseuxPolynomial& f, const std::vector<Rational>& lambda,
                                                      const MembershipConfig& cfg = {}) {
  MembershipResult r;
  r.initial = initial_form(f, lambda);
  const RealPolynomial& g = r.initial;
  if (g.is_monomial() || g.single_sign()) {
    r.verdict = Membership::No;
    return r;
  }
  std::size_t n = g.dimension;
  std::uint64_t state = splitmix64(cfg.seed ^ 0x1A4BDAULL);
  auto draw = [&]() {
    std::vector<double> X(n);
    for (auto& x : X) x = -cfg.box + 2.0 * cfg.box * unit_double(splitmix64(state++));
    return X;
  };
  auto value = [&](const std::vector<double>& X) {
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = std::pow(10.0, X[i]);
    return g.evaluate(x);
  };
  std::optional<std::vector<double>> pos, neg;
  for (std::size_t k = 0; k < cfg.samples && !(pos && neg); ++k) {
    auto X = draw();
    double v = value(X);
    if (v > 0.0 && !pos) pos = X;
    if (v < 0.0 && !neg) neg = X;
    if (v == 0.0) {
      pos = neg = X;
    }
  }
  if (!(pos && neg)) return r;
  // bisect along the log-space segment between the two points
  std::vector<double> a = *pos, b = *neg;
  for (int it = 0; it < 200; ++it) {
    std::vector<double> m(n);
    for (std::size_t i = 0; i < n; ++i) m[i] = 0.5 * (a[i] + b[i]);
    if (m == a || m == b) break;
    (value(m) > 0.0 ? a : b) = m;
  }
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = std::pow(10.0, 0.5 * (a[i] + b[i]));
  r.verdict = Membership::Yes;
  r.witness = w;
  return r;
}

}  // namespace loglim
