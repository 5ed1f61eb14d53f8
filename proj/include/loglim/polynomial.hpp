#pragma once

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "formula.hpp"
#include "parser.hpp"
#include "rational.hpp"
#include "term.hpp"

namespace loglim {

// Sparse multivariate polynomial with rational coefficients. Monomials keep
// their first-appearance order so that normalized output reads like the input.
class RationalPolynomial {
 public:
  using Exponents = std::vector<unsigned>;
  struct Monomial {
    Exponents exponents;
    Rational coefficient;
  };

  static RationalPolynomial constant(const Rational& c) {
    RationalPolynomial p;
    p.add_monomial({}, c);
    return p;
  }

  static RationalPolynomial variable(std::size_t index) {
    RationalPolynomial p;
    Exponents e(index + 1, 0);
    e[index] = 1;
    p.add_monomial(std::move(e), 1);
    return p;
  }

  const std::vector<Monomial>& monomials() const { return monomials_; }

  void add_monomial(Exponents e, const Rational& c) {
    trim(e);
    for (auto& m : monomials_) {
      if (m.exponents == e) {
        m.coefficient += c;
        return;
      }
    }
    monomials_.push_back({std::move(e), c});
  }

  RationalPolynomial operator+(const RationalPolynomial& o) const {
    RationalPolynomial r = *this;
    for (const auto& m : o.monomials_) r.add_monomial(m.exponents, m.coefficient);
    return r;
  }

  RationalPolynomial operator-() const {
    RationalPolynomial r = *this;
    for (auto& m : r.monomials_) m.coefficient = -m.coefficient;
    return r;
  }

  RationalPolynomial operator-(const RationalPolynomial& o) const { return *this + (-o); }

  RationalPolynomial operator*(const RationalPolynomial& o) const {
    RationalPolynomial r;
    for (const auto& a : monomials_) {
      for (const auto& b : o.monomials_) {
        Exponents e(std::max(a.exponents.size(), b.exponents.size()), 0);
        for (std::size_t i = 0; i < a.exponents.size(); ++i) e[i] += a.exponents[i];
        for (std::size_t i = 0; i < b.exponents.size(); ++i) e[i] += b.exponents[i];
        r.add_monomial(std::move(e), a.coefficient * b.coefficient);
      }
    }
    return r;
  }

  RationalPolynomial pow(unsigned k) const {
    RationalPolynomial r = constant(1);
    for (unsigned i = 0; i < k; ++i) r = r * *this;
    return r;
  }

  // Drops cancelled monomials, keeping the order of the survivors.
  RationalPolynomial pruned() const {
    RationalPolynomial r;
    for (const auto& m : monomials_)
      if (m.coefficient != 0) r.monomials_.push_back(m);
    return r;
  }

  double evaluate(const std::vector<double>& x) const {
    double s = 0.0;
    for (const auto& m : monomials_) {
      double v = to_double(m.coefficient);
      for (std::size_t i = 0; i < m.exponents.size(); ++i)
        for (unsigned k = 0; k < m.exponents[i]; ++k) v *= x.at(i);
      s += v;
    }
    return s;
  }

 private:
  static void trim(Exponents& e) {
    while (!e.empty() && e.back() == 0) e.pop_back();
  }
  std::vector<Monomial> monomials_;
};

namespace detail {

// Grammar for mixed-sign polynomial equations:
//   equation := poly ('=' poly)?
//   poly     := ['+'|'-'] product (('+'|'-') product)*
//   product  := factor (['*'] factor)*          (juxtaposition multiplies)
//   factor   := atom ('^' natural)?
//   atom     := literal | x | y | z | xN | '(' poly ')'
class PolynomialParser {
 public:
  explicit PolynomialParser(std::string_view text) : text_(text) {}

  std::pair<RationalPolynomial, RationalPolynomial> parse_equation() {
    RationalPolynomial lhs = parse_poly();
    RationalPolynomial rhs = RationalPolynomial::constant(0);
    if (accept('=')) rhs = parse_poly();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return {lhs, rhs};
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError("non-polynomial input: " + msg, pos_); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  bool accept(char c) {
    if (peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  RationalPolynomial parse_poly() {
    RationalPolynomial acc;
    bool negative = false;
    if (accept('-'))
      negative = true;
    else
      accept('+');
    RationalPolynomial first = parse_product();
    acc = negative ? -first : first;
    for (;;) {
      if (accept('+'))
        acc = acc + parse_product();
      else if (accept('-'))
        acc = acc - parse_product();
      else
        break;
    }
    return acc;
  }

  bool starts_factor() {
    char c = peek();
    return std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == '(' || c == 'x' || c == 'y' || c == 'z';
  }

  RationalPolynomial parse_product() {
    RationalPolynomial acc = parse_factor();
    for (;;) {
      if (accept('*')) {
        acc = acc * parse_factor();
      } else if (peek() == '/') {
        ++pos_;
        skip_ws();
        Rational d = parse_number();
        if (d == 0) fail("division by zero");
        acc = acc * RationalPolynomial::constant(1 / d);
      } else if (starts_factor()) {
        acc = acc * parse_factor();
      } else {
        break;
      }
    }
    return acc;
  }

  RationalPolynomial parse_factor() {
    RationalPolynomial base = parse_atom();
    if (accept('^')) {
      skip_ws();
      std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (start == pos_) fail("exponent must be a natural number");
      if (pos_ < text_.size() && (text_[pos_] == '.' || text_[pos_] == '/')) fail("exponent must be a natural number");
      base = base.pow(static_cast<unsigned>(std::stoul(std::string(text_.substr(start, pos_ - start)))));
    }
    return base;
  }

  Rational parse_number() {
    std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) ++pos_;
    if (start == pos_) fail("expected a number");
    return parse_rational(text_.substr(start, pos_ - start));
  }

  RationalPolynomial parse_atom() {
    char c = peek();
    if (c == '(') {
      ++pos_;
      RationalPolynomial p = parse_poly();
      if (!accept(')')) fail("expected ')'");
      return p;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return RationalPolynomial::constant(parse_number());
    if (c == 'x' || c == 'y' || c == 'z') {
      ++pos_;
      if (c == 'x' && pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        std::size_t k = std::stoul(std::string(text_.substr(start, pos_ - start)));
        if (k == 0) fail("variables are numbered from x1");
        return RationalPolynomial::variable(k - 1);
      }
      if (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_])) && text_[pos_] != 'x' &&
          text_[pos_] != 'y' && text_[pos_] != 'z')
        fail("unknown identifier");
      return RationalPolynomial::variable(static_cast<std::size_t>(c - 'x'));
    }
    if (c == '\0') fail("unexpected end of input");
    fail(std::string("unexpected character '") + c + "'");
  }
};

inline Term monomial_term(const RationalPolynomial::Exponents& e, const Rational& c) {
  std::vector<Term> factors;
  if (c != 1 || std::all_of(e.begin(), e.end(), [](unsigned k) { return k == 0; }))
    factors.push_back(Term::constant(c));
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (e[i] == 0) continue;
    Term v = Term::variable(i);
    factors.push_back(e[i] == 1 ? v : Term::power(v, static_cast<double>(e[i])));
  }
  Term t = factors.front();
  for (std::size_t i = 1; i < factors.size(); ++i) t = Term::product(t, factors[i]);
  return t;
}

inline Term sum_term(const std::vector<Term>& parts) {
  if (parts.empty()) return Term::constant(0);
  Term t = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) t = Term::sum(t, parts[i]);
  return t;
}

}  // namespace detail

// Parses a polynomial equation with rational coefficients of either sign and
// moves negative monomials across the equality. Variables are x, y, z (or
// x1, x2, ...). A missing right-hand side means "= 0".
inline std::pair<RationalPolynomial, RationalPolynomial> parse_polynomial_equation(std::string_view text) {
  return detail::PolynomialParser(text).parse_equation();
}

inline Formula normalize_polynomial(std::string_view text) {
  auto [p, q] = parse_polynomial_equation(text);
  RationalPolynomial diff = (p - q).pruned();
  std::vector<Term> lhs, rhs;
  for (const auto& m : diff.monomials()) {
    if (m.coefficient > 0)
      lhs.push_back(detail::monomial_term(m.exponents, m.coefficient));
    else
      rhs.push_back(detail::monomial_term(m.exponents, -m.coefficient));
  }
  return eq(detail::sum_term(lhs), detail::sum_term(rhs));
}

}  // namespace loglim
