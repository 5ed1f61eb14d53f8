#pragma once

#include <cctype>
#include <charconv>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "formula.hpp"
#include "rational.hpp"
#include "term.hpp"

namespace loglim {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::runtime_error(what + " at position " + std::to_string(position)), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

// The core language is a semiring: it has no subtraction and no negative
// constants. Mixed-sign polynomials go through normalize_polynomial.
class NegativeLiteralError : public ParseError {
 public:
  explicit NegativeLiteralError(std::size_t position)
      : ParseError("'-' is not part of the language (no subtraction; use normalize_polynomial)", position) {}
};

namespace detail {

// Recursive-descent parser for the grammar
//
//   formula    := disjunct ('|' disjunct)*
//   disjunct   := unary ('&' unary)*
//   unary      := '!' unary | ('E'|'A') var '.' formula | '(' formula ')' | atom
//   atom       := term ('=' | '<=' | '>=') term
//   term       := product ('+' product)*
//   product    := power ('*' power)*
//   power      := base ('^' exponent)?
//   base       := var | identifier | literal | '(' term ')'
//   literal    := number ('/' number)?
//   exponent   := ['+'|'-'] literal | '(' ['+'|'-'] literal ')'
class FormulaParser {
 public:
  explicit FormulaParser(std::string_view text) : text_(text) {}

  Term parse_whole_term() {
    Term t = parse_term();
    expect_end();
    return t;
  }

  Formula parse_whole_formula() {
    Formula f = parse_formula();
    expect_end();
    return f;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  char peek() {
    skip_ws();
    if (pos_ >= text_.size()) return '\0';
    if (text_[pos_] == '-') throw NegativeLiteralError(pos_);
    return text_[pos_];
  }

  bool starts_with(std::string_view s) {
    skip_ws();
    return text_.substr(pos_, s.size()) == s;
  }

  bool accept(std::string_view s) {
    if (starts_with(s)) {
      pos_ += s.size();
      return true;
    }
    return false;
  }

  void expect(std::string_view s) {
    if (!accept(s)) fail("expected '" + std::string(s) + "'");
  }

  void expect_end() {
    if (peek() != '\0') fail("unexpected trailing input");
  }

  static bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
  static bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

  std::string read_identifier() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() && ident_char(text_[pos_])) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  static std::optional<std::size_t> variable_index(const std::string& id) {
    if (id.size() < 2 || id[0] != 'x') return std::nullopt;
    for (std::size_t i = 1; i < id.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(id[i]))) return std::nullopt;
    std::size_t k = std::stoul(id.substr(1));
    if (k == 0) return std::nullopt;
    return k - 1;
  }

  std::string read_number() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) ++pos_;
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t save = pos_;
      ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      } else {
        pos_ = save;
      }
    }
    if (start == pos_) fail("expected a number");
    return std::string(text_.substr(start, pos_ - start));
  }

  Rational parse_literal() {
    std::size_t start = pos_;
    std::string num = read_number();
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == '/') {
      ++pos_;
      num += "/" + read_number();
    }
    try {
      return parse_rational(num);
    } catch (const std::invalid_argument& e) {
      throw ParseError(e.what(), start);
    }
  }

  double read_double() {
    std::size_t start = pos_;
    std::string num = read_number();
    double v = 0.0;
    auto [end, ec] = std::from_chars(num.data(), num.data() + num.size(), v);
    if (ec != std::errc() || end != num.data() + num.size()) throw ParseError("malformed number", start);
    return v;
  }

  double parse_exponent() {
    skip_ws();
    bool paren = accept("(");
    skip_ws();
    bool negative = false;
    if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) {
      negative = text_[pos_] == '-';
      ++pos_;
    }
    double v = read_double();
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == '/') {
      ++pos_;
      double d = read_double();
      if (d == 0.0) fail("zero denominator in exponent");
      v /= d;
    }
    if (paren) expect(")");
    return negative ? -v : v;
  }

  Formula parse_formula() {
    std::vector<Formula> ops{parse_disjunct()};
    while (accept("|")) ops.push_back(parse_disjunct());
    return disjoin(std::move(ops));
  }

  Formula parse_disjunct() {
    std::vector<Formula> ops{parse_unary()};
    while (accept("&")) ops.push_back(parse_unary());
    return conjoin(std::move(ops));
  }

  std::optional<Quantifier> peek_quantifier() {
    skip_ws();
    std::size_t save = pos_;
    if (pos_ >= text_.size() || (text_[pos_] != 'E' && text_[pos_] != 'A')) return std::nullopt;
    Quantifier q = text_[pos_] == 'E' ? Quantifier::Exists : Quantifier::Forall;
    ++pos_;
    // Only a quantifier when followed by whitespace, a variable and '.'.
    if (pos_ >= text_.size() || !std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      pos_ = save;
      return std::nullopt;
    }
    std::string id = read_identifier();
    bool ok = variable_index(id).has_value() && starts_with(".");
    pos_ = save;
    if (!ok) return std::nullopt;
    return q;
  }

  Formula parse_unary() {
    char c = peek();
    if (c == '!') {
      ++pos_;
      return Formula::negation(parse_unary());
    }
    if (auto q = peek_quantifier()) {
      ++pos_;
      std::size_t var = *variable_index(read_identifier());
      expect(".");
      return Formula::quantified(*q, var, parse_formula());
    }
    if (c == '(') {
      std::size_t save = pos_;
      try {
        ++pos_;
        Formula inner = parse_formula();
        expect(")");
        char next = peek();
        bool continues_term = next == '+' || next == '*' || next == '^' || next == '=' || starts_with("<=") ||
                              starts_with(">=");
        if (!continues_term) return inner;
      } catch (const NegativeLiteralError&) {
        throw;
      } catch (const ParseError&) {
      }
      pos_ = save;
    }
    return parse_atom();
  }

  Formula parse_atom() {
    Term lhs = parse_term();
    if (accept("<=")) return leq(lhs, parse_term());
    if (accept(">=")) return leq(parse_term(), lhs);
    if (accept("=")) return eq(lhs, parse_term());
    fail("expected a relation '=' or '<='");
  }

  Term parse_term() {
    Term t = parse_product();
    while (peek() == '+') {
      ++pos_;
      t = Term::sum(t, parse_product());
    }
    return t;
  }

  Term parse_product() {
    Term t = parse_power();
    while (peek() == '*') {
      ++pos_;
      t = Term::product(t, parse_power());
    }
    return t;
  }

  Term parse_power() {
    Term base = parse_base();
    if (peek() == '^') {
      ++pos_;
      return Term::power(base, parse_exponent());
    }
    return base;
  }

  Term parse_base() {
    char c = peek();
    if (c == '(') {
      ++pos_;
      Term t = parse_term();
      expect(")");
      return t;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return Term::constant(parse_literal());
    if (ident_start(c)) {
      std::size_t start = pos_;
      std::string id = read_identifier();
      if (auto idx = variable_index(id)) return Term::variable(*idx);
      if (id == "x0") throw ParseError("variables are numbered from x1", start);
      return Term::parameter(id);
    }
    if (c == '\0') fail("unexpected end of input");
    fail(std::string("unexpected character '") + c + "'");
  }
};

}  // namespace detail

inline Term parse_term(std::string_view text) { return detail::FormulaParser(text).parse_whole_term(); }

inline Formula parse_formula(std::string_view text) {
  Formula f = detail::FormulaParser(text).parse_whole_formula();
  try {
    validate_bindings(f);
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what(), 0);
  }
  return f;
}

}  // namespace loglim
