#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>

#include "rational.hpp"
#include "util.hpp"

namespace loglim {

class Term;

namespace term {
struct Variable {
  std::size_t index;  // 0-based: x1 is index 0
};
struct Parameter {
  std::string name;
};
// Literal constant. Non-negative; zero only appears as the empty side of an
// equation produced by normalize_polynomial.
struct Constant {
  Rational value;
};
struct Sum;
struct Product;
struct Power;
}  // namespace term

// Immutable, shareable term of the ordered-semiring language with real powers.
class Term {
 public:
  struct Node;

  static Term variable(std::size_t index);
  static Term parameter(std::string name);
  static Term constant(Rational value);
  static Term sum(Term left, Term right);
  static Term product(Term left, Term right);
  static Term power(Term base, double exponent);

  const Node& node() const { return *node_; }

  template <class Visitor>
  decltype(auto) visit(Visitor&& v) const;

  friend bool operator==(const Term& a, const Term& b);

 private:
  explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

namespace term {
struct Sum {
  Term left, right;
};
struct Product {
  Term left, right;
};
struct Power {
  Term base;
  double exponent;
};
}  // namespace term

struct Term::Node {
  std::variant<term::Variable, term::Parameter, term::Constant, term::Sum, term::Product, term::Power> value;
};

template <class Visitor>
decltype(auto) Term::visit(Visitor&& v) const {
  return std::visit(std::forward<Visitor>(v), node_->value);
}

inline Term Term::variable(std::size_t index) { return Term(std::make_shared<const Node>(Node{term::Variable{index}})); }

inline Term Term::parameter(std::string name) {
  if (name.empty()) throw std::invalid_argument("parameter name must be non-empty");
  return Term(std::make_shared<const Node>(Node{term::Parameter{std::move(name)}}));
}

inline Term Term::constant(Rational value) {
  if (value < 0) throw std::invalid_argument("constants of the semiring language are non-negative");
  return Term(std::make_shared<const Node>(Node{term::Constant{std::move(value)}}));
}

inline Term Term::sum(Term left, Term right) {
  return Term(std::make_shared<const Node>(Node{term::Sum{std::move(left), std::move(right)}}));
}

inline Term Term::product(Term left, Term right) {
  return Term(std::make_shared<const Node>(Node{term::Product{std::move(left), std::move(right)}}));
}

inline Term Term::power(Term base, double exponent) {
  if (!std::isfinite(exponent)) throw std::invalid_argument("power exponent must be finite");
  return Term(std::make_shared<const Node>(Node{term::Power{std::move(base), exponent}}));
}

inline bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  const auto& x = a.node_->value;
  const auto& y = b.node_->value;
  if (x.index() != y.index()) return false;
  return std::visit(
      overloaded{
          [&](const term::Variable& v) { return v.index == std::get<term::Variable>(y).index; },
          [&](const term::Parameter& p) { return p.name == std::get<term::Parameter>(y).name; },
          [&](const term::Constant& c) { return c.value == std::get<term::Constant>(y).value; },
          [&](const term::Sum& s) {
            const auto& o = std::get<term::Sum>(y);
            return s.left == o.left && s.right == o.right;
          },
          [&](const term::Product& p) {
            const auto& o = std::get<term::Product>(y);
            return p.left == o.left && p.right == o.right;
          },
          [&](const term::Power& p) {
            const auto& o = std::get<term::Power>(y);
            return p.exponent == o.exponent && p.base == o.base;
          },
      },
      x);
}

inline Term operator+(Term a, Term b) { return Term::sum(std::move(a), std::move(b)); }
inline Term operator*(Term a, Term b) { return Term::product(std::move(a), std::move(b)); }
inline Term pow(Term a, double exponent) { return Term::power(std::move(a), exponent); }

inline void collect_variables(const Term& t, std::set<std::size_t>& out) {
  t.visit(overloaded{
      [&](const term::Variable& v) { out.insert(v.index); },
      [](const term::Parameter&) {},
      [](const term::Constant&) {},
      [&](const term::Sum& s) {
        collect_variables(s.left, out);
        collect_variables(s.right, out);
      },
      [&](const term::Product& p) {
        collect_variables(p.left, out);
        collect_variables(p.right, out);
      },
      [&](const term::Power& p) { collect_variables(p.base, out); },
  });
}

inline void collect_parameters(const Term& t, std::set<std::string>& out) {
  t.visit(overloaded{
      [](const term::Variable&) {},
      [&](const term::Parameter& p) { out.insert(p.name); },
      [](const term::Constant&) {},
      [&](const term::Sum& s) {
        collect_parameters(s.left, out);
        collect_parameters(s.right, out);
      },
      [&](const term::Product& p) {
        collect_parameters(p.left, out);
        collect_parameters(p.right, out);
      },
      [&](const term::Power& p) { collect_parameters(p.base, out); },
  });
}

// Printing ------------------------------------------------------------------

namespace detail {
enum class TermContext { Top, SumRight, ProductLeft, ProductRight, PowerBase };

inline std::string to_text(const Term& t, TermContext ctx) {
  return t.visit(overloaded{
      [](const term::Variable& v) { return "x" + std::to_string(v.index + 1); },
      [](const term::Parameter& p) { return p.name; },
      [&](const term::Constant& c) {
        std::string s = to_string(c.value);
        if (ctx == TermContext::PowerBase && s.find('/') != std::string::npos) return "(" + s + ")";
        return s;
      },
      [&](const term::Sum& s) {
        std::string body = to_text(s.left, TermContext::Top) + " + " + to_text(s.right, TermContext::SumRight);
        return ctx == TermContext::Top ? body : "(" + body + ")";
      },
      [&](const term::Product& p) {
        std::string body =
            to_text(p.left, TermContext::ProductLeft) + "*" + to_text(p.right, TermContext::ProductRight);
        return (ctx == TermContext::Top || ctx == TermContext::SumRight || ctx == TermContext::ProductLeft)
                   ? body
                   : "(" + body + ")";
      },
      [&](const term::Power& p) {
        std::string body = to_text(p.base, TermContext::PowerBase) + "^" + format_double(p.exponent);
        return ctx == TermContext::PowerBase ? "(" + body + ")" : body;
      },
  });
}
}  // namespace detail

// Text in the formula grammar; parse_term(to_string(t)) == t.
inline std::string to_string(const Term& t) { return detail::to_text(t, detail::TermContext::Top); }

// Strictly positive parameter values keyed by name.
class ParameterEnvironment {
 public:
  ParameterEnvironment() = default;
  ParameterEnvironment(std::initializer_list<std::pair<const std::string, double>> init) {
    for (const auto& [k, v] : init) set(k, v);
  }

  void set(const std::string& name, double value) {
    if (!(value > 0.0) || !std::isfinite(value))
      throw std::invalid_argument("parameter '" + name + "' must be a finite positive real");
    values_[name] = value;
  }

  double get(const std::string& name) const {
    auto it = values_.find(name);
    if (it == values_.end()) throw std::out_of_range("unbound parameter '" + name + "'");
    return it->second;
  }

  bool contains(const std::string& name) const { return values_.count(name) != 0; }
  const std::map<std::string, double>& values() const { return values_; }

 private:
  std::map<std::string, double> values_;
};

}  // namespace loglim
