#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "formula.hpp"
#include "semantics.hpp"
#include "term.hpp"
#include "util.hpp"

namespace loglim {

class TropicalTerm;

namespace tropical {
struct Variable {
  std::size_t index;
};
// Image of a positive constant or parameter.
struct Zero {};
// Image of the literal 0; the neutral element -inf of max.
struct Bottom {};
struct Max;
struct Plus;
struct Scale;
}  // namespace tropical

// Max-plus term; the image of a Term under dequantization.
class TropicalTerm {
 public:
  struct Node;

  static TropicalTerm variable(std::size_t index);
  static TropicalTerm zero();
  static TropicalTerm bottom();
  static TropicalTerm max(std::vector<TropicalTerm> operands);
  static TropicalTerm plus(TropicalTerm left, TropicalTerm right);
  static TropicalTerm scale(double coefficient, TropicalTerm operand);

  template <class Visitor>
  decltype(auto) visit(Visitor&& v) const;

  friend bool operator==(const TropicalTerm& a, const TropicalTerm& b);

 private:
  explicit TropicalTerm(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

namespace tropical {
struct Max {
  std::vector<TropicalTerm> operands;
};
struct Plus {
  TropicalTerm left, right;
};
struct Scale {
  double coefficient;
  TropicalTerm operand;
};
}  // namespace tropical

struct TropicalTerm::Node {
  std::variant<tropical::Variable, tropical::Zero, tropical::Bottom, tropical::Max, tropical::Plus, tropical::Scale>
      value;
};

template <class Visitor>
decltype(auto) TropicalTerm::visit(Visitor&& v) const {
  return std::visit(std::forward<Visitor>(v), node_->value);
}

inline TropicalTerm TropicalTerm::variable(std::size_t index) {
  return TropicalTerm(std::make_shared<const Node>(Node{tropical::Variable{index}}));
}
inline TropicalTerm TropicalTerm::zero() { return TropicalTerm(std::make_shared<const Node>(Node{tropical::Zero{}})); }
inline TropicalTerm TropicalTerm::bottom() {
  return TropicalTerm(std::make_shared<const Node>(Node{tropical::Bottom{}}));
}
inline TropicalTerm TropicalTerm::max(std::vector<TropicalTerm> operands) {
  if (operands.empty()) throw std::invalid_argument("max needs at least one operand");
  return TropicalTerm(std::make_shared<const Node>(Node{tropical::Max{std::move(operands)}}));
}
inline TropicalTerm TropicalTerm::plus(TropicalTerm left, TropicalTerm right) {
  return TropicalTerm(std::make_shared<const Node>(Node{tropical::Plus{std::move(left), std::move(right)}}));
}
inline TropicalTerm TropicalTerm::scale(double coefficient, TropicalTerm operand) {
  if (!std::isfinite(coefficient)) throw std::invalid_argument("scale coefficient must be finite");
  return TropicalTerm(std::make_shared<const Node>(Node{tropical::Scale{coefficient, std::move(operand)}}));
}

inline bool operator==(const TropicalTerm& a, const TropicalTerm& b) {
  if (a.node_ == b.node_) return true;
  const auto& x = a.node_->value;
  const auto& y = b.node_->value;
  if (x.index() != y.index()) return false;
  return std::visit(overloaded{
                        [&](const tropical::Variable& v) { return v.index == std::get<tropical::Variable>(y).index; },
                        [](const tropical::Zero&) { return true; },
                        [](const tropical::Bottom&) { return true; },
                        [&](const tropical::Max& m) { return m.operands == std::get<tropical::Max>(y).operands; },
                        [&](const tropical::Plus& p) {
                          const auto& o = std::get<tropical::Plus>(y);
                          return p.left == o.left && p.right == o.right;
                        },
                        [&](const tropical::Scale& s) {
                          const auto& o = std::get<tropical::Scale>(y);
                          return s.coefficient == o.coefficient && s.operand == o.operand;
                        },
                    },
                    x);
}

struct TropicalAtom {
  Relation relation;
  TropicalTerm lhs;
  TropicalTerm rhs;
  friend bool operator==(const TropicalAtom& a, const TropicalAtom& b) {
    return a.relation == b.relation && a.lhs == b.lhs && a.rhs == b.rhs;
  }
};

using TropicalFormula = BasicFormula<TropicalAtom>;

class NonPositiveFormulaError : public std::invalid_argument {
 public:
  NonPositiveFormulaError() : std::invalid_argument("dequantization requires a positive formula (no negation)") {}
};

// Dequantization ------------------------------------------------------------

namespace detail {
inline void collect_sum_operands(const Term& u, std::vector<const Term*>& out) {
  if (const auto* s = std::get_if<term::Sum>(&u.node().value)) {
    collect_sum_operands(s->left, out);
    collect_sum_operands(s->right, out);
  } else {
    out.push_back(&u);
  }
}
}  // namespace detail

// Sum -> Max (nested sums flattened), Product -> Plus, Power -> Scale,
// parameters and positive constants -> Zero, literal 0 -> Bottom. Zero
// factors of a product are dropped since 0 is the tropical unit.
inline TropicalTerm dequantize_term(const Term& u) {
  return u.visit(overloaded{
      [](const term::Variable& v) { return TropicalTerm::variable(v.index); },
      [](const term::Parameter&) { return TropicalTerm::zero(); },
      [](const term::Constant& c) { return c.value == 0 ? TropicalTerm::bottom() : TropicalTerm::zero(); },
      [&](const term::Sum&) {
        std::vector<const Term*> parts;
        detail::collect_sum_operands(u, parts);
        std::vector<TropicalTerm> ops;
        for (const Term* p : parts) ops.push_back(dequantize_term(*p));
        return TropicalTerm::max(std::move(ops));
      },
      [](const term::Product& p) {
        TropicalTerm l = dequantize_term(p.left);
        TropicalTerm r = dequantize_term(p.right);
        // 0 is the unit of tropical multiplication
        if (l == TropicalTerm::zero()) return r;
        if (r == TropicalTerm::zero()) return l;
        return TropicalTerm::plus(l, r);
      },
      [](const term::Power& p) {
        TropicalTerm b = dequantize_term(p.base);
        if (b == TropicalTerm::zero()) return b;
        return TropicalTerm::scale(p.exponent, b);
      },
  });
}

inline TropicalFormula dequantize_formula(const Formula& f) {
  if (!is_positive(f)) throw NonPositiveFormulaError();
  return map_atoms<TropicalAtom>(
      f, [](const Atom& a) { return TropicalAtom{a.relation, dequantize_term(a.lhs), dequantize_term(a.rhs)}; });
}

// The constant C of the uniform-convergence lemma, by the recursion of its
// proof: variable 1, parameter a, power C^alpha, product C*D, sum 2*max(C,D).
inline double sandwich_constant(const Term& u, const ParameterEnvironment& env) {
  return u.visit(overloaded{
      [](const term::Variable&) { return 1.0; },
      [&](const term::Parameter& p) { return env.get(p.name); },
      [](const term::Constant& c) { return c.value == 0 ? 1.0 : to_double(c.value); },
      [&](const term::Sum& s) {
        return 2.0 * std::max(sandwich_constant(s.left, env), sandwich_constant(s.right, env));
      },
      [&](const term::Product& p) { return sandwich_constant(p.left, env) * sandwich_constant(p.right, env); },
      [&](const term::Power& p) { return std::pow(sandwich_constant(p.base, env), p.exponent); },
  });
}

// Two-sided multiplicative bounds lo <= t^{-(U_t - U_0)} <= hi valid for all
// parameter values and real exponents. The recursion above assumes
// parameters >= 1 and non-negative exponents; this one does not.
struct SandwichBounds {
  double lo = 1.0;
  double hi = 1.0;
};

inline SandwichBounds sandwich_bounds(const Term& u, const ParameterEnvironment& env) {
  return u.visit(overloaded{
      [](const term::Variable&) { return SandwichBounds{}; },
      [&](const term::Parameter& p) {
        double a = env.get(p.name);
        return SandwichBounds{a, a};
      },
      [](const term::Constant& c) {
        double a = c.value == 0 ? 1.0 : to_double(c.value);
        return SandwichBounds{a, a};
      },
      [&](const term::Sum& s) {
        auto l = sandwich_bounds(s.left, env);
        auto r = sandwich_bounds(s.right, env);
        return SandwichBounds{std::min(l.lo, r.lo), 2.0 * std::max(l.hi, r.hi)};
      },
      [&](const term::Product& p) {
        auto l = sandwich_bounds(p.left, env);
        auto r = sandwich_bounds(p.right, env);
        return SandwichBounds{l.lo * r.lo, l.hi * r.hi};
      },
      [&](const term::Power& p) {
        auto b = sandwich_bounds(p.base, env);
        if (p.exponent >= 0) return SandwichBounds{std::pow(b.lo, p.exponent), std::pow(b.hi, p.exponent)};
        return SandwichBounds{std::pow(b.hi, p.exponent), std::pow(b.lo, p.exponent)};
      },
  });
}

// Max-plus evaluation -------------------------------------------------------

inline double eval_tropical_term(const TropicalTerm& tt, const std::vector<double>& x) {
  return tt.visit(overloaded{
      [&](const tropical::Variable& v) {
        if (v.index >= x.size()) throw std::out_of_range("point has too few coordinates");
        return x[v.index];
      },
      [](const tropical::Zero&) { return 0.0; },
      [](const tropical::Bottom&) { return -std::numeric_limits<double>::infinity(); },
      [&](const tropical::Max& m) {
        double best = -std::numeric_limits<double>::infinity();
        for (const auto& op : m.operands) best = std::max(best, eval_tropical_term(op, x));
        return best;
      },
      [&](const tropical::Plus& p) { return eval_tropical_term(p.left, x) + eval_tropical_term(p.right, x); },
      [&](const tropical::Scale& s) { return detail::scale_value(s.coefficient, eval_tropical_term(s.operand, x)); },
  });
}

inline bool eval_tropical_atom(const TropicalAtom& a, const std::vector<double>& x, double tau_eq = 1e-9) {
  double l = eval_tropical_term(a.lhs, x);
  double r = eval_tropical_term(a.rhs, x);
  if (a.relation == Relation::Leq) return l <= r + tau_eq;
  return l == r || std::abs(l - r) <= tau_eq;
}

inline bool eval_tropical_formula(const TropicalFormula& f, const std::vector<double>& x, double tau_eq = 1e-9) {
  return f.visit(overloaded{
      [&](const TropicalAtom& a) { return eval_tropical_atom(a, x, tau_eq); },
      [&](const TropicalFormula::AndNode& n) {
        for (const auto& op : n.operands)
          if (!eval_tropical_formula(op, x, tau_eq)) return false;
        return true;
      },
      [&](const TropicalFormula::OrNode& n) {
        for (const auto& op : n.operands)
          if (eval_tropical_formula(op, x, tau_eq)) return true;
        return false;
      },
      [&](const TropicalFormula::NotNode& n) { return !eval_tropical_formula(n.operand, x, tau_eq); },
      [](const TropicalFormula::QuantifiedNode&) -> bool { throw QuantifiedFormulaError(); },
  });
}

// Printing ------------------------------------------------------------------

namespace detail {
inline std::string coefficient_text(double c) {
  if (c == std::floor(c) && std::abs(c) < 1e15) return std::to_string(static_cast<long long>(c));
  return format_double(c);
}

inline std::string tropical_text(const TropicalTerm& tt, bool top) {
  return tt.visit(overloaded{
      [](const tropical::Variable& v) { return "x" + std::to_string(v.index + 1); },
      [](const tropical::Zero&) { return std::string("0"); },
      [](const tropical::Bottom&) { return std::string("-inf"); },
      [](const tropical::Max& m) {
        std::string s = "max(";
        for (std::size_t i = 0; i < m.operands.size(); ++i) {
          if (i) s += ",";
          s += tropical_text(m.operands[i], true);
        }
        return s + ")";
      },
      [&](const tropical::Plus& p) {
        std::string s = tropical_text(p.left, true) + " + " + tropical_text(p.right, true);
        return top ? s : "(" + s + ")";
      },
      [](const tropical::Scale& s) {
        if (s.coefficient == 1.0) return tropical_text(s.operand, false);
        return coefficient_text(s.coefficient) + "*" + tropical_text(s.operand, false);
      },
  });
}
}  // namespace detail

inline std::string to_string(const TropicalTerm& tt) { return detail::tropical_text(tt, true); }

inline std::string to_string(const TropicalAtom& a) {
  return to_string(a.lhs) + " " + relation_text(a.relation) + " " + to_string(a.rhs);
}

inline std::string to_string(const TropicalFormula& f) {
  return detail::formula_text(f, detail::FormulaContext::Top, [](const TropicalAtom& a) { return to_string(a); });
}

}  // namespace loglim
