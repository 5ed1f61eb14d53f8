#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "term.hpp"
#include "util.hpp"

namespace loglim {

enum class Relation { Eq, Leq };
enum class Quantifier { Exists, Forall };

inline const char* relation_text(Relation r) { return r == Relation::Eq ? "=" : "<="; }

template <class AtomT>
class BasicFormula;

namespace formula {
template <class AtomT>
struct And {
  std::vector<BasicFormula<AtomT>> operands;
};
template <class AtomT>
struct Or {
  std::vector<BasicFormula<AtomT>> operands;
};
template <class AtomT>
struct Not {
  BasicFormula<AtomT> operand;
};
template <class AtomT>
struct Quantified {
  Quantifier kind;
  std::size_t variable;
  BasicFormula<AtomT> body;
};
}  // namespace formula

// First-order formula skeleton (connectives and quantifiers) over an atom
// type. The classical and the tropical formulas share this structure so that
// dequantization is a structural map over atoms.
template <class AtomT>
class BasicFormula {
 public:
  using Atom = AtomT;
  using AndNode = formula::And<AtomT>;
  using OrNode = formula::Or<AtomT>;
  using NotNode = formula::Not<AtomT>;
  using QuantifiedNode = formula::Quantified<AtomT>;
  using Variant = std::variant<AtomT, AndNode, OrNode, NotNode, QuantifiedNode>;

  struct Node {
    Variant value;
  };

  static BasicFormula atom(AtomT a) { return BasicFormula(std::make_shared<const Node>(Node{std::move(a)})); }

  static BasicFormula conjunction(std::vector<BasicFormula> operands) {
    if (operands.empty()) throw std::invalid_argument("conjunction needs at least one operand");
    return BasicFormula(std::make_shared<const Node>(Node{AndNode{std::move(operands)}}));
  }

  static BasicFormula disjunction(std::vector<BasicFormula> operands) {
    if (operands.empty()) throw std::invalid_argument("disjunction needs at least one operand");
    return BasicFormula(std::make_shared<const Node>(Node{OrNode{std::move(operands)}}));
  }

  static BasicFormula negation(BasicFormula operand) {
    return BasicFormula(std::make_shared<const Node>(Node{NotNode{std::move(operand)}}));
  }

  static BasicFormula exists(std::size_t variable, BasicFormula body) {
    return BasicFormula(
        std::make_shared<const Node>(Node{QuantifiedNode{Quantifier::Exists, variable, std::move(body)}}));
  }

  static BasicFormula forall(std::size_t variable, BasicFormula body) {
    return BasicFormula(
        std::make_shared<const Node>(Node{QuantifiedNode{Quantifier::Forall, variable, std::move(body)}}));
  }

  static BasicFormula quantified(Quantifier kind, std::size_t variable, BasicFormula body) {
    return BasicFormula(std::make_shared<const Node>(Node{QuantifiedNode{kind, variable, std::move(body)}}));
  }

  const Variant& node() const { return node_->value; }

  template <class Visitor>
  decltype(auto) visit(Visitor&& v) const {
    return std::visit(std::forward<Visitor>(v), node_->value);
  }

  bool is_atom() const { return std::holds_alternative<AtomT>(node_->value); }

  friend bool operator==(const BasicFormula& a, const BasicFormula& b) {
    if (a.node_ == b.node_) return true;
    const Variant& x = a.node();
    const Variant& y = b.node();
    if (x.index() != y.index()) return false;
    return std::visit(overloaded{
                          [&](const AtomT& atom) { return atom == std::get<AtomT>(y); },
                          [&](const AndNode& n) { return n.operands == std::get<AndNode>(y).operands; },
                          [&](const OrNode& n) { return n.operands == std::get<OrNode>(y).operands; },
                          [&](const NotNode& n) { return n.operand == std::get<NotNode>(y).operand; },
                          [&](const QuantifiedNode& n) {
                            const auto& o = std::get<QuantifiedNode>(y);
                            return n.kind == o.kind && n.variable == o.variable && n.body == o.body;
                          },
                      },
                      x);
  }

 private:
  explicit BasicFormula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

// Conjunction that collapses a single operand to itself.
template <class F>
F conjoin(std::vector<F> operands) {
  if (operands.size() == 1) return operands.front();
  return F::conjunction(std::move(operands));
}

template <class F>
F disjoin(std::vector<F> operands) {
  if (operands.size() == 1) return operands.front();
  return F::disjunction(std::move(operands));
}

// Rebuilds the formula skeleton with every atom replaced by fn(atom).
template <class AtomOut, class AtomIn, class Fn>
BasicFormula<AtomOut> map_atoms(const BasicFormula<AtomIn>& f, Fn&& fn) {
  using In = BasicFormula<AtomIn>;
  using Out = BasicFormula<AtomOut>;
  return f.visit(overloaded{
      [&](const AtomIn& a) { return Out::atom(fn(a)); },
      [&](const typename In::AndNode& n) {
        std::vector<Out> ops;
        for (const auto& op : n.operands) ops.push_back(map_atoms<AtomOut>(op, fn));
        return Out::conjunction(std::move(ops));
      },
      [&](const typename In::OrNode& n) {
        std::vector<Out> ops;
        for (const auto& op : n.operands) ops.push_back(map_atoms<AtomOut>(op, fn));
        return Out::disjunction(std::move(ops));
      },
      [&](const typename In::NotNode& n) { return Out::negation(map_atoms<AtomOut>(n.operand, fn)); },
      [&](const typename In::QuantifiedNode& n) {
        return Out::quantified(n.kind, n.variable, map_atoms<AtomOut>(n.body, fn));
      },
  });
}

// Classical atoms ------------------------------------------------------------

struct Atom {
  Relation relation;
  Term lhs;
  Term rhs;
  friend bool operator==(const Atom& a, const Atom& b) {
    return a.relation == b.relation && a.lhs == b.lhs && a.rhs == b.rhs;
  }
};

using Formula = BasicFormula<Atom>;

inline Formula make_atom(Relation r, Term lhs, Term rhs) { return Formula::atom(Atom{r, std::move(lhs), std::move(rhs)}); }
inline Formula eq(Term lhs, Term rhs) { return make_atom(Relation::Eq, std::move(lhs), std::move(rhs)); }
inline Formula leq(Term lhs, Term rhs) { return make_atom(Relation::Leq, std::move(lhs), std::move(rhs)); }

// True iff no negation node occurs anywhere in the formula.
template <class AtomT>
bool is_positive(const BasicFormula<AtomT>& f) {
  using F = BasicFormula<AtomT>;
  return f.visit(overloaded{
      [](const AtomT&) { return true; },
      [](const typename F::AndNode& n) {
        for (const auto& op : n.operands)
          if (!is_positive(op)) return false;
        return true;
      },
      [](const typename F::OrNode& n) {
        for (const auto& op : n.operands)
          if (!is_positive(op)) return false;
        return true;
      },
      [](const typename F::NotNode&) { return false; },
      [](const typename F::QuantifiedNode& n) { return is_positive(n.body); },
  });
}

template <class AtomT>
bool is_quantifier_free(const BasicFormula<AtomT>& f) {
  using F = BasicFormula<AtomT>;
  return f.visit(overloaded{
      [](const AtomT&) { return true; },
      [](const typename F::AndNode& n) {
        for (const auto& op : n.operands)
          if (!is_quantifier_free(op)) return false;
        return true;
      },
      [](const typename F::OrNode& n) {
        for (const auto& op : n.operands)
          if (!is_quantifier_free(op)) return false;
        return true;
      },
      [](const typename F::NotNode& n) { return is_quantifier_free(n.operand); },
      [](const typename F::QuantifiedNode&) { return false; },
  });
}

namespace detail {
template <class AtomT, class AtomVars>
void free_vars(const BasicFormula<AtomT>& f, std::multiset<std::size_t>& bound, std::set<std::size_t>& out,
               const AtomVars& atom_vars) {
  using F = BasicFormula<AtomT>;
  f.visit(overloaded{
      [&](const AtomT& a) {
        std::set<std::size_t> vs;
        atom_vars(a, vs);
        for (auto v : vs)
          if (bound.count(v) == 0) out.insert(v);
      },
      [&](const typename F::AndNode& n) {
        for (const auto& op : n.operands) free_vars(op, bound, out, atom_vars);
      },
      [&](const typename F::OrNode& n) {
        for (const auto& op : n.operands) free_vars(op, bound, out, atom_vars);
      },
      [&](const typename F::NotNode& n) { free_vars(n.operand, bound, out, atom_vars); },
      [&](const typename F::QuantifiedNode& n) {
        auto it = bound.insert(n.variable);
        free_vars(n.body, bound, out, atom_vars);
        bound.erase(it);
      },
  });
}

template <class AtomT, class AtomVars>
void all_vars(const BasicFormula<AtomT>& f, std::set<std::size_t>& out, std::vector<std::size_t>& binders,
              const AtomVars& atom_vars) {
  using F = BasicFormula<AtomT>;
  f.visit(overloaded{
      [&](const AtomT& a) { atom_vars(a, out); },
      [&](const typename F::AndNode& n) {
        for (const auto& op : n.operands) all_vars(op, out, binders, atom_vars);
      },
      [&](const typename F::OrNode& n) {
        for (const auto& op : n.operands) all_vars(op, out, binders, atom_vars);
      },
      [&](const typename F::NotNode& n) { all_vars(n.operand, out, binders, atom_vars); },
      [&](const typename F::QuantifiedNode& n) {
        binders.push_back(n.variable);
        all_vars(n.body, out, binders, atom_vars);
      },
  });
}

inline void atom_variables(const Atom& a, std::set<std::size_t>& out) {
  collect_variables(a.lhs, out);
  collect_variables(a.rhs, out);
}
}  // namespace detail

inline std::set<std::size_t> free_variables(const Formula& f) {
  std::multiset<std::size_t> bound;
  std::set<std::size_t> out;
  detail::free_vars(f, bound, out, detail::atom_variables);
  return out;
}

// Checks that every quantified variable is bound exactly once and never
// occurs free elsewhere in the formula.
inline void validate_bindings(const Formula& f) {
  std::set<std::size_t> all;
  std::vector<std::size_t> binders;
  detail::all_vars(f, all, binders, detail::atom_variables);
  std::set<std::size_t> free = free_variables(f);
  std::set<std::size_t> seen;
  for (auto v : binders) {
    if (!seen.insert(v).second)
      throw std::invalid_argument("variable x" + std::to_string(v + 1) + " is bound more than once");
    if (free.count(v))
      throw std::invalid_argument("variable x" + std::to_string(v + 1) + " occurs both bound and free");
  }
}

inline std::set<std::string> parameters_of(const Formula& f) {
  std::set<std::string> out;
  std::function<void(const Formula&)> walk = [&](const Formula& g) {
    g.visit(overloaded{
        [&](const Atom& a) {
          collect_parameters(a.lhs, out);
          collect_parameters(a.rhs, out);
        },
        [&](const Formula::AndNode& n) {
          for (const auto& op : n.operands) walk(op);
        },
        [&](const Formula::OrNode& n) {
          for (const auto& op : n.operands) walk(op);
        },
        [&](const Formula::NotNode& n) { walk(n.operand); },
        [&](const Formula::QuantifiedNode& n) { walk(n.body); },
    });
  };
  walk(f);
  return out;
}

// Printing ------------------------------------------------------------------

namespace detail {
enum class FormulaContext { Top, OrOperand, AndOperand, Unary };

template <class AtomT, class AtomPrinter>
std::string formula_text(const BasicFormula<AtomT>& f, FormulaContext ctx, const AtomPrinter& print_atom) {
  using F = BasicFormula<AtomT>;
  auto wrap = [](const std::string& s) { return "(" + s + ")"; };
  return f.visit(overloaded{
      [&](const AtomT& a) {
        std::string s = print_atom(a);
        return ctx == FormulaContext::Unary ? wrap(s) : s;
      },
      [&](const typename F::AndNode& n) {
        std::string s;
        for (std::size_t i = 0; i < n.operands.size(); ++i) {
          if (i) s += " & ";
          s += formula_text(n.operands[i], FormulaContext::AndOperand, print_atom);
        }
        bool bare = ctx == FormulaContext::Top || ctx == FormulaContext::OrOperand;
        return bare && n.operands.size() > 1 ? s : wrap(s);
      },
      [&](const typename F::OrNode& n) {
        std::string s;
        for (std::size_t i = 0; i < n.operands.size(); ++i) {
          if (i) s += " | ";
          s += formula_text(n.operands[i], FormulaContext::OrOperand, print_atom);
        }
        return ctx == FormulaContext::Top && n.operands.size() > 1 ? s : wrap(s);
      },
      [&](const typename F::NotNode& n) { return "!" + formula_text(n.operand, FormulaContext::Unary, print_atom); },
      [&](const typename F::QuantifiedNode& n) {
        std::string s = std::string(n.kind == Quantifier::Exists ? "E" : "A") + " x" + std::to_string(n.variable + 1) +
                        " . " + formula_text(n.body, FormulaContext::Top, print_atom);
        return ctx == FormulaContext::Top ? s : wrap(s);
      },
  });
}
}  // namespace detail

inline std::string to_string(const Atom& a) {
  return to_string(a.lhs) + " " + relation_text(a.relation) + " " + to_string(a.rhs);
}

inline std::string to_string(const Formula& f) {
  return detail::formula_text(f, detail::FormulaContext::Top, [](const Atom& a) { return to_string(a); });
}

}  // namespace loglim
