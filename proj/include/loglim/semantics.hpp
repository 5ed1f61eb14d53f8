#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "formula.hpp"
#include "term.hpp"
#include "util.hpp"

namespace loglim {

class QuantifiedFormulaError : public std::invalid_argument {
 public:
  QuantifiedFormulaError() : std::invalid_argument("membership is only defined for quantifier-free formulas") {}
};

inline void check_t(double t) {
  if (!(t > 0.0 && t < 1.0)) throw std::invalid_argument("t must lie in (0, 1)");
}

// log base 1/t, i.e. ln(y) / ln(1/t).
inline double log_inv_t(double y, double t) { return std::log(y) / -std::log(t); }

// x (+)_t y = log_{1/t}(t^-x + t^-y), evaluated as max + log_{1/t}(1 + t^|x-y|)
// so that large |x| never overflows.
inline double oplus_t(double x, double y, double t) {
  double hi = std::max(x, y);
  if (hi == -std::numeric_limits<double>::infinity()) return hi;
  double lo = std::min(x, y);
  double L = -std::log(t);
  return hi + std::log1p(std::exp(-(hi - lo) * L)) / L;
}

namespace detail {
// Power with the convention 0 * (-inf) = 0, i.e. v^0 = 1 even for v = 0.
inline double scale_value(double alpha, double v) { return alpha == 0.0 ? 0.0 : alpha * v; }
}  // namespace detail

inline double eval_classical(const Term& u, const std::vector<double>& x, const ParameterEnvironment& env) {
  return u.visit(overloaded{
      [&](const term::Variable& v) {
        if (v.index >= x.size()) throw std::out_of_range("point has too few coordinates");
        return x[v.index];
      },
      [&](const term::Parameter& p) { return env.get(p.name); },
      [](const term::Constant& c) { return to_double(c.value); },
      [&](const term::Sum& s) { return eval_classical(s.left, x, env) + eval_classical(s.right, x, env); },
      [&](const term::Product& p) { return eval_classical(p.left, x, env) * eval_classical(p.right, x, env); },
      [&](const term::Power& p) { return std::pow(eval_classical(p.base, x, env), p.exponent); },
  });
}

// U_t: the term interpreted in the deformed semifield R^t at a point of log space.
inline double eval_t(const Term& u, const std::vector<double>& x, double t, const ParameterEnvironment& env) {
  return u.visit(overloaded{
      [&](const term::Variable& v) {
        if (v.index >= x.size()) throw std::out_of_range("point has too few coordinates");
        return x[v.index];
      },
      [&](const term::Parameter& p) { return log_inv_t(env.get(p.name), t); },
      [&](const term::Constant& c) {
        if (c.value == 0) return -std::numeric_limits<double>::infinity();
        return log_inv_t(to_double(c.value), t);
      },
      [&](const term::Sum& s) { return oplus_t(eval_t(s.left, x, t, env), eval_t(s.right, x, t, env), t); },
      [&](const term::Product& p) { return eval_t(p.left, x, t, env) + eval_t(p.right, x, t, env); },
      [&](const term::Power& p) { return detail::scale_value(p.exponent, eval_t(p.base, x, t, env)); },
  });
}

// Exp_{1/t}: log space to the positive orthant.
inline std::vector<double> exp_inv_t(const std::vector<double>& x, double t) {
  std::vector<double> y(x.size());
  double L = -std::log(t);
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = std::exp(x[i] * L);
  return y;
}

inline std::vector<double> log_inv_t(const std::vector<double>& y, double t) {
  std::vector<double> x(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) x[i] = log_inv_t(y[i], t);
  return x;
}

// Tolerances for equality atoms. An equality holds when the values agree to
// within tau (absolute, in log space) or, for the thickened sampling
// semantics, when the classical relative residual |U - V| / max(U, V) <= eta.
struct EqualityTolerance {
  double tau = 1e-9;
  double eta = 0.0;
};

namespace detail {
// Relative residual of two classical values given by their base-1/t logs.
inline double relative_residual(double lu, double lv, double t) {
  if (lu == lv) return 0.0;
  double L = -std::log(t);
  return -std::expm1(-std::abs(lu - lv) * L);
}

template <class EvalTerm>
bool eval_formula_log(const Formula& f, double t, const EqualityTolerance& tol, const EvalTerm& ev) {
  return f.visit(overloaded{
      [&](const Atom& a) {
        double l = ev(a.lhs);
        double r = ev(a.rhs);
        if (a.relation == Relation::Leq) return l <= r + tol.tau;
        if (l == r) return true;
        if (std::abs(l - r) <= tol.tau) return true;
        return tol.eta > 0.0 && relative_residual(l, r, t) <= tol.eta;
      },
      [&](const Formula::AndNode& n) {
        for (const auto& op : n.operands)
          if (!eval_formula_log(op, t, tol, ev)) return false;
        return true;
      },
      [&](const Formula::OrNode& n) {
        for (const auto& op : n.operands)
          if (eval_formula_log(op, t, tol, ev)) return true;
        return false;
      },
      [&](const Formula::NotNode& n) { return !eval_formula_log(n.operand, t, tol, ev); },
      [](const Formula::QuantifiedNode&) -> bool { throw QuantifiedFormulaError(); },
  });
}
}  // namespace detail

// Truth of phi_t at a log-space point.
inline bool eval_formula_t(const Formula& f, const std::vector<double>& x, double t, const ParameterEnvironment& env,
                           const EqualityTolerance& tol = {}) {
  check_t(t);
  return detail::eval_formula_log(f, t, tol, [&](const Term& u) { return eval_t(u, x, t, env); });
}

// Truth of phi at a point of the positive orthant. Terms are evaluated in
// log space (base 10) so large exponents do not overflow; the tolerances are
// interpreted accordingly (tau on log10 values, eta relative).
inline bool eval_formula_classical(const Formula& f, const std::vector<double>& y, const ParameterEnvironment& env,
                                   const EqualityTolerance& tol = {0.0, 0.0}) {
  std::vector<double> x = log_inv_t(y, 0.1);
  return detail::eval_formula_log(f, 0.1, tol, [&](const Term& u) { return eval_t(u, x, 0.1, env); });
}

}  // namespace loglim
