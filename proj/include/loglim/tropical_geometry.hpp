#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include "directions.hpp"
#include "polyhedron.hpp"
#include "tropical.hpp"

namespace loglim {

class UnsupportedTropicalTerm : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A tropical term as a maximum of affine forms. An empty list is -inf.
using MaxOfAffine = std::vector<AffineForm>;

namespace detail {
inline void push_unique(MaxOfAffine& out, AffineForm f) {
  if (std::find(out.begin(), out.end(), f) == out.end()) out.push_back(std::move(f));
}
}  // namespace detail

inline MaxOfAffine flatten_tropical_term(const TropicalTerm& tt, std::size_t n) {
  return tt.visit(overloaded{
      [&](const tropical::Variable& v) {
        if (v.index >= n) throw std::out_of_range("variable index exceeds dimension");
        AffineForm f{Vector(n, 0.0), 0.0};
        f.coeffs[v.index] = 1.0;
        return MaxOfAffine{f};
      },
      [&](const tropical::Zero&) { return MaxOfAffine{AffineForm{Vector(n, 0.0), 0.0}}; },
      [](const tropical::Bottom&) { return MaxOfAffine{}; },
      [&](const tropical::Max& m) {
        MaxOfAffine out;
        for (const auto& op : m.operands)
          for (auto& f : flatten_tropical_term(op, n)) detail::push_unique(out, std::move(f));
        return out;
      },
      [&](const tropical::Plus& p) {
        MaxOfAffine l = flatten_tropical_term(p.left, n);
        MaxOfAffine r = flatten_tropical_term(p.right, n);
        MaxOfAffine out;
        for (const auto& a : l)
          for (const auto& b : r) detail::push_unique(out, a + b);
        return out;
      },
      [&](const tropical::Scale& s) {
        MaxOfAffine inner = flatten_tropical_term(s.operand, n);
        if (s.coefficient == 0.0) return MaxOfAffine{AffineForm{Vector(n, 0.0), 0.0}};
        if (s.coefficient < 0.0 && inner.size() > 1)
          throw UnsupportedTropicalTerm("negative scaling of a maximum is a minimum, not a max of affine forms");
        MaxOfAffine out;
        for (const auto& f : inner) detail::push_unique(out, f.scaled(s.coefficient));
        return out;
      },
  });
}

namespace detail {
// x such that l(x) is the maximum of the list
inline void add_argmax(Polyhedron& p, const MaxOfAffine& list, std::size_t i) {
  for (std::size_t k = 0; k < list.size(); ++k)
    if (k != i) p.add_leq(list[k], list[i]);
}
}  // namespace detail

// Argmax decomposition of a tropical atom into polyhedra, empty cells pruned
// by exact LP.
inline PolyhedralComplex tropical_atom_cells(const TropicalAtom& atom, std::size_t n) {
  MaxOfAffine L = flatten_tropical_term(atom.lhs, n);
  MaxOfAffine M = flatten_tropical_term(atom.rhs, n);
  PolyhedralComplex out(n);
  if (atom.relation == Relation::Eq) {
    if (L.empty() || M.empty()) {
      if (L.empty() && M.empty()) out.add(Polyhedron(n));
      return out;
    }
    for (std::size_t i = 0; i < L.size(); ++i) {
      for (std::size_t j = 0; j < M.size(); ++j) {
        Polyhedron p(n);
        p.add_eq(L[i], M[j]);
        detail::add_argmax(p, L, i);
        detail::add_argmax(p, M, j);
        out.add(std::move(p));
      }
    }
  } else {
    if (L.empty()) {
      out.add(Polyhedron(n));
      return out;
    }
    for (std::size_t j = 0; j < M.size(); ++j) {
      Polyhedron p(n);
      for (const auto& l : L) p.add_leq(l, M[j]);
      detail::add_argmax(p, M, j);
      out.add(std::move(p));
    }
  }
  return out.pruned();
}

// Cells of a quantifier-free positive tropical formula: unions for Or,
// pairwise intersections for And.
inline PolyhedralComplex tropical_formula_cells(const TropicalFormula& f, std::size_t n) {
  return f.visit(overloaded{
      [&](const TropicalAtom& a) { return tropical_atom_cells(a, n); },
      [&](const TropicalFormula::AndNode& node) {
        PolyhedralComplex acc = tropical_formula_cells(node.operands.front(), n);
        for (std::size_t i = 1; i < node.operands.size(); ++i) {
          PolyhedralComplex next = tropical_formula_cells(node.operands[i], n);
          PolyhedralComplex joined(n);
          for (const auto& a : acc.cells())
            for (const auto& b : next.cells()) joined.add(a.intersect(b));
          acc = joined.pruned();
        }
        return acc;
      },
      [&](const TropicalFormula::OrNode& node) {
        PolyhedralComplex acc(n);
        for (const auto& op : node.operands) acc.append(tropical_formula_cells(op, n));
        return acc;
      },
      [](const TropicalFormula::NotNode&) -> PolyhedralComplex { throw NonPositiveFormulaError(); },
      [](const TropicalFormula::QuantifiedNode&) -> PolyhedralComplex { throw QuantifiedFormulaError(); },
  });
}

// Basic and exponential cones ----------------------------------------------

// B_N = {x : x_i <= 0, x_{i+1} <= N_i x_i}, N of length n - 1.
inline Polyhedron basic_cone(const std::vector<unsigned>& N) {
  std::size_t n = N.size() + 1;
  for (unsigned k : N)
    if (k < 1) throw std::invalid_argument("basic cone entries must be >= 1");
  Polyhedron p(n);
  for (std::size_t i = 0; i < n; ++i) {
    AffineForm f{Vector(n, 0.0), 0.0};
    f.coeffs[i] = 1.0;
    p.add({f, Relation::Leq});
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    AffineForm f{Vector(n, 0.0), 0.0};
    f.coeffs[i + 1] = 1.0;
    f.coeffs[i] = -static_cast<double>(N[i]);
    p.add({f, Relation::Leq});
  }
  return p;
}

// x in E_{N,h}: 0 < x_i <= h and x_{i+1} <= x_i^{N_i}.
inline bool exponential_cone_membership(const Vector& x, const std::vector<unsigned>& N, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("h must be positive");
  if (x.size() != N.size() + 1) throw std::invalid_argument("dimension mismatch");
  for (double v : x)
    if (!(v > 0.0 && v <= h)) return false;
  for (std::size_t i = 0; i + 1 < x.size(); ++i)
    if (x[i + 1] > std::pow(x[i], static_cast<double>(N[i]))) return false;
  return true;
}

// Newton data and dual fans -------------------------------------------------

struct NewtonData {
  std::vector<std::vector<int>> support;
  std::vector<double> weights;  // one per support point; 0 for unvalued coefficients

  std::size_t dimension() const { return support.empty() ? 0 : support.front().size(); }

  void validate() const {
    if (support.empty()) throw std::invalid_argument("support must be non-empty");
    if (weights.size() != support.size()) throw std::invalid_argument("one weight per support point");
    for (std::size_t i = 0; i < support.size(); ++i) {
      if (support[i].size() != dimension()) throw std::invalid_argument("support points differ in dimension");
      for (std::size_t j = 0; j < i; ++j)
        if (support[i] == support[j]) throw std::invalid_argument("duplicate support point");
    }
  }

  AffineForm form(std::size_t i) const {
    AffineForm f{Vector(support[i].begin(), support[i].end()), weights[i]};
    return f;
  }
};

// Points where max over the support of <w, x> + weight is attained at least
// twice: one cell per pair of support points, empty cells pruned.
inline PolyhedralComplex dual_fan(const NewtonData& nd) {
  nd.validate();
  std::size_t n = nd.dimension();
  MaxOfAffine forms;
  for (std::size_t i = 0; i < nd.support.size(); ++i) forms.push_back(nd.form(i));
  PolyhedralComplex out(n);
  for (std::size_t i = 0; i < forms.size(); ++i) {
    for (std::size_t j = i + 1; j < forms.size(); ++j) {
      Polyhedron p(n);
      p.add_eq(forms[i], forms[j]);
      for (std::size_t k = 0; k < forms.size(); ++k)
        if (k != i && k != j) p.add_leq(forms[k], forms[i]);
      out.add(std::move(p));
    }
  }
  return out.pruned();
}

// Brute-force oracle: grid directions u (points on the unit sphere) where
// the top two values of <w, u> + weight are within delta * |w_top - w_k|,
// i.e. u is within distance delta of the hyperplane where they tie.
inline DirectionCloud attained_twice_oracle(const NewtonData& nd, const std::vector<Vector>& grid, double delta) {
  nd.validate();
  DirectionCloud out{nd.dimension(), {}, true};
  if (nd.support.size() < 2) return out;
  for (const auto& u : grid) {
    std::size_t top = 0;
    double best = -std::numeric_limits<double>::infinity();
    std::vector<double> vals(nd.support.size());
    for (std::size_t i = 0; i < nd.support.size(); ++i) {
      vals[i] = nd.form(i)(u);
      if (vals[i] > best) {
        best = vals[i];
        top = i;
      }
    }
    for (std::size_t k = 0; k < nd.support.size(); ++k) {
      if (k == top) continue;
      AffineForm diff = nd.form(top) - nd.form(k);
      if (best - vals[k] <= delta * norm(diff.coeffs) + 1e-12) {
        out.directions.push_back(u);
        break;
      }
    }
  }
  return out;
}

}  // namespace loglim
