#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "formula.hpp"
#include "rational.hpp"

namespace loglim {

// coeffs . x + constant  REL  0, over free real variables x.
struct RationalConstraint {
  std::vector<Rational> coeffs;
  Rational constant;
  Relation relation = Relation::Leq;
};

namespace detail {

// Dense tableau for phase one of the simplex method with Bland's rule.
// Exact arithmetic guarantees termination and removes tolerance issues.
class PhaseOneSimplex {
 public:
  PhaseOneSimplex(const std::vector<RationalConstraint>& cons, std::size_t n) : n_(n) {
    m_ = cons.size();
    std::size_t slacks = 0;
    for (const auto& c : cons)
      if (c.relation == Relation::Leq) ++slacks;
    // columns: x+ (n), x- (n), slacks, artificials
    art_begin_ = 2 * n_ + slacks;
    cols_ = art_begin_ + m_;
    tab_.assign(m_ + 1, std::vector<Rational>(cols_ + 1, Rational(0)));
    basis_.resize(m_);
    std::size_t s = 2 * n_;
    for (std::size_t i = 0; i < m_; ++i) {
      const auto& c = cons[i];
      if (c.coeffs.size() != n_) throw std::invalid_argument("constraint dimension mismatch");
      auto& row = tab_[i];
      for (std::size_t j = 0; j < n_; ++j) {
        row[j] = c.coeffs[j];
        row[n_ + j] = -c.coeffs[j];
      }
      if (c.relation == Relation::Leq) row[s++] = 1;
      row[cols_] = -c.constant;
      if (row[cols_] < 0)
        for (auto& v : row) v = -v;
      row[art_begin_ + i] = 1;
      basis_[i] = art_begin_ + i;
    }
    // objective row: minimise the sum of artificials, written as reduced costs
    auto& obj = tab_[m_];
    for (std::size_t i = 0; i < m_; ++i)
      for (std::size_t j = 0; j <= cols_; ++j)
        if (j < art_begin_ || j == cols_) obj[j] -= tab_[i][j];
  }

  bool solve() {
    for (;;) {
      std::size_t enter = cols_;
      for (std::size_t j = 0; j < cols_; ++j) {
        if (tab_[m_][j] < 0) {
          enter = j;
          break;
        }
      }
      if (enter == cols_) break;
      std::size_t leave = m_;
      Rational best;
      for (std::size_t i = 0; i < m_; ++i) {
        if (tab_[i][enter] > 0) {
          Rational ratio = tab_[i][cols_] / tab_[i][enter];
          if (leave == m_ || ratio < best || (ratio == best && basis_[i] < basis_[leave])) {
            leave = i;
            best = ratio;
          }
        }
      }
      if (leave == m_) break;  // unbounded direction; cannot happen in phase one
      pivot(leave, enter);
    }
    return tab_[m_][cols_] == 0;
  }

  std::vector<Rational> point() const {
    std::vector<Rational> x(n_, Rational(0));
    for (std::size_t i = 0; i < m_; ++i) {
      std::size_t b = basis_[i];
      if (b < n_)
        x[b] += tab_[i][cols_];
      else if (b < 2 * n_)
        x[b - n_] -= tab_[i][cols_];
    }
    return x;
  }

 private:
  void pivot(std::size_t r, std::size_t c) {
    Rational p = tab_[r][c];
    for (auto& v : tab_[r]) v /= p;
    for (std::size_t i = 0; i <= m_; ++i) {
      if (i == r || tab_[i][c] == 0) continue;
      Rational f = tab_[i][c];
      for (std::size_t j = 0; j <= cols_; ++j)
        if (tab_[r][j] != 0) tab_[i][j] -= f * tab_[r][j];
    }
    basis_[r] = c;
  }

  std::size_t n_, m_ = 0, cols_ = 0, art_begin_ = 0;
  std::vector<std::vector<Rational>> tab_;
  std::vector<std::size_t> basis_;
};

}  // namespace detail

// Returns a feasible point of the constraint system, or nullopt if it is empty.
inline std::optional<std::vector<Rational>> lp_feasible_point(const std::vector<RationalConstraint>& cons,
                                                               std::size_t dimension) {
  if (cons.empty()) return std::vector<Rational>(dimension, Rational(0));
  detail::PhaseOneSimplex lp(cons, dimension);
  if (!lp.solve()) return std::nullopt;
  return lp.point();
}

inline bool lp_feasible(const std::vector<RationalConstraint>& cons, std::size_t dimension) {
  return lp_feasible_point(cons, dimension).has_value();
}

}  // namespace loglim
