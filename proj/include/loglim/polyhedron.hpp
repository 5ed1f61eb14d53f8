#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "formula.hpp"
#include "lp.hpp"
#include "rational.hpp"

namespace loglim {

using Vector = std::vector<double>;

inline double dot(const Vector& a, const Vector& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm(const Vector& a) { return std::sqrt(dot(a, a)); }

// <coeffs, x> + constant
struct AffineForm {
  Vector coeffs;
  double constant = 0.0;

  double operator()(const Vector& x) const { return dot(coeffs, x) + constant; }
  std::size_t dimension() const { return coeffs.size(); }

  AffineForm operator-(const AffineForm& o) const {
    AffineForm r{coeffs, constant - o.constant};
    for (std::size_t i = 0; i < r.coeffs.size(); ++i) r.coeffs[i] -= o.coeffs[i];
    return r;
  }
  AffineForm operator+(const AffineForm& o) const {
    AffineForm r{coeffs, constant + o.constant};
    for (std::size_t i = 0; i < r.coeffs.size(); ++i) r.coeffs[i] += o.coeffs[i];
    return r;
  }
  AffineForm scaled(double a) const {
    AffineForm r{coeffs, a * constant};
    for (auto& c : r.coeffs) c *= a;
    return r;
  }
  friend bool operator==(const AffineForm& a, const AffineForm& b) {
    return a.coeffs == b.coeffs && a.constant == b.constant;
  }
};

// form(x) REL 0
struct LinearConstraint {
  AffineForm form;
  Relation relation = Relation::Leq;
};

// H-representation. Emptiness is a computed property.
class Polyhedron {
 public:
  Polyhedron() = default;
  explicit Polyhedron(std::size_t dimension, std::vector<LinearConstraint> constraints = {})
      : dim_(dimension), constraints_(std::move(constraints)) {
    for (const auto& c : constraints_) check(c);
  }

  std::size_t dimension() const { return dim_; }
  const std::vector<LinearConstraint>& constraints() const { return constraints_; }

  void add(LinearConstraint c) {
    check(c);
    constraints_.push_back(std::move(c));
  }
  // lhs <= rhs, lhs = rhs
  void add_leq(const AffineForm& lhs, const AffineForm& rhs) { add({lhs - rhs, Relation::Leq}); }
  void add_eq(const AffineForm& lhs, const AffineForm& rhs) { add({lhs - rhs, Relation::Eq}); }

  bool is_cone() const {
    return std::all_of(constraints_.begin(), constraints_.end(),
                       [](const LinearConstraint& c) { return c.form.constant == 0.0; });
  }

  // Constraints with constants dropped: the recession cone.
  Polyhedron recession_cone() const {
    Polyhedron r(dim_);
    for (auto c : constraints_) {
      c.form.constant = 0.0;
      r.constraints_.push_back(std::move(c));
    }
    return r;
  }

  Polyhedron intersect(const Polyhedron& o) const {
    if (o.dim_ != dim_) throw std::invalid_argument("polyhedron dimension mismatch");
    Polyhedron r = *this;
    r.constraints_.insert(r.constraints_.end(), o.constraints_.begin(), o.constraints_.end());
    return r;
  }

  // Raw residual test: |f(x)| <= tol for equalities, f(x) <= tol otherwise.
  bool contains(const Vector& x, double tol = 1e-9) const {
    for (const auto& c : constraints_) {
      double v = c.form(x);
      if (c.relation == Relation::Eq ? std::abs(v) > tol : v > tol) return false;
    }
    return true;
  }

  // Exact feasibility: every double is a dyadic rational, so the LP runs on
  // the exact data.
  bool is_feasible() const {
    std::vector<RationalConstraint> cons;
    cons.reserve(constraints_.size());
    for (const auto& c : constraints_) {
      RationalConstraint r;
      for (double a : c.form.coeffs) r.coeffs.push_back(rational_from_double(a));
      r.constant = rational_from_double(c.form.constant);
      r.relation = c.relation;
      cons.push_back(std::move(r));
    }
    return lp_feasible(cons, dim_);
  }

  // Nearest point by enumeration of active sets: equalities plus up to n
  // inequalities are made tight, x is projected onto that affine subspace and
  // the feasible candidates are compared. Exact for the small dimensions used
  // here. Returns nullopt for an empty polyhedron.
  std::optional<Vector> project(const Vector& x, double tol = 1e-9) const {
    std::vector<std::size_t> eqs, ineqs;
    for (std::size_t i = 0; i < constraints_.size(); ++i)
      (constraints_[i].relation == Relation::Eq ? eqs : ineqs).push_back(i);
    if (contains(x, 0.0)) return x;
    std::optional<Vector> best;
    double best_d = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> active;
    auto consider = [&]() {
      std::vector<std::size_t> rows = eqs;
      rows.insert(rows.end(), active.begin(), active.end());
      auto y = project_affine(x, rows);
      if (!y) return;
      double scale = 1.0 + norm(*y);
      if (!contains(*y, tol * scale)) return;
      double d = distance(x, *y);
      if (d < best_d) {
        best_d = d;
        best = y;
      }
    };
    std::size_t max_active = std::min(dim_, ineqs.size());
    // iterate subsets of ineqs of size 0..max_active
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t start, std::size_t left) {
      consider();
      if (left == 0) return;
      for (std::size_t i = start; i < ineqs.size(); ++i) {
        active.push_back(ineqs[i]);
        rec(i + 1, left - 1);
        active.pop_back();
      }
    };
    rec(0, max_active);
    return best;
  }

  double distance_to(const Vector& x) const {
    auto p = project(x);
    return p ? distance(x, *p) : std::numeric_limits<double>::infinity();
  }

  // Dimension of the face whose relative interior contains x: n minus the
  // rank of the equalities and the inequalities tight at x. -1 if x is outside.
  int local_dimension(const Vector& x, double tol = 1e-9) const {
    if (!contains(x, tol)) return -1;
    std::vector<const LinearConstraint*> rows;
    for (const auto& c : constraints_)
      if (c.relation == Relation::Eq || std::abs(c.form(x)) <= tol) rows.push_back(&c);
    if (rows.empty()) return static_cast<int>(dim_);
    Eigen::MatrixXd M(rows.size(), dim_);
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t j = 0; j < dim_; ++j) M(i, j) = rows[i]->form.coeffs[j];
    Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
    lu.setThreshold(1e-12);
    return static_cast<int>(dim_) - static_cast<int>(lu.rank());
  }

  static double distance(const Vector& a, const Vector& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
  }

 private:
  void check(const LinearConstraint& c) const {
    if (c.form.dimension() != dim_) throw std::invalid_argument("constraint dimension mismatch");
    for (double a : c.form.coeffs)
      if (!std::isfinite(a)) throw std::invalid_argument("non-finite constraint coefficient");
    if (!std::isfinite(c.form.constant)) throw std::invalid_argument("non-finite constraint constant");
  }

  // Orthogonal projection of x onto {y : f_r(y) = 0 for r in rows}; nullopt
  // when that affine subspace is empty.
  std::optional<Vector> project_affine(const Vector& x, const std::vector<std::size_t>& rows) const {
    if (rows.empty()) return x;
    Eigen::MatrixXd M(rows.size(), dim_);
    Eigen::VectorXd r(rows.size());
    Eigen::VectorXd xv = Eigen::Map<const Eigen::VectorXd>(x.data(), dim_);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto& f = constraints_[rows[i]].form;
      for (std::size_t j = 0; j < dim_; ++j) M(i, j) = f.coeffs[j];
      r(i) = -f.constant;
    }
    // y = x - M^T z with M M^T z = M x - r (least squares when rows are dependent)
    Eigen::VectorXd residual = M * xv - r;
    Eigen::MatrixXd MMt = M * M.transpose();
    Eigen::VectorXd z = MMt.completeOrthogonalDecomposition().solve(residual);
    Eigen::VectorXd y = xv - M.transpose() * z;
    if ((M * y - r).norm() > 1e-9 * (1.0 + r.norm() + M.norm() * y.norm())) return std::nullopt;
    return Vector(y.data(), y.data() + dim_);
  }

  std::size_t dim_ = 0;
  std::vector<LinearConstraint> constraints_;
};

struct ComplexMembership {
  bool member = false;
  double distance = std::numeric_limits<double>::infinity();
};

// Finite union of polyhedra.
class PolyhedralComplex {
 public:
  PolyhedralComplex() = default;
  explicit PolyhedralComplex(std::size_t dimension, std::vector<Polyhedron> cells = {})
      : dim_(dimension), cells_(std::move(cells)) {
    for (const auto& c : cells_)
      if (c.dimension() != dim_) throw std::invalid_argument("cell dimension mismatch");
  }

  std::size_t dimension() const { return dim_; }
  const std::vector<Polyhedron>& cells() const { return cells_; }
  bool empty() const { return cells_.empty(); }

  void add(Polyhedron p) {
    if (p.dimension() != dim_) throw std::invalid_argument("cell dimension mismatch");
    cells_.push_back(std::move(p));
  }

  void append(const PolyhedralComplex& o) {
    for (const auto& c : o.cells_) add(c);
  }

  // Drops empty cells (exact LP).
  PolyhedralComplex pruned() const {
    PolyhedralComplex r(dim_);
    for (const auto& c : cells_)
      if (c.is_feasible()) r.cells_.push_back(c);
    return r;
  }

  bool contains(const Vector& x, double tol = 1e-9) const {
    return std::any_of(cells_.begin(), cells_.end(), [&](const Polyhedron& c) { return c.contains(x, tol); });
  }

  bool is_fan() const {
    return std::all_of(cells_.begin(), cells_.end(), [](const Polyhedron& c) { return c.is_cone(); });
  }

 private:
  std::size_t dim_ = 0;
  std::vector<Polyhedron> cells_;
};

inline ComplexMembership complex_membership(const Vector& x, const PolyhedralComplex& k, double tolerance = 1e-9) {
  if (x.size() != k.dimension()) throw std::invalid_argument("dimension mismatch");
  ComplexMembership m;
  for (const auto& c : k.cells()) {
    if (c.contains(x, 0.0)) return {true, 0.0};
    m.distance = std::min(m.distance, c.distance_to(x));
  }
  m.member = m.distance <= tolerance;
  return m;
}

// JSON ----------------------------------------------------------------------

inline nlohmann::json to_json(const Polyhedron& p) {
  nlohmann::json cell = nlohmann::json::array();
  for (const auto& c : p.constraints())
    cell.push_back({{"coeffs", c.form.coeffs},
                    {"const", c.form.constant},
                    {"rel", c.relation == Relation::Eq ? "eq" : "leq"}});
  return cell;
}

inline nlohmann::json to_json(const PolyhedralComplex& k) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& c : k.cells()) out.push_back(to_json(c));
  return out;
}

inline PolyhedralComplex complex_from_json(const nlohmann::json& j, std::size_t dimension = 0) {
  if (!j.is_array()) throw std::invalid_argument("complex JSON must be a list of cells");
  std::vector<Polyhedron> cells;
  for (const auto& cell : j) {
    if (!cell.is_array()) throw std::invalid_argument("cell must be a list of constraints");
    std::vector<LinearConstraint> cons;
    for (const auto& rec : cell) {
      LinearConstraint c;
      c.form.coeffs = rec.at("coeffs").get<Vector>();
      c.form.constant = rec.value("const", 0.0);
      std::string rel = rec.value("rel", "leq");
      if (rel == "eq")
        c.relation = Relation::Eq;
      else if (rel == "leq")
        c.relation = Relation::Leq;
      else
        throw std::invalid_argument("unknown relation '" + rel + "'");
      if (dimension == 0) dimension = c.form.coeffs.size();
      cons.push_back(std::move(c));
    }
    cells.emplace_back(dimension, std::move(cons));
  }
  return PolyhedralComplex(dimension, std::move(cells));
}

}  // namespace loglim
