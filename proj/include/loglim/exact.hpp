#pragma once

#include <cstddef>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "amoeba.hpp"
#include "lp.hpp"
#include "rational.hpp"
#include "semantics.hpp"
#include "tropical.hpp"

namespace loglim {

class InvalidCone : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ExhaustionFailed : public std::runtime_error {
 public:
  explicit ExhaustionFailed(std::size_t index)
      : std::runtime_error("cover cone " + std::to_string(index) + " still meets the sample"), index_(index) {}
  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

// Open cone given in the coordinates y = B x as
//   C' = {y_n < 0, a_i . (y_1..y_{n-1}) + y_n < 0}.
struct ConeSpec {
  std::vector<std::vector<Rational>> B;
  std::vector<std::vector<Rational>> faces;

  std::size_t dimension() const { return B.size(); }

  static ConeSpec standard(std::size_t n, std::vector<std::vector<Rational>> faces) {
    ConeSpec c;
    c.B.assign(n, std::vector<Rational>(n, Rational(0)));
    for (std::size_t i = 0; i < n; ++i) c.B[i][i] = 1;
    c.faces = std::move(faces);
    return c;
  }

  // Exponent vectors of the guard monomials: e_0 = B_n and
  // e_i = sum_j a_i^j B_j + B_n.
  std::vector<std::vector<Rational>> exponents() const {
    std::size_t n = dimension();
    std::vector<std::vector<Rational>> out{B[n - 1]};
    for (const auto& a : faces) {
      std::vector<Rational> e = B[n - 1];
      for (std::size_t j = 0; j + 1 < n; ++j)
        for (std::size_t k = 0; k < n; ++k) e[k] += a[j] * B[j][k];
      out.push_back(std::move(e));
    }
    return out;
  }

  void validate() const {
    std::size_t n = dimension();
    if (n == 0) throw InvalidCone("cone of dimension zero");
    for (const auto& row : B)
      if (row.size() != n) throw InvalidCone("B must be square");
    for (const auto& a : faces)
      if (a.size() != n - 1) throw InvalidCone("face normals must have n - 1 entries");
    if (!invertible()) throw InvalidCone("B is singular");
    // closure(C') meets {y_n = 0} only at 0 iff {a_i . u <= 0} = {0}
    for (std::size_t j = 0; j + 1 < n; ++j) {
      for (int s : {1, -1}) {
        std::vector<RationalConstraint> cons;
        for (const auto& a : faces) cons.push_back({a, Rational(0), Relation::Leq});
        std::vector<Rational> e(n - 1, Rational(0));
        e[j] = -s;
        cons.push_back({e, Rational(1), Relation::Leq});
        if (lp_feasible(cons, n - 1)) throw InvalidCone("closure of the cone leaves the half-space y_n < 0");
      }
    }
  }

  // Direct membership of a log-space point in C.
  bool contains(const Vector& X) const {
    for (const auto& e : exponents()) {
      double s = 0.0;
      for (std::size_t k = 0; k < e.size(); ++k) s += to_double(e[k]) * X[k];
      if (!(s < 0.0)) return false;
    }
    return true;
  }

 private:
  bool invertible() const {
    auto m = B;
    std::size_t n = m.size();
    for (std::size_t c = 0; c < n; ++c) {
      std::size_t p = c;
      while (p < n && m[p][c] == 0) ++p;
      if (p == n) return false;
      std::swap(m[p], m[c]);
      for (std::size_t r = c + 1; r < n; ++r) {
        if (m[r][c] == 0) continue;
        Rational f = m[r][c] / m[c][c];
        for (std::size_t k = c; k < n; ++k) m[r][k] -= f * m[c][k];
      }
    }
    return true;
  }
};

namespace detail {
inline Rational rational_from_json(const nlohmann::json& v) {
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_integer()) return Rational(v.get<long long>());
  if (v.is_number()) return parse_rational(v.dump());
  throw InvalidCone("expected a number or a rational string");
}

inline nlohmann::json rational_to_json(const Rational& q) {
  if (denominator(q) == 1 && abs(numerator(q)) < Integer(1) << 53) return numerator(q).convert_to<long long>();
  return to_string(q);
}

inline std::vector<std::vector<Rational>> rational_rows(const nlohmann::json& j, const char* what) {
  if (!j.is_array()) throw InvalidCone(std::string(what) + " must be a list of rows");
  std::vector<std::vector<Rational>> out;
  for (const auto& row : j) {
    std::vector<Rational> r;
    if (row.is_array())
      for (const auto& v : row) r.push_back(rational_from_json(v));
    else
      r.push_back(rational_from_json(row));  // scalar face normal when n = 2
    out.push_back(std::move(r));
  }
  return out;
}
}  // namespace detail

// {"B": [[..], ..], "faces": [[..], ..]}; entries are integers, decimals or
// "p/q" strings. A missing B means the identity.
inline ConeSpec cone_from_json(const nlohmann::json& j) {
  ConeSpec c;
  c.faces = detail::rational_rows(j.value("faces", nlohmann::json::array()), "faces");
  if (j.contains("B")) {
    c.B = detail::rational_rows(j.at("B"), "B");
  } else {
    if (!j.contains("dimension")) throw InvalidCone("cone needs B or dimension");
    c = ConeSpec::standard(j.at("dimension").get<std::size_t>(), c.faces);
  }
  c.validate();
  return c;
}

inline nlohmann::json to_json(const ConeSpec& c) {
  nlohmann::json B = nlohmann::json::array(), faces = nlohmann::json::array();
  for (const auto& row : c.B) {
    nlohmann::json r = nlohmann::json::array();
    for (const auto& v : row) r.push_back(detail::rational_to_json(v));
    B.push_back(r);
  }
  for (const auto& a : c.faces) {
    nlohmann::json r = nlohmann::json::array();
    for (const auto& v : a) r.push_back(detail::rational_to_json(v));
    faces.push_back(r);
  }
  return {{"B", B}, {"faces", faces}};
}

// Cover file: a JSON list of cones, or {"cones": [...]}.
inline std::vector<ConeSpec> load_cover(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  nlohmann::json j = nlohmann::json::parse(in);
  if (j.is_object()) j = j.at("cones");
  std::vector<ConeSpec> out;
  for (const auto& c : j) out.push_back(cone_from_json(c));
  return out;
}

// Guards -------------------------------------------------------------------

inline constexpr const char* kGuardParameter = "h";

struct GuardFormula {
  Formula formula;  // phi^C(x, h) = not(h <= x^{e_0} or ... or h <= x^{e_k})
  std::string parameter = kGuardParameter;
};

namespace detail {
inline Term exponent_monomial(const std::vector<Rational>& e) {
  std::optional<Term> out;
  for (std::size_t k = 0; k < e.size(); ++k) {
    if (e[k] == 0) continue;
    Term v = Term::variable(k);
    Term f = e[k] == 1 ? v : Term::power(v, to_double(e[k]));
    out = out ? Term::product(*out, f) : f;
  }
  return out ? *out : Term::constant(1);
}

inline Formula guard_disjunction(const ConeSpec& c, const Term& threshold) {
  std::vector<Formula> atoms;
  for (const auto& e : c.exponents()) atoms.push_back(leq(threshold, exponent_monomial(e)));
  return atoms.size() == 1 ? atoms.front() : Formula::disjunction(std::move(atoms));
}
}  // namespace detail

inline GuardFormula guard_formula(const ConeSpec& c) {
  c.validate();
  return {Formula::negation(detail::guard_disjunction(c, Term::parameter(kGuardParameter)))};
}

// not phi^C as a positive disjunction of Leq atoms, threshold left symbolic.
inline Formula guard_negation(const ConeSpec& c) {
  c.validate();
  return detail::guard_disjunction(c, Term::parameter(kGuardParameter));
}

// x in E_h(C) for a base-10 log point X.
inline bool in_guard_set(const GuardFormula& g, const Vector& X, double h) {
  ParameterEnvironment env;
  env.set(g.parameter, h);
  return eval_formula_t(g.formula, X, 0.1, env, {0.0, 0.0});
}

struct ExhaustionReport {
  bool passed = true;
  bool vacuous = false;  // empty sample
  std::size_t hits = 0;
  std::size_t checked = 0;
};

// No sampled point of V lies in E_h(C). Sound only up to sampling density.
inline ExhaustionReport exhaustion_check(const PointCloud& sample, const ConeSpec& c, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("h must be positive");
  GuardFormula g = guard_formula(c);
  ExhaustionReport r;
  r.vacuous = sample.points.empty();
  for (const auto& p : sample.points) {
    ++r.checked;
    Vector X = p;
    if (sample.space == Space::Classical)
      for (auto& v : X) v = std::log10(v);
    if (in_guard_set(g, X, h)) ++r.hits;
  }
  r.passed = r.hits == 0;
  return r;
}

// Largest h in 10^-1, ..., 10^-max_exponent at which every cone passes.
inline std::optional<Rational> find_guard_threshold(const PointCloud& sample, const std::vector<ConeSpec>& cover,
                                                    int max_exponent = 6) {
  Rational h(1);
  for (int k = 1; k <= max_exponent; ++k) {
    h /= 10;
    bool ok = true;
    for (const auto& c : cover)
      if (!exhaustion_check(sample, c, to_double(h)).passed) {
        ok = false;
        break;
      }
    if (ok) return h;
  }
  return std::nullopt;
}

// psi = phi and (not phi^{C_1})(h) and ..., with h as a literal constant.
inline Formula assemble_exact(const Formula& phi, const std::vector<ConeSpec>& cover, const Rational& h,
                              const PointCloud& sample) {
  if (!is_positive(phi)) throw NonPositiveFormulaError();
  if (!(h > 0)) throw std::invalid_argument("h must be positive");
  if (cover.empty()) return phi;
  std::vector<Formula> parts{phi};
  for (std::size_t i = 0; i < cover.size(); ++i) {
    if (!exhaustion_check(sample, cover[i], to_double(h)).passed) throw ExhaustionFailed(i);
    parts.push_back(detail::guard_disjunction(cover[i], Term::constant(h)));
  }
  return Formula::conjunction(std::move(parts));
}

// Verification ---------------------------------------------------------------

struct GridSpec {
  double lo = -2.0;
  double hi = 2.0;
  std::size_t points = 401;  // per axis
};

struct ExactnessReport {
  std::size_t checked = 0;
  std::vector<Vector> extra;    // in psi_0, not in the target
  std::vector<Vector> missing;  // in the target, not in psi_0
  std::size_t disagreements() const { return extra.size() + missing.size(); }
};

inline ExactnessReport verify_exactness(const Formula& psi, const PolyhedralComplex& target, const GridSpec& grid = {},
                                        unsigned threads = 0) {
  if (grid.points < 2) throw std::invalid_argument("grid needs at least two points per axis");
  TropicalFormula trop = dequantize_formula(psi);
  std::size_t n = target.dimension();
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= grid.points;
  auto coord = [&](std::size_t k) {
    return grid.lo + (grid.hi - grid.lo) * static_cast<double>(k) / static_cast<double>(grid.points - 1);
  };

  std::size_t chunks = (total + detail::kPointChunk - 1) / detail::kPointChunk;
  std::vector<ExactnessReport> parts(chunks);
  detail::parallel_chunks(chunks, threads, [&](std::size_t c) {
    auto& r = parts[c];
    std::size_t end = std::min(total, (c + 1) * detail::kPointChunk);
    for (std::size_t idx = c * detail::kPointChunk; idx < end; ++idx) {
      Vector x(n);
      std::size_t rem = idx;
      for (std::size_t i = 0; i < n; ++i) {
        x[i] = coord(rem % grid.points);
        rem /= grid.points;
      }
      bool a = eval_tropical_formula(trop, x, 1e-9);
      bool b = target.contains(x, 1e-9);
      ++r.checked;
      if (a && !b) r.extra.push_back(x);
      if (b && !a) r.missing.push_back(x);
    }
  });
  ExactnessReport out;
  for (auto& p : parts) {
    out.checked += p.checked;
    out.extra.insert(out.extra.end(), p.extra.begin(), p.extra.end());
    out.missing.insert(out.missing.end(), p.missing.begin(), p.missing.end());
  }
  return out;
}

}  // namespace loglim
