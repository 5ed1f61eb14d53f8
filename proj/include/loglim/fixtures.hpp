#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "amoeba.hpp"
#include "exact.hpp"
#include "parser.hpp"
#include "polynomial.hpp"
#include "tropical_geometry.hpp"

// The worked examples: sets, sampler settings that resolve them, and their
// logarithmic limit sets in closed form.
namespace loglim::fixtures {

namespace detail {
inline LinearConstraint leq0(Vector a) { return {{std::move(a), 0.0}, Relation::Leq}; }
inline LinearConstraint eq0(Vector a) { return {{std::move(a), 0.0}, Relation::Eq}; }

// Reproducible uniform draws in [lo, hi).
struct Draws {
  std::uint64_t state;
  double operator()(double lo, double hi) { return lo + (hi - lo) * unit_double(splitmix64(state++)); }
};
}  // namespace detail

// Schedules ------------------------------------------------------------------

// t from 1e-15 down to 1e-90 and a log10 box of [-150, 150]: the far shell
// sits at 45 log10 units, where eta is about 1e-24.
inline SamplerConfig deep_config(std::uint64_t seed = 1) {
  SamplerConfig cfg;
  cfg.t0 = 1e-15;
  cfg.t_ratio = 1e-15;
  cfg.t_count = 6;
  cfg.box_min = -150.0;
  cfg.box_max = 150.0;
  cfg.samples_per_t = 50000;
  cfg.refine_lines = 2000;
  cfg.seed = seed;
  return cfg;
}

// Fig-pow --------------------------------------------------------------------

inline Formula pow_band() { return parse_formula("x1^2 <= x2 & x2 <= x1^0.5"); }

// {2x <= y <= x/2}
inline PolyhedralComplex pow_limit() {
  return PolyhedralComplex(2, {Polyhedron(2, {detail::leq0({2, -1}), detail::leq0({-0.5, 1})})});
}

inline SamplerConfig pow_config(std::uint64_t seed = 1) {
  SamplerConfig cfg;
  cfg.seed = seed;
  return cfg;
}

// Circles --------------------------------------------------------------------

// x^2 + y^2 + 13 = r^2 + 4x + 6y
inline Formula circle(const Rational& r) {
  return normalize_polynomial("x^2 + y^2 + " + to_string(Rational(13) - r * r) + " = 4x + 6y");
}

inline const std::vector<Rational>& circle_radii() {
  static const std::vector<Rational> r{Rational(3, 2), Rational(5, 2), Rational(7, 2)};
  return r;
}

// The closed circle of radius r about (2, 3) reaches x = 0 iff r > 2 and
// y = 0 iff r > 3; each contact gives one ray.
inline DirectionCloud circle_limit(const Rational& r) {
  DirectionCloud d{2, {}, true};
  if (r > 2) d.directions.push_back({-1.0, 0.0});
  if (r > 3) d.directions.push_back({0.0, -1.0});
  return d;
}

// Cubic ----------------------------------------------------------------------

inline Formula cubic() { return normalize_polynomial("x^2 + y^2 + 1 = 2y + x^3"); }

// {x = 0, y <= 0} u {x >= 0, 2y = 3x}
inline PolyhedralComplex cubic_limit() {
  return PolyhedralComplex(2, {Polyhedron(2, {detail::eq0({1, 0}), detail::leq0({0, 1})}),
                               Polyhedron(2, {detail::leq0({-1, 0}), detail::eq0({-3, 2})})});
}

// {x1 < 0, |x2| < -x1}, written in the swapped coordinates.
inline ConeSpec cubic_cover_cone() { return ConeSpec{{{0, 1}, {1, 0}}, {{1}, {-1}}}; }

// Umbrella -------------------------------------------------------------------

inline const char* umbrella_text() { return "x^2(1 - (z - 2)^2) = x^4 + (y - 1)^2"; }

inline Formula umbrella() { return normalize_polynomial(umbrella_text()); }

inline NewtonData umbrella_newton() {
  auto [p, q] = parse_polynomial_equation(umbrella_text());
  RationalPolynomial f = (p - q).pruned();
  NewtonData nd;
  for (const auto& m : f.monomials()) {
    std::vector<int> w(3, 0);
    for (std::size_t i = 0; i < m.exponents.size(); ++i) w[i] = static_cast<int>(m.exponents[i]);
    nd.support.push_back(w);
    nd.weights.push_back(0.0);
  }
  return nd;
}

// Near x = 0, y = 1 both sides of the equation nearly cancel for every z, so
// the thickened box sample would fill {x -> 0, y ~ 1} far outside 1 < z < 3.
// A tiny eta0 leaves the stick to the line refinement, which only accepts
// genuine crossings; those are resolvable while x^2 stays above the rounding
// floor, so the box stops at 1e-8.
inline SamplerConfig umbrella_config(std::uint64_t seed = 1) {
  SamplerConfig cfg;
  cfg.box_min = -8.0;
  cfg.box_max = 1.0;
  cfg.eta0 = 1e-12;
  cfg.samples_per_t = 50000;
  cfg.refine_lines = 6000;
  cfg.cluster_tolerance = 0.05;
  cfg.seed = seed;
  return cfg;
}

inline Vector umbrella_ray() { return {-1.0, 0.0, 0.0}; }

// Basic and exponential cones ---------------------------------------------------

// E_{N,1/2} through its classical predicate. x^N stays representable on the
// log10 box [-40, 3].
inline LogMembership exponential_cone(const std::vector<unsigned>& N, double h = 0.5) {
  return predicate_membership(N.size() + 1, [N, h](const Vector& x) { return exponential_cone_membership(x, N, h); });
}

inline SamplerConfig cone_config(std::uint64_t seed = 1) {
  SamplerConfig cfg;
  cfg.box_min = -40.0;
  cfg.box_max = 3.0;
  cfg.seed = seed;
  return cfg;
}

// Non-semialgebraic point sets -------------------------------------------------

// y = sin x + 2, 0 < x <= 5
inline PointCloud sin_points(std::size_t count, std::uint64_t seed = 1) {
  detail::Draws u{splitmix64(seed ^ 0x51)};
  PointCloud c{2, {}, Space::Classical};
  for (std::size_t i = 0; i < count; ++i) {
    double x = std::pow(10.0, u(-300.0, std::log10(5.0)));
    c.points.push_back({x, std::sin(x) + 2.0});
  }
  return c;
}

inline PolyhedralComplex sin_limit() {
  return PolyhedralComplex(2, {Polyhedron(2, {detail::eq0({0, 1}), detail::leq0({1, 0})})});
}

// y = exp(-1/x^2). Below x = 0.0376 the value underflows, so the small-x
// end stops there (log10 y is then about -307).
inline PointCloud exp_points(std::size_t count, std::uint64_t seed = 1) {
  detail::Draws u{splitmix64(seed ^ 0xE4)};
  PointCloud c{2, {}, Space::Classical};
  for (std::size_t i = 0; i < count; ++i) {
    double x = std::pow(10.0, u(std::log10(0.0376), 300.0));
    c.points.push_back({x, std::exp(-1.0 / (x * x))});
  }
  return c;
}

inline PolyhedralComplex exp_limit() {
  return PolyhedralComplex(2, {Polyhedron(2, {detail::eq0({0, 1}), detail::leq0({-1, 0})}),
                               Polyhedron(2, {detail::eq0({1, 0}), detail::leq0({0, 1})})});
}

// y = sin(1/x). Half the points have large x (y ~ 1/x); the rest are
// x = 1/(k pi + d), y = sin d for even k, with k and d log-uniform, so both
// coordinates reach far into the negative range independently.
inline PointCloud sininv_points(std::size_t count, std::uint64_t seed = 1) {
  detail::Draws u{splitmix64(seed ^ 0x5171)};
  PointCloud c{2, {}, Space::Classical};
  for (std::size_t i = 0; i < count; ++i) {
    if (i % 2 == 0) {
      double x = std::pow(10.0, u(0.0, 300.0));
      c.points.push_back({x, std::sin(1.0 / x)});
      continue;
    }
    double K = std::pow(10.0, u(0.0, 300.0));
    double k = K < 1e15 ? 2.0 * std::ceil(K / 2.0) : K;
    double d = std::pow(10.0, u(-300.0, std::log10(kPi / 2.0)));
    c.points.push_back({1.0 / (k * kPi + d), std::sin(d)});
  }
  return c;
}

inline PolyhedralComplex sininv_limit() {
  return PolyhedralComplex(2, {Polyhedron(2, {detail::leq0({1, 0}), detail::leq0({0, 1})}),
                               Polyhedron(2, {detail::leq0({-1, 0}), detail::eq0({1, 1})})});
}

// Point clouds are fixed, so only the far-shell radius matters in their
// config; the deep schedule puts it at 45 log10 units.
inline SamplerConfig cloud_config(std::uint64_t seed = 1) { return deep_config(seed); }

}  // namespace loglim::fixtures
