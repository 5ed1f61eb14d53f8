#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "polyhedron.hpp"
#include "util.hpp"

namespace loglim {

// Unit vectors approximating A_0(V) on the sphere, plus whether 0 is in A_0.
struct DirectionCloud {
  std::size_t dimension = 0;
  std::vector<Vector> directions;
  bool origin_member = false;
};

inline Vector normalized(const Vector& v) {
  double n = norm(v);
  if (!(n > 0.0)) throw std::invalid_argument("cannot normalise the zero vector");
  Vector u(v);
  for (auto& c : u) c /= n;
  return u;
}

// Great-circle distance; the chord form stays accurate for nearby vectors.
inline double geodesic(const Vector& u, const Vector& v) {
  double chord = Polyhedron::distance(u, v);
  return 2.0 * std::asin(std::min(1.0, chord / 2.0));
}

inline double angle_to_cloud(const Vector& u, const std::vector<Vector>& cloud) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& v : cloud) best = std::min(best, geodesic(u, v));
  return best;
}

namespace detail {
inline double directed_hausdorff(const std::vector<Vector>& from, const std::vector<Vector>& to) {
  double worst = 0.0;
  for (const auto& u : from) worst = std::max(worst, angle_to_cloud(u, to));
  return worst;
}
}  // namespace detail

// Symmetric geodesic Hausdorff distance; +inf if exactly one side is empty.
inline double hausdorff_directions(const DirectionCloud& a, const DirectionCloud& b) {
  if (a.dimension != b.dimension) throw std::invalid_argument("direction clouds differ in dimension");
  if (a.directions.empty() && b.directions.empty()) return 0.0;
  if (a.directions.empty() || b.directions.empty()) return std::numeric_limits<double>::infinity();
  return std::max(detail::directed_hausdorff(a.directions, b.directions),
                  detail::directed_hausdorff(b.directions, a.directions));
}

// Deterministic, roughly uniform points on S^{n-1}: both signs on S^0, an
// angle grid on S^1, a Fibonacci lattice on S^2 and hashed Gaussians above.
inline std::vector<Vector> sphere_grid(std::size_t n, std::size_t count) {
  std::vector<Vector> out;
  if (n == 0) return out;
  if (n == 1) return {{-1.0}, {1.0}};
  if (n == 2) {
    for (std::size_t k = 0; k < count; ++k) {
      double a = 2.0 * kPi * static_cast<double>(k) / static_cast<double>(count);
      out.push_back({std::cos(a), std::sin(a)});
    }
    return out;
  }
  if (n == 3) {
    const double golden = kPi * (3.0 - std::sqrt(5.0));
    for (std::size_t k = 0; k < count; ++k) {
      double z = 1.0 - (2.0 * static_cast<double>(k) + 1.0) / static_cast<double>(count);
      double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      double a = golden * static_cast<double>(k);
      out.push_back({r * std::cos(a), r * std::sin(a), z});
    }
    return out;
  }
  std::uint64_t state = 0x5eedULL;
  for (std::size_t k = 0; k < count; ++k) {
    Vector v(n);
    for (std::size_t i = 0; i < n; ++i) {
      double u1 = unit_double(splitmix64(state++)) + 0x1.0p-54;
      double u2 = unit_double(splitmix64(state++));
      v[i] = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
    }
    out.push_back(normalized(v));
  }
  return out;
}

// Typical spacing of sphere_grid(n, count), in radians.
inline double sphere_grid_spacing(std::size_t n, std::size_t count) {
  if (n <= 1) return 0.0;
  if (n == 2) return 2.0 * kPi / static_cast<double>(count);
  return std::sqrt(4.0 * kPi / static_cast<double>(count));
}

namespace detail {
// Points of (cell ∩ unit sphere) for a cell that is a cone: project grid
// directions onto the cone and normalise. Projection is 1-Lipschitz, so the
// samples are as dense as the grid.
inline void cone_sphere_samples(const Polyhedron& cone, const std::vector<Vector>& grid, std::vector<Vector>& out) {
  for (const auto& g : grid) {
    auto p = cone.project(g);
    if (!p) return;
    double n = norm(*p);
    if (n > 1e-9) out.push_back(normalized(*p));
  }
}

// Points of (cell ∩ unit circle) for a planar polyhedron that need not be a cone.
inline void planar_circle_samples(const Polyhedron& cell, const std::vector<Vector>& grid, double tol,
                                  std::vector<Vector>& out) {
  const LinearConstraint* line = nullptr;
  for (const auto& c : cell.constraints())
    if (c.relation == Relation::Eq && norm(c.form.coeffs) > 0.0) line = &c;
  if (!line) {
    for (const auto& g : grid)
      if (cell.contains(g, tol)) out.push_back(g);
    return;
  }
  // a.x + c = 0 meets the circle at p0 ± s d with p0 = -c a/|a|^2, d ⊥ a
  const Vector& a = line->form.coeffs;
  double aa = dot(a, a);
  Vector p0{-line->form.constant * a[0] / aa, -line->form.constant * a[1] / aa};
  double h2 = 1.0 - dot(p0, p0);
  if (h2 < 0.0) return;
  Vector d = normalized(Vector{-a[1], a[0]});
  double s = std::sqrt(h2);
  for (double sign : {-1.0, 1.0}) {
    Vector q{p0[0] + sign * s * d[0], p0[1] + sign * s * d[1]};
    if (cell.contains(q, 1e-9)) out.push_back(q);
    if (s == 0.0) break;
  }
}
}  // namespace detail

// Sample of (complex ∩ S^{n-1}). Cones are sampled by projection; planar
// non-conic cells exactly (1-cells) or by grid filtering (2-cells).
inline std::vector<Vector> complex_sphere_samples(const PolyhedralComplex& k, std::size_t grid_count) {
  std::vector<Vector> out;
  auto grid = sphere_grid(k.dimension(), grid_count);
  double tol = sphere_grid_spacing(k.dimension(), grid_count);
  for (const auto& cell : k.cells()) {
    if (cell.is_cone() || k.dimension() != 2)
      detail::cone_sphere_samples(cell.is_cone() ? cell : cell.recession_cone(), grid, out);
    else
      detail::planar_circle_samples(cell, grid, tol, out);
  }
  return out;
}

// Geodesic distance from a unit vector to (cone ∩ S^{n-1}). When the
// projection onto the cone is non-zero its direction is the nearest point;
// otherwise u lies in the polar cone and the distance comes from samples.
inline double angle_to_cone(const Vector& u, const Polyhedron& cone, const std::vector<Vector>& cone_samples) {
  auto p = cone.project(u);
  if (!p) return std::numeric_limits<double>::infinity();
  if (norm(*p) > 1e-9) return geodesic(u, normalized(*p));
  return angle_to_cloud(u, cone_samples);
}

// Hausdorff distance between a direction cloud and the direction set of a
// complex. Non-conic cells contribute their recession cones.
inline double hausdorff_directions(const DirectionCloud& a, const PolyhedralComplex& k, std::size_t grid_count = 3600) {
  if (a.dimension != k.dimension()) throw std::invalid_argument("dimension mismatch");
  std::vector<Polyhedron> cones;
  std::vector<std::vector<Vector>> samples;
  std::vector<Vector> all;
  auto grid = sphere_grid(k.dimension(), grid_count);
  for (const auto& cell : k.cells()) {
    cones.push_back(cell.is_cone() ? cell : cell.recession_cone());
    std::vector<Vector> s;
    detail::cone_sphere_samples(cones.back(), grid, s);
    all.insert(all.end(), s.begin(), s.end());
    samples.push_back(std::move(s));
  }
  if (a.directions.empty() && all.empty()) return 0.0;
  if (a.directions.empty() || all.empty()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (const auto& u : a.directions) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < cones.size(); ++i) {
      if (samples[i].empty()) continue;
      best = std::min(best, angle_to_cone(u, cones[i], samples[i]));
    }
    worst = std::max(worst, best);
  }
  return std::max(worst, detail::directed_hausdorff(all, a.directions));
}

// Distance from a direction to the direction set of a complex.
inline double angle_to_complex(const Vector& u, const PolyhedralComplex& k, std::size_t grid_count = 3600) {
  auto grid = sphere_grid(k.dimension(), grid_count);
  double best = std::numeric_limits<double>::infinity();
  for (const auto& cell : k.cells()) {
    Polyhedron cone = cell.is_cone() ? cell : cell.recession_cone();
    auto p = cone.project(u);
    if (p && norm(*p) > 1e-9) {
      best = std::min(best, geodesic(u, normalized(*p)));
      continue;
    }
    std::vector<Vector> s;
    detail::cone_sphere_samples(cone, grid, s);
    if (!s.empty()) best = std::min(best, angle_to_cloud(u, s));
  }
  return best;
}

// Greedy leader clustering: a direction starts a new cluster unless it lies
// within eps of an existing representative. Representatives are first-seen.
inline std::vector<Vector> cluster_directions(const std::vector<Vector>& dirs, double eps) {
  std::vector<Vector> reps;
  double chord = 2.0 * std::sin(std::min(eps, kPi) / 2.0);
  double chord2 = chord * chord;
  for (const auto& d : dirs) {
    bool covered = false;
    for (const auto& r : reps) {
      double s = 0.0;
      for (std::size_t i = 0; i < d.size(); ++i) s += (d[i] - r[i]) * (d[i] - r[i]);
      if (s <= chord2) {
        covered = true;
        break;
      }
    }
    if (!covered) reps.push_back(d);
  }
  return reps;
}

}  // namespace loglim
