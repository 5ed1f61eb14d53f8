#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>

#include "loglim/amoeba.hpp"
#include "loglim/directions.hpp"

namespace loglim::svg {

constexpr double kSize = 400.0;

inline std::string num(double v) { return format_fixed(v, 2); }

inline void header(std::ostream& out) {
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(kSize) << "\" height=\"" << num(kSize)
      << "\" viewBox=\"0 0 " << num(kSize) << ' ' << num(kSize) << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

inline void axes(std::ostream& out, double cx, double cy) {
  out << "<line x1=\"0\" y1=\"" << num(cy) << "\" x2=\"" << num(kSize) << "\" y2=\"" << num(cy)
      << "\" stroke=\"#bbb\"/>\n";
  out << "<line x1=\"" << num(cx) << "\" y1=\"0\" x2=\"" << num(cx) << "\" y2=\"" << num(kSize)
      << "\" stroke=\"#bbb\"/>\n";
}

// Unit circle with the estimated directions as rays from the origin and,
// optionally, samples of the expected direction set as grey dots on it.
inline void directions(std::ostream& out, const DirectionCloud& d, const std::optional<PolyhedralComplex>& expected = {}) {
  if (d.dimension != 2) throw std::invalid_argument("SVG output is only drawn for planar sets");
  double c = kSize / 2, r = kSize * 0.4;
  header(out);
  axes(out, c, c);
  out << "<circle cx=\"" << num(c) << "\" cy=\"" << num(c) << "\" r=\"" << num(r)
      << "\" fill=\"none\" stroke=\"#ddd\"/>\n";
  if (expected)
    for (const auto& u : complex_sphere_samples(*expected, 720))
      out << "<circle cx=\"" << num(c + r * u[0]) << "\" cy=\"" << num(c - r * u[1])
          << "\" r=\"2.5\" fill=\"#ccc\"/>\n";
  for (const auto& u : d.directions)
    out << "<line x1=\"" << num(c) << "\" y1=\"" << num(c) << "\" x2=\"" << num(c + r * u[0]) << "\" y2=\""
        << num(c - r * u[1]) << "\" stroke=\"black\" stroke-width=\"1.5\"/>\n";
  if (d.origin_member) out << "<circle cx=\"" << num(c) << "\" cy=\"" << num(c) << "\" r=\"3\" fill=\"black\"/>\n";
  out << "</svg>\n";
}

// Scatter plot of a planar log-space cloud, scaled to fit.
inline void scatter(std::ostream& out, const PointCloud& cloud) {
  if (cloud.dimension != 2) throw std::invalid_argument("SVG output is only drawn for planar sets");
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& p : cloud.points)
    for (double v : p) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  if (cloud.points.empty()) lo = -1, hi = 1;
  lo = std::min(lo, 0.0);
  hi = std::max(hi, 0.0);
  double pad = 0.05 * (hi - lo) + 1e-12;
  lo -= pad;
  hi += pad;
  auto sx = [&](double v) { return kSize * (v - lo) / (hi - lo); };
  auto sy = [&](double v) { return kSize - kSize * (v - lo) / (hi - lo); };
  header(out);
  axes(out, sx(0.0), sy(0.0));
  for (const auto& p : cloud.points)
    out << "<circle cx=\"" << num(sx(p[0])) << "\" cy=\"" << num(sy(p[1])) << "\" r=\"1\" fill=\"black\"/>\n";
  out << "</svg>\n";
}

}  // namespace loglim::svg
