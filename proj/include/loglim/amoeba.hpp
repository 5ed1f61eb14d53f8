#pragma once

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <istream>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "directions.hpp"
#include "formula.hpp"
#include "semantics.hpp"
#include "util.hpp"

namespace loglim {

class EmptySample : public std::runtime_error {
 public:
  EmptySample() : std::runtime_error("no sample point satisfies the formula") {}
};

class IngestError : public std::runtime_error {
 public:
  IngestError(std::size_t line, const std::string& msg)
      : std::runtime_error("line " + std::to_string(line) + ": " + msg), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

enum class Space { Classical, Log };

// Points of the positive orthant (Classical) or of log space (Log). Log
// clouds produced by the sampler use base-10 coordinates unless they come
// from amoeba_at, which uses base 1/t.
struct PointCloud {
  std::size_t dimension = 0;
  std::vector<Vector> points;
  Space space = Space::Classical;

  void validate() const {
    for (const auto& p : points) {
      if (p.size() != dimension) throw std::invalid_argument("point of wrong dimension");
      for (double c : p) {
        if (!std::isfinite(c)) throw std::invalid_argument("non-finite coordinate");
        if (space == Space::Classical && !(c > 0.0)) throw std::invalid_argument("non-positive coordinate");
      }
    }
  }
};

struct SamplerConfig {
  double box_min = -12.0;  // log10 box [box_min, box_max]^n
  double box_max = 3.0;
  std::size_t samples_per_t = 200000;
  double t0 = 0.1;
  double t_ratio = 0.1;
  std::size_t t_count = 6;
  double eta0 = 0.05;
  double radius = 0.5;
  double cluster_tolerance = 0.02;
  std::uint64_t seed = 1;
  std::size_t refine_lines = 2000;  // per t value
  std::size_t line_grid = 64;
  std::size_t merge_window = 1;  // trailing schedule entries merged into the estimate
  unsigned threads = 0;          // 0: hardware concurrency

  std::vector<double> t_values() const {
    std::vector<double> out;
    double t = t0;
    for (std::size_t k = 0; k < t_count; ++k) {
      out.push_back(t);
      t *= t_ratio;
    }
    return out;
  }

  double eta(double t) const { return eta0 * std::pow(t, 0.25); }

  void validate() const {
    if (!(box_min < box_max)) throw std::invalid_argument("empty sampling box");
    if (!(t0 > 0.0 && t0 < 1.0)) throw std::invalid_argument("t0 must lie in (0,1)");
    if (t_count == 0) throw std::invalid_argument("empty t schedule");
    if (t_count > 1 && !(t_ratio > 0.0 && t_ratio < 1.0))
      throw std::invalid_argument("t schedule must be strictly decreasing");
    for (double t : t_values())
      if (!(t > 0.0)) throw std::invalid_argument("t schedule underflows");
    if (!(eta0 > 0.0)) throw std::invalid_argument("eta must be positive");
    if (!(radius > 0.0)) throw std::invalid_argument("radius threshold must be positive");
    if (!(cluster_tolerance > 0.0)) throw std::invalid_argument("cluster tolerance must be positive");
    if (line_grid < 3 && refine_lines > 0) throw std::invalid_argument("line grid needs at least 3 points");
    if (merge_window == 0) throw std::invalid_argument("merge window must be positive");
  }

  // A coordinate direction is only observable at t if the box reaches
  // radius * log10(1/t) on that side.
  std::vector<std::string> warnings() const {
    std::vector<std::string> out;
    double need = radius * std::log10(1.0 / t_values().back());
    if (box_max < need)
      out.push_back("box upper bound " + format_double(box_max) + " is below R*log10(1/t_min) = " +
                    format_double(need) + "; positive directions are truncated");
    if (-box_min < need)
      out.push_back("box lower bound " + format_double(box_min) + " is above -R*log10(1/t_min) = " +
                    format_double(-need) + "; negative directions are truncated");
    return out;
  }
};

// Membership of a set V given in log10 coordinates. contains(X, eta) accepts
// equalities at relative thickening eta; equations[k](X) is log10 U - log10 V
// for the k-th equality atom and drives the line refinement.
struct LogMembership {
  std::size_t dimension = 0;
  std::function<bool(const Vector&, double)> contains;
  std::vector<std::function<double(const Vector&)>> equations;
};

namespace detail {
inline void collect_equalities(const Formula& f, std::vector<Atom>& out) {
  f.visit(overloaded{
      [&](const Atom& a) {
        if (a.relation == Relation::Eq) out.push_back(a);
      },
      [&](const Formula::AndNode& n) {
        for (const auto& op : n.operands) collect_equalities(op, out);
      },
      [&](const Formula::OrNode& n) {
        for (const auto& op : n.operands) collect_equalities(op, out);
      },
      [&](const Formula::NotNode& n) { collect_equalities(n.operand, out); },
      [](const Formula::QuantifiedNode&) { throw QuantifiedFormulaError(); },
  });
}
}  // namespace detail

inline LogMembership formula_membership(const Formula& f, std::size_t n, const ParameterEnvironment& env) {
  if (!is_quantifier_free(f)) throw QuantifiedFormulaError();
  for (std::size_t v : free_variables(f))
    if (v >= n) throw std::invalid_argument("formula uses a variable beyond the sampling dimension");
  for (const auto& p : parameters_of(f)) env.get(p);  // unbound parameters fail early
  LogMembership m;
  m.dimension = n;
  m.contains = [f, env](const Vector& X, double eta) {
    return eval_formula_t(f, X, 0.1, env, EqualityTolerance{0.0, eta});
  };
  std::vector<Atom> eqs;
  detail::collect_equalities(f, eqs);
  for (const auto& a : eqs)
    m.equations.push_back([a, env](const Vector& X) { return eval_t(a.lhs, X, 0.1, env) - eval_t(a.rhs, X, 0.1, env); });
  return m;
}

// Membership given by a predicate on classical points.
inline LogMembership predicate_membership(std::size_t n, std::function<bool(const Vector&)> classical) {
  LogMembership m;
  m.dimension = n;
  m.contains = [classical](const Vector& X, double) {
    Vector x(X.size());
    for (std::size_t i = 0; i < X.size(); ++i) x[i] = std::pow(10.0, X[i]);
    return classical(x);
  };
  return m;
}

namespace detail {

inline double radical_inverse(std::uint64_t i, unsigned base) {
  double f = 1.0, r = 0.0;
  while (i > 0) {
    f /= base;
    r += f * static_cast<double>(i % base);
    i /= base;
  }
  return r;
}

inline unsigned nth_prime(std::size_t k) {
  static const unsigned primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};
  if (k >= std::size(primes)) throw std::invalid_argument("Halton sampling supports at most 16 dimensions");
  return primes[k];
}

// Halton point with a Cranley-Patterson shift.
inline Vector halton(std::uint64_t index, const Vector& shift) {
  Vector u(shift.size());
  for (std::size_t d = 0; d < shift.size(); ++d) {
    double v = radical_inverse(index + 1, nth_prime(d)) + shift[d];
    u[d] = v - std::floor(v);
  }
  return u;
}

class StreamRng {
 public:
  explicit StreamRng(std::uint64_t seed) : state_(seed) {}
  double uniform() { return unit_double(splitmix64(state_++)); }

 private:
  std::uint64_t state_;
};

inline std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  return splitmix64(splitmix64(seed ^ 0x9e3779b97f4a7c15ULL) ^ splitmix64(a * 0x100000001b3ULL + b));
}

// Runs job(chunk) for chunk in [0, chunks) on a few threads. Chunks write
// only their own output slot, so the result does not depend on scheduling.
template <class Job>
void parallel_chunks(std::size_t chunks, unsigned threads, const Job& job) {
  unsigned hw = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
  unsigned workers = static_cast<unsigned>(std::min<std::size_t>(hw, chunks));
  if (workers <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) job(c);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (;;) {
        std::size_t c = next.fetch_add(1);
        if (c >= chunks || failed.load()) return;
        try {
          job(c);
        } catch (...) {
          if (!failed.exchange(true)) error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

constexpr std::size_t kPointChunk = 4096;
constexpr std::size_t kLineChunk = 64;

struct LineScan {
  const LogMembership& m;
  double eta;
  std::vector<Vector>& out;
  Vector base;
  std::size_t axis;

  Vector at(double s) const {
    Vector X(base);
    X[axis] = s;
    return X;
  }

  double g(std::size_t k, double s) const { return m.equations[k](at(s)); }

  // Rounding floor for g at a point: log-space sums lose a few ulps of the
  // largest exponent involved.
  double noise(double s) const {
    double big = 1.0;
    for (double v : at(s)) big = std::max(big, std::abs(v));
    return 1e-12 * big;
  }

  void accept(double s) {
    Vector X = at(s);
    if (m.contains(X, std::max(eta, 1e-12))) out.push_back(std::move(X));
  }

  // root of g in [a, b] with g(a), g(b) of opposite signs
  void bisect(std::size_t k, double a, double b, double ga) {
    for (int it = 0; it < 200 && a != b; ++it) {
      double mid = 0.5 * (a + b);
      if (mid == a || mid == b) break;
      double gm = g(k, mid);
      if (gm == 0.0) {
        a = b = mid;
        break;
      }
      if ((gm < 0.0) == (ga < 0.0)) {
        a = mid;
        ga = gm;
      } else {
        b = mid;
      }
    }
    accept(0.5 * (a + b));
  }

  // Near-tangency: g keeps its sign at three grid points but approaches
  // zero in the middle. Golden-section search for the extremum and bisect
  // any crossing it reveals.
  void extremum(std::size_t k, double a, double b, double sigma) {
    const double r = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = a, hi = b;
    double x1 = hi - r * (hi - lo), x2 = lo + r * (hi - lo);
    double f1 = sigma * g(k, x1), f2 = sigma * g(k, x2);
    for (int it = 0; it < 120 && hi - lo > 1e-15 * std::max(1.0, std::abs(lo)); ++it) {
      if (f1 < f2) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - r * (hi - lo);
        f1 = sigma * g(k, x1);
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + r * (hi - lo);
        f2 = sigma * g(k, x2);
      }
      if (f1 <= 0.0 || f2 <= 0.0) break;
    }
    double s = f1 < f2 ? x1 : x2;
    double fs = std::min(f1, f2);
    // a minimum inside the rounding noise is not evidence of a crossing
    if (fs < -noise(s)) {
      bisect(k, a, s, g(k, a));
      bisect(k, s, b, g(k, s));
    }
  }

  void run(double lo, double hi, std::size_t grid, double offset) {
    std::vector<double> s(grid), gv(grid);
    for (std::size_t j = 0; j < grid; ++j) s[j] = lo + (hi - lo) * (static_cast<double>(j) + offset) / grid;
    for (std::size_t k = 0; k < m.equations.size(); ++k) {
      for (std::size_t j = 0; j < grid; ++j) {
        gv[j] = g(k, s[j]);
        // inside the noise the sign is meaningless
        if (std::abs(gv[j]) <= noise(s[j])) gv[j] = std::numeric_limits<double>::quiet_NaN();
      }
      for (std::size_t j = 0; j + 1 < grid; ++j) {
        if (!std::isfinite(gv[j]) || !std::isfinite(gv[j + 1])) continue;
        if ((gv[j] < 0.0) != (gv[j + 1] < 0.0)) bisect(k, s[j], s[j + 1], gv[j]);
      }
      for (std::size_t j = 1; j + 1 < grid; ++j) {
        double a = gv[j - 1], b = gv[j], c = gv[j + 1];
        if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c)) continue;
        bool same = (a < 0.0) == (b < 0.0) && (b < 0.0) == (c < 0.0);
        if (same && std::abs(b) < std::abs(a) && std::abs(b) <= std::abs(c))
          extremum(k, s[j - 1], s[j + 1], b > 0.0 ? 1.0 : -1.0);
      }
    }
  }
};

}  // namespace detail

// Members of V for schedule entry k, in log10 coordinates: a shifted Halton
// sample of the box accepted at thickening eta(t_k), plus roots of each
// equality atom found along random axis-parallel lines. Deterministic for a
// given config and independent of the thread count.
inline PointCloud sample_log_members(const LogMembership& m, const SamplerConfig& cfg, std::size_t k) {
  cfg.validate();
  std::size_t n = m.dimension;
  if (n == 0) throw std::invalid_argument("zero-dimensional sampling");
  double t = cfg.t_values().at(k);
  double eta = cfg.eta(t);
  double width = cfg.box_max - cfg.box_min;

  Vector shift(n);
  detail::StreamRng shift_rng(detail::stream_seed(cfg.seed, 0xC0FFEE, 0));
  for (auto& s : shift) s = shift_rng.uniform();

  std::size_t point_chunks = (cfg.samples_per_t + detail::kPointChunk - 1) / detail::kPointChunk;
  std::size_t lines = m.equations.empty() ? 0 : cfg.refine_lines;
  std::size_t line_chunks = (lines + detail::kLineChunk - 1) / detail::kLineChunk;
  std::vector<std::vector<Vector>> slots(point_chunks + line_chunks);

  detail::parallel_chunks(slots.size(), cfg.threads, [&](std::size_t c) {
    auto& out = slots[c];
    if (c < point_chunks) {
      std::size_t begin = c * detail::kPointChunk;
      std::size_t end = std::min(cfg.samples_per_t, begin + detail::kPointChunk);
      for (std::size_t i = begin; i < end; ++i) {
        Vector X = detail::halton(static_cast<std::uint64_t>(k) * cfg.samples_per_t + i, shift);
        for (auto& x : X) x = cfg.box_min + width * x;
        if (m.contains(X, eta)) out.push_back(std::move(X));
      }
      return;
    }
    std::size_t lc = c - point_chunks;
    detail::StreamRng rng(detail::stream_seed(cfg.seed, k + 1, lc));
    std::size_t begin = lc * detail::kLineChunk;
    std::size_t end = std::min(lines, begin + detail::kLineChunk);
    for (std::size_t l = begin; l < end; ++l) {
      Vector base(n);
      for (auto& b : base) b = cfg.box_min + width * rng.uniform();
      detail::LineScan scan{m, eta, out, base, l % n};
      scan.run(cfg.box_min, cfg.box_max, cfg.line_grid, rng.uniform());
    }
  });

  PointCloud cloud{n, {}, Space::Log};
  for (auto& s : slots)
    for (auto& p : s) cloud.points.push_back(std::move(p));
  return cloud;
}

// Members of V in the positive orthant at the smallest t of the schedule.
inline PointCloud sample_members(const Formula& f, const ParameterEnvironment& env, const SamplerConfig& cfg,
                                 std::size_t n = 0) {
  if (n == 0) {
    auto vars = free_variables(f);
    n = vars.empty() ? 1 : *vars.rbegin() + 1;
  }
  PointCloud logs = sample_log_members(formula_membership(f, n, env), cfg, cfg.t_count - 1);
  if (logs.points.empty()) throw EmptySample();
  PointCloud out{n, {}, Space::Classical};
  for (const auto& X : logs.points) {
    Vector x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = std::pow(10.0, X[i]);
    out.points.push_back(std::move(x));
  }
  return out;
}

// A_t(V) = Log_{1/t}(V).
inline PointCloud amoeba_at(const PointCloud& cloud, double t) {
  check_t(t);
  if (cloud.space != Space::Classical) throw std::invalid_argument("amoeba_at expects a classical cloud");
  PointCloud out{cloud.dimension, {}, Space::Log};
  for (const auto& p : cloud.points) out.points.push_back(log_inv_t(p, t));
  return out;
}

// CSV of positive coordinates, one point per row. Blank lines and lines
// starting with '#' are skipped.
inline PointCloud ingest_points(std::istream& in) {
  PointCloud cloud;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    Vector p;
    std::size_t pos = 0;
    for (;;) {
      std::size_t comma = line.find(',', pos);
      std::string field = line.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
      auto a = field.find_first_not_of(" \t");
      auto b = field.find_last_not_of(" \t");
      if (a == std::string::npos) throw IngestError(lineno, "empty field");
      double v = 0.0;
      const char* beg = field.data() + a;
      const char* fin = field.data() + b + 1;
      if (*beg == '+') ++beg;
      auto [ptr, ec] = std::from_chars(beg, fin, v);
      if (ec != std::errc() || ptr != fin) throw IngestError(lineno, "malformed number '" + field + "'");
      if (!std::isfinite(v)) throw IngestError(lineno, "non-finite coordinate");
      if (!(v > 0.0)) throw IngestError(lineno, "non-positive coordinate " + field);
      p.push_back(v);
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    if (cloud.dimension == 0) cloud.dimension = p.size();
    if (p.size() != cloud.dimension) throw IngestError(lineno, "row has " + std::to_string(p.size()) + " columns");
    cloud.points.push_back(std::move(p));
  }
  cloud.space = Space::Classical;
  return cloud;
}

inline PointCloud ingest_points(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return ingest_points(in);
}

inline void write_points_csv(std::ostream& out, const PointCloud& cloud) {
  for (const auto& p : cloud.points) {
    for (std::size_t i = 0; i < p.size(); ++i) out << (i ? "," : "") << format_double(p[i]);
    out << '\n';
  }
}

// Result of a t-sweep: the merged estimate and the per-t direction sets.
struct LimitEstimate {
  DirectionCloud cloud;
  std::vector<double> t_values;
  std::vector<DirectionCloud> per_t;
  std::size_t samples = 0;
};

namespace detail {
// Directions of log10 points whose amoeba at t has norm >= R.
inline std::vector<Vector> far_directions(const std::vector<Vector>& logs, double t, double radius) {
  double cutoff = radius * std::log10(1.0 / t);
  std::vector<Vector> out;
  for (const auto& X : logs) {
    double r = norm(X);
    if (r >= cutoff && r > 0.0) out.push_back(normalized(X));
  }
  return out;
}

inline LimitEstimate sweep(std::size_t n, const SamplerConfig& cfg,
                           const std::function<std::vector<Vector>(std::size_t)>& log_points_at) {
  cfg.validate();
  LimitEstimate est;
  est.t_values = cfg.t_values();
  std::vector<std::vector<Vector>> raw;
  for (std::size_t k = 0; k < est.t_values.size(); ++k) {
    std::vector<Vector> pts = log_points_at(k);
    est.samples += pts.size();
    raw.push_back(far_directions(pts, est.t_values[k], cfg.radius));
    est.per_t.push_back(DirectionCloud{n, cluster_directions(raw.back(), cfg.cluster_tolerance), !pts.empty()});
  }
  if (est.samples == 0) throw EmptySample();
  std::vector<Vector> merged;
  std::size_t first = est.t_values.size() - std::min(cfg.merge_window, est.t_values.size());
  for (std::size_t k = first; k < raw.size(); ++k) merged.insert(merged.end(), raw[k].begin(), raw[k].end());
  est.cloud = DirectionCloud{n, cluster_directions(merged, cfg.cluster_tolerance), true};
  return est;
}
}  // namespace detail

inline LimitEstimate estimate_limit_directions(const LogMembership& m, const SamplerConfig& cfg) {
  return detail::sweep(m.dimension, cfg, [&](std::size_t k) { return sample_log_members(m, cfg, k).points; });
}

inline LimitEstimate estimate_limit_directions(const Formula& f, const ParameterEnvironment& env,
                                               const SamplerConfig& cfg, std::size_t n) {
  return estimate_limit_directions(formula_membership(f, n, env), cfg);
}

// A fixed cloud (classical or base-10 log) reused at every t.
inline LimitEstimate estimate_limit_directions(const PointCloud& cloud, const SamplerConfig& cfg) {
  cloud.validate();
  std::vector<Vector> logs;
  if (cloud.space == Space::Log) {
    logs = cloud.points;
  } else {
    for (const auto& p : cloud.points) {
      Vector X(p.size());
      for (std::size_t i = 0; i < p.size(); ++i) X[i] = std::log10(p[i]);
      logs.push_back(std::move(X));
    }
  }
  return detail::sweep(cloud.dimension, cfg, [&](std::size_t) { return logs; });
}

struct ConeInvarianceReport {
  bool sufficient = false;
  std::vector<double> distances;  // between successive per-t direction sets
  bool flagged = false;           // some distance grew by more than the tolerance
  std::string message;
};

inline ConeInvarianceReport check_cone_invariance(const std::vector<DirectionCloud>& per_t, double tolerance) {
  ConeInvarianceReport r;
  if (per_t.size() < 2) {
    r.message = "insufficient data";
    return r;
  }
  r.sufficient = true;
  for (std::size_t k = 0; k + 1 < per_t.size(); ++k) r.distances.push_back(hausdorff_directions(per_t[k], per_t[k + 1]));
  for (std::size_t k = 0; k + 1 < r.distances.size(); ++k)
    if (r.distances[k + 1] > r.distances[k] + tolerance) r.flagged = true;
  r.message = r.flagged ? "successive distances increase as t decreases" : "ok";
  return r;
}

namespace detail {
inline void check_subset(const std::vector<std::size_t>& subset, std::size_t n) {
  if (subset.empty()) throw std::invalid_argument("empty coordinate subset");
  for (std::size_t i : subset)
    if (i >= n) throw std::out_of_range("coordinate subset index out of range");
}
}  // namespace detail

inline PointCloud project(const PointCloud& cloud, const std::vector<std::size_t>& subset) {
  detail::check_subset(subset, cloud.dimension);
  PointCloud out{subset.size(), {}, cloud.space};
  for (const auto& p : cloud.points) {
    Vector q;
    for (std::size_t i : subset) q.push_back(p[i]);
    out.points.push_back(std::move(q));
  }
  return out;
}

// Zero projections go into origin_member; repeated directions are merged.
inline DirectionCloud project(const DirectionCloud& cloud, const std::vector<std::size_t>& subset) {
  detail::check_subset(subset, cloud.dimension);
  DirectionCloud out{subset.size(), {}, cloud.origin_member};
  std::vector<Vector> dirs;
  for (const auto& d : cloud.directions) {
    Vector q;
    for (std::size_t i : subset) q.push_back(d[i]);
    if (norm(q) < 1e-12)
      out.origin_member = true;
    else
      dirs.push_back(normalized(q));
  }
  out.directions = cluster_directions(dirs, 1e-9);
  return out;
}

// Direction CSV: a "# origin_member=true|false" line, a header, one unit
// vector per row.
inline void write_direction_csv(std::ostream& out, const DirectionCloud& cloud) {
  out << "# origin_member=" << (cloud.origin_member ? "true" : "false") << '\n';
  for (std::size_t i = 0; i < cloud.dimension; ++i) out << (i ? "," : "") << 'd' << i + 1;
  out << '\n';
  for (const auto& d : cloud.directions) {
    for (std::size_t i = 0; i < d.size(); ++i) out << (i ? "," : "") << format_fixed(d[i], 12);
    out << '\n';
  }
}

inline DirectionCloud read_direction_csv(std::istream& in) {
  DirectionCloud cloud;
  std::string line;
  if (!std::getline(in, line) || line.rfind("# origin_member=", 0) != 0)
    throw IngestError(1, "missing origin_member header");
  std::string flag = line.substr(16);
  if (flag != "true" && flag != "false") throw IngestError(1, "origin_member must be true or false");
  cloud.origin_member = flag == "true";
  if (!std::getline(in, line)) throw IngestError(2, "missing column header");
  cloud.dimension = static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1;
  std::size_t lineno = 2;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    Vector d;
    std::istringstream cells(line);
    std::string field;
    while (std::getline(cells, field, ',')) {
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
      if (ec != std::errc() || ptr != field.data() + field.size()) throw IngestError(lineno, "malformed number");
      d.push_back(v);
    }
    if (d.size() != cloud.dimension) throw IngestError(lineno, "wrong number of columns");
    cloud.directions.push_back(normalized(d));
  }
  return cloud;
}

}  // namespace loglim
