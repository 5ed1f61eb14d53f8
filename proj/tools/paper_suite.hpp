#pragma once

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "loglim/fixtures.hpp"
#include "loglim/puiseux.hpp"
#include "loglim/random_term.hpp"
#include "svg.hpp"

namespace loglim::suite {

namespace fs = std::filesystem;
namespace fx = loglim::fixtures;

enum class Cmp { Le, Ge, Eq };

struct Row {
  std::string id;
  std::string check;
  double metric = 0.0;
  Cmp cmp = Cmp::Le;
  double threshold = 0.0;
  bool pass = false;
};

inline const char* cmp_text(Cmp c) {
  switch (c) {
    case Cmp::Le: return "<=";
    case Cmp::Ge: return ">=";
    default: return "==";
  }
}

inline Row make_row(std::string id, std::string check, double metric, Cmp cmp, double threshold, bool extra = true) {
  bool ok = false;
  switch (cmp) {
    case Cmp::Le: ok = metric <= threshold; break;
    case Cmp::Ge: ok = metric >= threshold; break;
    case Cmp::Eq: ok = metric == threshold; break;
  }
  return Row{std::move(id), std::move(check), metric, cmp, threshold, ok && extra};
}

class UnknownFixture : public std::invalid_argument {
 public:
  explicit UnknownFixture(const std::string& id) : std::invalid_argument("unknown fixture id '" + id + "'") {}
};

inline const std::vector<std::string>& fixture_ids() {
  static const std::vector<std::string> ids{"sin",      "pow",         "exp",   "sininv",   "cubic",
                                            "umbrella", "circle",      "cones", "containment", "cells",
                                            "dual-fan", "sandwich",    "valuation", "patchwork", "exact"};
  return ids;
}

struct Options {
  std::uint64_t seed = 1;
  fs::path out;  // empty: nothing written
  bool svg = false;
};

inline std::string metric_text(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return format_fixed(v, 6);
}

class Runner {
 public:
  explicit Runner(Options o) : opt_(std::move(o)) {
    if (!opt_.out.empty()) fs::create_directories(opt_.out);
  }

  std::vector<Row> run(const std::string& id) {
    if (id == "sin") return cloud_row(id, fx::sin_points(kCloudPoints, opt_.seed), fx::sin_limit(), "y = 0, x <= 0");
    if (id == "exp") return cloud_row(id, fx::exp_points(kCloudPoints, opt_.seed), fx::exp_limit(), "axis rays");
    if (id == "sininv")
      return cloud_row(id, fx::sininv_points(kCloudPoints, opt_.seed), fx::sininv_limit(), "quadrant and antidiagonal");
    if (id == "pow") return pow();
    if (id == "cubic") return cubic();
    if (id == "umbrella") return umbrella();
    if (id == "circle") return circles();
    if (id == "cones") return cones();
    if (id == "containment") return containment();
    if (id == "cells") return cells();
    if (id == "dual-fan") return dual_fan_rows();
    if (id == "sandwich") return sandwich();
    if (id == "valuation") return valuation_rows();
    if (id == "patchwork") return patchwork();
    if (id == "exact") return exact();
    throw UnknownFixture(id);
  }

 private:
  static constexpr std::size_t kCloudPoints = 20000;
  static constexpr double kHausdorff = 0.05;

  Options opt_;
  std::map<std::string, LimitEstimate> cache_;

  std::ofstream open(const std::string& name) {
    std::ofstream f(opt_.out / name);
    if (!f) throw std::runtime_error("cannot write " + (opt_.out / name).string());
    return f;
  }

  void emit(const std::string& name, const DirectionCloud& d, const std::optional<PolyhedralComplex>& expected = {}) {
    if (opt_.out.empty()) return;
    auto f = open(name + ".csv");
    write_direction_csv(f, d);
    if (opt_.svg && d.dimension == 2) {
      auto s = open(name + ".svg");
      svg::directions(s, d, expected);
    }
  }

  const LimitEstimate& formula_estimate(const std::string& key, const Formula& f, std::size_t n,
                                        const SamplerConfig& cfg) {
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    return cache_.emplace(key, estimate_limit_directions(f, {}, cfg, n)).first->second;
  }

  const LimitEstimate& pow_estimate() { return formula_estimate("pow", fx::pow_band(), 2, fx::pow_config(opt_.seed)); }
  const LimitEstimate& cubic_estimate() { return formula_estimate("cubic", fx::cubic(), 2, fx::deep_config(opt_.seed)); }
  const LimitEstimate& circle_estimate(const Rational& r) {
    return formula_estimate("circle-" + to_string(r), fx::circle(r), 2, fx::deep_config(opt_.seed));
  }

  static std::string radius_tag(const Rational& r) { return format_fixed(to_double(r), 1); }

  // Point sets go through the CSV ingest path when an output directory is set.
  std::vector<Row> cloud_row(const std::string& id, PointCloud pts, const PolyhedralComplex& limit,
                             const std::string& what) {
    if (!opt_.out.empty()) {
      {
        auto f = open(id + "-points.csv");
        write_points_csv(f, pts);
      }
      pts = ingest_points((opt_.out / (id + "-points.csv")).string());
    }
    auto est = estimate_limit_directions(pts, fx::cloud_config(opt_.seed));
    emit(id, est.cloud, limit);
    return {make_row(id, "Hausdorff to " + what, hausdorff_directions(est.cloud, limit), Cmp::Le, kHausdorff)};
  }

  std::vector<Row> pow() {
    auto start = std::chrono::steady_clock::now();
    const auto& est = pow_estimate();
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    emit("pow", est.cloud, fx::pow_limit());
    return {make_row("pow", "Hausdorff to {2x <= y <= x/2}, within 30 s", hausdorff_directions(est.cloud, fx::pow_limit()),
                     Cmp::Le, kHausdorff, secs <= 30.0)};
  }

  std::vector<Row> cubic() {
    const auto& est = cubic_estimate();
    emit("cubic", est.cloud, fx::cubic_limit());
    return {make_row("cubic", "Hausdorff to {x = 0, y <= 0} u {2y = 3x, x >= 0}",
                     hausdorff_directions(est.cloud, fx::cubic_limit()), Cmp::Le, kHausdorff)};
  }

  std::vector<Row> umbrella() {
    auto est = estimate_limit_directions(fx::umbrella(), {}, fx::umbrella_config(opt_.seed), 3);
    emit("umbrella", est.cloud);
    PolyhedralComplex fan = dual_fan(fx::umbrella_newton());
    Vector ray = fx::umbrella_ray();
    bool in_two_cell = false;
    for (const auto& cell : fan.cells())
      if (cell.local_dimension(ray) == 2) in_two_cell = true;
    double gap = 0.0;
    for (const auto& v : complex_sphere_samples(fan, 3000)) gap = std::max(gap, angle_to_cloud(v, est.cloud.directions));
    return {
        make_row("umbrella", "(-1,0,0) in an open 2-cell of the dual fan", in_two_cell ? 1.0 : 0.0, Cmp::Eq, 1.0),
        make_row("umbrella", "Hausdorff of estimate to {(-1,0,0)}",
                 hausdorff_directions(est.cloud, DirectionCloud{3, {ray}, true}), Cmp::Le, 0.3),
        make_row("umbrella", "fan direction farthest from the estimate", gap, Cmp::Ge, 0.3),
    };
  }

  std::vector<Row> circles() {
    std::vector<Row> rows;
    TropicalFormula first = dequantize_formula(fx::circle(fx::circle_radii().front()));
    for (const auto& r : fx::circle_radii()) {
      const auto& est = circle_estimate(r);
      DirectionCloud want = fx::circle_limit(r);
      emit("circle-r" + radius_tag(r), est.cloud);
      bool same = dequantize_formula(fx::circle(r)) == first;
      std::string what = want.directions.empty() ? "empty" : want.directions.size() == 1 ? "{(-1,0)}" : "{(-1,0),(0,-1)}";
      rows.push_back(make_row("circle", "r = " + radius_tag(r) + ": direction set " + what + ", same phi_0",
                              hausdorff_directions(est.cloud, want), Cmp::Le, kHausdorff, same));
    }
    return rows;
  }

  std::vector<Row> cones() {
    std::vector<Row> rows;
    for (const std::vector<unsigned>& N : {std::vector<unsigned>{2}, std::vector<unsigned>{2, 3}}) {
      std::string tag;
      for (unsigned v : N) tag += (tag.empty() ? "" : "-") + std::to_string(v);
      auto est = estimate_limit_directions(fx::exponential_cone(N), fx::cone_config(opt_.seed));
      PolyhedralComplex b(N.size() + 1, {basic_cone(N)});
      emit("cone-" + tag, est.cloud, N.size() == 1 ? std::optional<PolyhedralComplex>(b) : std::nullopt);
      rows.push_back(make_row("cones", "E_(" + tag + "),1/2 against B_(" + tag + ")", hausdorff_directions(est.cloud, b),
                              Cmp::Le, kHausdorff));
    }
    return rows;
  }

  // Estimated directions against the tropical set of phi_0, plus one
  // tropical direction per strict case that the estimate must avoid.
  std::vector<Row> containment() {
    std::vector<Row> rows;
    auto worst = [](const LimitEstimate& est, const Formula& phi, double eps) {
      TropicalFormula trop = dequantize_formula(phi);
      PolyhedralComplex k = tropical_formula_cells(trop, 2);
      double w = 0.0;
      for (const auto& u : est.cloud.directions) w = std::max(w, complex_membership(u, k).distance);
      return make_row("containment", "", w, Cmp::Le, 0.02 + eps);
    };
    auto strict = [](const LimitEstimate& est, const Formula& phi, const Vector& u) {
      bool certified = eval_tropical_formula(dequantize_formula(phi), u);
      double gap = certified ? angle_to_cloud(u, est.cloud.directions) : 0.0;
      return make_row("containment", "", gap, Cmp::Ge, 0.3);
    };
    double eps_pow = fx::pow_config(opt_.seed).cluster_tolerance;
    double eps_deep = fx::deep_config(opt_.seed).cluster_tolerance;
    rows.push_back(worst(pow_estimate(), fx::pow_band(), eps_pow));
    rows.back().check = "pow: estimate within reach of trop(phi_0)";
    rows.push_back(worst(cubic_estimate(), fx::cubic(), eps_deep));
    rows.back().check = "cubic: estimate within reach of trop(phi_0)";
    for (const auto& r : fx::circle_radii()) {
      rows.push_back(worst(circle_estimate(r), fx::circle(r), eps_deep));
      rows.back().check = "circle r = " + radius_tag(r) + ": estimate within reach of trop(phi_0)";
    }
    Rational small = fx::circle_radii().front();
    for (const Vector& u : {Vector{-1.0, 0.0}, Vector{0.0, -1.0}}) {
      rows.push_back(strict(circle_estimate(small), fx::circle(small), u));
      rows.back().check = "circle r = 1.5: tropical (" + format_fixed(u[0], 0) + "," + format_fixed(u[1], 0) +
                          ") far from the estimate";
    }
    rows.push_back(strict(cubic_estimate(), fx::cubic(), {-1.0, 0.0}));
    rows.back().check = "cubic: tropical (-1,0) far from the estimate";
    return rows;
  }

  // Cell enumeration against direct max-plus evaluation on the 401^2 grid.
  static int grid_disagreements(const TropicalFormula& f) {
    PolyhedralComplex k = tropical_formula_cells(f, 2);
    int bad = 0;
    for (int i = 0; i <= 400; ++i)
      for (int j = 0; j <= 400; ++j) {
        Vector x{-2.0 + 0.01 * i, -2.0 + 0.01 * j};
        if (k.contains(x, 1e-9) != eval_tropical_formula(f, x, 1e-9)) ++bad;
      }
    return bad;
  }

  static TropicalTerm random_side(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> count(1, 5), coef(-3, 3), kind(0, 5);
    std::vector<TropicalTerm> forms;
    int m = count(rng);
    for (int i = 0; i < m; ++i) {
      if (kind(rng) == 0) {
        forms.push_back(TropicalTerm::zero());
        continue;
      }
      TropicalTerm f = TropicalTerm::scale(coef(rng), TropicalTerm::variable(0));
      int c2 = coef(rng);
      if (c2 != 0) f = TropicalTerm::plus(f, TropicalTerm::scale(c2, TropicalTerm::variable(1)));
      forms.push_back(f);
    }
    return TropicalTerm::max(forms);
  }

  std::vector<Row> cells() {
    int bad = grid_disagreements(dequantize_formula(fx::circle(Rational(5, 2))));
    bad += grid_disagreements(dequantize_formula(fx::cubic()));
    std::mt19937_64 rng(opt_.seed ^ 0xCE11);
    for (int trial = 0; trial < 10; ++trial) {
      TropicalAtom a{trial % 3 == 0 ? Relation::Leq : Relation::Eq, random_side(rng), random_side(rng)};
      bad += grid_disagreements(TropicalFormula::atom(a));
    }
    return {make_row("cells", "grid disagreements, circle + cubic + 10 random atoms", bad, Cmp::Eq, 0.0)};
  }

  std::vector<Row> dual_fan_rows() {
    std::mt19937_64 rng(opt_.seed ^ 0xFA4);
    std::uniform_int_distribution<int> count(2, 6), coord(0, 4), num(-6, 6), den(1, 4);
    auto grid = sphere_grid(2, 10000);
    double delta = sphere_grid_spacing(2, 10000);
    double worst = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
      NewtonData nd;
      int m = count(rng);
      while (static_cast<int>(nd.support.size()) < m) {
        std::vector<int> w{coord(rng), coord(rng)};
        if (std::find(nd.support.begin(), nd.support.end(), w) != nd.support.end()) continue;
        nd.support.push_back(w);
        nd.weights.push_back(static_cast<double>(num(rng)) / den(rng));
      }
      PolyhedralComplex fan = dual_fan(nd);
      DirectionCloud oracle = attained_twice_oracle(nd, grid, delta);
      for (const auto& u : oracle.directions) worst = std::max(worst, complex_membership(u, fan).distance);
      for (const auto& v : complex_sphere_samples(fan, 10000)) worst = std::max(worst, angle_to_cloud(v, oracle.directions));
    }
    // the oracle band is delta wide, so oracle points can sit exactly delta off the fan
    return {make_row("dual-fan", "oracle discrepancy on 10 random supports (grid step)", worst, Cmp::Le,
                     delta * (1.0 + 1e-9))};
  }

  // Random positive terms in two variables, parameters in (0, 10], points in
  // [-5, 5]^2, t = 1e-1 ... 1e-6.
  std::vector<Row> sandwich() {
    auto start = std::chrono::steady_clock::now();
    std::mt19937_64 rng(opt_.seed ^ 0x5A4D);
    std::uniform_real_distribution<double> coord(-5.0, 5.0);
    random_ast::RandomTermOptions o;
    o.min_exponent = 0.0;
    o.max_exponent = 3.0;
    o.constants = false;
    int lemma = 0, bounds = 0;
    for (int trial = 0; trial < 1000; ++trial) {
      Term u = random_ast::random_term(rng, 5, o);
      ParameterEnvironment env = random_ast::random_environment(rng, o.parameters, 0.0, 10.0);
      TropicalTerm u0 = dequantize_term(u);
      double c = sandwich_constant(u, env);
      SandwichBounds b = sandwich_bounds(u, env);
      Vector x{coord(rng), coord(rng)};
      bool bad_lemma = false, bad_bounds = false;
      for (int k = 1; k <= 6; ++k) {
        double t = std::pow(10.0, -k);
        double v0 = eval_tropical_term(u0, x);
        double d = eval_t(u, x, t, env) - v0;
        if (d < -1e-9 || d > log_inv_t(c, t) + 1e-9) bad_lemma = true;
        double slack = 1e-9 * std::max(1.0, std::abs(v0));
        if (d < log_inv_t(b.lo, t) - slack || d > log_inv_t(b.hi, t) + slack) bad_bounds = true;
      }
      lemma += bad_lemma;
      bounds += bad_bounds;
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return {
        make_row("sandwich", "terms violating 0 <= U_t - U_0 <= log_{1/t} C", lemma, Cmp::Eq, 0.0, secs <= 10.0),
        make_row("sandwich", "terms violating the two-sided parameter bounds", bounds, Cmp::Eq, 0.0, secs <= 10.0),
    };
  }

  static PuiseuxSeries random_series(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> count(1, 5), num(-8, 12), den(1, 4), exact(0, 2);
    std::uniform_real_distribution<double> coef(0.5, 5.0), sign(0.0, 1.0);
    std::vector<PuiseuxSeries::Term> terms;
    int m = count(rng);
    Rational top(-100);
    for (int i = 0; i < m; ++i) {
      Rational e(num(rng), den(rng));
      terms.push_back({e, (sign(rng) < 0.5 ? -1.0 : 1.0) * coef(rng)});
      top = std::max(top, e);
    }
    if (exact(rng) == 0) return PuiseuxSeries(terms);
    return PuiseuxSeries(terms, top + Rational(1 + num(rng) % 3 + 3, 2));
  }

  std::vector<Row> valuation_rows() {
    std::mt19937_64 rng(opt_.seed ^ 0x7A1);
    int violations = 0;
    for (int trial = 0; trial < 1000; ++trial) {
      PuiseuxSeries a = random_series(rng), b = random_series(rng);
      if (valuation(a * b) != valuation(a) + valuation(b)) ++violations;
      PuiseuxSeries s;
      try {
        s = a + b;
      } catch (const ZeroBelowTruncation&) {
        continue;
      }
      if (s.is_exact_zero()) continue;
      Rational lo = std::min(valuation(a), valuation(b));
      if (valuation(s) < lo) ++violations;
      if (valuation(a) != valuation(b) && valuation(s) != lo) ++violations;
      PuiseuxSeries pa = a.leading_coefficient() > 0 ? a : -a;
      PuiseuxSeries pb = b.leading_coefficient() > 0 ? b : -b;
      Ordering o = compare(pa, pb);
      if (o == Ordering::Indeterminate) continue;
      if ((o == Ordering::Greater || o == Ordering::Equal) && valuation(pa) > valuation(pb)) ++violations;
      if (o == Ordering::Less && valuation(pb) > valuation(pa)) ++violations;
    }
    return {make_row("valuation", "axiom violations on 1000 random series pairs", violations, Cmp::Eq, 0.0)};
  }

  std::vector<Row> patchwork() {
    PuiseuxPolynomial f = parse_puiseux_polynomial(
        "omega = (2); coeff = 1\n"
        "omega = (1); coeff = 1\n"
        "omega = (0); coeff = -t\n");
    double t = 1e-6;
    auto roots = positive_roots(instantiate(f, t));
    double err = roots.size() == 1 ? std::abs(std::log(roots[0]) / -std::log(t) + 1.0)
                                   : std::numeric_limits<double>::infinity();
    bool yes = lambda_membership_hypersurface(f, {Rational(-1)}).verdict == Membership::Yes;
    bool no = lambda_membership_hypersurface(f, {Rational(0)}).verdict == Membership::No;
    return {
        make_row("patchwork", "|Log_{1/t} root + 1| at t = 1e-6", err, Cmp::Le, 0.02),
        make_row("patchwork", "lambda = -1 Yes and lambda = 0 No", yes && no ? 1.0 : 0.0, Cmp::Eq, 1.0),
    };
  }

  std::vector<Row> exact() {
    SamplerConfig cfg = fx::deep_config(opt_.seed);
    cfg.samples_per_t = 20000;
    cfg.refine_lines = 500;
    PointCloud sample = sample_log_members(formula_membership(fx::cubic(), 2, {}), cfg, cfg.t_count - 1);
    PolyhedralComplex target = fx::cubic_limit();
    double psi_bad = std::numeric_limits<double>::infinity();
    auto h = find_guard_threshold(sample, {fx::cubic_cover_cone()});
    if (h) {
      Formula psi = assemble_exact(fx::cubic(), {fx::cubic_cover_cone()}, *h, sample);
      psi_bad = static_cast<double>(verify_exactness(psi, target).disagreements());
      if (!opt_.out.empty()) open("exact-psi.txt") << to_string(psi) << '\n';
    }
    // plain phi_0: the extras must be exactly the grid points of {x2 = 0, x1 < 0}
    auto plain = verify_exactness(fx::cubic(), target);
    GridSpec g;
    std::size_t expected = 0, off = plain.missing.size();
    for (std::size_t k = 0; k < g.points; ++k)
      if (g.lo + (g.hi - g.lo) * static_cast<double>(k) / static_cast<double>(g.points - 1) < 0.0) ++expected;
    for (const auto& x : plain.extra)
      if (!(x[1] == 0.0 && x[0] < 0.0)) ++off;
    double mismatch = static_cast<double>(off) + std::abs(static_cast<double>(plain.extra.size()) - static_cast<double>(expected));
    return {
        make_row("exact", "psi grid disagreements with the cubic limit set", psi_bad, Cmp::Eq, 0.0),
        make_row("exact", "phi_0 disagreements off the half-line {x2 = 0, x1 < 0}", mismatch, Cmp::Eq, 0.0),
    };
  }
};

inline void write_table(std::ostream& out, const std::vector<Row>& rows) {
  std::size_t w = 5;
  for (const auto& r : rows) w = std::max(w, r.check.size());
  out << std::left << std::setw(12) << "id" << std::setw(static_cast<int>(w) + 2) << "check" << std::setw(14) << "metric"
      << std::setw(16) << "threshold" << "result\n";
  for (const auto& r : rows)
    out << std::left << std::setw(12) << r.id << std::setw(static_cast<int>(w) + 2) << r.check << std::setw(14)
        << metric_text(r.metric) << std::setw(16) << (std::string(cmp_text(r.cmp)) + " " + metric_text(r.threshold))
        << (r.pass ? "PASS" : "FAIL") << '\n';
}

inline void write_csv(std::ostream& out, const std::vector<Row>& rows) {
  out << "id,check,metric,relation,threshold,result\n";
  for (const auto& r : rows)
    out << r.id << ",\"" << r.check << "\"," << metric_text(r.metric) << ',' << cmp_text(r.cmp) << ','
        << metric_text(r.threshold) << ',' << (r.pass ? "PASS" : "FAIL") << '\n';
}

// Runs the selected fixtures (all when `only` is empty) and returns the rows.
inline std::vector<Row> run_suite(const Options& opt, const std::vector<std::string>& only) {
  for (const auto& id : only)
    if (std::find(fixture_ids().begin(), fixture_ids().end(), id) == fixture_ids().end()) throw UnknownFixture(id);
  Runner runner(opt);
  std::vector<Row> rows;
  for (const auto& id : only.empty() ? fixture_ids() : only) {
    auto part = runner.run(id);
    rows.insert(rows.end(), part.begin(), part.end());
  }
  if (!opt.out.empty()) {
    std::ofstream f(opt.out / "suite.csv");
    write_csv(f, rows);
  }
  return rows;
}

}  // namespace loglim::suite
