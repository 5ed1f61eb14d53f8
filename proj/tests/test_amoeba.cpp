#include <sstream>

#include <gtest/gtest.h>

#include "loglim/amoeba.hpp"
#include "loglim/parser.hpp"
#include "loglim/polynomial.hpp"
#include "loglim/tropical_geometry.hpp"

using namespace loglim;

namespace {

const Formula kPowBand = parse_formula("x1^2 <= x2 & x2 <= x1^0.5");

SamplerConfig small_config() {
  SamplerConfig cfg;
  cfg.samples_per_t = 20000;
  cfg.refine_lines = 300;
  return cfg;
}

PolyhedralComplex pow_band_cone() {
  Polyhedron p(2);
  p.add({{{2, -1}, 0}, Relation::Leq});
  p.add({{{-0.5, 1}, 0}, Relation::Leq});
  PolyhedralComplex k(2);
  k.add(p);
  return k;
}

Formula circle(const std::string& constant) {
  return normalize_polynomial("x^2 - 4x + y^2 - 6y + " + constant);
}

}  // namespace

TEST(SampleMembers, PowBandSatisfiesAtomsExactly) {
  SamplerConfig cfg = small_config();
  cfg.box_min = -6;
  cfg.box_max = 1;
  PointCloud cloud = sample_members(kPowBand, {}, cfg);
  ASSERT_FALSE(cloud.points.empty());
  EXPECT_EQ(cloud.space, Space::Classical);
  for (const auto& x : cloud.points) {
    ASSERT_LE(x[0] * x[0], x[1]);
    ASSERT_LE(x[1], std::sqrt(x[0]));
  }
}

TEST(SampleMembers, EqualityWithinThickening) {
  SamplerConfig cfg = small_config();
  ParameterEnvironment env{{"a1", 2.0}};
  PointCloud cloud = sample_members(parse_formula("x1 = a1"), env, cfg);
  ASSERT_FALSE(cloud.points.empty());
  double eta = std::max(cfg.eta(cfg.t_values().back()), 1e-12);
  for (const auto& x : cloud.points) EXPECT_LE(std::abs(x[0] - 2.0), eta * 2.0 * (1 + 1e-9));
}

TEST(SampleMembers, UnsatisfiableIsEmptySample) {
  ParameterEnvironment env{{"a1", 1.0}};
  EXPECT_THROW(sample_members(parse_formula("x1 + a1 <= x1"), env, small_config()), EmptySample);
}

TEST(SampleMembers, DeterministicAcrossThreadCounts) {
  SamplerConfig cfg = small_config();
  cfg.threads = 1;
  Formula f = circle("27/4");
  PointCloud a = sample_log_members(formula_membership(f, 2, {}), cfg, 3);
  cfg.threads = 3;
  PointCloud b = sample_log_members(formula_membership(f, 2, {}), cfg, 3);
  ASSERT_FALSE(a.points.empty());
  EXPECT_EQ(a.points, b.points);
}

TEST(SampleMembers, SeedChangesSample) {
  SamplerConfig cfg = small_config();
  PointCloud a = sample_log_members(formula_membership(kPowBand, 2, {}), cfg, 0);
  cfg.seed = 2;
  PointCloud b = sample_log_members(formula_membership(kPowBand, 2, {}), cfg, 0);
  EXPECT_NE(a.points, b.points);
}

TEST(SampleMembers, IsomorphismExactness) {
  SamplerConfig cfg = small_config();
  Formula f = circle("27/4");
  for (std::size_t k = 0; k < cfg.t_count; k += 2) {
    double t = cfg.t_values()[k];
    PointCloud logs = sample_log_members(formula_membership(f, 2, {}), cfg, k);
    ASSERT_FALSE(logs.points.empty());
    PointCloud classical{2, {}, Space::Classical};
    for (const auto& X : logs.points) classical.points.push_back({std::pow(10.0, X[0]), std::pow(10.0, X[1])});
    PointCloud amoeba = amoeba_at(classical, t);
    EqualityTolerance tol{1e-9, std::max(cfg.eta(t), 1e-9)};
    for (const auto& p : amoeba.points) ASSERT_TRUE(eval_formula_t(f, p, t, {}, tol));
  }
}

TEST(SampleMembers, RefinementFindsFarBranches) {
  // circle of radius 5/2 around (2,3) meets x = 0 at y = 3/2 and y = 9/2
  SamplerConfig cfg = small_config();
  PointCloud logs = sample_log_members(formula_membership(circle("27/4"), 2, {}), cfg, 5);
  int far_low = 0, far_high = 0;
  for (const auto& X : logs.points) {
    if (X[0] > -6) continue;
    if (std::abs(X[1] - std::log10(1.5)) < 1e-6) ++far_low;
    if (std::abs(X[1] - std::log10(4.5)) < 1e-6) ++far_high;
  }
  EXPECT_GT(far_low, 10);
  EXPECT_GT(far_high, 10);
}

TEST(Ingest, Examples) {
  std::istringstream one("1,1\n");
  PointCloud c = ingest_points(one);
  EXPECT_EQ(c.dimension, 2u);
  EXPECT_EQ(c.points.size(), 1u);
  std::istringstream zero("0,1\n");
  EXPECT_THROW(ingest_points(zero), IngestError);
  std::istringstream bad("1,x\n");
  EXPECT_THROW(ingest_points(bad), IngestError);
  std::istringstream ragged("1,2\n3\n");
  try {
    ingest_points(ragged);
    FAIL();
  } catch (const IngestError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  std::istringstream comments("# header\n\n 2.5 , 1e-3\n");
  EXPECT_EQ(ingest_points(comments).points.at(0), (Vector{2.5, 1e-3}));
}

TEST(AmoebaAt, Examples) {
  double t = 0.37;
  PointCloud c{2, {{t, 1.0}, {1.0, 1.0}}, Space::Classical};
  PointCloud a = amoeba_at(c, t);
  EXPECT_NEAR(a.points[0][0], -1.0, 1e-15);
  EXPECT_EQ(a.points[0][1], 0.0);
  EXPECT_EQ(a.points[1], (Vector{0.0, 0.0}));
}

TEST(AmoebaAt, PowBandIsTheBandCone) {
  SamplerConfig cfg = small_config();
  cfg.box_min = -6;
  cfg.box_max = 1;
  PointCloud a = amoeba_at(sample_members(kPowBand, {}, cfg), 1e-4);
  for (const auto& p : a.points) {
    EXPECT_LE(2 * p[0], p[1] + 1e-12);
    EXPECT_LE(p[1], p[0] / 2 + 1e-12);
  }
}

TEST(Estimate, PowBandWithinTolerance) {
  SamplerConfig cfg = small_config();
  LimitEstimate est = estimate_limit_directions(kPowBand, {}, cfg, 2);
  EXPECT_TRUE(est.cloud.origin_member);
  EXPECT_LE(hausdorff_directions(est.cloud, pow_band_cone()), 0.05);
  EXPECT_EQ(est.per_t.size(), 6u);
}

TEST(Estimate, CompactCloudHasNoDirections) {
  PointCloud c{2, {{1.0, 1.0}}, Space::Classical};
  LimitEstimate est = estimate_limit_directions(c, SamplerConfig{});
  EXPECT_TRUE(est.cloud.directions.empty());
  EXPECT_TRUE(est.cloud.origin_member);
}

TEST(Estimate, SmallCircleIsCompact) {
  LimitEstimate est = estimate_limit_directions(circle("43/4"), {}, small_config(), 2);
  EXPECT_TRUE(est.cloud.directions.empty());
  EXPECT_TRUE(est.cloud.origin_member);
  // the first t value still sees the circle itself
  EXPECT_FALSE(est.per_t.front().directions.empty());
}

TEST(Estimate, EmptySetPropagates) {
  ParameterEnvironment env{{"a1", 1.0}};
  EXPECT_THROW(estimate_limit_directions(parse_formula("x1 + a1 <= x1"), env, small_config(), 1), EmptySample);
}

TEST(Estimate, UnionProperty) {
  SamplerConfig cfg = small_config();
  Formula a = kPowBand;
  Formula b = parse_formula("x2 <= x1^3 & x1 <= 1");
  LimitEstimate ea = estimate_limit_directions(a, {}, cfg, 2);
  LimitEstimate eb = estimate_limit_directions(b, {}, cfg, 2);
  LimitEstimate eu = estimate_limit_directions(disjoin<Formula>({a, b}), {}, cfg, 2);
  std::vector<Vector> merged = ea.cloud.directions;
  merged.insert(merged.end(), eb.cloud.directions.begin(), eb.cloud.directions.end());
  DirectionCloud joined{2, cluster_directions(merged, cfg.cluster_tolerance), true};
  EXPECT_LE(hausdorff_directions(eu.cloud, joined), cfg.cluster_tolerance);
}

TEST(Hausdorff, Examples) {
  DirectionCloud a{2, {{1, 0}}, true};
  DirectionCloud b{2, {{0, 1}}, true};
  DirectionCloud e{2, {}, true};
  EXPECT_EQ(hausdorff_directions(a, a), 0.0);
  EXPECT_NEAR(hausdorff_directions(a, b), kPi / 2, 1e-15);
  EXPECT_EQ(hausdorff_directions(e, e), 0.0);
  EXPECT_TRUE(std::isinf(hausdorff_directions(a, e)));
  EXPECT_THROW(hausdorff_directions(a, DirectionCloud{3, {}, true}), std::invalid_argument);
}

TEST(ConeInvariance, ExactConeHasZeroDistances) {
  PointCloud c{2, {}, Space::Log};
  for (int j = 0; j < 50; ++j) {
    double a = kPi + 0.5 * kPi * j / 49.0;
    for (double r : {1.0, 3.0, 10.0, 40.0}) c.points.push_back({r * std::cos(a), r * std::sin(a)});
  }
  LimitEstimate est = estimate_limit_directions(c, SamplerConfig{});
  auto report = check_cone_invariance(est.per_t, 0.02);
  ASSERT_TRUE(report.sufficient);
  for (double d : report.distances) EXPECT_LE(d, 1e-12);
  EXPECT_FALSE(report.flagged);
}

TEST(ConeInvariance, SingleEntryIsInsufficient) {
  auto report = check_cone_invariance({DirectionCloud{2, {{1, 0}}, true}}, 0.02);
  EXPECT_FALSE(report.sufficient);
  EXPECT_EQ(report.message, "insufficient data");
}

TEST(ConeInvariance, PowBandSweepIsStable) {
  SamplerConfig cfg = small_config();
  LimitEstimate est = estimate_limit_directions(kPowBand, {}, cfg, 2);
  auto report = check_cone_invariance(est.per_t, cfg.cluster_tolerance);
  EXPECT_FALSE(report.flagged);
  for (double d : report.distances) EXPECT_LE(d, 2 * cfg.cluster_tolerance);
}

TEST(Project, Examples) {
  SamplerConfig cfg = small_config();
  LimitEstimate est = estimate_limit_directions(kPowBand, {}, cfg, 2);
  DirectionCloud px = project(est.cloud, {0});
  ASSERT_EQ(px.directions.size(), 1u);
  EXPECT_EQ(px.directions[0], (Vector{-1.0}));
  DirectionCloud same = project(est.cloud, {0, 1});
  EXPECT_LE(hausdorff_directions(same, est.cloud), 1e-12);
  DirectionCloud down{2, {{0, -1}}, false};
  DirectionCloud p = project(down, {0});
  EXPECT_TRUE(p.directions.empty());
  EXPECT_TRUE(p.origin_member);
  EXPECT_THROW(project(down, {}), std::invalid_argument);
}

TEST(Project, CommutesWithEstimation) {
  SamplerConfig cfg = small_config();
  PointCloud logs = sample_log_members(formula_membership(kPowBand, 2, {}), cfg, cfg.t_count - 1);
  for (std::size_t axis : {0u, 1u}) {
    DirectionCloud a = project(estimate_limit_directions(logs, cfg).cloud, {axis});
    DirectionCloud b = estimate_limit_directions(project(logs, {axis}), cfg).cloud;
    EXPECT_LE(hausdorff_directions(a, b), 2 * cfg.cluster_tolerance);
  }
}

TEST(DirectionCsv, RoundTrip) {
  DirectionCloud c{2, {normalized({-1, -2}), {0, -1}}, true};
  std::ostringstream out;
  write_direction_csv(out, c);
  EXPECT_EQ(out.str().substr(0, 21), "# origin_member=true\n");
  std::istringstream in(out.str());
  DirectionCloud back = read_direction_csv(in);
  EXPECT_TRUE(back.origin_member);
  EXPECT_LT(hausdorff_directions(back, c), 1e-11);
}

TEST(SamplerConfig, Validation) {
  SamplerConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  EXPECT_TRUE(cfg.warnings().empty());
  cfg.t_ratio = 1.5;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = SamplerConfig{};
  cfg.eta0 = 0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = SamplerConfig{};
  cfg.box_max = 1;
  EXPECT_EQ(cfg.warnings().size(), 1u);
}
