#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "loglim/exact.hpp"
#include "loglim/parser.hpp"
#include "loglim/polynomial.hpp"

using namespace loglim;

namespace {

using Rows = std::vector<std::vector<Rational>>;

Formula cubic() { return normalize_polynomial("x^2 + y^2 + 1 = 2y + x^3"); }

// {x1 = 0, x2 <= 0} u {x1 >= 0, 2 x2 = 3 x1}
PolyhedralComplex cubic_target() {
  Polyhedron a(2, {{{{1.0, 0.0}, 0.0}, Relation::Eq}, {{{0.0, 1.0}, 0.0}, Relation::Leq}});
  Polyhedron b(2, {{{{-1.0, 0.0}, 0.0}, Relation::Leq}, {{{-3.0, 2.0}, 0.0}, Relation::Eq}});
  return PolyhedralComplex(2, {a, b});
}

// {x1 < 0, |x2| < -x1} after swapping the coordinates.
ConeSpec cubic_cone() { return ConeSpec{{{0, 1}, {1, 0}}, {{1}, {-1}}}; }

// Deep schedule: at shallow t the thickened sample still contains the strip
// {x2 ~ 1, x1 -> 0} where both sides of the equation nearly cancel.
SamplerConfig deep_config() {
  SamplerConfig cfg;
  cfg.samples_per_t = 20000;
  cfg.refine_lines = 500;
  cfg.t0 = 1e-15;
  cfg.t_ratio = 1e-15;
  cfg.box_min = -150.0;
  cfg.box_max = 150.0;
  return cfg;
}

PointCloud cubic_sample() {
  SamplerConfig cfg = deep_config();
  return sample_log_members(formula_membership(cubic(), 2, {}), cfg, cfg.t_count - 1);
}

PointCloud band_sample() {
  SamplerConfig cfg;
  cfg.samples_per_t = 20000;
  return sample_log_members(formula_membership(parse_formula("x1^2 <= x2 & x2 <= x1^0.5"), 2, {}), cfg,
                            cfg.t_count - 1);
}

}  // namespace

TEST(Guard, HalfLine) {
  GuardFormula g = guard_formula(ConeSpec::standard(1, {}));
  EXPECT_EQ(g.formula, Formula::negation(leq(Term::parameter("h"), Term::variable(0))));
  EXPECT_EQ(g.parameter, "h");
}

TEST(Guard, FacesPlusMinusTwo) {
  Formula neg = guard_negation(ConeSpec::standard(2, {{2}, {-2}}));
  Term h = Term::parameter("h");
  Term x1 = Term::variable(0), x2 = Term::variable(1);
  Formula expect = Formula::disjunction(
      {leq(h, x2), leq(h, Term::power(x1, 2.0) * x2), leq(h, Term::power(x1, -2.0) * x2)});
  EXPECT_EQ(neg, expect);
  EXPECT_TRUE(is_positive(neg));
}

TEST(Guard, InvalidCones) {
  EXPECT_THROW(ConeSpec({{1, 1}, {2, 2}}, {{1}, {-1}}).validate(), InvalidCone);
  EXPECT_THROW(ConeSpec::standard(2, {{1}}).validate(), InvalidCone);
  EXPECT_THROW(ConeSpec::standard(2, {}).validate(), InvalidCone);
  EXPECT_THROW(ConeSpec::standard(3, {{1, 0}, {-1, 0}}).validate(), InvalidCone);
  EXPECT_NO_THROW(ConeSpec::standard(3, {{1, 0}, {0, 1}, {-1, -1}}).validate());
  EXPECT_THROW(guard_formula(ConeSpec::standard(2, {{1}})), InvalidCone);
}

// The dequantized negated guard is the complement of C, checked pointwise.
TEST(Guard, TropicalComplementOnGrid) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> entry(-3, 3);
  int cones = 0;
  while (cones < 10) {
    ConeSpec c{{{entry(rng), entry(rng)}, {entry(rng), entry(rng)}}, {{entry(rng)}, {entry(rng)}}};
    try {
      c.validate();
    } catch (const InvalidCone&) {
      continue;
    }
    ++cones;
    TropicalFormula trop = dequantize_formula(guard_negation(c));
    auto ex = c.exponents();
    int bad = 0;
    for (int i = 0; i <= 400; ++i)
      for (int j = 0; j <= 400; ++j) {
        Vector X{-2.0 + 0.01 * i, -2.0 + 0.01 * j};
        bool boundary = false;
        for (const auto& e : ex)
          if (std::abs(to_double(e[0]) * X[0] + to_double(e[1]) * X[1]) < 1e-9) boundary = true;
        if (boundary) continue;
        if (eval_tropical_formula(trop, X, 0.0) == c.contains(X)) ++bad;
      }
    EXPECT_EQ(bad, 0);
  }
}

// Monomials dequantize exactly: the guard's log value is <e, X> for every t.
TEST(Guard, TIndependent) {
  ConeSpec c{{{1, -1}, {1, 1}}, {{Rational(1, 2)}, {-3}}};
  auto atoms = guard_negation(c);
  auto ex = c.exponents();
  const auto& ops = std::get<Formula::OrNode>(atoms.node()).operands;
  ASSERT_EQ(ops.size(), ex.size());
  for (std::size_t k = 0; k < ops.size(); ++k) {
    const Term& mono = std::get<Atom>(ops[k].node()).rhs;
    for (double t : {0.5, 1e-3, 1e-9}) {
      Vector X{0.7, -1.3};
      double want = to_double(ex[k][0]) * X[0] + to_double(ex[k][1]) * X[1];
      EXPECT_NEAR(eval_t(mono, X, t, {}), want, 1e-12);
    }
  }
}

TEST(Guard, MonotoneInH) {
  GuardFormula g = guard_formula(ConeSpec{{{1, -1}, {1, 1}}, {{1}, {-1}}});
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-8.0, 2.0);
  int inner = 0;
  for (int i = 0; i < 20000; ++i) {
    Vector X{u(rng), u(rng)};
    if (in_guard_set(g, X, 1e-4)) {
      ++inner;
      EXPECT_TRUE(in_guard_set(g, X, 1e-2));
    }
  }
  EXPECT_GT(inner, 0);
}

TEST(Exhaustion, BandAwayFromLimit) {
  PointCloud band = band_sample();
  ASSERT_FALSE(band.points.empty());
  // the open positive quadrant, around (1, 1)
  ConeSpec away{{{1, -1}, {-1, -1}}, {{1}, {-1}}};
  auto r = exhaustion_check(band, away, 1e-3);
  EXPECT_TRUE(r.passed);
  EXPECT_FALSE(r.vacuous);
  EXPECT_EQ(r.checked, band.points.size());
  // the open third quadrant contains (-2, -1)/sqrt(5)
  ConeSpec inside{{{1, -1}, {1, 1}}, {{1}, {-1}}};
  for (double h : {1e-1, 1e-3, 1e-6}) EXPECT_FALSE(exhaustion_check(band, inside, h).passed) << h;
  EXPECT_EQ(find_guard_threshold(band, {away}), Rational(1, 10));
  EXPECT_FALSE(find_guard_threshold(band, {away, inside}).has_value());
}

TEST(Exhaustion, EmptySampleIsVacuous) {
  PointCloud empty{2, {}, Space::Log};
  auto r = exhaustion_check(empty, cubic_cone(), 1e-3);
  EXPECT_TRUE(r.passed);
  EXPECT_TRUE(r.vacuous);
}

TEST(Exhaustion, ClassicalAndLogAgree) {
  PointCloud band = band_sample();
  PointCloud classical{2, {}, Space::Classical};
  for (const auto& X : band.points) classical.points.push_back({std::pow(10.0, X[0]), std::pow(10.0, X[1])});
  ConeSpec inside{{{1, -1}, {1, 1}}, {{1}, {-1}}};
  EXPECT_EQ(exhaustion_check(band, inside, 1e-3).hits, exhaustion_check(classical, inside, 1e-3).hits);
}

TEST(Assemble, EmptyCoverIsPhi) {
  PointCloud empty{2, {}, Space::Log};
  EXPECT_EQ(assemble_exact(cubic(), {}, Rational(1, 1000), empty), cubic());
}

TEST(Assemble, FailureNamesTheCone) {
  PointCloud band = band_sample();
  ConeSpec away{{{1, -1}, {-1, -1}}, {{1}, {-1}}};
  ConeSpec inside{{{1, -1}, {1, 1}}, {{1}, {-1}}};
  try {
    assemble_exact(parse_formula("x1^2 <= x2 & x2 <= x1^0.5"), {away, inside}, Rational(1, 1000), band);
    FAIL() << "expected ExhaustionFailed";
  } catch (const ExhaustionFailed& e) {
    EXPECT_EQ(e.index(), 1u);
  }
  EXPECT_THROW(assemble_exact(parse_formula("!(x1 <= x2)"), {}, Rational(1, 10), band), NonPositiveFormulaError);
}

TEST(Exact, CubicPsiMatchesTarget) {
  PointCloud sample = cubic_sample();
  ASSERT_GT(sample.points.size(), 100u);
  auto h = find_guard_threshold(sample, {cubic_cone()});
  ASSERT_TRUE(h.has_value());
  Formula psi = assemble_exact(cubic(), {cubic_cone()}, *h, sample);
  EXPECT_TRUE(is_positive(psi));
  auto rep = verify_exactness(psi, cubic_target());
  EXPECT_EQ(rep.checked, 401u * 401u);
  EXPECT_EQ(rep.disagreements(), 0u);

  // soundness at sample resolution
  SamplerConfig cfg = deep_config();
  LogMembership m = formula_membership(psi, 2, {});
  double eta = cfg.eta(cfg.t_values().back());
  for (const auto& X : sample.points) EXPECT_TRUE(m.contains(X, std::max(eta, 1e-12)));
}

TEST(Exact, PlainPhiHasTheExtraHalfLine) {
  auto rep = verify_exactness(cubic(), cubic_target());
  EXPECT_TRUE(rep.missing.empty());
  ASSERT_EQ(rep.extra.size(), 200u);
  for (const auto& x : rep.extra) {
    EXPECT_EQ(x[1], 0.0);
    EXPECT_LT(x[0], 0.0);
  }
}

TEST(Exact, TautologyIsWholeSpace) {
  PolyhedralComplex whole(2, {Polyhedron(2)});
  auto rep = verify_exactness(parse_formula("x1 <= x1"), whole);
  EXPECT_EQ(rep.disagreements(), 0u);
}

TEST(Exact, ThreadCountIrrelevant) {
  auto a = verify_exactness(cubic(), cubic_target(), {}, 1);
  auto b = verify_exactness(cubic(), cubic_target(), {}, 3);
  EXPECT_EQ(a.extra, b.extra);
}

TEST(ConeJson, RoundTrip) {
  ConeSpec c{{{0, 1}, {1, 0}}, {{Rational(1, 2)}, {-1}}};
  nlohmann::json j = to_json(c);
  ConeSpec back = cone_from_json(j);
  EXPECT_EQ(back.B, c.B);
  EXPECT_EQ(back.faces, c.faces);
  ConeSpec s = cone_from_json(nlohmann::json::parse(R"({"dimension": 2, "faces": [2, -0.5]})"));
  EXPECT_EQ(s.faces, (Rows{{2}, {Rational(-1, 2)}}));
  EXPECT_THROW(cone_from_json(nlohmann::json::parse(R"({"B": [[1, 0], [0, 1]], "faces": [1]})")), InvalidCone);
}
