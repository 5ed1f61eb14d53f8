#include <random>

#include <gtest/gtest.h>

#include "loglim/lp.hpp"
#include "loglim/parser.hpp"
#include "loglim/polynomial.hpp"
#include "loglim/tropical_geometry.hpp"

using namespace loglim;

namespace {

TropicalAtom atom_of(const std::string& text) {
  return std::get<TropicalAtom>(dequantize_formula(normalize_polynomial(text)).node());
}

std::vector<double> grid_axis() {
  std::vector<double> g;
  for (int k = 0; k <= 400; ++k) g.push_back(-2.0 + 0.01 * k);
  return g;
}

// Cells and direct max-plus evaluation agree on the 401 x 401 grid.
int grid_disagreements(const TropicalAtom& a) {
  PolyhedralComplex k = tropical_atom_cells(a, 2);
  int bad = 0;
  auto axis = grid_axis();
  for (double x : axis)
    for (double y : axis)
      if (k.contains({x, y}, 1e-9) != eval_tropical_atom(a, {x, y}, 1e-9)) ++bad;
  return bad;
}

TropicalTerm random_side(std::mt19937_64& rng) {
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

NewtonData random_support(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> count(2, 6), coord(0, 4), num(-6, 6), den(1, 4);
  NewtonData nd;
  int m = count(rng);
  while (static_cast<int>(nd.support.size()) < m) {
    std::vector<int> w{coord(rng), coord(rng)};
    if (std::find(nd.support.begin(), nd.support.end(), w) != nd.support.end()) continue;
    nd.support.push_back(w);
    nd.weights.push_back(static_cast<double>(num(rng)) / den(rng));
  }
  return nd;
}

}  // namespace

TEST(Lp, FeasibleAndInfeasible) {
  // x + y <= 1, x >= 2, y >= 0
  std::vector<RationalConstraint> cons{
      {{1, 1}, -1, Relation::Leq}, {{-1, 0}, 2, Relation::Leq}, {{0, -1}, 0, Relation::Leq}};
  EXPECT_FALSE(lp_feasible(cons, 2));
  cons[0].constant = -3;
  auto p = lp_feasible_point(cons, 2);
  ASSERT_TRUE(p.has_value());
  EXPECT_LE((*p)[0] + (*p)[1], 3);
  EXPECT_GE((*p)[0], 2);
  // equality x = 1/3 exactly
  std::vector<RationalConstraint> eq{{{3}, -1, Relation::Eq}};
  EXPECT_EQ(lp_feasible_point(eq, 1)->at(0), Rational(1, 3));
}

TEST(Lp, ExactnessMatters) {
  // x = 1/3 and 3x = 1 + 2^-60 are inconsistent only by a tiny amount
  Rational eps = Rational(1, Integer(1) << 60);
  std::vector<RationalConstraint> cons{{{3}, -1, Relation::Eq}, {{3}, Rational(-1) - eps, Relation::Eq}};
  EXPECT_FALSE(lp_feasible(cons, 1));
}

TEST(Polyhedron, ProjectionOntoQuadrant) {
  Polyhedron q(2, {{{{1, 0}, 0}, Relation::Leq}, {{{0, 1}, 0}, Relation::Leq}});
  auto p = q.project({1, -2});
  ASSERT_TRUE(p);
  EXPECT_NEAR((*p)[0], 0.0, 1e-12);
  EXPECT_NEAR((*p)[1], -2.0, 1e-12);
  EXPECT_NEAR(q.distance_to({3, 4}), 5.0, 1e-12);
  EXPECT_EQ(q.distance_to({-1, -1}), 0.0);
}

TEST(Polyhedron, EmptyHasNoProjection) {
  Polyhedron e(1, {{{{1}, 0}, Relation::Leq}, {{{-1}, 1}, Relation::Leq}});
  EXPECT_FALSE(e.is_feasible());
  EXPECT_FALSE(e.project({0.5}).has_value());
}

TEST(Polyhedron, JsonRoundTrip) {
  PolyhedralComplex k = tropical_atom_cells(atom_of("x^2 + y^2 + 1 = 2y + x^3"), 2);
  PolyhedralComplex back = complex_from_json(nlohmann::json::parse(to_json(k).dump()));
  ASSERT_EQ(back.cells().size(), k.cells().size());
  EXPECT_EQ(to_json(back), to_json(k));
}

TEST(BasicCone, Definition) {
  Polyhedron b = basic_cone({1});
  EXPECT_TRUE(b.contains({-1, -2}));
  EXPECT_FALSE(b.contains({-2, -1}));
  EXPECT_FALSE(b.contains({1, 0}));
  EXPECT_TRUE(basic_cone({2, 3}).contains({-1, -2, -6}));
  EXPECT_FALSE(basic_cone({2, 3}).contains({-1, -2, -5}));
}

TEST(BasicCone, LargerIndexGivesSmallerCone) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-5, 0);
  Polyhedron big = basic_cone({1, 2});
  Polyhedron small = basic_cone({2, 3});
  for (int i = 0; i < 5000; ++i) {
    Vector x{u(rng), 3 * u(rng), 9 * u(rng)};
    if (small.contains(x)) {
      EXPECT_TRUE(big.contains(x));
    }
  }
}

TEST(ExponentialCone, Membership) {
  EXPECT_TRUE(exponential_cone_membership({0.1, 0.001}, {2}, 0.5));
  EXPECT_FALSE(exponential_cone_membership({0.1, 0.02}, {2}, 0.5));
  EXPECT_TRUE(exponential_cone_membership({0.5, 0.5}, {1}, 0.5));
  EXPECT_TRUE(exponential_cone_membership({0.5, 0.5, 0.5}, {1, 1}, 0.5));
  EXPECT_FALSE(exponential_cone_membership({0.6, 0.1}, {1}, 0.5));
}

TEST(AtomCells, CircleMatchesBruteForce) {
  TropicalAtom a = atom_of("x^2 + y^2 + 27/4 = 4x + 6y");
  EXPECT_EQ(grid_disagreements(a), 0);
  PolyhedralComplex k = tropical_atom_cells(a, 2);
  EXPECT_TRUE(k.contains({0, -1.5}));
  EXPECT_TRUE(k.contains({-0.7, 0}));
  EXPECT_TRUE(k.contains({0, 0}));
  EXPECT_FALSE(k.contains({-1, -1}));
  EXPECT_FALSE(k.contains({1, 1}));
  EXPECT_TRUE(k.is_fan());
}

TEST(AtomCells, Tautology) {
  TropicalAtom a{Relation::Eq, TropicalTerm::max({TropicalTerm::variable(0)}),
                 TropicalTerm::max({TropicalTerm::variable(0)})};
  PolyhedralComplex k = tropical_atom_cells(a, 2);
  EXPECT_TRUE(k.contains({-7, 3}));
  EXPECT_TRUE(k.contains({5, 5}));
}

TEST(AtomCells, CubicContainsThreeRays) {
  TropicalAtom a = atom_of("x^2 + y^2 + 1 = 2y + x^3");
  EXPECT_EQ(grid_disagreements(a), 0);
  PolyhedralComplex k = tropical_atom_cells(a, 2);
  EXPECT_TRUE(k.contains({0, -1}));
  EXPECT_TRUE(k.contains({-1, 0}));
  EXPECT_TRUE(k.contains({2, 3}));
  EXPECT_FALSE(k.contains({1, 0}));
}

TEST(AtomCells, RandomAtomsMatchBruteForce) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 10; ++trial) {
    TropicalAtom a{trial % 3 == 0 ? Relation::Leq : Relation::Eq, random_side(rng), random_side(rng)};
    EXPECT_EQ(grid_disagreements(a), 0) << to_string(a);
    // no constants: every cell is a cone
    EXPECT_TRUE(tropical_atom_cells(a, 2).is_fan());
  }
}

TEST(AtomCells, NegativeScaleOfMaxUnsupported) {
  TropicalAtom a{Relation::Eq,
                 TropicalTerm::scale(-1, TropicalTerm::max({TropicalTerm::variable(0), TropicalTerm::zero()})),
                 TropicalTerm::zero()};
  EXPECT_THROW(tropical_atom_cells(a, 1), UnsupportedTropicalTerm);
}

TEST(FormulaCells, ConjunctionWithHalfPlane) {
  TropicalFormula f = dequantize_formula(parse_formula("x1^2 + x2^2 + 1 = 2*x2 + x1^3 & 1/2 <= x1"));
  PolyhedralComplex k = tropical_formula_cells(f, 2);
  auto axis = grid_axis();
  for (double x : axis)
    for (double y : axis) ASSERT_EQ(k.contains({x, y}), eval_tropical_formula(f, {x, y})) << x << "," << y;
  EXPECT_FALSE(k.contains({-1, 0}));
}

TEST(ComplexMembership, Examples) {
  PolyhedralComplex k = tropical_atom_cells(atom_of("x^2 + y^2 + 27/4 = 4x + 6y"), 2);
  auto inside = complex_membership({0, -3}, k);
  EXPECT_TRUE(inside.member);
  EXPECT_EQ(inside.distance, 0.0);
  // nearest point of the two rays to (1,1) is the origin
  auto outside = complex_membership({1, 1}, k);
  EXPECT_FALSE(outside.member);
  EXPECT_NEAR(outside.distance, std::sqrt(2.0), 1e-12);
  auto near = complex_membership({-2, 0.5}, k);
  EXPECT_NEAR(near.distance, 0.5, 1e-12);
  EXPECT_TRUE(complex_membership({0, 0}, k).member);
}

TEST(DualFan, Line) {
  NewtonData nd{{{0, 0}, {1, 0}, {0, 1}}, {0, 0, 0}};
  PolyhedralComplex fan = dual_fan(nd);
  EXPECT_EQ(fan.cells().size(), 3u);
  DirectionCloud rays{2, {normalized({1, 1}), {-1, 0}, {0, -1}}, true};
  EXPECT_LT(hausdorff_directions(rays, fan), 1e-9);
  auto grid = sphere_grid(2, 10000);
  double delta = sphere_grid_spacing(2, 10000);
  DirectionCloud oracle = attained_twice_oracle(nd, grid, delta);
  EXPECT_LE(hausdorff_directions(oracle, rays), 2 * delta);
}

TEST(DualFan, SingleMonomialIsEmpty) {
  NewtonData nd{{{2, 1}}, {0}};
  EXPECT_TRUE(dual_fan(nd).empty());
  EXPECT_TRUE(attained_twice_oracle(nd, sphere_grid(2, 100), 0.1).directions.empty());
}

TEST(DualFan, RandomSupportsMatchOracle) {
  std::mt19937_64 rng(2718);
  auto grid = sphere_grid(2, 10000);
  double delta = sphere_grid_spacing(2, 10000);
  for (int trial = 0; trial < 10; ++trial) {
    NewtonData nd = random_support(rng);
    PolyhedralComplex fan = dual_fan(nd);
    DirectionCloud oracle = attained_twice_oracle(nd, grid, delta);
    // every oracle point is near the fan, every fan point on the circle is near the oracle
    for (const auto& u : oracle.directions) EXPECT_LE(complex_membership(u, fan).distance, 2 * delta);
    auto exact = complex_sphere_samples(fan, 10000);
    for (const auto& v : exact) EXPECT_LE(angle_to_cloud(v, oracle.directions), 2 * delta);
  }
}

TEST(DualFan, UmbrellaRayInsideTwoCell) {
  // x^2 (1 - (z - 2)^2) - x^4 - (y - 1)^2
  auto [p, q] = parse_polynomial_equation("x^2(1 - (z - 2)^2) - x^4 - (y - 1)^2");
  RationalPolynomial f = (p - q).pruned();
  NewtonData nd;
  for (const auto& m : f.monomials()) {
    std::vector<int> w(3, 0);
    for (std::size_t i = 0; i < m.exponents.size(); ++i) w[i] = static_cast<int>(m.exponents[i]);
    nd.support.push_back(w);
    nd.weights.push_back(0.0);
  }
  EXPECT_EQ(nd.support.size(), 7u);
  PolyhedralComplex fan = dual_fan(nd);
  Vector ray{-1, 0, 0};
  bool in_open_two_cell = false;
  for (const auto& cell : fan.cells())
    if (cell.local_dimension(ray) == 2) in_open_two_cell = true;
  EXPECT_TRUE(in_open_two_cell);
}
