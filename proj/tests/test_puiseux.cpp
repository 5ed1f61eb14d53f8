#include <random>

#include <gtest/gtest.h>

#include "loglim/puiseux.hpp"

using namespace loglim;

namespace {

PuiseuxSeries S(const std::string& text) { return parse_puiseux_series(text); }

PuiseuxPolynomial quadratic() {
  return parse_puiseux_polynomial(
      "omega = (2); coeff = 1\n"
      "omega = (1); coeff = 1\n"
      "omega = (0); coeff = -t\n");
}

// generalised binomial coefficient through the gamma function
double binomial_gamma(double a, int k) {
  double sign = 1.0;
  double num = std::lgamma(a + 1.0);
  double den = std::lgamma(k + 1.0) + std::lgamma(a - k + 1.0);
  // sign of Gamma(a - k + 1) for negative non-integer arguments
  if (a - k + 1.0 < 0.0 && static_cast<long>(std::floor(a - k + 1.0)) % 2 != 0) sign = -1.0;
  return sign * std::exp(num - den);
}

PuiseuxSeries random_series(std::mt19937_64& rng) {
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

}  // namespace

TEST(Series, ArithmeticExamples) {
  EXPECT_EQ(S("t + t^2") * S("t"), S("t^2 + t^3"));
  EXPECT_EQ(S("1 + t") + S("-1"), S("t"));
  EXPECT_EQ(S("1 + t") * S("1 - t"), S("1 - t^2"));
  PuiseuxSeries a = S("1 + t + O(t^2)");
  EXPECT_EQ(a * S("1 - t"), S("1 + O(t^2)"));
  EXPECT_EQ(-S("t - 2*t^3"), S("-t + 2*t^3"));
}

TEST(Series, TruncationPropagation) {
  // mul: min(a.trunc + v(b), b.trunc + v(a))
  PuiseuxSeries a = S("t + O(t^3)");
  PuiseuxSeries b = S("t^2 + O(t^5)");
  EXPECT_EQ(*(a * b).truncation(), Rational(5));
  EXPECT_EQ(*(a + b).truncation(), Rational(3));
  EXPECT_THROW(S("1 + O(t)") + S("-1"), ZeroBelowTruncation);
  EXPECT_TRUE((S("1 + t") + S("-1 - t")).is_exact_zero());
}

TEST(Series, PowExamples) {
  EXPECT_EQ(series_pow(S("t^2"), Rational(1, 2)), S("t"));
  EXPECT_EQ(series_pow(S("4*t^2"), Rational(1, 2)), S("2*t"));
  PuiseuxSeries r = series_pow(S("1 + t"), Rational(1, 2));
  ASSERT_EQ(*r.truncation(), Rational(8));
  ASSERT_EQ(r.terms().size(), 8u);
  for (int k = 0; k < 8; ++k) {
    EXPECT_EQ(r.terms()[k].first, Rational(k));
    EXPECT_NEAR(r.terms()[k].second, binomial_gamma(0.5, k), 1e-14) << k;
  }
  EXPECT_NEAR(r.evaluate(0.01), std::sqrt(1.01), 1e-15 + std::pow(0.01, 8));
  EXPECT_THROW(series_pow(S("-1 + t"), Rational(1, 2)), std::domain_error);
}

TEST(Series, PowInverse) {
  PuiseuxSeries a = S("2*t + 3*t^2 - t^(5/2)");
  PuiseuxSeries inv = series_pow(a, Rational(-1));
  PuiseuxSeries one = a * inv;
  EXPECT_EQ(one.valuation(), Rational(0));
  EXPECT_NEAR(one.leading_coefficient(), 1.0, 1e-15);
  for (std::size_t i = 1; i < one.terms().size(); ++i) EXPECT_NEAR(one.terms()[i].second, 0.0, 1e-12);
}

TEST(Series, Valuation) {
  EXPECT_EQ(valuation(S("t^2 + 3*t^3")), Rational(2));
  EXPECT_EQ(valuation(S("5")), Rational(0));
  EXPECT_EQ(valuation(S("t^1/2")), Rational(1, 2));
  EXPECT_THROW(valuation(PuiseuxSeries()), ZeroSeries);
}

TEST(Series, Order) {
  EXPECT_TRUE(is_positive(S("t - t^2")));
  EXPECT_EQ(compare(S("t"), S("0.001")), Ordering::Less);
  EXPECT_EQ(compare(S("1 + t"), S("1")), Ordering::Greater);
  EXPECT_EQ(compare(S("1 + t"), S("1 + t")), Ordering::Equal);
  EXPECT_EQ(compare(S("1 + O(t^2)"), S("1 + O(t^3)")), Ordering::Indeterminate);
}

TEST(Series, LogMap) {
  EXPECT_EQ(log_map({S("t"), S("1")}), (std::vector<Rational>{-1, 0}));
  EXPECT_EQ(log_map({S("t^(1/2)"), S("t^2")}), (std::vector<Rational>{Rational(-1, 2), -2}));
  EXPECT_EQ(log_map({S("5"), S("3*t^-1")}), (std::vector<Rational>{0, 1}));
  EXPECT_THROW(log_map({PuiseuxSeries()}), ZeroSeries);
}

TEST(Series, Ramification) {
  EXPECT_NO_THROW(S("t^(1/4) + t^(1/3)"));
  EXPECT_THROW(S("t^(1/5) + t^(1/3)"), RamificationOverflow);
}

TEST(Series, ParseErrors) {
  EXPECT_THROW(S(""), ParseError);
  EXPECT_THROW(S("1 + * t"), ParseError);
  EXPECT_THROW(S("2 t"), ParseError);
  EXPECT_EQ(S("1/2*t^-1"), PuiseuxSeries::monomial(0.5, Rational(-1)));
}

TEST(Series, ValuationAxiomsOnRandomSeries) {
  std::mt19937_64 rng(8);
  int violations = 0, ordered = 0;
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
    // order and valuation: a >= b > 0 implies v(a) <= v(b)
    PuiseuxSeries pa = a.leading_coefficient() > 0 ? a : -a;
    PuiseuxSeries pb = b.leading_coefficient() > 0 ? b : -b;
    Ordering o = compare(pa, pb);
    if (o == Ordering::Indeterminate) continue;
    ++ordered;
    if ((o == Ordering::Greater || o == Ordering::Equal) && valuation(pa) > valuation(pb)) ++violations;
    if (o == Ordering::Less && valuation(pb) > valuation(pa)) ++violations;
  }
  EXPECT_EQ(violations, 0);
  EXPECT_GT(ordered, 900);
}

TEST(Polynomial, ParseAndPrint) {
  PuiseuxPolynomial f = quadratic();
  EXPECT_EQ(f.dimension(), 1u);
  EXPECT_EQ(f.coefficients().size(), 3u);
  PuiseuxPolynomial g = parse_puiseux_polynomial(to_string(f));
  EXPECT_EQ(g.coefficients(), f.coefficients());
  EXPECT_THROW(parse_puiseux_polynomial("omega = (1,2); coeff = 1\nomega = (1); coeff = 1\n"), ParseError);
  EXPECT_THROW(parse_puiseux_polynomial("omega = (1) coeff = 1\n"), ParseError);
  EXPECT_THROW(parse_puiseux_polynomial("# nothing\n"), ParseError);
}

TEST(Polynomial, Instantiate) {
  RealPolynomial p = instantiate(quadratic(), 0.01);
  EXPECT_EQ(p.terms.at({0}), -0.01);
  EXPECT_EQ(p.terms.at({2}), 1.0);
  PuiseuxPolynomial g = parse_puiseux_polynomial("omega = (1); coeff = 1 + t\nomega = (0); coeff = t^1/2\n");
  EXPECT_DOUBLE_EQ(instantiate(g, 0.1).terms.at({1}), 1.1);
  EXPECT_DOUBLE_EQ(instantiate(g, 0.01).terms.at({0}), 0.1);
  EXPECT_THROW(instantiate(g, 1.0), std::invalid_argument);
}

TEST(Polynomial, Twist) {
  PuiseuxPolynomial f = parse_puiseux_polynomial("omega = (1); coeff = 1\nomega = (0); coeff = -t\n");
  PuiseuxPolynomial g = twist(f, {Rational(-1)});
  EXPECT_EQ(valuation(g.coefficients().at({1})), Rational(1));
  EXPECT_EQ(valuation(g.coefficients().at({0})), Rational(1));
  EXPECT_EQ(twist(f, {Rational(0)}).coefficients(), f.coefficients());
  PuiseuxPolynomial m = parse_puiseux_polynomial("omega = (2,3); coeff = 7*t\n");
  EXPECT_EQ(twist(m, {Rational(1, 2), Rational(1)}).coefficients().at({2, 3}), S("7*t^-3"));
}

TEST(Polynomial, InitialForm) {
  RealPolynomial g = initial_form(quadratic(), {Rational(-1)});
  EXPECT_EQ(g.terms, (std::map<std::vector<int>, double>{{{0}, -1.0}, {{1}, 1.0}}));
  EXPECT_TRUE(initial_form(quadratic(), {Rational(-1, 3)}).is_monomial());
  PuiseuxPolynomial r = parse_puiseux_polynomial("omega = (1,0); coeff = 2 + t\nomega = (0,1); coeff = -3 + t^2\n");
  EXPECT_EQ(initial_form(r, {Rational(0), Rational(0)}).terms,
            (std::map<std::vector<int>, double>{{{0, 1}, -3.0}, {{1, 0}, 2.0}}));
}

TEST(Polynomial, TwistInitialConsistency) {
  PuiseuxPolynomial f = parse_puiseux_polynomial(
      "omega = (2,0); coeff = 1 + t\n"
      "omega = (0,1); coeff = -2*t^(1/2)\n"
      "omega = (1,1); coeff = 3*t - t^2\n"
      "omega = (0,0); coeff = -t^2\n");
  for (std::vector<Rational> lambda : {std::vector<Rational>{Rational(-1), Rational(-1, 2)},
                                       std::vector<Rational>{Rational(0), Rational(0)},
                                       std::vector<Rational>{Rational(-1, 2), Rational(1)}}) {
    RealPolynomial in = initial_form(f, lambda);
    Rational mu = twisted_valuation(f, lambda);
    PuiseuxPolynomial g = twist(f, lambda);
    double prev = std::numeric_limits<double>::infinity();
    for (double t : {1e-3, 1e-4, 1e-5, 1e-6}) {
      RealPolynomial p = instantiate(g, t);
      double err = 0.0;
      for (const auto& [w, c] : p.terms) {
        double scaled = c * std::pow(t, -to_double(mu));
        auto it = in.terms.find(w);
        err = std::max(err, std::abs(scaled - (it == in.terms.end() ? 0.0 : it->second)));
      }
      EXPECT_LE(err, prev);
      prev = err;
    }
    EXPECT_LT(prev, 0.01);
  }
}

TEST(Polynomial, PatchworkRoot) {
  for (double t : {1e-2, 1e-4, 1e-6}) {
    auto roots = positive_roots(instantiate(quadratic(), t));
    ASSERT_EQ(roots.size(), 1u);
    double closed = 2 * t / (1 + std::sqrt(1 + 4 * t));
    EXPECT_NEAR(roots[0] / closed, 1.0, 1e-12);
  }
  double t = 1e-6;
  double log_root = std::log(positive_roots(instantiate(quadratic(), t))[0]) / -std::log(t);
  EXPECT_NEAR(log_root, -1.0, 0.02);
}

TEST(Polynomial, PositiveRootsExamples) {
  RealPolynomial p{1, {{{3}, 1.0}, {{1}, -7.0}, {{0}, 6.0}}};  // (x-1)(x-2)(x+3)
  auto roots = positive_roots(p);
  ASSERT_EQ(roots.size(), 2u);
  EXPECT_NEAR(roots[0], 1.0, 1e-12);
  EXPECT_NEAR(roots[1], 2.0, 1e-12);
  RealPolynomial q{1, {{{-1}, 1.0}, {{1}, -4.0}}};  // 1/x - 4x
  EXPECT_NEAR(positive_roots(q).at(0), 0.5, 1e-12);
  EXPECT_TRUE(positive_roots(RealPolynomial{1, {{{2}, 1.0}, {{0}, 1.0}}}).empty());
}

TEST(LambdaMembership, Examples) {
  auto yes = lambda_membership_hypersurface(quadratic(), {Rational(-1)});
  EXPECT_EQ(yes.verdict, Membership::Yes);
  ASSERT_TRUE(yes.witness);
  EXPECT_NEAR((*yes.witness)[0], 1.0, 1e-9);
  EXPECT_EQ(lambda_membership_hypersurface(quadratic(), {Rational(0)}).verdict, Membership::No);
  PuiseuxPolynomial mono = parse_puiseux_polynomial("omega = (3,1); coeff = -2*t\n");
  for (auto l : {Rational(-2), Rational(0), Rational(5, 3)})
    EXPECT_EQ(lambda_membership_hypersurface(mono, {l, Rational(1)}).verdict, Membership::No);
}

TEST(LambdaMembership, TwoVariables) {
  // x + y - 1 at lambda = 0 has positive zeros; x + y + t does not
  PuiseuxPolynomial f = parse_puiseux_polynomial("omega = (1,0); coeff = 1\nomega = (0,1); coeff = 1\nomega = (0,0); coeff = -1\n");
  auto r = lambda_membership_hypersurface(f, {Rational(0), Rational(0)});
  EXPECT_EQ(r.verdict, Membership::Yes);
  EXPECT_NEAR((*r.witness)[0] + (*r.witness)[1], 1.0, 1e-9);
  PuiseuxPolynomial g = parse_puiseux_polynomial("omega = (1,0); coeff = 1\nomega = (0,1); coeff = 1\nomega = (0,0); coeff = t\n");
  EXPECT_EQ(lambda_membership_hypersurface(g, {Rational(0), Rational(0)}).verdict, Membership::No);
}
