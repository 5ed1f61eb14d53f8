#pragma once

#include <random>
#include <string>

#include "formula.hpp"
#include "term.hpp"

namespace loglim::random_ast {

struct RandomTermOptions {
  std::size_t variables = 2;
  std::size_t parameters = 2;
  double min_exponent = -3.0;
  double max_exponent = 3.0;
  bool constants = true;
};

// Random term of depth at most `depth`; leaves are variables x1..xn,
// parameters a1..am and small positive rational literals.
inline Term random_term(std::mt19937_64& rng, int depth, const RandomTermOptions& opt = {}) {
  int leaf_kinds = opt.constants ? 3 : 2;
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? leaf_kinds - 1 : leaf_kinds + 2);
  int k = pick(rng);
  if (!opt.constants && k >= 2) ++k;
  if (opt.parameters == 0 && k == 1) k = 0;
  switch (k) {
    case 0:
      return Term::variable(rng() % opt.variables);
    case 1:
      return Term::parameter("a" + std::to_string(rng() % opt.parameters + 1));
    case 2:
      return Term::constant(Rational(static_cast<long>(rng() % 20 + 1), static_cast<long>(rng() % 5 + 1)));
    case 3:
      return Term::sum(random_term(rng, depth - 1, opt), random_term(rng, depth - 1, opt));
    case 4:
      return Term::product(random_term(rng, depth - 1, opt), random_term(rng, depth - 1, opt));
    default: {
      std::uniform_real_distribution<double> e(opt.min_exponent, opt.max_exponent);
      return Term::power(random_term(rng, depth - 1, opt), e(rng));
    }
  }
}

inline ParameterEnvironment random_environment(std::mt19937_64& rng, std::size_t parameters, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  ParameterEnvironment env;
  for (std::size_t i = 1; i <= parameters; ++i) {
    double v = u(rng);
    if (v <= 0.0) v = hi;
    env.set("a" + std::to_string(i), v);
  }
  return env;
}

}  // namespace loglim::random_ast
