#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace loglim {

// Exact rationals back exponents of Puiseux series, literal constants and
// the LP used to prune empty cells.
using Rational = boost::multiprecision::cpp_rational;
using Integer = boost::multiprecision::cpp_int;

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

// Every finite double is a dyadic rational, so this conversion is exact.
inline Rational rational_from_double(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("rational_from_double: non-finite value");
  if (x == 0.0) return Rational(0);
  int exp = 0;
  double mant = std::frexp(x, &exp);  // x = mant * 2^exp, 0.5 <= |mant| < 1
  auto scaled = static_cast<std::int64_t>(std::ldexp(mant, 53));
  exp -= 53;
  Integer num(scaled);
  Integer den(1);
  if (exp >= 0)
    num <<= exp;
  else
    den <<= -exp;
  return Rational(num, den);
}

inline std::string to_string(const Rational& q) {
  if (denominator(q) == 1) return numerator(q).str();
  return numerator(q).str() + "/" + denominator(q).str();
}

// Accepts "p", "p/q", "-p/q" and decimals such as "2.75" or "1e-3".
inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    Rational num = parse_rational(s.substr(0, slash));
    Rational den = parse_rational(s.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator in '" + s + "'");
    return num / den;
  }
  bool negative = false;
  std::size_t i = 0;
  if (s[i] == '+' || s[i] == '-') {
    negative = s[i] == '-';
    ++i;
  }
  Integer digits(0);
  int frac_digits = 0;
  bool seen_digit = false;
  bool seen_point = false;
  for (; i < s.size(); ++i) {
    char c = s[i];
    if (c >= '0' && c <= '9') {
      digits = digits * 10 + (c - '0');
      if (seen_point) ++frac_digits;
      seen_digit = true;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (!seen_digit) throw std::invalid_argument("malformed rational literal '" + s + "'");
  long exponent = -frac_digits;
  if (i < s.size()) {
    if (s[i] != 'e' && s[i] != 'E') throw std::invalid_argument("malformed rational literal '" + s + "'");
    std::size_t used = 0;
    long e = 0;
    try {
      e = std::stol(s.substr(i + 1), &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("malformed exponent in '" + s + "'");
    }
    if (i + 1 + used != s.size()) throw std::invalid_argument("malformed rational literal '" + s + "'");
    exponent += e;
  }
  Integer scale = boost::multiprecision::pow(Integer(10), static_cast<unsigned>(exponent < 0 ? -exponent : exponent));
  Rational r = exponent >= 0 ? Rational(digits * scale) : Rational(digits, scale);
  return negative ? Rational(-r) : r;
}

inline Integer lcm_integer(const Integer& a, const Integer& b) {
  if (a == 0 || b == 0) return 0;
  return boost::multiprecision::lcm(a, b);
}

}  // namespace loglim
