// Exact rational scalars for all coefficient arithmetic.
//
// Provides:
//  - Rational: arbitrary-precision rational with eager gcd normalization
//    (backed by GMP's mpq_class; denominator kept positive)
//  - parsing/printing in the `p/q` form used by the file formats

#ifndef DERHAM_RATIONAL_HPP
#define DERHAM_RATIONAL_HPP

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace derham {

using Rational = mpq_class;

inline Rational rat(long num, long den = 1) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

inline bool is_zero(const Rational& q) { return sgn(q) == 0; }

inline Rational rat_pow(const Rational& q, unsigned e) {
  Rational r(1);
  Rational b = q;
  while (e) {
    if (e & 1u) r *= b;
    b *= b;
    e >>= 1u;
  }
  return r;
}

// Accepts "3", "-3", "3/4", "-3/4" with optional surrounding spaces.
inline Rational parse_rational(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  Rational q;
  if (q.set_str(s, 10) != 0)
    throw std::invalid_argument("bad rational literal: " + text);
  q.canonicalize();
  if (sgn(q.get_den()) <= 0 && sgn(q) != 0)
    throw std::invalid_argument("bad rational literal: " + text);
  return q;
}

inline std::string to_string(const Rational& q) { return q.get_str(); }

// n! as an exact integer-valued rational; used by the Beta-type integral rules.
inline Rational factorial(unsigned n) {
  Rational r(1);
  for (unsigned i = 2; i <= n; ++i) r *= i;
  return r;
}

}  // namespace derham

#endif
