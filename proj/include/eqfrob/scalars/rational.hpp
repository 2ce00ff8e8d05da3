#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

#include "eqfrob/errors.hpp"

namespace eqfrob {

// Exact rationals.  Arithmetic results are canonical; the two-argument
// constructor is not, so build fractions through frac().
using Rational = mpq_class;
using Integer = mpz_class;

inline Rational frac(long num, long den) {
  if (den == 0)
    throw InputError("zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

// Parses "p/q", "p" or "-p/q".
inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  if (s.empty())
    throw InputError("empty rational literal");
  if (s.front() == '+')
    s.erase(0, 1);
  Rational q;
  if (q.set_str(s, 10) != 0)
    throw InputError("malformed rational literal '" + std::string(text) + "'");
  if (q.get_den() == 0)
    throw InputError("zero denominator in rational literal '" + std::string(text) + "'");
  q.canonicalize();
  return q;
}

inline std::string to_string(const Rational& q) { return q.get_str(); }

inline bool is_integer(const Rational& q) { return q.get_den() == 1; }

} // namespace eqfrob
