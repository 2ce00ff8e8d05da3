#pragma once

#include <random>

#include "eqfrob.hpp"

namespace testing_support {

using namespace eqfrob;

inline Rational random_rational(std::mt19937& rng, int span = 5) {
  std::uniform_int_distribution<int> num(-span, span), den(1, span);
  return frac(num(rng), den(rng));
}

inline GroundPoly random_poly(std::mt19937& rng, std::size_t nvars, unsigned max_deg = 2, int terms = 3) {
  GroundPoly p(nvars);
  std::uniform_int_distribution<unsigned> ex(0, max_deg);
  for (int t = 0; t < terms; ++t) {
    Exponents e(nvars);
    for (auto& x : e)
      x = ex(rng);
    p.add_term(e, random_rational(rng));
  }
  return p;
}

inline Element random_element(std::mt19937& rng, BasisPtr b, std::size_t nvars, int terms = 3) {
  Element x(b, nvars);
  std::uniform_int_distribution<std::size_t> idx(0, b->size() - 1);
  for (int t = 0; t < terms; ++t)
    x.add(idx(rng), random_poly(rng, nvars, 1, 2));
  return x;
}

inline Element named(const CartanModel& m, const std::string& name, const Rational& c = Rational(1)) {
  return Element::basis_vector(m.basis(), m.r, m.basis()->index_of(name), c);
}

} // namespace testing_support
