#pragma once

#include <string>

#include "eqfrob/scalars/ground_poly.hpp"

namespace eqfrob {

// Element of the fraction field of the ground ring.  Canonical form: the
// denominator has leading coefficient 1 in grlex order, and an exactly
// divisible numerator is reduced to a polynomial.  Equality is decided by
// cross multiplication, so no gcd is required.
class RationalFn {
public:
  explicit RationalFn(std::size_t nvars = 0) : num_(nvars), den_(nvars, Rational(1)) {}
  explicit RationalFn(GroundPoly p) : num_(std::move(p)), den_(num_.nvars(), Rational(1)) {}
  RationalFn(GroundPoly num, GroundPoly den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero())
      throw MathError("rational function with zero denominator");
    normalize();
  }

  const GroundPoly& numerator() const noexcept { return num_; }
  const GroundPoly& denominator() const noexcept { return den_; }
  std::size_t nvars() const noexcept { return num_.nvars(); }
  bool is_zero() const noexcept { return num_.is_zero(); }
  bool is_polynomial() const { return den_.is_constant(); }

  friend RationalFn operator+(const RationalFn& a, const RationalFn& b) {
    return RationalFn(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  friend RationalFn operator-(const RationalFn& a, const RationalFn& b) {
    return RationalFn(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
  }
  friend RationalFn operator-(const RationalFn& a) { return RationalFn(-a.num_, a.den_); }
  friend RationalFn operator*(const RationalFn& a, const RationalFn& b) {
    return RationalFn(a.num_ * b.num_, a.den_ * b.den_);
  }
  friend RationalFn operator/(const RationalFn& a, const RationalFn& b) {
    if (b.is_zero())
      throw MathError("division by zero rational function");
    return RationalFn(a.num_ * b.den_, a.den_ * b.num_);
  }
  friend bool operator==(const RationalFn& a, const RationalFn& b) {
    return a.num_ * b.den_ == b.num_ * a.den_;
  }

  std::string to_string() const {
    if (den_.is_constant())
      return num_.to_string();
    return "(" + num_.to_string() + ")/(" + den_.to_string() + ")";
  }

private:
  void normalize() {
    const Rational lead = den_.leading_term().second;
    if (lead != 1) {
      const Rational inv = 1 / lead;
      num_ *= inv;
      den_ *= inv;
    }
    if (!den_.is_constant()) {
      if (auto q = num_.divide_exact(den_)) {
        num_ = std::move(*q);
        den_ = GroundPoly(num_.nvars(), Rational(1));
      }
    }
  }

  GroundPoly num_;
  GroundPoly den_;
};

} // namespace eqfrob
