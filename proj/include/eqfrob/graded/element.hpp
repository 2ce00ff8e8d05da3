#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "eqfrob/graded/basis.hpp"
#include "eqfrob/scalars/ground_poly.hpp"

namespace eqfrob {

// Equivariant form: sparse combination of basis forms with coefficients in
// the ground ring Q[u_1..u_r].  Ground coefficients are even.
class Element {
public:
  using CoeffMap = std::map<std::size_t, GroundPoly>;

  Element(BasisPtr basis, std::size_t nvars) : basis_(std::move(basis)), nvars_(nvars) {
    if (!basis_)
      throw InputError("element without basis");
  }

  static Element basis_vector(BasisPtr basis, std::size_t nvars, std::size_t i,
                              const Rational& c = Rational(1)) {
    Element e(std::move(basis), nvars);
    e.add(i, GroundPoly(nvars, c));
    return e;
  }

  const BasisPtr& basis() const noexcept { return basis_; }
  std::size_t nvars() const noexcept { return nvars_; }
  std::size_t dim() const noexcept { return basis_->size(); }
  const CoeffMap& coeffs() const noexcept { return coeffs_; }
  bool is_zero() const noexcept { return coeffs_.empty(); }

  GroundPoly coeff(std::size_t i) const {
    auto it = coeffs_.find(i);
    return it == coeffs_.end() ? GroundPoly(nvars_) : it->second;
  }

  void add(std::size_t i, const GroundPoly& c) {
    if (i >= dim())
      throw InputError("basis index out of range");
    if (c.nvars() != nvars_)
      throw InputError("element coefficient has wrong variable count");
    if (c.is_zero())
      return;
    auto [it, inserted] = coeffs_.try_emplace(i, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero())
        coeffs_.erase(it);
    }
  }

  Element& operator+=(const Element& o) {
    require_compatible(o);
    for (const auto& [i, c] : o.coeffs_)
      add(i, c);
    return *this;
  }
  Element& operator-=(const Element& o) {
    require_compatible(o);
    for (const auto& [i, c] : o.coeffs_)
      add(i, -c);
    return *this;
  }
  Element& operator*=(const GroundPoly& s) {
    if (s.nvars() != nvars_)
      throw InputError("scalar has wrong variable count");
    CoeffMap out;
    for (auto& [i, c] : coeffs_) {
      GroundPoly v = c * s;
      if (!v.is_zero())
        out.emplace(i, std::move(v));
    }
    coeffs_ = std::move(out);
    return *this;
  }
  Element& operator*=(const Rational& s) {
    if (s == 0) {
      coeffs_.clear();
      return *this;
    }
    for (auto& [i, c] : coeffs_)
      c *= s;
    return *this;
  }

  friend Element operator+(Element a, const Element& b) { return a += b; }
  friend Element operator-(Element a, const Element& b) { return a -= b; }
  friend Element operator-(Element a) { return a *= Rational(-1); }
  friend Element operator*(const GroundPoly& s, Element a) { return a *= s; }
  friend Element operator*(const Rational& s, Element a) { return a *= s; }

  friend bool operator==(const Element& a, const Element& b) {
    return a.dim() == b.dim() && a.nvars_ == b.nvars_ && a.coeffs_ == b.coeffs_;
  }

  Element zero_like() const { return Element(basis_, nvars_); }

  // Component of Theta-degree k (homogeneous degree k in the u's): the
  // alpha^(2k) piece of the bigrading.
  Element theta_component(unsigned k) const {
    Element out(basis_, nvars_);
    for (const auto& [i, c] : coeffs_)
      out.add(i, c.homogeneous_part(k));
    return out;
  }

  int max_theta_degree() const {
    int m = -1;
    for (const auto& [i, c] : coeffs_)
      m = std::max(m, c.degree());
    return m;
  }

  Element form_component(int deg) const {
    Element out(basis_, nvars_);
    for (const auto& [i, c] : coeffs_)
      if (basis_->form_degree(i) == deg)
        out.coeffs_.emplace(i, c);
    return out;
  }

  // Part with form-degree parity `odd`.
  Element parity_component(bool odd) const {
    Element out(basis_, nvars_);
    for (const auto& [i, c] : coeffs_)
      if (basis_->odd(i) == odd)
        out.coeffs_.emplace(i, c);
    return out;
  }

  // Negates the odd components when `flip` is set: the Koszul sign of moving
  // this element past an odd symbol.
  Element parity_twist(bool flip) const {
    if (!flip)
      return *this;
    Element out = *this;
    for (auto& [i, c] : out.coeffs_)
      if (basis_->odd(i))
        c = -c;
    return out;
  }

  // Parity if homogeneous; nullopt for zero or mixed parity.
  std::optional<bool> parity() const {
    std::optional<bool> p;
    for (const auto& [i, c] : coeffs_) {
      const bool o = basis_->odd(i);
      if (p && *p != o)
        return std::nullopt;
      p = o;
    }
    return p;
  }

  // Total degree (form degree + 2 * Theta degree) if homogeneous.
  std::optional<int> total_degree() const {
    std::optional<int> deg;
    for (const auto& [i, c] : coeffs_) {
      for (const auto& [e, q] : c.terms()) {
        const int d = basis_->form_degree(i) + 2 * static_cast<int>(eqfrob::total_degree(e));
        if (deg && *deg != d)
          return std::nullopt;
        deg = d;
      }
    }
    return deg;
  }

  Element with_nvars(std::size_t nvars) const {
    Element out(basis_, nvars);
    for (const auto& [i, c] : coeffs_)
      out.coeffs_.emplace(i, c.with_nvars(nvars));
    return out;
  }

  std::string to_string() const {
    if (coeffs_.empty())
      return "0";
    std::string s;
    bool first = true;
    for (const auto& [i, c] : coeffs_) {
      if (!first)
        s += " + ";
      first = false;
      const bool simple = c.terms().size() == 1 && c.is_constant();
      s += simple ? c.to_string() : "(" + c.to_string() + ")";
      s += "*[" + basis_->name(i) + "]";
    }
    return s;
  }

private:
  void require_compatible(const Element& o) const {
    if (o.dim() != dim() || o.nvars_ != nvars_)
      throw InputError("incompatible elements");
  }

  BasisPtr basis_;
  std::size_t nvars_;
  CoeffMap coeffs_;
};

} // namespace eqfrob
