#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "eqfrob/graded/element.hpp"
#include "eqfrob/scalars/ground_poly.hpp"

namespace eqfrob {

// Formal variable x^a; its parity equals the parity of the class e_a it
// multiplies, so every summand x^a e_a is even.
struct SuperVariable {
  std::string name;
  bool odd = false;

  friend bool operator==(const SuperVariable&, const SuperVariable&) = default;
};

using VariableList = std::shared_ptr<const std::vector<SuperVariable>>;

// Exponent vector; odd variables appear at most once.  Normal form keeps the
// variables in ascending index order with the sign absorbed into the
// coefficient.
using SuperMonomial = std::vector<unsigned>;

struct MonomialOrder {
  bool operator()(const SuperMonomial& a, const SuperMonomial& b) const {
    const unsigned da = total_degree(a), db = total_degree(b);
    if (da != db)
      return da < db;
    return a > b;
  }
};

// Koszul sign hook: moving a coefficient past an odd monomial.
inline GroundPoly koszul_twist(const GroundPoly& c, bool) { return c; }
inline Element koszul_twist(const Element& c, bool flip) { return c.parity_twist(flip); }

// Truncated power series in supercommuting variables with coefficients of
// type C (Element for Gamma, GroundPoly for Phi).  Terms above the order cap
// are dropped; that is ordinary power-series truncation, not model capping.
template <class C>
class SuperSeries {
public:
  using TermMap = std::map<SuperMonomial, C, MonomialOrder>;

  SuperSeries(VariableList vars, unsigned order_cap, C zero)
      : vars_(std::move(vars)), cap_(order_cap), zero_(std::move(zero)) {
    if (!vars_)
      throw InputError("series without variables");
  }

  const VariableList& variables() const noexcept { return vars_; }
  std::size_t nvars() const noexcept { return vars_->size(); }
  unsigned order_cap() const noexcept { return cap_; }
  const C& zero_coeff() const noexcept { return zero_; }
  const TermMap& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }

  SuperSeries empty_like() const { return SuperSeries(vars_, cap_, zero_); }

  bool odd_monomial(const SuperMonomial& m) const {
    bool odd = false;
    for (std::size_t a = 0; a < m.size(); ++a)
      if ((*vars_)[a].odd && (m[a] & 1u))
        odd = !odd;
    return odd;
  }

  void validate_monomial(const SuperMonomial& m) const {
    if (m.size() != vars_->size())
      throw InputError("monomial has wrong number of variables");
    for (std::size_t a = 0; a < m.size(); ++a)
      if ((*vars_)[a].odd && m[a] > 1)
        throw InputError("odd variable " + (*vars_)[a].name + " repeated in monomial");
  }

  void add_term(const SuperMonomial& m, const C& c) {
    validate_monomial(m);
    if (total_degree(m) > cap_ || c.is_zero())
      return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero())
        terms_.erase(it);
    }
  }

  C coefficient(const SuperMonomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? zero_ : it->second;
  }

  // Homogeneous part of x-degree n.
  SuperSeries degree_part(unsigned n) const {
    SuperSeries out = empty_like();
    for (const auto& [m, c] : terms_)
      if (total_degree(m) == n)
        out.terms_.emplace(m, c);
    return out;
  }

  SuperSeries truncated(unsigned n) const {
    SuperSeries out(vars_, n, zero_);
    for (const auto& [m, c] : terms_)
      if (total_degree(m) <= n)
        out.terms_.emplace(m, c);
    return out;
  }

  SuperSeries& operator+=(const SuperSeries& o) {
    require_compatible(o);
    for (const auto& [m, c] : o.terms_)
      add_term(m, c);
    return *this;
  }
  SuperSeries& operator-=(const SuperSeries& o) {
    require_compatible(o);
    for (const auto& [m, c] : o.terms_) {
      C neg = c;
      neg *= Rational(-1);
      add_term(m, neg);
    }
    return *this;
  }
  SuperSeries& operator*=(const Rational& s) {
    if (s == 0) {
      terms_.clear();
      return *this;
    }
    for (auto& [m, c] : terms_)
      c *= s;
    return *this;
  }
  friend SuperSeries operator+(SuperSeries a, const SuperSeries& b) { return a += b; }
  friend SuperSeries operator-(SuperSeries a, const SuperSeries& b) { return a -= b; }
  friend SuperSeries operator*(const Rational& s, SuperSeries a) { return a *= s; }

  friend bool operator==(const SuperSeries& a, const SuperSeries& b) {
    return *a.vars_ == *b.vars_ && a.terms_ == b.terms_;
  }

  // Coefficient-wise map; `odd_op` applies the Koszul sign of an odd
  // operator passing the monomial.
  template <class D, class F>
  SuperSeries<D> map(F&& f, D zero, bool odd_op = false) const {
    SuperSeries<D> out(vars_, cap_, std::move(zero));
    for (const auto& [m, c] : terms_) {
      D v = f(c);
      if (odd_op && odd_monomial(m))
        v *= Rational(-1);
      out.add_term(m, v);
    }
    return out;
  }

  // Product of two monomials in normal form with its Koszul sign; sign 0 when
  // an odd variable repeats.
  static int monomial_product(const std::vector<SuperVariable>& vars, const SuperMonomial& a,
                              const SuperMonomial& b, SuperMonomial& out) {
    out.assign(a.size(), 0);
    int sign = 1;
    unsigned odd_in_b_below = 0;
    // Count pairs (odd i in a, odd j in b) with j < i: each such pair is
    // transposed when merging into ascending order.
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (vars[i].odd) {
        if (a[i] && b[i])
          return 0;
        if (a[i] && (odd_in_b_below & 1u))
          sign = -sign;
        if (b[i])
          ++odd_in_b_below;
      }
      out[i] = a[i] + b[i];
    }
    return sign;
  }

  // Left super-derivative d/dx^a.
  SuperSeries partial(std::size_t a) const {
    if (a >= vars_->size())
      throw InputError("derivative variable out of range");
    SuperSeries out = empty_like();
    for (const auto& [m, c] : terms_) {
      if (m[a] == 0)
        continue;
      SuperMonomial r = m;
      r[a] -= 1;
      C v = c;
      if ((*vars_)[a].odd) {
        unsigned before = 0;
        for (std::size_t b = 0; b < a; ++b)
          if ((*vars_)[b].odd)
            before += m[b];
        if (before & 1u)
          v *= Rational(-1);
      } else {
        v *= Rational(m[a]);
      }
      out.add_term(r, v);
    }
    return out;
  }

  std::string monomial_string(const SuperMonomial& m) const {
    std::string s;
    for (std::size_t a = 0; a < m.size(); ++a) {
      if (m[a] == 0)
        continue;
      if (!s.empty())
        s += "*";
      s += (*vars_)[a].name;
      if (m[a] > 1)
        s += "^" + std::to_string(m[a]);
    }
    return s.empty() ? "1" : s;
  }

  // Monomial as the list of variable names with repetition, e.g.
  // ["x0","x0","x3"].
  std::vector<std::string> monomial_names(const SuperMonomial& m) const {
    std::vector<std::string> out;
    for (std::size_t a = 0; a < m.size(); ++a)
      for (unsigned k = 0; k < m[a]; ++k)
        out.push_back((*vars_)[a].name);
    return out;
  }

private:
  void require_compatible(const SuperSeries& o) const {
    if (*o.vars_ != *vars_)
      throw InputError("series over different variables");
  }

  VariableList vars_;
  unsigned cap_;
  C zero_;
  TermMap terms_;
};

// Series product with Koszul signs: (m1 c1)(m2 c2) = s(m1,m2) m1 m2 (c1' c2)
// where c1' is c1 twisted by the parity of m2.  `mul` multiplies
// coefficients.
template <class C, class Mul>
SuperSeries<C> series_mul(const SuperSeries<C>& s, const SuperSeries<C>& t, Mul&& mul) {
  if (*s.variables() != *t.variables())
    throw InputError("series over different variables");
  SuperSeries<C> out(s.variables(), std::min(s.order_cap(), t.order_cap()), s.zero_coeff());
  SuperMonomial prod;
  for (const auto& [m1, c1] : s.terms())
    for (const auto& [m2, c2] : t.terms()) {
      if (total_degree(m1) + total_degree(m2) > out.order_cap())
        continue;
      const int sign = SuperSeries<C>::monomial_product(*s.variables(), m1, m2, prod);
      if (sign == 0)
        continue;
      C v = mul(koszul_twist(c1, t.odd_monomial(m2)), c2);
      if (sign < 0)
        v *= Rational(-1);
      out.add_term(prod, v);
    }
  return out;
}

inline SuperSeries<GroundPoly> series_mul(const SuperSeries<GroundPoly>& s, const SuperSeries<GroundPoly>& t) {
  return series_mul(s, t, [](const GroundPoly& a, const GroundPoly& b) { return a * b; });
}

// Apply a Q[u]-linear map coefficient-wise; `odd` operators pick up the sign
// of passing each monomial.
template <class C, class F>
SuperSeries<C> apply_linear(const SuperSeries<C>& s, F&& f, bool odd) {
  return s.template map<C>(std::forward<F>(f), s.zero_coeff(), odd);
}

} // namespace eqfrob
