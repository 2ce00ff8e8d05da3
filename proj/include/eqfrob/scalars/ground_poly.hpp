#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "eqfrob/errors.hpp"
#include "eqfrob/scalars/rational.hpp"

namespace eqfrob {

using Exponents = std::vector<unsigned>;

inline unsigned total_degree(const Exponents& e) {
  return std::accumulate(e.begin(), e.end(), 0u);
}

// Graded lexicographic order, u1 > u2 > ... ; "greater" sorts the leading
// monomial first.
struct GrlexGreater {
  bool operator()(const Exponents& a, const Exponents& b) const {
    const unsigned da = total_degree(a), db = total_degree(b);
    if (da != db)
      return da > db;
    return a > b;
  }
};

// Multivariate polynomial over Q in the equivariant parameters u_1..u_r.
// Each u_a carries cohomological degree 2.
class GroundPoly {
public:
  using TermMap = std::map<Exponents, Rational, GrlexGreater>;

  explicit GroundPoly(std::size_t nvars = 0) : nvars_(nvars) {}
  GroundPoly(std::size_t nvars, const Rational& c) : nvars_(nvars) {
    if (c != 0)
      terms_.emplace(Exponents(nvars, 0), c);
  }

  static GroundPoly variable(std::size_t nvars, std::size_t index) {
    if (index >= nvars)
      throw InputError("variable index out of range");
    Exponents e(nvars, 0);
    e[index] = 1;
    GroundPoly p(nvars);
    p.terms_.emplace(std::move(e), Rational(1));
    return p;
  }

  static GroundPoly monomial(Exponents e, const Rational& c) {
    GroundPoly p(e.size());
    if (c != 0)
      p.terms_.emplace(std::move(e), c);
    return p;
  }

  std::size_t nvars() const noexcept { return nvars_; }
  const TermMap& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  bool is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && total_degree(terms_.begin()->first) == 0);
  }

  void add_term(const Exponents& e, const Rational& c) {
    if (e.size() != nvars_)
      throw InputError("exponent vector length does not match variable count");
    if (c == 0)
      return;
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0)
        terms_.erase(it);
    }
  }

  Rational coefficient(const Exponents& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? Rational(0) : it->second;
  }

  // Value at u = 0; a ring homomorphism onto Q.
  Rational constant_term() const { return coefficient(Exponents(nvars_, 0)); }

  Rational evaluate(std::span<const Rational> point) const {
    if (point.size() != nvars_)
      throw InputError("evaluation point has wrong dimension");
    Rational acc = 0;
    for (const auto& [e, c] : terms_) {
      Rational t = c;
      for (std::size_t i = 0; i < nvars_; ++i)
        for (unsigned k = 0; k < e[i]; ++k)
          t *= point[i];
      acc += t;
    }
    return acc;
  }

  // Substitutes rationals for the variables, keeping the variable count.
  GroundPoly specialize(std::span<const Rational> point) const {
    return GroundPoly(nvars_, evaluate(point));
  }

  // Degree in the u's; -1 for the zero polynomial.
  int degree() const { return terms_.empty() ? -1 : static_cast<int>(total_degree(terms_.begin()->first)); }

  // Lowest total degree present; -1 for zero.
  int min_degree() const {
    int m = -1;
    for (const auto& [e, c] : terms_) {
      const int d = static_cast<int>(total_degree(e));
      if (m < 0 || d < m)
        m = d;
    }
    return m;
  }

  GroundPoly homogeneous_part(unsigned k) const {
    GroundPoly out(nvars_);
    for (const auto& [e, c] : terms_)
      if (total_degree(e) == k)
        out.terms_.emplace(e, c);
    return out;
  }

  bool is_homogeneous() const { return terms_.empty() || min_degree() == degree(); }

  const std::pair<const Exponents, Rational>& leading_term() const {
    if (terms_.empty())
      throw MathError("leading term of zero polynomial");
    return *terms_.begin();
  }

  GroundPoly with_nvars(std::size_t nvars) const {
    if (nvars == nvars_)
      return *this;
    if (!is_constant())
      throw InputError("cannot change variable count of a non-constant polynomial");
    return GroundPoly(nvars, constant_term());
  }

  GroundPoly& operator+=(const GroundPoly& o) {
    require_same(o);
    for (const auto& [e, c] : o.terms_)
      add_term(e, c);
    return *this;
  }
  GroundPoly& operator-=(const GroundPoly& o) {
    require_same(o);
    for (const auto& [e, c] : o.terms_)
      add_term(e, -c);
    return *this;
  }
  GroundPoly& operator*=(const Rational& s) {
    if (s == 0) {
      terms_.clear();
      return *this;
    }
    for (auto& [e, c] : terms_)
      c *= s;
    return *this;
  }

  friend GroundPoly operator+(GroundPoly a, const GroundPoly& b) { return a += b; }
  friend GroundPoly operator-(GroundPoly a, const GroundPoly& b) { return a -= b; }
  friend GroundPoly operator-(GroundPoly a) {
    for (auto& [e, c] : a.terms_)
      c = -c;
    return a;
  }
  friend GroundPoly operator*(GroundPoly a, const Rational& s) { return a *= s; }
  friend GroundPoly operator*(const Rational& s, GroundPoly a) { return a *= s; }

  friend GroundPoly operator*(const GroundPoly& a, const GroundPoly& b) {
    a.require_same(b);
    GroundPoly out(a.nvars_);
    if (a.is_zero() || b.is_zero())
      return out;
    Exponents e(a.nvars_);
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_) {
        for (std::size_t i = 0; i < a.nvars_; ++i)
          e[i] = ea[i] + eb[i];
        out.add_term(e, ca * cb);
      }
    return out;
  }
  GroundPoly& operator*=(const GroundPoly& o) { return *this = *this * o; }

  friend bool operator==(const GroundPoly& a, const GroundPoly& b) {
    return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
  }

  // Exact quotient a / b, or nullopt when b does not divide a.
  std::optional<GroundPoly> divide_exact(const GroundPoly& divisor) const {
    require_same(divisor);
    if (divisor.is_zero())
      throw MathError("division by zero polynomial");
    GroundPoly quotient(nvars_);
    GroundPoly rem = *this;
    const auto& [dlead_e, dlead_c] = divisor.leading_term();
    Exponents q_e(nvars_);
    while (!rem.is_zero()) {
      const auto& [re, rc] = rem.leading_term();
      for (std::size_t i = 0; i < nvars_; ++i) {
        if (re[i] < dlead_e[i])
          return std::nullopt;
        q_e[i] = re[i] - dlead_e[i];
      }
      const Rational qc = rc / dlead_c;
      GroundPoly step = GroundPoly::monomial(q_e, qc);
      quotient.add_term(q_e, qc);
      rem -= step * divisor;
    }
    return quotient;
  }

  std::string to_string(const std::vector<std::string>& names = {}) const {
    if (terms_.empty())
      return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : terms_) {
      const bool is_const = total_degree(e) == 0;
      Rational mag = abs(c);
      if (first) {
        if (c < 0)
          os << "-";
      } else {
        os << (c < 0 ? " - " : " + ");
      }
      first = false;
      if (is_const || mag != 1) {
        os << mag.get_str();
        if (!is_const)
          os << "*";
      }
      bool first_var = true;
      for (std::size_t i = 0; i < nvars_; ++i) {
        if (e[i] == 0)
          continue;
        if (!first_var)
          os << "*";
        first_var = false;
        os << variable_name(i, names);
        if (e[i] > 1)
          os << "^" << e[i];
      }
    }
    return os.str();
  }

  std::string variable_name(std::size_t i, const std::vector<std::string>& names) const {
    if (i < names.size())
      return names[i];
    if (nvars_ == 1)
      return "u";
    return "u" + std::to_string(i + 1);
  }

private:
  void require_same(const GroundPoly& o) const {
    if (o.nvars_ != nvars_)
      throw InputError("polynomial variable count mismatch (" + std::to_string(nvars_) + " vs " +
                       std::to_string(o.nvars_) + ")");
  }

  std::size_t nvars_;
  TermMap terms_;
};

// The ring homomorphism u_a -> 0.
inline Rational specialize_zero(const GroundPoly& p) { return p.constant_term(); }

} // namespace eqfrob
