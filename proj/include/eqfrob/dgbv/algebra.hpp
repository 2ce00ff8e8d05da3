#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "eqfrob/dgbv/linear_operator.hpp"
#include "eqfrob/dgbv/report.hpp"
#include "eqfrob/graded/mult_table.hpp"
#include "eqfrob/scalars/fraction_free.hpp"

namespace eqfrob {

// Graded-commutative algebra with differential delta, BV operator Delta and
// an integral functional (one rational weight per basis entry).
struct DGBVAlgebra {
  std::string name;
  std::shared_ptr<const MultTable> table;
  std::size_t nvars = 0;
  LinearOperator delta;
  LinearOperator bv;
  std::vector<Rational> integral_row;

  const BasisPtr& basis() const { return table->basis(); }
  std::size_t dim() const { return table->dim(); }
  Element zero() const { return Element(basis(), nvars); }
  Element unit() const { return identity_element(*table, nvars); }
  Element e(std::size_t i) const { return Element::basis_vector(basis(), nvars, i); }
};

inline GroundPoly integrate(const Element& a, const DGBVAlgebra& alg) {
  GroundPoly out(alg.nvars);
  for (const auto& [i, c] : a.coeffs())
    if (alg.integral_row.at(i) != 0)
      out += c * alg.integral_row[i];
  return out;
}

namespace detail {

// Bracket of parity-homogeneous a (odd iff a_odd) with any b.
inline std::optional<Element> try_bracket_homogeneous(const Element& a, bool a_odd, const Element& b,
                                                      const DGBVAlgebra& alg) {
  auto ab = try_wedge(a, b, *alg.table);
  if (!ab)
    return std::nullopt;
  auto d_ab = alg.bv.try_apply(*ab);
  auto d_a = alg.bv.try_apply(a);
  auto d_b = alg.bv.try_apply(b);
  if (!d_ab || !d_a || !d_b)
    return std::nullopt;
  auto t1 = try_wedge(*d_a, b, *alg.table);
  auto t2 = try_wedge(a, *d_b, *alg.table);
  if (!t1 || !t2)
    return std::nullopt;
  Element out = *d_ab - *t1;
  if (a_odd)
    out += *t2;
  else
    out -= *t2;
  if (a_odd)
    out *= Rational(-1);
  return out;
}

} // namespace detail

// [a . b] = (-1)^|a| (Delta(ab) - (Delta a) b - (-1)^|a| a Delta b), extended
// bilinearly over the parity components of a.  nullopt if any term leaves
// the cap.
inline std::optional<Element> try_bracket(const Element& a, const Element& b, const DGBVAlgebra& alg) {
  Element out = alg.zero();
  for (bool odd : {false, true}) {
    Element part = a.parity_component(odd);
    if (part.is_zero())
      continue;
    auto r = detail::try_bracket_homogeneous(part, odd, b, alg);
    if (!r)
      return std::nullopt;
    out += *r;
  }
  return out;
}

inline Element bracket(const Element& a, const Element& b, const DGBVAlgebra& alg) {
  auto r = try_bracket(a, b, alg);
  if (!r)
    throw CapExceeded("cap exceeded: bracket " + a.to_string() + " . " + b.to_string() +
                      " leaves the truncated model; raise the cap");
  return std::move(*r);
}

namespace detail {

// Collects the outcome of an exhaustive sweep: the first few failing
// witnesses are recorded individually, followed by a summary line.
class Sweep {
public:
  Sweep(Report& report, std::string check, std::size_t max_witnesses = 5)
      : report_(report), check_(std::move(check)), max_(max_witnesses) {}

  void ok() { ++checked_; }
  void skipped() { ++skipped_; }
  void fail(std::string witness, const Element& lhs, const Element& rhs) {
    fail(std::move(witness), lhs.to_string(), rhs.to_string());
  }
  void fail(std::string witness, std::string lhs, std::string rhs) {
    ++checked_;
    if (failed_++ < max_)
      report_.fail(check_, std::move(witness), std::move(lhs), std::move(rhs));
  }
  void check(bool good, const std::string& witness, const Element& lhs, const Element& rhs) {
    if (good)
      ok();
    else
      fail(witness, lhs, rhs);
  }

  void finish() {
    std::string note = std::to_string(checked_) + " cases checked";
    if (skipped_)
      note += ", " + std::to_string(skipped_) + " outside the cap";
    if (failed_ == 0)
      report_.pass(check_, note);
    else if (failed_ > max_)
      report_.fail(check_, "", "", "", std::to_string(failed_) + " failures; " + note);
  }

  std::size_t failures() const noexcept { return failed_; }

private:
  Report& report_;
  std::string check_;
  std::size_t max_;
  std::size_t checked_ = 0, skipped_ = 0, failed_ = 0;
};

inline std::string tuple_name(const GradedBasis& b, std::initializer_list<std::size_t> idx) {
  std::string s = "(";
  bool first = true;
  for (auto i : idx) {
    if (!first)
      s += ", ";
    first = false;
    s += b.name(i);
  }
  return s + ")";
}

// Squares to zero on every column where the square is defined.
inline void check_square_zero(Report& report, const std::string& check, const LinearOperator& op) {
  Sweep sw(report, check);
  const LinearOperator sq = op * op;
  for (std::size_t j = 0; j < op.dim(); ++j) {
    if (!sq.defined(j)) {
      sw.skipped();
      continue;
    }
    Element col = sq.column_element(j);
    sw.check(col.is_zero(), op.basis()->name(j), col, col.zero_like());
  }
  sw.finish();
}

inline void check_anticommute(Report& report, const std::string& check, const LinearOperator& a,
                              const LinearOperator& b) {
  Sweep sw(report, check);
  const LinearOperator c = graded_commutator(a, b);
  for (std::size_t j = 0; j < a.dim(); ++j) {
    if (!c.defined(j)) {
      sw.skipped();
      continue;
    }
    Element col = c.column_element(j);
    sw.check(col.is_zero(), a.basis()->name(j), col, col.zero_like());
  }
  sw.finish();
}

// Brackets and products of basis pairs, nullopt outside the cap.
struct PairCache {
  std::vector<std::vector<std::optional<Element>>> product, bracket;

  explicit PairCache(const DGBVAlgebra& alg, bool with_brackets) {
    const std::size_t n = alg.dim();
    product.assign(n, std::vector<std::optional<Element>>(n));
    if (with_brackets)
      bracket.assign(n, std::vector<std::optional<Element>>(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        product[i][j] = try_wedge(alg.e(i), alg.e(j), *alg.table);
        if (with_brackets)
          bracket[i][j] = try_bracket(alg.e(i), alg.e(j), alg);
      }
  }
};

// sum_k x_k [e_a . e_k] from cached pair brackets.
inline std::optional<Element> bracket_with(const PairCache& pc, std::size_t a, const Element& x,
                                           const DGBVAlgebra& alg) {
  Element out = alg.zero();
  for (const auto& [k, c] : x.coeffs()) {
    if (!pc.bracket[a][k])
      return std::nullopt;
    out += c * *pc.bracket[a][k];
  }
  return out;
}

} // namespace detail

// Delta^2 = 0, Delta 1 = 0 and the odd Poisson identity
// [a.(bc)] = [a.b]c + (-1)^{(|a|+1)|b|} b[a.c] on all in-cap basis triples.
inline Report check_gbv(const DGBVAlgebra& alg) {
  Report report;
  const auto& B = *alg.basis();
  detail::check_square_zero(report, "gbv.Delta_squared", alg.bv);
  {
    auto d1 = alg.bv.try_apply(alg.unit());
    report.expect(d1 && d1->is_zero(), "gbv.Delta_unit", B.name(alg.table->identity()));
  }
  detail::PairCache pc(alg, true);
  detail::Sweep sw(report, "gbv.odd_poisson");
  const std::size_t n = alg.dim();
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c) {
        const auto& bc = pc.product[b][c];
        const auto& ab = pc.bracket[a][b];
        const auto& ac = pc.bracket[a][c];
        if (!bc || !ab || !ac) {
          sw.skipped();
          continue;
        }
        auto lhs = detail::bracket_with(pc, a, *bc, alg);
        auto r1 = try_wedge(*ab, alg.e(c), *alg.table);
        auto r2 = try_wedge(alg.e(b), *ac, *alg.table);
        if (!lhs || !r1 || !r2) {
          sw.skipped();
          continue;
        }
        const bool neg = ((B.odd(a) ? 0 : 1) & (B.odd(b) ? 1 : 0)) != 0;
        Element rhs = neg ? *r1 - *r2 : *r1 + *r2;
        sw.check(*lhs == rhs, detail::tuple_name(B, {a, b, c}), *lhs, rhs);
      }
  sw.finish();
  return report;
}

// delta^2 = 0, delta Delta + Delta delta = 0, and the Leibniz rule
// delta(ab) = (delta a) b + (-1)^|a| a delta b on in-cap basis pairs.
inline Report check_dgbv(const DGBVAlgebra& alg) {
  Report report;
  const auto& B = *alg.basis();
  detail::check_square_zero(report, "dgbv.delta_squared", alg.delta);
  detail::check_anticommute(report, "dgbv.delta_Delta_anticommute", alg.delta, alg.bv);
  detail::Sweep sw(report, "dgbv.leibniz");
  const std::size_t n = alg.dim();
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      auto ab = try_wedge(alg.e(a), alg.e(b), *alg.table);
      auto da = alg.delta.try_apply(alg.e(a));
      auto db = alg.delta.try_apply(alg.e(b));
      if (!ab || !da || !db) {
        sw.skipped();
        continue;
      }
      auto lhs = alg.delta.try_apply(*ab);
      auto t1 = try_wedge(*da, alg.e(b), *alg.table);
      auto t2 = try_wedge(alg.e(a), *db, *alg.table);
      if (!lhs || !t1 || !t2) {
        sw.skipped();
        continue;
      }
      Element rhs = B.odd(a) ? *t1 - *t2 : *t1 + *t2;
      sw.check(*lhs == rhs, detail::tuple_name(B, {a, b}), *lhs, rhs);
    }
  sw.finish();
  return report;
}

// Integral axioms on in-cap basis pairs:
//   int (delta a) b = (-1)^{|a|+1} int a delta b
//   int (Delta a) b = (-1)^{|a|}   int a Delta b
// plus Stokes (int delta a = 0) and invariance int (ab)c = int a(bc).
inline Report check_integral(const DGBVAlgebra& alg) {
  Report report;
  const auto& B = *alg.basis();
  const std::size_t n = alg.dim();
  auto pair_sweep = [&](const LinearOperator& op, const std::string& check, bool plus_one) {
    detail::Sweep sw(report, check);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        auto oa = op.try_apply(alg.e(a));
        auto ob = op.try_apply(alg.e(b));
        if (!oa || !ob) {
          sw.skipped();
          continue;
        }
        auto l = try_wedge(*oa, alg.e(b), *alg.table);
        auto r = try_wedge(alg.e(a), *ob, *alg.table);
        if (!l || !r) {
          sw.skipped();
          continue;
        }
        const GroundPoly lhs = integrate(*l, alg);
        GroundPoly rhs = integrate(*r, alg);
        if (B.odd(a) != plus_one)
          rhs = -rhs;
        if (lhs == rhs)
          sw.ok();
        else
          sw.fail(detail::tuple_name(B, {a, b}), lhs.to_string(), rhs.to_string());
      }
    sw.finish();
  };
  pair_sweep(alg.delta, "integral.delta_adjoint", true);
  pair_sweep(alg.bv, "integral.Delta_adjoint", false);

  {
    detail::Sweep sw(report, "integral.stokes");
    for (std::size_t a = 0; a < n; ++a) {
      auto da = alg.delta.try_apply(alg.e(a));
      if (!da) {
        sw.skipped();
        continue;
      }
      const GroundPoly v = integrate(*da, alg);
      if (v.is_zero())
        sw.ok();
      else
        sw.fail(B.name(a), v.to_string(), "0");
    }
    sw.finish();
  }
  {
    detail::PairCache pc(alg, false);
    detail::Sweep sw(report, "integral.frobenius_invariance");
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        for (std::size_t c = 0; c < n; ++c) {
          const auto& ab = pc.product[a][b];
          const auto& bc = pc.product[b][c];
          if (!ab || !bc) {
            sw.skipped();
            continue;
          }
          auto l = try_wedge(*ab, alg.e(c), *alg.table);
          auto r = try_wedge(alg.e(a), *bc, *alg.table);
          if (!l || !r) {
            sw.skipped();
            continue;
          }
          const GroundPoly lhs = integrate(*l, alg), rhs = integrate(*r, alg);
          if (lhs == rhs)
            sw.ok();
          else
            sw.fail(detail::tuple_name(B, {a, b, c}), lhs.to_string(), rhs.to_string());
        }
    sw.finish();
  }
  return report;
}

struct Pairing {
  PolyMatrix eta;
  GroundPoly det;
  bool nice_over_fractions = false; // det != 0
  bool nice_over_ground = false;    // det a nonzero constant
};

// eta_ab = int class_a ^ class_b for delta-closed classes.
inline Pairing pairing_matrix(const std::vector<Element>& classes, const DGBVAlgebra& alg) {
  const std::size_t m = classes.size();
  for (std::size_t a = 0; a < m; ++a) {
    Element d = alg.delta.apply(classes[a]);
    if (!d.is_zero())
      throw InputError("pairing class " + std::to_string(a) + " (" + classes[a].to_string() +
                       ") is not closed");
  }
  Pairing p{zero_poly_matrix(m, m, alg.nvars), GroundPoly(alg.nvars)};
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b)
      p.eta(a, b) = integrate(wedge(classes[a], classes[b], *alg.table), alg);
  p.det = determinant(p.eta);
  p.nice_over_fractions = !p.det.is_zero();
  p.nice_over_ground = p.nice_over_fractions && p.det.is_constant();
  return p;
}

} // namespace eqfrob
