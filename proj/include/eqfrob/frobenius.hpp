#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "eqfrob/mc.hpp"
#include "eqfrob/scalars/rational_fn.hpp"

namespace eqfrob {

using PolySeries = SuperSeries<GroundPoly>;

struct Potential {
  PolySeries phi;
  unsigned order = 0;
  PolyMatrix eta;
  GroundPoly eta_det;
  PolyMatrix eta_adj; // eta * eta_adj = eta_det * I
  Matrix<RationalFn> eta_inv;
  std::optional<bool> formulas_agree; // set when B was available
};

// Coefficient-wise integral of a series; an odd-degree integral picks up the
// sign of passing odd monomials.
inline PolySeries integrate_series(const ElementSeries& s, const DGBVAlgebra& alg) {
  const bool odd = (alg.basis()->top_degree() & 1) != 0;
  return s.map<GroundPoly>([&](const Element& c) { return integrate(c, alg); }, GroundPoly(alg.nvars), odd);
}

inline Potential make_potential(PolySeries phi, unsigned order, PolyMatrix eta) {
  const std::size_t nv = matrix_nvars(eta) ? matrix_nvars(eta) : phi.zero_coeff().nvars();
  Potential p{std::move(phi), order, std::move(eta), GroundPoly(nv), {}, {}, std::nullopt};
  p.eta_det = determinant(p.eta);
  if (p.eta_det.is_zero())
    throw InputError("pairing is degenerate over the fraction field");
  p.eta_adj = adjugate(p.eta);
  const std::size_t m = p.eta.rows();
  p.eta_inv = Matrix<RationalFn>(m, m, RationalFn(nv));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      p.eta_inv(i, j) = RationalFn(p.eta_adj(i, j), p.eta_det);
  return p;
}

// Phi = int Gamma^3/6 - 1/4 Gamma^2 (Gamma - Gamma_1), and when B is known
// also Phi = int Gamma^3/6 - 1/2 (delta B)(Delta B); the two must agree.
inline Potential potential(const MCSolution& sol, const DGBVAlgebra& alg, const std::vector<Element>& classes) {
  if (!sol.verified())
    throw InputError("potential needs a verified MC solution");
  const MultTable& T = *alg.table;
  const ElementSeries& G = sol.gamma;
  const ElementSeries G2 = element_series_mul(G, G, T);
  const ElementSeries G3 = element_series_mul(G2, G, T);
  const ElementSeries G1 = G.degree_part(1);
  ElementSeries body = Rational(1, 6) * G3 - Rational(1, 4) * element_series_mul(G2, G - G1, T);
  PolySeries phi = integrate_series(body, alg);

  std::optional<bool> agree;
  if (sol.b_series) {
    const ElementSeries& B = *sol.b_series;
    if (!(apply_series(alg.bv, B) == G - G1))
      throw MathError("B-series does not reproduce Gamma - Gamma_1");
    ElementSeries body2 = Rational(1, 6) * G3 -
                          Rational(1, 2) * element_series_mul(apply_series(alg.delta, B), apply_series(alg.bv, B), T);
    agree = integrate_series(body2, alg) == phi;
  }
  Potential p = make_potential(std::move(phi), sol.order, pairing_matrix(classes, alg).eta);
  p.formulas_agree = agree;
  return p;
}

// T[a][b][c] = d_a d_b d_c Phi (left derivatives, d_c first).
using ThirdDerivatives = std::vector<std::vector<std::vector<PolySeries>>>;

inline ThirdDerivatives third_derivatives(const PolySeries& phi) {
  const std::size_t m = phi.nvars();
  ThirdDerivatives t(m, std::vector<std::vector<PolySeries>>(m));
  std::vector<PolySeries> d1;
  for (std::size_t c = 0; c < m; ++c)
    d1.push_back(phi.partial(c));
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b)
      for (std::size_t c = 0; c < m; ++c)
        t[a][b].push_back(d1[c].partial(b).partial(a));
  return t;
}

inline PolySeries constant_series(const PolySeries& like, const GroundPoly& c) {
  PolySeries s = like.empty_like();
  s.add_term(SuperMonomial(like.nvars(), 0), c);
  return s;
}

// d_0 d_a d_b Phi = eta_ab exactly.
inline Report metric_check(const Potential& p) {
  Report r;
  const std::size_t m = p.phi.nvars();
  detail::Sweep sw(r, "frobenius.metric");
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) {
      const PolySeries lhs = p.phi.partial(b).partial(a).partial(0);
      const PolySeries rhs = constant_series(p.phi, p.eta(a, b));
      if (lhs == rhs)
        sw.ok();
      else
        sw.fail("(" + std::to_string(a) + "," + std::to_string(b) + ")", "non-constant or wrong third derivative",
                p.eta(a, b).to_string());
    }
  sw.finish();
  return r;
}

// Lowest x-degree carrying a nonzero coefficient, if any.
inline std::optional<unsigned> lowest_degree(const PolySeries& s) {
  if (s.is_zero())
    return std::nullopt;
  return total_degree(s.terms().begin()->first);
}

struct WdvvOutcome {
  Report report;
  unsigned checked_through = 0;
};

// sum_{e,p} T_abe adj_ep T_pcd - (-1)^{|a|(|b|+|c|+|p|)} T_bce adj_ep T_apd, with
// adj the adjugate of eta, must vanish through x-degree `through`.
inline WdvvOutcome wdvv_check(const Potential& p, std::optional<unsigned> through = std::nullopt) {
  WdvvOutcome out;
  const std::size_t m = p.phi.nvars();
  const auto& vars = *p.phi.variables();
  const unsigned deg = through ? *through : (p.order >= 3 ? p.order - 3 : 0);
  out.checked_through = deg;
  const ThirdDerivatives T = third_derivatives(p.phi);
  const std::size_t nv = p.phi.zero_coeff().nvars();
  auto scaled = [&](const PolySeries& s, const GroundPoly& c) {
    return s.map<GroundPoly>([&](const GroundPoly& x) { return x * c; }, GroundPoly(nv));
  };
  auto par = [&](std::size_t i) { return vars[i].odd ? 1 : 0; };
  detail::Sweep sw(out.report, "frobenius.wdvv");
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b)
      for (std::size_t c = 0; c < m; ++c)
        for (std::size_t d = 0; d < m; ++d) {
          PolySeries res = p.phi.empty_like();
          for (std::size_t e = 0; e < m; ++e)
            for (std::size_t q = 0; q < m; ++q) {
              const GroundPoly& w = p.eta_adj(e, q);
              if (w.is_zero())
                continue;
              res += series_mul(scaled(T[a][b][e], w), T[q][c][d]);
              PolySeries second = series_mul(scaled(T[b][c][e], w), T[a][q][d]);
              if ((par(a) * (par(b) + par(c) + par(q))) % 2)
                res += second;
              else
                res -= second;
            }
          auto low = lowest_degree(res.truncated(deg));
          if (!low)
            sw.ok();
          else
            sw.fail("(" + std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(c) + "," +
                        std::to_string(d) + ")",
                    "residual of degree " + std::to_string(*low), "0");
        }
  sw.finish();
  return out;
}

// T_abc totally super-symmetric and T_abc(0) = int e_a e_b e_c.
inline Report symmetry_check(const Potential& p, const std::vector<Element>& classes, const DGBVAlgebra& alg) {
  Report r;
  const std::size_t m = p.phi.nvars();
  const auto& vars = *p.phi.variables();
  const ThirdDerivatives T = third_derivatives(p.phi);
  auto sign = [&](std::size_t i, std::size_t j) { return vars[i].odd && vars[j].odd ? Rational(-1) : Rational(1); };
  detail::Sweep sym(r, "frobenius.supersymmetry");
  detail::Sweep tri(r, "frobenius.triple_integrals");
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b)
      for (std::size_t c = 0; c < m; ++c) {
        const std::string w = "(" + std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(c) + ")";
        const bool ok = T[a][b][c] == sign(a, b) * T[b][a][c] && T[a][b][c] == sign(b, c) * T[a][c][b];
        if (ok)
          sym.ok();
        else
          sym.fail(w, "", "");
        const GroundPoly at0 = T[a][b][c].coefficient(SuperMonomial(m, 0));
        const GroundPoly integral =
            integrate(wedge(wedge(classes[a], classes[b], *alg.table), classes[c], *alg.table), alg);
        if (at0 == integral)
          tri.ok();
        else
          tri.fail(w, at0.to_string(), integral.to_string());
      }
  sym.finish();
  tri.finish();
  return r;
}

// Coefficient-wise specialization of the ground variables at a point.
inline PolySeries specialize_series(const PolySeries& s, const std::vector<Rational>& point) {
  return s.map<GroundPoly>([&](const GroundPoly& c) { return GroundPoly(0, c.evaluate(point)); }, GroundPoly(0));
}

inline Potential specialize_potential(const Potential& p, const std::vector<Rational>& point) {
  PolyMatrix eta = zero_poly_matrix(p.eta.rows(), p.eta.cols(), 0);
  for (std::size_t i = 0; i < eta.rows(); ++i)
    for (std::size_t j = 0; j < eta.cols(); ++j)
      eta(i, j) = GroundPoly(0, p.eta(i, j).evaluate(point));
  return make_potential(specialize_series(p.phi, point), p.order, std::move(eta));
}

// f(Phi_K) at u = 0 against the ordinary potential, and WDVV for Phi_K at
// u = u0.
inline Report specialize_and_compare(const Potential& equivariant, const Potential& ordinary,
                                     const std::optional<std::vector<Rational>>& family_point = std::nullopt) {
  Report r;
  const std::size_t nv = equivariant.phi.zero_coeff().nvars();
  const Potential at0 = specialize_potential(equivariant, std::vector<Rational>(nv, Rational(0)));
  const PolySeries ord = ordinary.phi.zero_coeff().nvars() == 0
                             ? ordinary.phi
                             : specialize_series(ordinary.phi, std::vector<Rational>(ordinary.phi.zero_coeff().nvars(), Rational(0)));
  if (*at0.phi.variables() != *ord.variables()) {
    r.fail("frobenius.specialize_zero", "variables differ");
  } else {
    PolySeries diff = at0.phi.truncated(ordinary.order) - ord.truncated(equivariant.order);
    r.expect(diff.is_zero(), "frobenius.specialize_zero",
             diff.is_zero() ? "" : diff.monomial_string(diff.terms().begin()->first));
  }
  if (family_point) {
    const Potential fam = specialize_potential(equivariant, *family_point);
    WdvvOutcome w = wdvv_check(fam);
    std::string pt;
    for (const auto& q : *family_point)
      pt += (pt.empty() ? "" : ",") + q.get_str();
    r.expect(w.report.passed(), "frobenius.family_wdvv", w.report.passed() ? "" : "u=" + pt, "u=" + pt);
  }
  return r;
}

} // namespace eqfrob
