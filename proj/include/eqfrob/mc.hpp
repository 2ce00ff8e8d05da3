#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "eqfrob/cartan.hpp"
#include "eqfrob/graded/super_series.hpp"

namespace eqfrob {

using ElementSeries = SuperSeries<Element>;

struct OrderCertificate {
  unsigned n = 0;
  bool mc_residual_zero = false;      // delta Gamma_n + 1/2 sum Delta(Gamma_p Gamma_q) = 0
  bool bracket_residual_zero = false; // delta Gamma_n + 1/2 sum [Gamma_p . Gamma_q] = 0
  bool delta_gamma_zero = false;      // Delta Gamma_n = 0
  bool in_image_of_Delta = false;
  bool x0_absent = false;
  bool grading = false;          // coefficient parity and degree match the monomial
  bool recursions_agree = false; // gamma- and phi-recursions coincide (Cartan solver only)

  bool all(bool need_recursions) const {
    return mc_residual_zero && bracket_residual_zero && delta_gamma_zero && in_image_of_Delta && x0_absent &&
           grading && (!need_recursions || recursions_agree);
  }
};

struct MCSolution {
  ElementSeries gamma;
  unsigned order = 0;
  std::vector<OrderCertificate> certificates;
  std::optional<ElementSeries> b_series; // Gamma = Gamma_1 + Delta B
  std::optional<std::string> failure;
  std::string residual; // witness when failure is set
  bool cartan = false;

  bool verified() const {
    if (failure)
      return false;
    for (const auto& c : certificates)
      if (!c.all(cartan))
        return false;
    return true;
  }
};

// x^a with the parity of the a-th class.
inline VariableList mc_variables(const std::vector<Element>& classes) {
  auto vars = std::make_shared<std::vector<SuperVariable>>();
  for (std::size_t a = 0; a < classes.size(); ++a) {
    auto p = classes[a].parity();
    if (!p)
      throw InputError("class " + std::to_string(a) + " is not of homogeneous parity");
    vars->push_back({"x" + std::to_string(a), *p});
  }
  return vars;
}

inline SuperMonomial unit_monomial(std::size_t nvars, std::size_t a) {
  SuperMonomial m(nvars, 0);
  m[a] = 1;
  return m;
}

// Gamma_1 = sum_a x^a e_a.
inline ElementSeries gamma_one(const std::vector<Element>& classes, VariableList vars, unsigned order,
                               const Element& zero) {
  ElementSeries g(vars, order, zero);
  for (std::size_t a = 0; a < classes.size(); ++a)
    g.add_term(unit_monomial(classes.size(), a), classes[a]);
  return g;
}

inline ElementSeries element_series_mul(const ElementSeries& s, const ElementSeries& t, const MultTable& table) {
  return series_mul(s, t, [&](const Element& a, const Element& b) { return wedge(a, b, table); });
}

// Operator on a series with the Koszul sign of passing each monomial.
inline ElementSeries apply_series(const LinearOperator& op, const ElementSeries& s) {
  return apply_linear(s, [&](const Element& c) { return op.apply(c); }, op.odd());
}

inline ElementSeries scale_series(const ElementSeries& s, const Rational& q) { return q * s; }

namespace detail {

// Series bracket [s . t] for s of even total degree; Koszul signs come from
// the series-level Delta.
inline ElementSeries series_bracket_even(const ElementSeries& s, const ElementSeries& t, const DGBVAlgebra& alg) {
  const ElementSeries st = element_series_mul(s, t, *alg.table);
  ElementSeries out = apply_series(alg.bv, st);
  out -= element_series_mul(apply_series(alg.bv, s), t, *alg.table);
  out -= element_series_mul(s, apply_series(alg.bv, t), *alg.table);
  return out;
}

// beta_n = sum_{p=1}^{n-1} Gamma_p Gamma_{n-p}.
inline ElementSeries beta_order(const std::vector<ElementSeries>& parts, unsigned n, const MultTable& table) {
  ElementSeries beta = parts[1].empty_like();
  for (unsigned p = 1; p < n; ++p)
    beta += element_series_mul(parts[p], parts[n - p], table);
  return beta;
}

// sum_{p=1}^{n-1} [Gamma_p . Gamma_{n-p}].
inline ElementSeries bracket_sum(const std::vector<ElementSeries>& parts, unsigned n, const DGBVAlgebra& alg) {
  ElementSeries out = parts[1].empty_like();
  for (unsigned p = 1; p < n; ++p)
    out += series_bracket_even(parts[p], parts[n - p], alg);
  return out;
}

inline bool coefficient_grading_ok(const ElementSeries& s, const std::vector<Element>& classes) {
  for (const auto& [m, c] : s.terms()) {
    auto par = c.parity();
    if (!par || *par != s.odd_monomial(m))
      return false;
    // deg x^a = 2 - |e_a|, so every term has total degree 2.
    int expect = 2;
    for (std::size_t a = 0; a < m.size(); ++a)
      if (m[a]) {
        auto da = classes[a].total_degree();
        if (!da)
          return false;
        expect -= static_cast<int>(m[a]) * (2 - *da);
      }
    auto dc = c.total_degree();
    if (!dc || *dc != expect)
      return false;
  }
  return true;
}

inline bool x0_absent(const ElementSeries& s, std::size_t unit_var) {
  for (const auto& [m, c] : s.terms())
    if (m[unit_var] != 0)
      return false;
  return true;
}

// Fills the certificate fields shared by both solvers.
inline void certify(OrderCertificate& cert, const std::vector<ElementSeries>& parts, unsigned n,
                    const DGBVAlgebra& alg, const std::vector<Element>& classes, const QMatrix& delta_q,
                    std::string& residual) {
  const ElementSeries& g = parts[n];
  const ElementSeries beta = beta_order(parts, n, *alg.table);
  // Coefficient form: delta c_m + 1/2 Delta beta_m = 0 (both operators odd,
  // so the monomial signs cancel).
  cert.mc_residual_zero = true;
  for (const auto& [m, b] : beta.terms()) {
    Element res = alg.delta.apply(g.coefficient(m)) + Rational(1, 2) * alg.bv.apply(b);
    if (!res.is_zero()) {
      cert.mc_residual_zero = false;
      residual = g.monomial_string(m) + ": " + res.to_string();
    }
  }
  for (const auto& [m, c] : g.terms())
    if (beta.coefficient(m).is_zero() && !alg.delta.apply(c).is_zero()) {
      cert.mc_residual_zero = false;
      residual = g.monomial_string(m) + ": " + alg.delta.apply(c).to_string();
    }
  ElementSeries br = apply_series(alg.delta, g) + Rational(1, 2) * bracket_sum(parts, n, alg);
  cert.bracket_residual_zero = br.is_zero();
  if (!cert.bracket_residual_zero && residual.empty())
    residual = "bracket form: " + br.monomial_string(br.terms().begin()->first) + ": " +
               br.terms().begin()->second.to_string();
  cert.delta_gamma_zero = apply_series(alg.bv, g).is_zero();
  cert.in_image_of_Delta = true;
  for (const auto& [m, c] : g.terms())
    cert.in_image_of_Delta = cert.in_image_of_Delta && in_rational_image(delta_q, c);
  cert.x0_absent = x0_absent(g, 0);
  cert.grading = coefficient_grading_ok(g, classes);
}

inline QMatrix constant_matrix(const LinearOperator& op) {
  QMatrix m(op.dim(), op.dim(), Rational(0));
  for (std::size_t j = 0; j < op.dim(); ++j)
    for (const auto& [i, v] : op.column(j)) {
      if (!v.is_constant())
        throw InputError("operator '" + op.name() + "' has non-constant entries");
      m(i, j) = v.constant_term();
    }
  return m;
}

} // namespace detail

// Order-by-order solution on a Kaehler Cartan model via
//   gamma^(0) = G d* beta^(0),  gamma^(2k+2) = G d* (beta^(2k+2) + C gamma^(2k)),
//   Gamma_n = 1/2 Delta sum_k gamma^(2k),
// cross-checked against
//   phi^(0) = G Delta d* beta^(0),  phi^(2k+2) = G Delta d* (beta^(2k+2) + mu phi^(2k)),
//   Gamma_n = 1/2 sum_k phi^(2k).
inline MCSolution solve_mc_cartan(const DGBVAlgebra& alg, const CartanModel& model,
                                  const std::vector<Element>& classes, unsigned N) {
  if (classes.empty())
    throw InputError("no cohomology classes");
  const VariableList vars = mc_variables(classes);
  const Element zero = alg.zero();
  const HodgeData& h = model.hodge;
  const std::size_t r = alg.nvars;
  const LinearOperator Gds = h.op(h.green * h.d_star, "G d*", DegreeShift{-1, 0}, r);
  const LinearOperator GDds = h.op(h.green * h.delta_matrix() * h.d_star, "G Delta d*", DegreeShift{-2, 0}, r);
  const LinearOperator C = c_operator(model);
  const LinearOperator& Dl = alg.bv;
  const Element muK = equivariant_mu(model);
  const QMatrix delta_q = detail::constant_matrix(Dl);

  MCSolution sol{gamma_one(classes, vars, N, zero), N};
  sol.cartan = true;
  ElementSeries B(vars, N, zero);
  std::vector<ElementSeries> parts{ElementSeries(vars, N, zero), sol.gamma};
  for (unsigned n = 2; n <= N; ++n) {
    const ElementSeries beta = detail::beta_order(parts, n, *alg.table);
    ElementSeries gn(vars, N, zero);
    bool agree = true;
    for (const auto& [m, b] : beta.terms()) {
      const auto comps = decompose(b);
      Element gsum = zero, gam = zero;
      Element fsum = zero, phi = zero;
      const unsigned top = static_cast<unsigned>(comps.size()) + static_cast<unsigned>(model.basis()->top_degree()) + 1;
      for (unsigned k = 0; k <= top; ++k) {
        const Element bk = k < comps.size() ? comps[k] : zero;
        gam = k == 0 ? Gds.apply(bk) : Gds.apply(bk + C.apply(gam));
        phi = k == 0 ? GDds.apply(bk) : GDds.apply(bk + wedge(muK, phi, *alg.table));
        gsum += gam;
        fsum += phi;
      }
      if (!gam.is_zero() || !phi.is_zero())
        throw MathError("MC recursion did not terminate");
      const Element g = Rational(1, 2) * Dl.apply(gsum);
      const Element f = Rational(1, 2) * fsum;
      agree = agree && g == f;
      gn.add_term(m, g);
      Element bm = Rational(1, 2) * gsum;
      if (sol.gamma.odd_monomial(m))
        bm *= Rational(-1);
      B.add_term(m, bm);
    }
    parts.push_back(gn);
    OrderCertificate cert;
    cert.n = n;
    cert.recursions_agree = agree;
    std::string residual;
    detail::certify(cert, parts, n, alg, classes, delta_q, residual);
    sol.certificates.push_back(cert);
    sol.gamma += gn;
    if (!cert.mc_residual_zero || !cert.bracket_residual_zero) {
      sol.failure = "MC order-" + std::to_string(n) + " failure";
      sol.residual = residual;
      break;
    }
  }
  sol.b_series = B;
  return sol;
}

// Attempt-and-verify solver for a general DGBV algebra: Gamma_n is the
// solution of delta Gamma_n = -1/2 sum [Gamma_p . Gamma_{n-p}] inside the
// image of Delta delta_0*, where delta_0* is the metric adjoint of the
// Theta-free part of delta.
inline MCSolution solve_mc_generic(const DGBVAlgebra& alg, const HodgeData& h, const std::vector<Element>& classes,
                                   unsigned N) {
  if (classes.empty())
    throw InputError("no cohomology classes");
  const VariableList vars = mc_variables(classes);
  const Element zero = alg.zero();
  const std::size_t nv = alg.nvars;
  const std::size_t n_basis = alg.dim();

  // Candidate directions Delta d* e_j that stay inside the model.
  const LinearOperator ds = h.op(h.d_star, "d*", DegreeShift{-1, 0}, nv);
  std::vector<Element> dirs;
  {
    std::vector<Element> cand;
    for (std::size_t j = 0; j < n_basis; ++j) {
      auto v = alg.bv.try_apply(ds.apply(alg.e(j)));
      if (!v || v->is_zero() || v->max_theta_degree() > 0)
        continue;
      if (!alg.delta.try_apply(*v))
        continue;
      cand.push_back(*v);
    }
    QMatrix M(n_basis, cand.size(), Rational(0));
    for (std::size_t c = 0; c < cand.size(); ++c)
      for (const auto& [i, q] : cand[c].coeffs())
        M(i, c) = q.constant_term();
    for (auto p : rref_q(M))
      dirs.push_back(cand[p]);
  }
  PolyMatrix A = zero_poly_matrix(n_basis, dirs.size(), nv);
  for (std::size_t c = 0; c < dirs.size(); ++c) {
    const Element img = alg.delta.apply(dirs[c]);
    for (const auto& [i, q] : img.coeffs())
      A(i, c) = q;
  }
  const QMatrix delta_q = detail::constant_matrix(alg.bv);

  MCSolution sol{gamma_one(classes, vars, N, zero), N};
  std::vector<ElementSeries> parts{ElementSeries(vars, N, zero), sol.gamma};
  for (unsigned n = 2; n <= N; ++n) {
    const ElementSeries S = detail::bracket_sum(parts, n, alg);
    ElementSeries gn(vars, N, zero);
    for (const auto& [m, s] : S.terms()) {
      // Series form delta Gamma_n = -1/2 S; coefficient form picks up (-1)^|m|.
      Element rhs = Rational(-1, 2) * s;
      if (S.odd_monomial(m))
        rhs *= Rational(-1);
      PolyVector b(n_basis, GroundPoly(nv));
      for (const auto& [i, q] : rhs.coeffs())
        b[i] = q;
      auto y = solve_over_fractions(A, b);
      std::optional<Element> g;
      if (y) {
        g = zero;
        for (std::size_t c = 0; c < dirs.size() && g; ++c) {
          if (y->numerators[c].is_zero())
            continue;
          auto q = y->numerators[c].divide_exact(y->denominator);
          if (!q)
            g.reset();
          else
            *g += *q * dirs[c];
        }
      }
      if (!g || alg.delta.apply(*g) != rhs) {
        sol.failure = "MC order-" + std::to_string(n) + " failure";
        sol.residual = S.monomial_string(m) + ": no solution of delta Gamma = " + rhs.to_string();
        OrderCertificate cert;
        cert.n = n;
        sol.certificates.push_back(cert);
        return sol;
      }
      gn.add_term(m, *g);
    }
    parts.push_back(gn);
    OrderCertificate cert;
    cert.n = n;
    std::string residual;
    detail::certify(cert, parts, n, alg, classes, delta_q, residual);
    sol.certificates.push_back(cert);
    sol.gamma += gn;
    if (!cert.mc_residual_zero || !cert.bracket_residual_zero) {
      sol.failure = "MC order-" + std::to_string(n) + " failure";
      sol.residual = residual;
      return sol;
    }
  }
  return sol;
}

} // namespace eqfrob
