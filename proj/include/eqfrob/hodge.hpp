#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "eqfrob/dgbv/linear_operator.hpp"
#include "eqfrob/dgbv/report.hpp"
#include "eqfrob/graded/element.hpp"
#include "eqfrob/scalars/matrix.hpp"

namespace eqfrob {

// Hodge theory of the ordinary (non-equivariant) form model.  All operators
// are rational matrices acting on the full basis; gram is block diagonal by
// form degree.
struct HodgeData {
  BasisPtr basis;
  QMatrix gram, gram_inv;
  QMatrix d, d_star;
  QMatrix J, J_inv;
  QMatrix dc, dc_star;
  QMatrix laplacian;
  QMatrix harmonic_proj;
  QMatrix green;
  std::vector<Element> harmonic_basis; // over Q (no ground variables)

  std::size_t dim() const { return basis->size(); }

  // Delta = -(d^c)*.
  QMatrix delta_matrix() const { return QMatrix(dim(), dim(), Rational(0)) - dc_star; }

  LinearOperator op(const QMatrix& m, std::string name, DegreeShift shift, std::size_t nvars = 0) const {
    return LinearOperator::from_qmatrix(basis, nvars, std::move(name), {shift}, m);
  }
  LinearOperator op(const QMatrix& m, std::string name, std::set<DegreeShift> shifts, std::size_t nvars = 0) const {
    return LinearOperator::from_qmatrix(basis, nvars, std::move(name), std::move(shifts), m);
  }
};

namespace detail {

inline QMatrix zero_q(std::size_t n) { return QMatrix(n, n, Rational(0)); }

inline bool is_zero_q(const QMatrix& m) {
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (m(i, j) != 0)
        return false;
  return true;
}

// First nonzero column of m, if any.
inline std::optional<std::size_t> nonzero_column(const QMatrix& m) {
  for (std::size_t j = 0; j < m.cols(); ++j)
    for (std::size_t i = 0; i < m.rows(); ++i)
      if (m(i, j) != 0)
        return j;
  return std::nullopt;
}

inline QMatrix hstack(const std::vector<const QMatrix*>& blocks) {
  std::size_t rows = blocks.empty() ? 0 : blocks.front()->rows(), cols = 0;
  for (auto* b : blocks)
    cols += b->cols();
  QMatrix out(rows, cols, Rational(0));
  std::size_t off = 0;
  for (auto* b : blocks) {
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < b->cols(); ++j)
        out(i, off + j) = (*b)(i, j);
    off += b->cols();
  }
  return out;
}

inline QMatrix columns_matrix(const std::vector<std::vector<Rational>>& vecs, std::size_t n) {
  QMatrix m(n, vecs.size(), Rational(0));
  for (std::size_t j = 0; j < vecs.size(); ++j)
    for (std::size_t i = 0; i < n; ++i)
      m(i, j) = vecs[j][i];
  return m;
}

} // namespace detail

// A* = gram^{-1} A^T gram.
inline QMatrix adjoint(const QMatrix& a, const HodgeData& h) { return h.gram_inv * a.transpose() * h.gram; }

inline LinearOperator adjoint(const LinearOperator& a, const HodgeData& h) {
  if (!a.total())
    throw InputError("adjoint of partially defined operator '" + a.name() + "'");
  std::set<DegreeShift> sh;
  for (const auto& s : a.shifts())
    sh.insert({-s.form, -s.theta});
  return LinearOperator::from_qmatrix(h.basis, a.nvars(), a.name() + "^*", sh, adjoint(a.to_qmatrix(), h));
}

// Sign of J on bidegree (p, q), (-1)^q i^{p+q}, when it is real.
inline std::optional<Rational> j_sign(int p, int q) {
  if ((p + q) % 2 != 0)
    return std::nullopt;
  const int e = q + (p + q) / 2;
  return Rational(e % 2 == 0 ? 1 : -1);
}

inline HodgeData build_hodge(BasisPtr basis, const QMatrix& d, std::optional<QMatrix> J, const QMatrix& gram) {
  const std::size_t n = basis->size();
  if (d.rows() != n || d.cols() != n || gram.rows() != n || gram.cols() != n)
    throw InputError("hodge data shape does not match basis");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (gram(i, j) != 0 && basis->form_degree(i) != basis->form_degree(j))
        throw InputError("gram couples different form degrees");
  if (!is_symmetric(gram))
    throw InputError("gram is not symmetric");
  if (!is_positive_definite(gram))
    throw InputError("gram is not positive definite");

  HodgeData h;
  h.basis = basis;
  h.gram = gram;
  h.gram_inv = *inverse_q(gram);
  h.d = d;
  h.d_star = adjoint(d, h);

  if (J) {
    if (J->rows() != n || J->cols() != n)
      throw InputError("J shape does not match basis");
    h.J = *J;
  } else {
    if (!basis->bigraded())
      throw InputError("J missing and the model carries no bidegrees");
    h.J = detail::zero_q(n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto [p, q] = *basis->entry(i).bidegree;
      auto s = j_sign(p, q);
      if (!s)
        throw InputError("J missing: bidegree (" + std::to_string(p) + "," + std::to_string(q) + ") of " +
                         basis->name(i) + " needs a complex J; supply J as a real operator");
      h.J(i, i) = *s;
    }
  }
  auto jinv = inverse_q(h.J);
  if (!jinv)
    throw InputError("J is not invertible");
  h.J_inv = *jinv;
  h.dc = h.J_inv * d * h.J;
  h.dc_star = adjoint(h.dc, h);
  h.laplacian = d * h.d_star + h.d_star * d;

  auto ker = nullspace_q(h.laplacian);
  // Put the class with a constant-function component first.
  std::stable_sort(ker.begin(), ker.end(), [&](const auto& a, const auto& b) {
    auto lowest = [&](const std::vector<Rational>& v) {
      for (std::size_t i = 0; i < n; ++i)
        if (v[i] != 0)
          return basis->form_degree(i);
      return 1 << 20;
    };
    return lowest(a) < lowest(b);
  });
  const QMatrix K = detail::columns_matrix(ker, n);
  if (ker.empty()) {
    h.harmonic_proj = detail::zero_q(n);
  } else {
    auto inner = inverse_q(K.transpose() * gram * K);
    h.harmonic_proj = K * *inner * K.transpose() * gram;
  }
  auto lp = inverse_q(h.laplacian + h.harmonic_proj);
  if (!lp)
    throw MathError("laplacian plus harmonic projector is singular");
  h.green = *lp - h.harmonic_proj;
  for (const auto& v : ker) {
    Element e(basis, 0);
    for (std::size_t i = 0; i < n; ++i)
      if (v[i] != 0)
        e.add(i, GroundPoly(0, v[i]));
    h.harmonic_basis.push_back(std::move(e));
  }
  return h;
}

inline LinearOperator delta_from_metric(const HodgeData& h, std::size_t nvars = 0) {
  return h.op(h.delta_matrix(), "Delta", DegreeShift{-1, 0}, nvars);
}

namespace detail {

inline void expect_zero(Report& r, const std::string& check, const QMatrix& m, const GradedBasis& b) {
  auto col = nonzero_column(m);
  r.expect(!col, check, col ? b.name(*col) : std::string{});
}

inline void expect_equal(Report& r, const std::string& check, const QMatrix& a, const QMatrix& b,
                         const GradedBasis& basis) {
  expect_zero(r, check, a - b, basis);
}

} // namespace detail

// Kaehler identities, five-fold decomposition and the Green/harmonic
// projector identities, each as an exact matrix equation.
inline Report kahler_suite(const HodgeData& h) {
  using detail::expect_equal;
  using detail::expect_zero;
  Report r;
  const auto& B = *h.basis;
  const std::size_t n = h.dim();
  const QMatrix I = identity_q(n);
  const QMatrix &d = h.d, &ds = h.d_star, &dc = h.dc, &dcs = h.dc_star;

  {
    auto bad = detail::nonzero_column(h.J.transpose() * h.gram * h.J - h.gram);
    r.expect(!bad, "kahler.J_orthogonal", bad ? B.name(*bad) : "");
  }
  expect_zero(r, "kahler.d_squared", d * d, B);
  expect_zero(r, "kahler.dc_squared", dc * dc, B);
  expect_zero(r, "kahler.d_dc_anticommute", d * dc + dc * d, B);
  expect_zero(r, "kahler.dstar_squared", ds * ds, B);
  expect_zero(r, "kahler.dcstar_squared", dcs * dcs, B);
  expect_zero(r, "kahler.dstar_dcstar_anticommute", ds * dcs + dcs * ds, B);
  expect_zero(r, "kahler.d_dcstar_anticommute", d * dcs + dcs * d, B);
  expect_zero(r, "kahler.dstar_dc_anticommute", ds * dc + dc * ds, B);
  expect_equal(r, "kahler.laplacian_dc", dc * dcs + dcs * dc, h.laplacian, B);
  expect_equal(r, "kahler.dstar_conjugate", h.J_inv * ds * h.J, dcs, B);

  // Five-fold decomposition: pairwise orthogonal summands filling the model.
  {
    const QMatrix& P = h.harmonic_proj;
    const QMatrix parts[5] = {P, d * dc, ds * dc, d * dcs, ds * dcs};
    const char* names[5] = {"H", "Im d dc", "Im d* dc", "Im d dc*", "Im d* dc*"};
    std::string bad;
    for (int a = 0; a < 5 && bad.empty(); ++a)
      for (int b = a + 1; b < 5 && bad.empty(); ++b)
        if (!detail::is_zero_q(parts[a].transpose() * h.gram * parts[b]))
          bad = std::string(names[a]) + " vs " + names[b];
    r.expect(bad.empty(), "hodge.fivefold_orthogonal", bad);
    std::size_t total = 0;
    std::string dims;
    for (int a = 0; a < 5; ++a) {
      const std::size_t k = rank_q(parts[a]);
      total += k;
      dims += (a ? "+" : "") + std::to_string(k);
    }
    r.expect(total == n, "hodge.fivefold_span", total == n ? "" : dims + " != " + std::to_string(n),
             dims + " = " + std::to_string(n));
  }

  // With Delta = -(d^c)* and Delta* its gram adjoint:
  // ker(Delta d) = H + Im Delta* d + Im Delta d + Im Delta d*.
  {
    const QMatrix Dl = h.delta_matrix();
    const QMatrix Dls = adjoint(Dl, h);
    const QMatrix A = Dls * d, Bm = Dl * d, C = Dl * ds;
    const QMatrix span = detail::hstack({&h.harmonic_proj, &A, &Bm, &C});
    const QMatrix kill = Dl * d * span;
    const std::size_t ker_dim = n - rank_q(Dl * d);
    const std::size_t span_dim = rank_q(span);
    r.expect(detail::is_zero_q(kill) && span_dim == ker_dim, "hodge.delta_d_kernel_decomposition",
             std::to_string(span_dim) + " vs " + std::to_string(ker_dim));
  }

  const QMatrix& P = h.harmonic_proj;
  const QMatrix& G = h.green;
  expect_equal(r, "hodge.projector_idempotent", P * P, P, B);
  expect_equal(r, "hodge.projector_self_adjoint", adjoint(P, h), P, B);
  expect_equal(r, "hodge.green_laplacian", G * h.laplacian, I - P, B);
  expect_equal(r, "hodge.laplacian_green", h.laplacian * G, I - P, B);
  expect_zero(r, "hodge.green_projector", G * P, B);
  expect_zero(r, "hodge.projector_green", P * G, B);
  {
    // ker laplacian = ker d intersect ker d*
    QMatrix stacked(2 * n, n, Rational(0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        stacked(i, j) = d(i, j);
        stacked(n + i, j) = ds(i, j);
      }
    const std::size_t a = n - rank_q(h.laplacian), b = n - rank_q(stacked);
    const bool contained = detail::is_zero_q(d * P) && detail::is_zero_q(ds * P);
    r.expect(a == b && contained, "hodge.harmonic_kernel", std::to_string(a) + " vs " + std::to_string(b));
  }
  const QMatrix Dl = h.delta_matrix();
  expect_zero(r, "hodge.Delta_kills_harmonic", Dl * P, B);
  expect_zero(r, "hodge.d_Delta_anticommute", d * Dl + Dl * d, B);
  expect_zero(r, "hodge.Delta_squared", Dl * Dl, B);
  expect_equal(r, "hodge.green_commutes_d", G * d, d * G, B);
  expect_equal(r, "hodge.green_commutes_dstar", G * ds, ds * G, B);
  expect_equal(r, "hodge.green_commutes_Delta", G * Dl, Dl * G, B);
  return r;
}

} // namespace eqfrob
