#pragma once

#include <cstddef>
#include <optional>
#include <random>
#include <vector>

#include "eqfrob/scalars/ground_poly.hpp"
#include "eqfrob/scalars/matrix.hpp"

namespace eqfrob {

using PolyMatrix = Matrix<GroundPoly>;
using PolyVector = std::vector<GroundPoly>;

inline PolyMatrix zero_poly_matrix(std::size_t rows, std::size_t cols, std::size_t nvars) {
  return PolyMatrix(rows, cols, GroundPoly(nvars));
}

inline std::size_t matrix_nvars(const PolyMatrix& m) {
  return m.empty() ? 0 : m(0, 0).nvars();
}

namespace detail {

inline GroundPoly exact_div(const GroundPoly& a, const GroundPoly& b) {
  auto q = a.divide_exact(b);
  if (!q)
    throw MathError("fraction-free elimination: inexact division");
  return std::move(*q);
}

} // namespace detail

// Fraction-free Gauss-Jordan (Bareiss) reduction.  On return every pivot
// entry equals `scale` (the last pivot, a minor of the input) and the
// matrix is `scale` times its reduced row echelon form over the fraction
// field.
struct FractionFreeForm {
  PolyMatrix reduced;
  std::vector<std::size_t> pivot_cols;
  GroundPoly scale;
};

inline FractionFreeForm fraction_free_reduce(PolyMatrix m) {
  const std::size_t nv = matrix_nvars(m);
  GroundPoly prev(nv, Rational(1));
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    std::size_t p = row;
    while (p < m.rows() && m(p, col).is_zero())
      ++p;
    if (p == m.rows())
      continue;
    m.swap_rows(p, row);
    const GroundPoly piv = m(row, col);
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == row)
        continue;
      const GroundPoly f = m(i, col);
      for (std::size_t j = 0; j < m.cols(); ++j) {
        if (j == col)
          continue;
        GroundPoly v = piv * m(i, j);
        if (!f.is_zero() && !m(row, j).is_zero())
          v -= f * m(row, j);
        m(i, j) = detail::exact_div(v, prev);
      }
      m(i, col) = GroundPoly(nv);
    }
    prev = piv;
    pivots.push_back(col);
    ++row;
  }
  return {std::move(m), std::move(pivots), prev};
}

// Rank over the fraction field by one-sided Bareiss elimination.
inline std::size_t bareiss_rank(PolyMatrix m) {
  const std::size_t nv = matrix_nvars(m);
  GroundPoly prev(nv, Rational(1));
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    std::size_t p = row;
    while (p < m.rows() && m(p, col).is_zero())
      ++p;
    if (p == m.rows())
      continue;
    m.swap_rows(p, row);
    const GroundPoly piv = m(row, col);
    for (std::size_t i = row + 1; i < m.rows(); ++i) {
      const GroundPoly f = m(i, col);
      for (std::size_t j = col + 1; j < m.cols(); ++j) {
        GroundPoly v = piv * m(i, j);
        if (!f.is_zero() && !m(row, j).is_zero())
          v -= f * m(row, j);
        m(i, j) = detail::exact_div(v, prev);
      }
      m(i, col) = GroundPoly(nv);
    }
    prev = piv;
    ++row;
  }
  return row;
}

inline QMatrix specialize_matrix(const PolyMatrix& m, const std::vector<Rational>& point) {
  QMatrix q(m.rows(), m.cols(), Rational(0));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      q(i, j) = m(i, j).evaluate(point);
  return q;
}

// Deterministic pseudo-random rational points used to cross-check generic
// ranks.
inline std::vector<std::vector<Rational>> sample_points(std::size_t nvars, std::size_t count,
                                                        unsigned seed = 20240531u) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> num(-60, 60);
  std::uniform_int_distribution<int> den(1, 17);
  std::vector<std::vector<Rational>> pts;
  for (std::size_t k = 0; k < count; ++k) {
    std::vector<Rational> pt;
    for (std::size_t i = 0; i < nvars; ++i) {
      Rational q(num(rng), den(rng));
      q.canonicalize();
      pt.push_back(q);
    }
    pts.push_back(std::move(pt));
  }
  return pts;
}

// Rank over F(k*) by fraction-free elimination, cross-checked against the
// rank at three rational specializations (specialized <= generic must hold).
inline std::size_t rank_over_fractions(const PolyMatrix& m) {
  if (m.empty())
    return 0;
  const std::size_t generic = bareiss_rank(m);
  const std::size_t nv = matrix_nvars(m);
  if (nv == 0)
    return generic;
  bool confirmed = false;
  for (const auto& pt : sample_points(nv, 3)) {
    const std::size_t s = rank_q(specialize_matrix(m, pt));
    if (s > generic)
      throw MathError("specialized rank exceeds generic rank");
    confirmed = confirmed || s == generic;
  }
  (void)confirmed; // a rank drop at all three points is possible but not an error
  return generic;
}

// Null space over the fraction field, returned as polynomial vectors.
inline std::vector<PolyVector> nullspace_over_fractions(const PolyMatrix& m) {
  const std::size_t nv = matrix_nvars(m);
  std::vector<PolyVector> basis;
  if (m.cols() == 0)
    return basis;
  if (m.rows() == 0) {
    for (std::size_t f = 0; f < m.cols(); ++f) {
      PolyVector v(m.cols(), GroundPoly(nv));
      v[f] = GroundPoly(nv, Rational(1));
      basis.push_back(std::move(v));
    }
    return basis;
  }
  const auto ff = fraction_free_reduce(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : ff.pivot_cols)
    is_pivot[p] = true;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f])
      continue;
    PolyVector v(m.cols(), GroundPoly(nv));
    v[f] = ff.scale;
    for (std::size_t i = 0; i < ff.pivot_cols.size(); ++i)
      v[ff.pivot_cols[i]] = -ff.reduced(i, f);
    basis.push_back(std::move(v));
  }
  return basis;
}

// Solution of A x = b over the fraction field as numerators over a common
// denominator; free variables are set to zero.
struct FractionSolution {
  PolyVector numerators;
  GroundPoly denominator;
};

inline std::optional<FractionSolution> solve_over_fractions(const PolyMatrix& a, const PolyVector& b) {
  if (b.size() != a.rows())
    throw InputError("right-hand side has wrong length");
  const std::size_t nv = b.empty() ? matrix_nvars(a) : b.front().nvars();
  PolyMatrix aug = zero_poly_matrix(a.rows(), a.cols() + 1, nv);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j)
      aug(i, j) = a(i, j);
    aug(i, a.cols()) = b[i];
  }
  const auto ff = fraction_free_reduce(aug);
  if (!ff.pivot_cols.empty() && ff.pivot_cols.back() == a.cols())
    return std::nullopt;
  FractionSolution sol{PolyVector(a.cols(), GroundPoly(nv)), ff.scale};
  for (std::size_t i = 0; i < ff.pivot_cols.size(); ++i)
    sol.numerators[ff.pivot_cols[i]] = ff.reduced(i, a.cols());
  return sol;
}

inline GroundPoly determinant(const PolyMatrix& m) {
  if (m.rows() != m.cols())
    throw InputError("determinant of non-square matrix");
  const std::size_t n = m.rows();
  const std::size_t nv = matrix_nvars(m);
  if (n == 0)
    return GroundPoly(nv, Rational(1));
  // Track row swaps: fraction_free_reduce does not, so eliminate directly.
  PolyMatrix a = m;
  GroundPoly prev(nv, Rational(1));
  bool negate = false;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    while (p < n && a(p, k).is_zero())
      ++p;
    if (p == n)
      return GroundPoly(nv);
    if (p != k) {
      a.swap_rows(p, k);
      negate = !negate;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j)
        a(i, j) = detail::exact_div(a(k, k) * a(i, j) - a(i, k) * a(k, j), prev);
      a(i, k) = GroundPoly(nv);
    }
    prev = a(k, k);
  }
  return negate ? -a(n - 1, n - 1) : a(n - 1, n - 1);
}

// Adjugate, so that m * adj(m) = det(m) * I.
inline PolyMatrix adjugate(const PolyMatrix& m) {
  const std::size_t n = m.rows();
  const std::size_t nv = matrix_nvars(m);
  PolyMatrix adj = zero_poly_matrix(n, n, nv);
  if (n == 1) {
    adj(0, 0) = GroundPoly(nv, Rational(1));
    return adj;
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      PolyMatrix minor = zero_poly_matrix(n - 1, n - 1, nv);
      for (std::size_t r = 0, rr = 0; r < n; ++r) {
        if (r == i)
          continue;
        for (std::size_t c = 0, cc = 0; c < n; ++c) {
          if (c == j)
            continue;
          minor(rr, cc++) = m(r, c);
        }
        ++rr;
      }
      GroundPoly cof = determinant(minor);
      adj(j, i) = ((i + j) % 2 == 0) ? cof : -cof;
    }
  return adj;
}

} // namespace eqfrob
