#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "eqfrob/errors.hpp"
#include "eqfrob/scalars/rational.hpp"

namespace eqfrob {

// Dense row-major matrix.
template <class T>
class Matrix {
public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, const T& fill = T{})
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b)
      return;
    for (std::size_t j = 0; j < cols_; ++j)
      std::swap((*this)(a, j), (*this)(b, j));
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_, zero_like());
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j)
        t(j, i) = (*this)(i, j);
    return t;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

private:
  T zero_like() const { return data_.empty() ? T{} : data_.front() - data_.front(); }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using QMatrix = Matrix<Rational>;

inline QMatrix identity_q(std::size_t n) {
  QMatrix m(n, n, Rational(0));
  for (std::size_t i = 0; i < n; ++i)
    m(i, i) = 1;
  return m;
}

inline QMatrix operator*(const QMatrix& a, const QMatrix& b) {
  if (a.cols() != b.rows())
    throw InputError("matrix shape mismatch in product");
  QMatrix c(a.rows(), b.cols(), Rational(0));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (a(i, k) == 0)
        continue;
      for (std::size_t j = 0; j < b.cols(); ++j)
        if (b(k, j) != 0)
          c(i, j) += a(i, k) * b(k, j);
    }
  return c;
}

inline QMatrix operator+(const QMatrix& a, const QMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw InputError("matrix shape mismatch in sum");
  QMatrix c = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      c(i, j) += b(i, j);
  return c;
}

inline QMatrix operator-(const QMatrix& a, const QMatrix& b) {
  QMatrix c = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      c(i, j) -= b(i, j);
  return c;
}

// Reduced row echelon form over Q; returns pivot columns.
inline std::vector<std::size_t> rref_q(QMatrix& m) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    std::size_t p = row;
    while (p < m.rows() && m(p, col) == 0)
      ++p;
    if (p == m.rows())
      continue;
    m.swap_rows(p, row);
    const Rational inv = 1 / m(row, col);
    for (std::size_t j = col; j < m.cols(); ++j)
      m(row, j) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == row || m(i, col) == 0)
        continue;
      const Rational f = m(i, col);
      for (std::size_t j = col; j < m.cols(); ++j)
        if (m(row, j) != 0)
          m(i, j) -= f * m(row, j);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

inline std::size_t rank_q(QMatrix m) { return rref_q(m).size(); }

// Basis of the right null space, one column vector per free column, with
// the free coordinate equal to 1.
inline std::vector<std::vector<Rational>> nullspace_q(QMatrix m) {
  const auto pivots = rref_q(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : pivots)
    is_pivot[p] = true;
  std::vector<std::vector<Rational>> basis;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f])
      continue;
    std::vector<Rational> v(m.cols(), Rational(0));
    v[f] = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i)
      v[pivots[i]] = -m(i, f);
    basis.push_back(std::move(v));
  }
  return basis;
}

inline std::optional<QMatrix> inverse_q(const QMatrix& a) {
  if (a.rows() != a.cols())
    throw InputError("inverse of non-square matrix");
  const std::size_t n = a.rows();
  QMatrix aug(n, 2 * n, Rational(0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j)
      aug(i, j) = a(i, j);
    aug(i, n + i) = 1;
  }
  const auto pivots = rref_q(aug);
  if (pivots.size() < n || (n > 0 && pivots[n - 1] != n - 1))
    return std::nullopt;
  QMatrix inv(n, n, Rational(0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      inv(i, j) = aug(i, n + j);
  return inv;
}

inline bool is_symmetric(const QMatrix& a) {
  if (a.rows() != a.cols())
    return false;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (a(i, j) != a(j, i))
        return false;
  return true;
}

// Symmetric positive definite test by unpivoted LDL^T (Sylvester's
// criterion): every pivot must be strictly positive.
inline bool is_positive_definite(const QMatrix& a) {
  if (!is_symmetric(a))
    return false;
  QMatrix m = a;
  const std::size_t n = m.rows();
  for (std::size_t k = 0; k < n; ++k) {
    if (m(k, k) <= 0)
      return false;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (m(i, k) == 0)
        continue;
      const Rational f = m(i, k) / m(k, k);
      for (std::size_t j = k; j < n; ++j)
        m(i, j) -= f * m(k, j);
    }
  }
  return true;
}

} // namespace eqfrob
