#pragma once

// Exact dense linear algebra over the integers and rationals: fraction-free
// (Bareiss) determinant and rank, signed maximal minors, rational solves.

#include "integer.hpp"

#include <algorithm>
#include <cstddef>
#include <optional>
#include <type_traits>
#include <utility>
#include <vector>

namespace lgp {

template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, T fill = T{}) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t c = 0; c < cols_; ++c) std::swap((*this)(a, c), (*this)(b, c));
  }

  template <class U>
  Matrix<U> cast() const {
    Matrix<U> out(rows_, cols_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) out(r, c) = U((*this)(r, c));
    return out;
  }

  Matrix without_column(std::size_t skip) const {
    Matrix out(rows_, cols_ - 1);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0, o = 0; c < cols_; ++c)
        if (c != skip) out(r, o++) = (*this)(r, c);
    return out;
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

// Fraction-free Gaussian elimination; every intermediate is a minor of the
// input, and each division is exact.
template <class T>
T bareiss_determinant(Matrix<T> m) {
  require(m.square(), "determinant of a non-square matrix");
  const std::size_t n = m.rows();
  if (n == 0) return T(1);
  T prev(1);
  bool negate = false;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m(k, k) == T(0)) {
      std::size_t pivot = k + 1;
      while (pivot < n && m(pivot, k) == T(0)) ++pivot;
      if (pivot == n) return T(0);
      m.swap_rows(k, pivot);
      negate = !negate;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
    }
    prev = m(k, k);
  }
  return negate ? T(-m(n - 1, n - 1)) : m(n - 1, n - 1);
}

template <class T>
std::size_t bareiss_rank(Matrix<T> m) {
  std::size_t rank = 0;
  T prev(1);
  for (std::size_t col = 0; col < m.cols() && rank < m.rows(); ++col) {
    std::size_t pivot = rank;
    while (pivot < m.rows() && m(pivot, col) == T(0)) ++pivot;
    if (pivot == m.rows()) continue;
    m.swap_rows(rank, pivot);
    for (std::size_t i = rank + 1; i < m.rows(); ++i) {
      for (std::size_t j = col + 1; j < m.cols(); ++j)
        m(i, j) = (m(i, j) * m(rank, col) - m(i, col) * m(rank, j)) / prev;
      m(i, col) = T(0);
    }
    prev = m(rank, col);
    ++rank;
  }
  return rank;
}

namespace detail {

inline std::optional<Matrix<Checked128>> narrow(const Matrix<Integer>& m) {
  Matrix<Checked128> out(m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (!fits_int64(m(r, c))) return std::nullopt;
      out(r, c) = Checked128(static_cast<std::int64_t>(m(r, c)));
    }
  return out;
}

inline Matrix<Checked128> narrow(const Matrix<Coord>& m) { return m.cast<Checked128>(); }

}  // namespace detail

/// Exact determinant. Runs in checked 128-bit arithmetic and falls back to
/// arbitrary precision on overflow, so the result is exact for any input.
inline Integer det_exact(const Matrix<Integer>& m) {
  require(m.square(), "det_exact: matrix must be square");
  if (auto narrow = detail::narrow(m)) {
    try {
      return to_integer(bareiss_determinant(std::move(*narrow)));
    } catch (const Overflow&) {
    }
  }
  return bareiss_determinant(m);
}

inline Integer det_exact(const Matrix<Coord>& m) {
  require(m.square(), "det_exact: matrix must be square");
  try {
    return to_integer(bareiss_determinant(detail::narrow(m)));
  } catch (const Overflow&) {
    return bareiss_determinant(m.cast<Integer>());
  }
}

// Zero test without materializing the big-integer value on the fast path.
inline bool det_is_zero(const Matrix<Coord>& m) {
  require(m.square(), "det_is_zero: matrix must be square");
  try {
    return bareiss_determinant(detail::narrow(m)) == Checked128(0);
  } catch (const Overflow&) {
    return bareiss_determinant(m.cast<Integer>()) == 0;
  }
}

template <class T>
std::size_t rank_exact(const Matrix<T>& m) {
  if constexpr (std::is_same_v<T, Coord>) {
    try {
      return bareiss_rank(detail::narrow(m));
    } catch (const Overflow&) {
      return bareiss_rank(m.template cast<Integer>());
    }
  } else {
    if (auto narrow = detail::narrow(m)) {
      try {
        return bareiss_rank(std::move(*narrow));
      } catch (const Overflow&) {
      }
    }
    return bareiss_rank(m);
  }
}

/// For an r x (r+1) matrix, the vector of signed maximal minors
/// c_j = (-1)^j det(M without column j). It is orthogonal to every row and is
/// zero exactly when the rows are linearly dependent.
template <class T>
std::vector<Integer> signed_maximal_minors(const Matrix<T>& m) {
  require(m.cols() == m.rows() + 1, "signed_maximal_minors: expected r x (r+1)");
  std::vector<Integer> out(m.cols());
  for (std::size_t j = 0; j < m.cols(); ++j) {
    Integer minor = det_exact(m.without_column(j));
    out[j] = (j % 2 == 0) ? minor : Integer(-minor);
  }
  return out;
}

/// Solves A x = b for consistent systems where A has full column rank
/// (square nonsingular or tall). Returns nullopt if A is column-rank
/// deficient or the system is inconsistent.
inline std::optional<std::vector<Rational>> solve_full_column_rank(Matrix<Rational> a, std::vector<Rational> b) {
  require(a.rows() == b.size(), "solve: dimension mismatch");
  const std::size_t rows = a.rows();
  const std::size_t cols = a.cols();
  if (cols > rows) return std::nullopt;
  for (std::size_t k = 0; k < cols; ++k) {
    std::size_t pivot = k;
    while (pivot < rows && a(pivot, k) == 0) ++pivot;
    if (pivot == rows) return std::nullopt;
    a.swap_rows(k, pivot);
    std::swap(b[k], b[pivot]);
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == k || a(i, k) == 0) continue;
      const Rational f = a(i, k) / a(k, k);
      for (std::size_t j = k; j < cols; ++j) a(i, j) -= f * a(k, j);
      b[i] -= f * b[k];
    }
  }
  for (std::size_t i = cols; i < rows; ++i)
    if (b[i] != 0) return std::nullopt;
  std::vector<Rational> x(cols);
  for (std::size_t k = 0; k < cols; ++k) x[k] = b[k] / a(k, k);
  return x;
}

/// Integer basis of the right null space {x : M x = 0}, one vector per free
/// column of the reduced row echelon form, each scaled to primitive integers.
inline std::vector<std::vector<Integer>> nullspace_basis(const Matrix<Integer>& m) {
  Matrix<Rational> a = m.cast<Rational>();
  const std::size_t rows = a.rows();
  const std::size_t cols = a.cols();
  std::vector<std::size_t> pivot_cols;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t pivot = r;
    while (pivot < rows && a(pivot, c) == 0) ++pivot;
    if (pivot == rows) continue;
    a.swap_rows(r, pivot);
    const Rational inv = 1 / a(r, c);
    for (std::size_t j = c; j < cols; ++j) a(r, j) *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || a(i, c) == 0) continue;
      const Rational f = a(i, c);
      for (std::size_t j = c; j < cols; ++j) a(i, j) -= f * a(r, j);
    }
    pivot_cols.push_back(c);
    ++r;
  }
  std::vector<std::vector<Integer>> basis;
  for (std::size_t free = 0; free < cols; ++free) {
    if (std::find(pivot_cols.begin(), pivot_cols.end(), free) != pivot_cols.end()) continue;
    std::vector<Rational> v(cols, 0);
    v[free] = 1;
    for (std::size_t i = 0; i < pivot_cols.size(); ++i) v[pivot_cols[i]] = -a(i, free);
    Integer den = 1;
    for (const auto& x : v) den = lcm(den, denominator(x));
    std::vector<Integer> iv(cols);
    Integer g = 0;
    for (std::size_t j = 0; j < cols; ++j) {
      iv[j] = numerator(v[j]) * (den / denominator(v[j]));
      g = gcd(g, iv[j]);
    }
    if (g > 1)
      for (auto& x : iv) x /= g;
    basis.push_back(std::move(iv));
  }
  return basis;
}

}  // namespace lgp
