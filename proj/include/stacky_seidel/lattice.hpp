#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "stacky_seidel/rational.hpp"

namespace stacky_seidel {

template <typename T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, T(0)) {}

  static Matrix identity(std::size_t n) {
    Matrix out(n, n);
    for (std::size_t i = 0; i < n; ++i) out(i, i) = T(1);
    return out;
  }

  static Matrix from_rows(const std::vector<std::vector<T>>& rows) {
    const std::size_t c = rows.empty() ? 0 : rows.front().size();
    Matrix out(rows.size(), c);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != c) throw Error(ErrorKind::validation_error, "ragged matrix rows");
      for (std::size_t j = 0; j < c; ++j) out(i, j) = rows[i][j];
    }
    return out;
  }

  static Matrix from_columns(const std::vector<std::vector<T>>& cols, std::size_t rows) {
    Matrix out(rows, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
      if (cols[j].size() != rows) throw Error(ErrorKind::validation_error, "ragged matrix columns");
      for (std::size_t i = 0; i < rows; ++i) out(i, j) = cols[j][i];
    }
    return out;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::vector<T> row(std::size_t i) const {
    return std::vector<T>(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                          data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
  }

  std::vector<T> col(std::size_t j) const {
    std::vector<T> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
    return out;
  }

  Matrix transpose() const {
    Matrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
    return out;
  }

  std::vector<T> apply(const std::vector<T>& v) const {
    if (v.size() != cols_) throw Error(ErrorKind::internal_error, "matrix-vector size mismatch");
    std::vector<T> out(rows_, T(0));
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out[i] += (*this)(i, j) * v[j];
    return out;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw Error(ErrorKind::internal_error, "matrix product size mismatch");
    Matrix out(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        if (a(i, k) == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += a(i, k) * b(k, j);
      }
    return out;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using IntMatrix = Matrix<Int>;
using RatMatrix = Matrix<Rat>;

inline RatMatrix to_rational(const IntMatrix& a) {
  RatMatrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = Rat(a(i, j));
  return out;
}

// a == u * d * v with u, v unimodular and d diagonal, d_k | d_{k+1}
struct SmithDecomposition {
  IntMatrix u;
  IntMatrix d;
  IntMatrix v;
  std::size_t rank = 0;
};

namespace detail {

struct SmithWork {
  IntMatrix d, u, v, q;  // a == u*d*v, q == v^{-1}

  void swap_rows(std::size_t i, std::size_t k) {
    if (i == k) return;
    for (std::size_t j = 0; j < d.cols(); ++j) std::swap(d(i, j), d(k, j));
    for (std::size_t r = 0; r < u.rows(); ++r) std::swap(u(r, i), u(r, k));
  }
  // row i += f * row k
  void add_row(std::size_t i, std::size_t k, const Int& f) {
    for (std::size_t j = 0; j < d.cols(); ++j) d(i, j) += f * d(k, j);
    for (std::size_t r = 0; r < u.rows(); ++r) u(r, k) -= f * u(r, i);
  }
  void negate_row(std::size_t i) {
    for (std::size_t j = 0; j < d.cols(); ++j) d(i, j) = -d(i, j);
    for (std::size_t r = 0; r < u.rows(); ++r) u(r, i) = -u(r, i);
  }
  void swap_cols(std::size_t i, std::size_t k) {
    if (i == k) return;
    for (std::size_t r = 0; r < d.rows(); ++r) std::swap(d(r, i), d(r, k));
    for (std::size_t c = 0; c < v.cols(); ++c) std::swap(v(i, c), v(k, c));
    for (std::size_t r = 0; r < q.rows(); ++r) std::swap(q(r, i), q(r, k));
  }
  // col i += f * col k
  void add_col(std::size_t i, std::size_t k, const Int& f) {
    for (std::size_t r = 0; r < d.rows(); ++r) d(r, i) += f * d(r, k);
    for (std::size_t c = 0; c < v.cols(); ++c) v(k, c) -= f * v(i, c);
    for (std::size_t r = 0; r < q.rows(); ++r) q(r, i) += f * q(r, k);
  }

  std::size_t run() {
    const std::size_t rows = d.rows(), cols = d.cols();
    const std::size_t lim = std::min(rows, cols);
    std::size_t t = 0;
    for (; t < lim; ++t) {
      for (;;) {
        std::optional<std::pair<std::size_t, std::size_t>> best;
        for (std::size_t i = t; i < rows; ++i)
          for (std::size_t j = t; j < cols; ++j) {
            if (d(i, j) == 0) continue;
            if (!best || abs(d(i, j)) < abs(d(best->first, best->second))) best = {i, j};
          }
        if (!best) return t;
        swap_rows(t, best->first);
        swap_cols(t, best->second);
        bool clean = true;
        for (std::size_t i = t + 1; i < rows; ++i) {
          if (d(i, t) == 0) continue;
          Int f;
          mpz_tdiv_q(f.get_mpz_t(), d(i, t).get_mpz_t(), d(t, t).get_mpz_t());
          add_row(i, t, -f);
          if (d(i, t) != 0) clean = false;
        }
        for (std::size_t j = t + 1; j < cols; ++j) {
          if (d(t, j) == 0) continue;
          Int f;
          mpz_tdiv_q(f.get_mpz_t(), d(t, j).get_mpz_t(), d(t, t).get_mpz_t());
          add_col(j, t, -f);
          if (d(t, j) != 0) clean = false;
        }
        if (!clean) continue;
        bool divisible = true;
        for (std::size_t i = t + 1; i < rows && divisible; ++i)
          for (std::size_t j = t + 1; j < cols; ++j)
            if (!mpz_divisible_p(d(i, j).get_mpz_t(), d(t, t).get_mpz_t())) {
              add_row(t, i, Int(1));
              divisible = false;
              break;
            }
        if (divisible) break;
      }
      if (d(t, t) < 0) negate_row(t);
    }
    return t;
  }
};

}  // namespace detail

inline SmithDecomposition smith_normal_form(const IntMatrix& a) {
  detail::SmithWork w{a, IntMatrix::identity(a.rows()), IntMatrix::identity(a.cols()),
                      IntMatrix::identity(a.cols())};
  const std::size_t rank = w.run();
  return {std::move(w.u), std::move(w.d), std::move(w.v), rank};
}

// saturated integral basis of {x : a x = 0}
inline std::vector<IntVector> kernel_basis(const IntMatrix& a) {
  detail::SmithWork w{a, IntMatrix::identity(a.rows()), IntMatrix::identity(a.cols()),
                      IntMatrix::identity(a.cols())};
  const std::size_t rank = w.run();
  std::vector<IntVector> out;
  for (std::size_t k = rank; k < a.cols(); ++k) {
    IntVector v = w.q.col(k);
    auto lead = std::find_if(v.begin(), v.end(), [](const Int& x) { return x != 0; });
    if (lead != v.end() && *lead < 0)
      for (auto& x : v) x = -x;
    out.push_back(std::move(v));
  }
  return out;
}

namespace detail {

// in-place reduced row echelon form, returns pivot columns
template <typename T>
std::vector<std::size_t> rref(Matrix<T>& a) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t c = 0; c < a.cols() && row < a.rows(); ++c) {
    std::size_t p = row;
    while (p < a.rows() && a(p, c) == 0) ++p;
    if (p == a.rows()) continue;
    if (p != row)
      for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(p, j), a(row, j));
    const T inv = T(1) / a(row, c);
    for (std::size_t j = 0; j < a.cols(); ++j) a(row, j) *= inv;
    for (std::size_t i = 0; i < a.rows(); ++i) {
      if (i == row || a(i, c) == 0) continue;
      const T f = a(i, c);
      for (std::size_t j = 0; j < a.cols(); ++j) a(i, j) -= f * a(row, j);
    }
    pivots.push_back(c);
    ++row;
  }
  return pivots;
}

}  // namespace detail

inline std::size_t rank_of(RatMatrix a) { return detail::rref(a).size(); }

inline Rat determinant(RatMatrix a) {
  if (a.rows() != a.cols()) throw Error(ErrorKind::internal_error, "determinant of non-square matrix");
  const std::size_t n = a.rows();
  Rat det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a(p, c) == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(p, j), a(c, j));
      det = -det;
    }
    det *= a(c, c);
    for (std::size_t i = c + 1; i < n; ++i) {
      if (a(i, c) == 0) continue;
      const Rat f = a(i, c) / a(c, c);
      for (std::size_t j = c; j < n; ++j) a(i, j) -= f * a(c, j);
    }
  }
  return det;
}

inline std::optional<RatMatrix> inverse(const RatMatrix& a) {
  const std::size_t n = a.rows();
  if (n != a.cols()) return std::nullopt;
  RatMatrix aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = a(i, j);
    aug(i, n + i) = 1;
  }
  const auto piv = detail::rref(aug);
  if (piv.size() < n || piv[n - 1] != n - 1) return std::nullopt;
  RatMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out(i, j) = aug(i, n + j);
  return out;
}

// some solution of a x = b
inline std::optional<RatVector> solve(const RatMatrix& a, const RatVector& b) {
  if (b.size() != a.rows()) throw Error(ErrorKind::internal_error, "solve size mismatch");
  RatMatrix aug(a.rows(), a.cols() + 1);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) aug(i, j) = a(i, j);
    aug(i, a.cols()) = b[i];
  }
  const auto piv = detail::rref(aug);
  if (!piv.empty() && piv.back() == a.cols()) return std::nullopt;
  RatVector x(a.cols(), Rat(0));
  for (std::size_t k = 0; k < piv.size(); ++k) x[piv[k]] = aug(k, a.cols());
  return x;
}

// x in the closed cone spanned by generators: phase-one simplex with Bland's rule
inline bool cone_member(const RatVector& x, const std::vector<RatVector>& generators) {
  const std::size_t n = x.size();
  if (std::all_of(x.begin(), x.end(), [](const Rat& v) { return v == 0; })) return true;
  const std::size_t k = generators.size();
  if (k == 0) return false;
  for (const auto& g : generators)
    if (g.size() != n) throw Error(ErrorKind::internal_error, "cone generator dimension mismatch");

  const std::size_t cols = k + n;  // structural then artificial, rhs stored apart
  RatMatrix t(n, cols);
  RatVector rhs(n);
  for (std::size_t i = 0; i < n; ++i) {
    const bool flip = x[i] < 0;
    for (std::size_t j = 0; j < k; ++j) t(i, j) = flip ? Rat(-generators[j][i]) : generators[j][i];
    t(i, k + i) = 1;
    rhs[i] = flip ? Rat(-x[i]) : x[i];
  }
  std::vector<std::size_t> basis(n);
  for (std::size_t i = 0; i < n; ++i) basis[i] = k + i;

  RatVector cost(cols, Rat(0));
  Rat value = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < k; ++j) cost[j] -= t(i, j);
    value -= rhs[i];
  }

  for (;;) {
    std::size_t enter = cols;
    for (std::size_t j = 0; j < cols; ++j)
      if (cost[j] < 0) {
        enter = j;
        break;
      }
    if (enter == cols) break;
    std::size_t leave = n;
    Rat best;
    for (std::size_t i = 0; i < n; ++i) {
      if (t(i, enter) <= 0) continue;
      const Rat ratio = rhs[i] / t(i, enter);
      if (leave == n || ratio < best || (ratio == best && basis[i] < basis[leave])) {
        leave = i;
        best = ratio;
      }
    }
    if (leave == n) break;  // unbounded direction cannot occur for a bounded phase one
    const Rat piv = t(leave, enter);
    for (std::size_t j = 0; j < cols; ++j) t(leave, j) /= piv;
    rhs[leave] /= piv;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == leave || t(i, enter) == 0) continue;
      const Rat f = t(i, enter);
      for (std::size_t j = 0; j < cols; ++j) t(i, j) -= f * t(leave, j);
      rhs[i] -= f * rhs[leave];
    }
    const Rat f = cost[enter];
    for (std::size_t j = 0; j < cols; ++j) cost[j] -= f * t(leave, j);
    value -= f * rhs[leave];
    basis[leave] = enter;
  }
  return value == 0;
}

}  // namespace stacky_seidel
