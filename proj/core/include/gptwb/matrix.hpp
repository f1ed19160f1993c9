#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "gptwb/errors.hpp"
#include "gptwb/scalar.hpp"

namespace gptwb {

template <Field T>
using Vector = std::vector<T>;

template <Field T>
T dot(std::span<const T> a, std::span<const T> b) {
  if (a.size() != b.size()) throw DimensionMismatch("dot: length mismatch");
  T acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

template <Field T>
Vector<T> scaled(std::span<const T> a, const T& s) {
  Vector<T> out(a.begin(), a.end());
  for (auto& x : out) x *= s;
  return out;
}

template <Field T>
Vector<T> add(std::span<const T> a, std::span<const T> b) {
  if (a.size() != b.size()) throw DimensionMismatch("add: length mismatch");
  Vector<T> out(a.begin(), a.end());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] += b[i];
  return out;
}

template <Field T>
Vector<T> sub(std::span<const T> a, std::span<const T> b) {
  if (a.size() != b.size()) throw DimensionMismatch("sub: length mismatch");
  Vector<T> out(a.begin(), a.end());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] -= b[i];
  return out;
}

/// out += s * a
template <Field T>
void axpy(Vector<T>& out, const T& s, std::span<const T> a) {
  if (out.size() != a.size()) throw DimensionMismatch("axpy: length mismatch");
  for (std::size_t i = 0; i < a.size(); ++i) out[i] += s * a[i];
}

template <Field T>
T max_abs(std::span<const T> a) {
  T m = 0;
  for (const auto& x : a) {
    T ax = abs_value(x);
    if (ax > m) m = ax;
  }
  return m;
}

template <Field T>
bool approx_eq(std::span<const T> a, std::span<const T> b, const Tolerance& tol = {}) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!approx_eq<T>(a[i], b[i], tol)) return false;
  return true;
}

template <Field T, Field U>
Vector<U> convert_vector(std::span<const T> a) {
  Vector<U> out;
  out.reserve(a.size());
  for (const auto& x : a) {
    if constexpr (std::is_same_v<T, U>) {
      out.push_back(x);
    } else if constexpr (is_exact_v<U>) {
      out.push_back(U(x));
    } else {
      out.push_back(to_double(x));
    }
  }
  return out;
}

/// Dense row-major matrix over a field.
template <Field T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, const T& fill = T(0))
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::initializer_list<std::initializer_list<T>> init) {
    rows_ = init.size();
    cols_ = rows_ ? init.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& row : init) {
      if (row.size() != cols_) throw DimensionMismatch("Matrix: ragged initializer");
      data_.insert(data_.end(), row.begin(), row.end());
    }
  }

  static Matrix from_rows(const std::vector<Vector<T>>& rows) {
    Matrix m;
    m.rows_ = rows.size();
    m.cols_ = rows.empty() ? 0 : rows.front().size();
    m.data_.reserve(m.rows_ * m.cols_);
    for (const auto& r : rows) {
      if (r.size() != m.cols_) throw DimensionMismatch("Matrix: ragged rows");
      m.data_.insert(m.data_.end(), r.begin(), r.end());
    }
    return m;
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  /// The k x k matrix with every entry 1/k.
  static Matrix uniform(std::size_t k) { return Matrix(k, k, T(1) / T(static_cast<long>(k))); }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<T> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const T> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

  Vector<T> column(std::size_t j) const {
    Vector<T> c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }

  std::vector<Vector<T>> to_rows() const {
    std::vector<Vector<T>> out;
    out.reserve(rows_);
    for (std::size_t i = 0; i < rows_; ++i) out.emplace_back(row(i).begin(), row(i).end());
    return out;
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  Matrix operator*(const Matrix& o) const {
    if (cols_ != o.rows_) throw DimensionMismatch("Matrix product: inner dimensions differ");
    Matrix p(rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = 0; k < cols_; ++k) {
        const T& a = (*this)(i, k);
        if (a == 0) continue;
        for (std::size_t j = 0; j < o.cols_; ++j) p(i, j) += a * o(k, j);
      }
    return p;
  }

  Vector<T> operator*(std::span<const T> v) const {
    if (cols_ != v.size()) throw DimensionMismatch("Matrix-vector product: length mismatch");
    Vector<T> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) out[i] = dot<T>(row(i), v);
    return out;
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

template <Field T>
bool approx_eq(const Matrix<T>& a, const Matrix<T>& b, const Tolerance& tol = {}) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (std::size_t i = 0; i < a.rows(); ++i)
    if (!approx_eq<T>(a.row(i), b.row(i), tol)) return false;
  return true;
}

/// max_ij |a_ij - b_ij|
template <Field T>
T max_abs_diff(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionMismatch("max_abs_diff: shape mismatch");
  T m = 0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      T d = abs_value<T>(a(i, j) - b(i, j));
      if (d > m) m = d;
    }
  return m;
}

template <Field T, Field U>
Matrix<U> convert_matrix(const Matrix<T>& m) {
  Matrix<U> out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if constexpr (std::is_same_v<T, U>) {
        out(i, j) = m(i, j);
      } else if constexpr (is_exact_v<U>) {
        out(i, j) = U(m(i, j));
      } else {
        out(i, j) = to_double(m(i, j));
      }
    }
  return out;
}

/// All entries >= 0 and every row sums to 1 (within eps for floats).
template <Field T>
bool is_row_stochastic(const Matrix<T>& m, const Tolerance& tol = {}) {
  if (m.rows() == 0 || m.cols() == 0) return false;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    T s = 0;
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (!leq<T>(T(0), m(i, j), tol)) return false;
      s += m(i, j);
    }
    if (!approx_eq<T>(s, T(1), tol)) return false;
  }
  return true;
}

}  // namespace gptwb
