#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "gptwb/matrix.hpp"

namespace gptwb {

/// Row-reduced echelon form of a matrix together with its pivot columns.
template <Field T>
struct Echelon {
  Matrix<T> reduced;
  std::vector<std::size_t> pivot_cols;
};

/// Gauss-Jordan elimination. Floats use partial pivoting and treat entries
/// with |x| <= eps (relative to the matrix scale) as zero.
template <Field T>
Echelon<T> row_reduce(const Matrix<T>& m, const Tolerance& tol = {});

/// Dimension of the row space.
template <Field T>
std::size_t rank(const Matrix<T>& m, const Tolerance& tol = {});

template <Field T>
std::size_t rank(const std::vector<Vector<T>>& rows, const Tolerance& tol = {});

/// Basis of {x : m x = 0}.
template <Field T>
std::vector<Vector<T>> null_space(const Matrix<T>& m, const Tolerance& tol = {});

/// The unique solution of m x = b, or nullopt when the system is inconsistent
/// or underdetermined.
template <Field T>
std::optional<Vector<T>> solve_unique(const Matrix<T>& m, std::span<const T> b,
                                      const Tolerance& tol = {});

/// Size of the largest set of pairwise orthogonal rows of a nonnegative
/// matrix. Two nonnegative rows are orthogonal iff their supports are
/// disjoint; all-zero rows are never counted.
template <Field T>
std::size_t count_orthogonal_rows(const Matrix<T>& m, const Tolerance& tol = {});

/// A witness for count_orthogonal_rows: indices of one maximum set.
template <Field T>
std::vector<std::size_t> max_orthogonal_row_set(const Matrix<T>& m, const Tolerance& tol = {});

}  // namespace gptwb
