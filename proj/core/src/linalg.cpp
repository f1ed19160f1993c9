#include "gptwb/linalg.hpp"

#include <bit>
#include <cstdint>

namespace gptwb {

namespace {

template <Field T>
T pivot_threshold(const Matrix<T>& m, const Tolerance& tol) {
  if constexpr (is_exact_v<T>) {
    return T(0);
  } else {
    T scale = 1;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      T r = max_abs<T>(m.row(i));
      if (r > scale) scale = r;
    }
    return tol.eps * scale;
  }
}

}  // namespace

template <Field T>
Echelon<T> row_reduce(const Matrix<T>& m, const Tolerance& tol) {
  Echelon<T> out{m, {}};
  Matrix<T>& a = out.reduced;
  const T threshold = pivot_threshold(m, tol);
  std::size_t r = 0;
  for (std::size_t c = 0; c < a.cols() && r < a.rows(); ++c) {
    std::size_t best = a.rows();
    T best_val = threshold;
    for (std::size_t i = r; i < a.rows(); ++i) {
      T v = abs_value<T>(a(i, c));
      if constexpr (is_exact_v<T>) {
        if (v != 0) {
          best = i;
          break;
        }
      } else {
        if (v > best_val) {
          best_val = v;
          best = i;
        }
      }
    }
    if (best == a.rows()) {
      for (std::size_t i = r; i < a.rows(); ++i) a(i, c) = 0;
      continue;
    }
    if (best != r)
      for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(r, j), a(best, j));
    const T inv = T(1) / a(r, c);
    for (std::size_t j = c; j < a.cols(); ++j) a(r, j) *= inv;
    for (std::size_t i = 0; i < a.rows(); ++i) {
      if (i == r || a(i, c) == 0) continue;
      const T f = a(i, c);
      for (std::size_t j = c; j < a.cols(); ++j) a(i, j) -= f * a(r, j);
      a(i, c) = 0;
    }
    out.pivot_cols.push_back(c);
    ++r;
  }
  return out;
}

template <Field T>
std::size_t rank(const Matrix<T>& m, const Tolerance& tol) {
  return row_reduce(m, tol).pivot_cols.size();
}

template <Field T>
std::size_t rank(const std::vector<Vector<T>>& rows, const Tolerance& tol) {
  if (rows.empty()) return 0;
  return rank(Matrix<T>::from_rows(rows), tol);
}

template <Field T>
std::vector<Vector<T>> null_space(const Matrix<T>& m, const Tolerance& tol) {
  const auto ech = row_reduce(m, tol);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto c : ech.pivot_cols) is_pivot[c] = true;
  std::vector<Vector<T>> basis;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    Vector<T> v(m.cols(), T(0));
    v[f] = 1;
    for (std::size_t r = 0; r < ech.pivot_cols.size(); ++r) v[ech.pivot_cols[r]] = -ech.reduced(r, f);
    basis.push_back(std::move(v));
  }
  return basis;
}

template <Field T>
std::optional<Vector<T>> solve_unique(const Matrix<T>& m, std::span<const T> b, const Tolerance& tol) {
  if (b.size() != m.rows()) throw DimensionMismatch("solve_unique: rhs length");
  Matrix<T> aug(m.rows(), m.cols() + 1);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) aug(i, j) = m(i, j);
    aug(i, m.cols()) = b[i];
  }
  const auto ech = row_reduce(aug, tol);
  if (!ech.pivot_cols.empty() && ech.pivot_cols.back() == m.cols()) return std::nullopt;
  if (ech.pivot_cols.size() != m.cols()) return std::nullopt;
  Vector<T> x(m.cols());
  for (std::size_t r = 0; r < m.cols(); ++r) x[ech.pivot_cols[r]] = ech.reduced(r, m.cols());
  // Floats: confirm the residual since near-singular systems pass elimination.
  if constexpr (!is_exact_v<T>) {
    auto mx = m * std::span<const T>(x);
    T scale = std::max(T(1), max_abs<T>(b));
    for (std::size_t i = 0; i < mx.size(); ++i)
      if (abs_value<T>(mx[i] - b[i]) > 1e3 * tol.eps * scale) return std::nullopt;
  }
  return x;
}

namespace {

struct IndependentSetSearch {
  std::vector<std::uint64_t> conflicts;
  std::uint64_t best_set = 0;
  int best_size = 0;

  void run(std::uint64_t chosen, int chosen_size, std::uint64_t candidates) {
    if (chosen_size + std::popcount(candidates) <= best_size) return;
    if (candidates == 0) {
      best_size = chosen_size;
      best_set = chosen;
      return;
    }
    const int v = std::countr_zero(candidates);
    const std::uint64_t bit = std::uint64_t{1} << v;
    run(chosen | bit, chosen_size + 1, candidates & ~bit & ~conflicts[v]);
    run(chosen, chosen_size, candidates & ~bit);
  }
};

}  // namespace

template <Field T>
std::vector<std::size_t> max_orthogonal_row_set(const Matrix<T>& m, const Tolerance& tol) {
  const std::size_t n = m.rows();
  if (n > 64) throw Unsupported("count_orthogonal_rows: more than 64 rows");
  std::vector<std::vector<bool>> supp(n, std::vector<bool>(m.cols(), false));
  std::uint64_t candidates = 0;
  for (std::size_t i = 0; i < n; ++i) {
    bool nonzero = false;
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (!is_zero<T>(m(i, j), tol)) {
        supp[i][j] = true;
        nonzero = true;
      }
    }
    if (nonzero) candidates |= std::uint64_t{1} << i;
  }
  IndependentSetSearch search;
  search.conflicts.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = i + 1; k < n; ++k)
      for (std::size_t j = 0; j < m.cols(); ++j)
        if (supp[i][j] && supp[k][j]) {
          search.conflicts[i] |= std::uint64_t{1} << k;
          search.conflicts[k] |= std::uint64_t{1} << i;
          break;
        }
  search.run(0, 0, candidates);
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < n; ++i)
    if (search.best_set >> i & 1) out.push_back(i);
  return out;
}

template <Field T>
std::size_t count_orthogonal_rows(const Matrix<T>& m, const Tolerance& tol) {
  return max_orthogonal_row_set(m, tol).size();
}

#define GPTWB_INSTANTIATE(T)                                                                   \
  template Echelon<T> row_reduce(const Matrix<T>&, const Tolerance&);                          \
  template std::size_t rank(const Matrix<T>&, const Tolerance&);                               \
  template std::size_t rank(const std::vector<Vector<T>>&, const Tolerance&);                  \
  template std::vector<Vector<T>> null_space(const Matrix<T>&, const Tolerance&);              \
  template std::optional<Vector<T>> solve_unique(const Matrix<T>&, std::span<const T>,         \
                                                 const Tolerance&);                            \
  template std::size_t count_orthogonal_rows(const Matrix<T>&, const Tolerance&);              \
  template std::vector<std::size_t> max_orthogonal_row_set(const Matrix<T>&, const Tolerance&);

GPTWB_INSTANTIATE(double)
GPTWB_INSTANTIATE(Rational)

#undef GPTWB_INSTANTIATE

}  // namespace gptwb
