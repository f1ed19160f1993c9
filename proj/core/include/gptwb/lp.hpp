#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "gptwb/matrix.hpp"

namespace gptwb {

/// maximize objective·x  subject to
///   eq_rows[k]·x   == eq_rhs[k]
///   ineq_rows[k]·x >= ineq_rhs[k]
///   lower[j] <= x[j] <= upper[j]   (missing bound = unbounded on that side)
///
/// Without an objective the problem is a pure feasibility question.
/// Variables start with lower bound 0 and no upper bound.
template <Field T>
struct LPProblem {
  explicit LPProblem(std::size_t n = 0) : num_vars(n), lower(n, T(0)), upper(n) {}

  std::size_t num_vars;
  std::optional<Vector<T>> objective;
  std::vector<Vector<T>> eq_rows;
  Vector<T> eq_rhs;
  std::vector<Vector<T>> ineq_rows;
  Vector<T> ineq_rhs;
  std::vector<std::optional<T>> lower;
  std::vector<std::optional<T>> upper;

  /// Appends a fresh variable and returns its index.
  std::size_t add_var(std::optional<T> lo = T(0), std::optional<T> hi = std::nullopt);
  void add_equality(Vector<T> row, T rhs);
  /// row·x >= rhs
  void add_inequality(Vector<T> row, T rhs);
  void set_free(std::size_t j);
  void set_bounds(std::size_t j, std::optional<T> lo, std::optional<T> hi);

  /// Throws DimensionMismatch when a block disagrees with num_vars.
  void validate() const;
};

template <Field T>
struct LPSolution {
  Vector<T> x;
  T objective = 0;
};

/// Two-phase primal simplex on a dense tableau with Bland's anti-cycling
/// rule. Returns nullopt when infeasible (certified for exact scalars; at
/// tolerance eps for floats). Throws UnboundedObjective when the objective
/// grows without bound over the feasible set.
template <Field T>
std::optional<LPSolution<T>> lp_solve(const LPProblem<T>& p, const Tolerance& tol = {});

/// Largest violation of any constraint of p at x (0 when x is feasible).
template <Field T>
T lp_violation(const LPProblem<T>& p, std::span<const T> x);

}  // namespace gptwb
