#pragma once

#include <optional>

#include "gptwb/observable.hpp"

namespace gptwb {

/// Throws InvalidArgument unless a and b live on the same state space.
template <Field T>
void require_same_space(const Observable<T>& a, const Observable<T>& b, const char* op);

/// A row-stochastic nu (rows: outcomes of b, columns: outcomes of a) with
/// a_x = sum_y nu(y, x) b_y, or nullopt when none exists.
template <Field T>
std::optional<Matrix<T>> find_postprocessing(const Observable<T>& b, const Observable<T>& a,
                                             const Tolerance& tol = {});

/// a -> b and b -> a.
template <Field T>
bool are_pp_equivalent(const Observable<T>& a, const Observable<T>& b, const Tolerance& tol = {});

/// Every nonzero effect is indecomposable.
template <Field T>
bool is_pp_clean(const Observable<T>& a, const Tolerance& tol = {});

/// The observable with effects sum_y nu(y, x) b_y.
template <Field T>
Observable<T> apply_postprocessing(const Observable<T>& b, const Matrix<T>& nu);

}  // namespace gptwb
