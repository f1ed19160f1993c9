#pragma once

#include <string>
#include <vector>

#include "gptwb/state_space.hpp"

namespace gptwb {

/// A finite family of effects on one state space, indexed by outcome labels.
template <Field T>
class Observable {
 public:
  Observable() = default;
  /// Labels default to "0", "1", ...; they must be unique.
  Observable(SpacePtr<T> space, std::vector<Vector<T>> effects, std::vector<std::string> labels = {});

  const StateSpace<T>& space() const { return *space_; }
  const SpacePtr<T>& space_ptr() const { return space_; }
  std::size_t size() const { return effects_.size(); }
  const Vector<T>& effect(std::size_t x) const { return effects_[x]; }
  const std::vector<Vector<T>>& effects() const { return effects_; }
  const std::vector<std::string>& labels() const { return labels_; }

 private:
  SpacePtr<T> space_;
  std::vector<Vector<T>> effects_;
  std::vector<std::string> labels_;
};

struct Diagnostic {
  bool ok = true;
  std::string message;
  explicit operator bool() const { return ok; }
};

template <Field T>
struct NoiseReport {
  T w_trivial = 0;
  std::vector<T> minima;  // per outcome, infimum over states
};

/// T_x = p_x u.
template <Field T>
Observable<T> trivial_observable(SpacePtr<T> space, const std::vector<T>& probs);

/// sum_i weights[i] * obs[i], outcome by outcome. All inputs must share the
/// space and outcome count; labels are taken from the first.
template <Field T>
Observable<T> mix_observables(const std::vector<T>& weights, const std::vector<Observable<T>>& obs);

/// Each effect valid and the effects summing to u.
template <Field T>
Diagnostic validate(const Observable<T>& a, const Tolerance& tol = {});

/// Every effect is a multiple of u.
template <Field T>
bool is_trivial(const Observable<T>& a, const Tolerance& tol = {});

/// w(A; T) = sum_x min_s A_x(s).
template <Field T>
NoiseReport<T> noise_content(const Observable<T>& a);

/// A nonzero effect on an extreme ray of the dual cone.
template <Field T>
bool is_indecomposable_effect(const StateSpace<T>& s, std::span<const T> e, const Tolerance& tol = {});

/// An effect with every value on the state space below eps.
template <Field T>
bool is_zero_effect(const StateSpace<T>& s, std::span<const T> e, const Tolerance& tol = {});

/// Whether b = c a for some c > 0, by comparing against the largest component of a.
template <Field T>
bool positively_proportional(std::span<const T> a, std::span<const T> b, const Tolerance& tol = {});

/// Drops zero effects and merges outcomes whose effects are positive multiples
/// of each other. Merged labels are joined with '+' in first-occurrence order.
template <Field T>
Observable<T> minimally_sufficient(const Observable<T>& a, const Tolerance& tol = {});

/// Nonzero effects linearly independent. Throws PreconditionViolated if some
/// nonzero effect is decomposable.
template <Field T>
bool is_extreme_clean(const Observable<T>& a, const Tolerance& tol = {});

/// sum_x max_s A_x(s)
template <Field T>
T lambda_max_obs(const Observable<T>& a);

/// -sum_x min_s A_x(s)
template <Field T>
T lambda_min_obs(const Observable<T>& a);

}  // namespace gptwb
