#pragma once

#include <vector>

#include "gptwb/observable.hpp"

namespace gptwb {

/// I_x(s) = A_x(s) s'_x: measure A, then prepare s'_x in the output space.
template <Field T>
class MPInstrument {
 public:
  /// Throws InvalidArgument if A is not a valid observable or some prepared
  /// state lies outside the output space.
  MPInstrument(Observable<T> observable, std::vector<Vector<T>> prepared, SpacePtr<T> output,
               const Tolerance& tol = {});

  const Observable<T>& observable() const { return observable_; }
  const std::vector<Vector<T>>& prepared_states() const { return prepared_; }
  const StateSpace<T>& output_space() const { return *output_; }
  const SpacePtr<T>& output_space_ptr() const { return output_; }

 private:
  Observable<T> observable_;
  std::vector<Vector<T>> prepared_;
  SpacePtr<T> output_;
};

/// Trash-and-prepare: a trivial observable followed by fixed preparations.
template <Field T>
MPInstrument<T> trash_and_prepare(SpacePtr<T> input, const std::vector<T>& probs, std::vector<Vector<T>> prepared,
                                  SpacePtr<T> output);

template <Field T>
const Observable<T>& induced_observable(const MPInstrument<T>& i);

/// J is a post-processing of I; depends only on the induced observables.
template <Field T>
bool mp_postprocess_check(const MPInstrument<T>& i, const MPInstrument<T>& j, const Tolerance& tol = {});

/// Induced observable indecomposable and every preparation attached to a
/// nonzero effect pure.
template <Field T>
bool is_indecomposable_mp(const MPInstrument<T>& i, const Tolerance& tol = {});

/// I is post-processing equivalent to some indecomposable instrument.
template <Field T>
bool equiv_indecomposable_check(const MPInstrument<T>& i, const Tolerance& tol = {});

}  // namespace gptwb
