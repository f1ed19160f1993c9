#pragma once

#include <functional>
#include <optional>
#include <string>

#include "gptwb/observable.hpp"

namespace gptwb {

enum class Verdict { Yes, No, Inconclusive };

const char* to_string(Verdict v);

/// A = sum_i sum_y parts[i](y, x) B^(i)_y with every row of parts[i] summing
/// to weights[i] and the weights summing to 1.
template <Field T>
struct SimWitness {
  std::vector<T> weights;
  std::vector<Matrix<T>> parts;
};

/// Decides A in sim(simulators) by one LP in the variables parts[i] and weights.
template <Field T>
std::optional<SimWitness<T>> is_simulable(const Observable<T>& a, const std::vector<Observable<T>>& simulators,
                                          const Tolerance& tol = {});

/// Reconstructs the simulated observable from a witness.
template <Field T>
Observable<T> apply_simulation(const std::vector<Observable<T>>& simulators, const SimWitness<T>& w);

/// The minimally sufficient representative has only indecomposable,
/// linearly independent effects.
template <Field T>
bool is_simulation_irreducible(const Observable<T>& a, const Tolerance& tol = {});

/// Extreme simulation-irreducible observables up to post-processing
/// equivalence, from the linearly independent sets of dual-cone rays that
/// combine to u with strictly positive coefficients.
template <Field T>
std::vector<Observable<T>> enumerate_irreducibles(const SpacePtr<T>& s, const Tolerance& tol = {});

template <Field T>
struct DichotomicResult {
  Verdict verdict = Verdict::Inconclusive;
  std::string reason;  // "screen-a", "screen-b" or "lp"
  std::optional<SimWitness<T>> witness;
};

/// Membership in sim of all dichotomic observables. Every dichotomic (e, u-e)
/// is a mixture of (f, u-f) over extreme effects f appearing in a convex
/// decomposition of e, so the finitely many (f, u-f) generate the whole set.
template <Field T>
DichotomicResult<T> is_effectively_dichotomic(const Observable<T>& a, const Tolerance& tol = {});

/// The generating set used by is_effectively_dichotomic.
template <Field T>
std::vector<Observable<T>> dichotomic_generators(const SpacePtr<T>& s, const Tolerance& tol = {});

/// e = t e' + (1 - t) p u for a valid effect e' and p in [0, 1].
template <Field T>
bool effect_in_Etilde_t(const StateSpace<T>& s, std::span<const T> e, const T& t, const Tolerance& tol = {});

/// e = t e' + (1 - t) e(s0) u for a valid effect e'; point-symmetric spaces only.
template <Field T>
bool effect_in_Ehat_t(const StateSpace<T>& s, std::span<const T> e, const T& t, const Tolerance& tol = {});

/// w(A; T) >= 1 - t.
template <Field T>
bool obs_in_Otilde_t(const Observable<T>& a, const T& t, const Tolerance& tol = {});

/// Every partial sum of effects of A satisfies the predicate (at most 16 outcomes).
template <Field T>
bool obs_in_O_of_E(const Observable<T>& a, const std::function<bool(std::span<const T>)>& predicate);

struct UnambiguousBounds {
  double dichotomic_bound = 0;
  double optimal = 0;
};

/// Success probabilities for unambiguously discriminating two pure qubit
/// states with overlap c = |<phi1|phi2>| and equal priors: the best
/// effectively dichotomic POVM versus the unrestricted optimum 1 - c.
/// Orthogonal states (c = 0) are perfectly distinguished by a projective,
/// hence dichotomic, measurement.
UnambiguousBounds unambiguous_qubit_bounds(double c);

}  // namespace gptwb
