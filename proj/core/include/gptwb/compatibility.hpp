#pragma once

#include <optional>
#include <vector>

#include "gptwb/simulation.hpp"

namespace gptwb {

/// Product-outcome observable G. Outcome k enumerates the tuple (x_1, ..., x_m)
/// in row-major order over `shape`.
template <Field T>
struct JointObservable {
  Observable<T> joint;
  std::vector<std::size_t> shape;

  std::vector<std::size_t> unflatten(std::size_t k) const;
  /// sum of G over all tuples with fixed i-th entry.
  Observable<T> marginal(std::size_t i) const;
};

/// Joint measurability by one LP over the joint effects (product outcome
/// count capped at 10^4). Polytopic spaces only.
template <Field T>
std::optional<JointObservable<T>> are_compatible(const std::vector<Observable<T>>& obs, const Tolerance& tol = {});

/// For dichotomic A = (a, u - a), B = (b, u - b): a functional g with
/// g >= 0, a >= g, b >= g and u >= a + b - g on the state space.
template <Field T>
std::optional<Vector<T>> dichotomic_compat_g(const Observable<T>& a, const Observable<T>& b,
                                             const Tolerance& tol = {});

/// Largest tau such that some g satisfies all four constraints with slack tau.
/// Compatible iff the margin is >= 0; its magnitude measures the distance
/// from the boundary.
double dichotomic_compat_margin(const Observable<double>& a, const Observable<double>& b);

enum class PsymVerdict { Incompatible, NecessaryPassed, IffCompatible };

const char* to_string(PsymVerdict v);

struct PsymResult {
  PsymVerdict verdict = PsymVerdict::NecessaryPassed;
  double criterion = 0;   // |a + b|_E + |a - b|_E
  bool boundary = false;  // criterion within 1e-7 of 2
};

/// Norm criterion for effects (a/2, alpha/2) and (b/2, beta/2) on a
/// point-symmetric space: necessary in general, sufficient when both are unbiased.
PsymResult psym_compat_test(const StateSpace<double>& s, std::span<const double> a, double alpha,
                            std::span<const double> b, double beta);

/// Explicit joint observable for unbiased (a/2, 1/2) and (b/2, 1/2) with
/// |a + b|_E + |a - b|_E <= 2. Outcome order: ++, +-, -+, --.
JointObservable<double> construct_joint_unbiased(const SpacePtr<double>& s, std::span<const double> a,
                                                 std::span<const double> b, const Tolerance& tol = {});

template <Field T>
struct NoiseCompatResult {
  Verdict verdict = Verdict::Inconclusive;  // Yes means compatible
  T w_sum = 0;
  std::vector<T> weights;                   // shared mixing distribution
  std::vector<Observable<T>> simulators;
  std::optional<JointObservable<T>> joint;
};

/// Sufficient condition sum_i w(A^(i); T) >= m - 1. When it holds, builds the
/// shared-distribution simulator set, checks every A^(i) is reproduced, and
/// returns the resulting joint observable.
template <Field T>
NoiseCompatResult<T> noise_sufficient_compat(const std::vector<Observable<T>>& obs, const Tolerance& tol = {});

/// Post-processable from every extreme simulation-irreducible observable.
/// Direct sums are decided summand by summand.
template <Field T>
bool is_fully_compatible(const Observable<T>& a, const Tolerance& tol = {});

/// Same, against a precomputed list of irreducibles of a's space.
template <Field T>
bool is_fully_compatible(const Observable<T>& a, const std::vector<Observable<T>>& irreducibles,
                         const Tolerance& tol = {});

/// The observable on summand i of a direct sum obtained by restricting each effect to that block.
template <Field T>
Observable<T> restrict_to_summand(const Observable<T>& a, std::size_t i);

/// Each effect is constant on every vertex group. The groups must partition
/// the vertices into linearly independent blocks.
template <Field T>
bool is_nondisturbing(const Observable<T>& a, const std::vector<std::vector<std::size_t>>& groups,
                      const Tolerance& tol = {});

/// Uses the direct-sum metadata of a's space.
template <Field T>
bool is_nondisturbing(const Observable<T>& a, const Tolerance& tol = {});

/// Lower bound on the noise content of fully compatible observables on the odd polygon S_n.
double fc_noise_lower_bound(std::size_t n);

struct FcSearchResult {
  Observable<double> observable;
  double mixing = 0;  // weight t of the irreducible in t G + (1 - t) T
  std::size_t irreducible_index = 0;
};

/// Looks for a nontrivial fully compatible observable of the form
/// t G + (1 - t) T with G an extreme irreducible and T uniform trivial,
/// bisecting on t. Returns the largest such t found for the first G that
/// admits one.
std::optional<FcSearchResult> find_nontrivial_fully_compatible(const SpacePtr<double>& s, const Tolerance& tol = {});

}  // namespace gptwb
