#include "gptwb/observable.hpp"

#include <cmath>
#include <set>

#include "gptwb/linalg.hpp"

namespace gptwb {

template <Field T>
Observable<T>::Observable(SpacePtr<T> space, std::vector<Vector<T>> effects, std::vector<std::string> labels)
    : space_(std::move(space)), effects_(std::move(effects)), labels_(std::move(labels)) {
  if (!space_) throw InvalidArgument("Observable: null state space");
  if (effects_.empty()) throw InvalidArgument("Observable: no outcomes");
  for (const auto& e : effects_)
    if (e.size() != space_->ambient_dim()) throw DimensionMismatch("Observable: effect length differs from space dimension");
  if (labels_.empty()) {
    for (std::size_t i = 0; i < effects_.size(); ++i) labels_.push_back(std::to_string(i));
  }
  if (labels_.size() != effects_.size()) throw DimensionMismatch("Observable: label count differs from effect count");
  std::set<std::string> seen(labels_.begin(), labels_.end());
  if (seen.size() != labels_.size()) throw InvalidArgument("Observable: duplicate outcome labels");
}

template <Field T>
Observable<T> trivial_observable(SpacePtr<T> space, const std::vector<T>& probs) {
  std::vector<Vector<T>> effects;
  for (const auto& p : probs) effects.push_back(scaled<T>(space->unit(), p));
  return Observable<T>(std::move(space), std::move(effects));
}

template <Field T>
Observable<T> mix_observables(const std::vector<T>& weights, const std::vector<Observable<T>>& obs) {
  if (obs.empty() || weights.size() != obs.size()) throw InvalidArgument("mix_observables: weight count");
  const auto& first = obs.front();
  std::vector<Vector<T>> effects(first.size(), Vector<T>(first.space().ambient_dim(), T(0)));
  for (std::size_t i = 0; i < obs.size(); ++i) {
    if (obs[i].size() != first.size()) throw DimensionMismatch("mix_observables: outcome counts differ");
    if (obs[i].space().ambient_dim() != first.space().ambient_dim())
      throw DimensionMismatch("mix_observables: spaces differ");
    for (std::size_t x = 0; x < first.size(); ++x) axpy<T>(effects[x], weights[i], obs[i].effect(x));
  }
  return Observable<T>(first.space_ptr(), std::move(effects), first.labels());
}

template <Field T>
Diagnostic validate(const Observable<T>& a, const Tolerance& tol) {
  const auto& s = a.space();
  Vector<T> total(s.ambient_dim(), T(0));
  for (std::size_t x = 0; x < a.size(); ++x) {
    if (!is_valid_effect<T>(s, a.effect(x), tol))
      return {false, "effect '" + a.labels()[x] + "' is not in [o, u]"};
    axpy<T>(total, T(1), a.effect(x));
  }
  if (!approx_eq<T>(total, s.unit(), tol)) return {false, "effects do not sum to the unit functional"};
  return {};
}

template <Field T>
bool is_trivial(const Observable<T>& a, const Tolerance& tol) {
  for (const auto& e : a.effects())
    if (!approx_eq<T>(effect_max(a.space(), std::span<const T>(e)), effect_min(a.space(), std::span<const T>(e)), tol))
      return false;
  return true;
}

template <Field T>
NoiseReport<T> noise_content(const Observable<T>& a) {
  NoiseReport<T> r;
  for (const auto& e : a.effects()) {
    r.minima.push_back(effect_min(a.space(), std::span<const T>(e)));
    r.w_trivial += r.minima.back();
  }
  return r;
}

template <Field T>
bool is_zero_effect(const StateSpace<T>& s, std::span<const T> e, const Tolerance& tol) {
  if constexpr (is_exact_v<T>) {
    return effect_max(s, e) == 0 && effect_min(s, e) == 0;
  } else {
    return std::abs(effect_max(s, e)) < tol.eps && std::abs(effect_min(s, e)) < tol.eps;
  }
}

template <Field T>
bool is_indecomposable_effect(const StateSpace<T>& s, std::span<const T> e, const Tolerance& tol) {
  if (is_zero_effect(s, e, tol)) throw InvalidArgument("is_indecomposable_effect: zero effect");
  if (s.kind() == SpaceKind::NormBall) {
    // Extreme rays of the ball's dual cone: functionals vanishing at exactly one boundary point.
    return is_zero<T>(effect_min(s, e), tol) && !is_zero<T>(effect_max(s, e), tol);
  }
  std::vector<Vector<T>> vanishing;
  for (const auto& v : s.vertices())
    if (is_zero<T>(dot<T>(e, v), tol)) vanishing.push_back(v);
  return rank(vanishing, tol) == s.affine_dim();
}

template <Field T>
bool positively_proportional(std::span<const T> a, std::span<const T> b, const Tolerance& tol) {
  if (a.size() != b.size()) return false;
  std::size_t k = 0;
  for (std::size_t i = 1; i < a.size(); ++i)
    if (abs_value<T>(a[i]) > abs_value<T>(a[k])) k = i;
  if (is_zero<T>(a[k], tol)) return false;
  const T c = b[k] / a[k];
  if (!gt<T>(c, T(0), tol)) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!approx_eq<T>(b[i], c * a[i], tol)) return false;
  return true;
}

template <Field T>
Observable<T> minimally_sufficient(const Observable<T>& a, const Tolerance& tol) {
  std::vector<Vector<T>> effects;
  std::vector<std::string> labels;
  for (std::size_t x = 0; x < a.size(); ++x) {
    const auto& e = a.effect(x);
    if (is_zero_effect<T>(a.space(), e, tol)) continue;
    bool merged = false;
    for (std::size_t k = 0; k < effects.size() && !merged; ++k) {
      if (positively_proportional<T>(effects[k], e, tol)) {
        axpy<T>(effects[k], T(1), e);
        labels[k] += "+" + a.labels()[x];
        merged = true;
      }
    }
    if (!merged) {
      effects.push_back(e);
      labels.push_back(a.labels()[x]);
    }
  }
  if (effects.empty()) throw InvalidArgument("minimally_sufficient: observable has only zero effects");
  return Observable<T>(a.space_ptr(), std::move(effects), std::move(labels));
}

template <Field T>
bool is_extreme_clean(const Observable<T>& a, const Tolerance& tol) {
  std::vector<Vector<T>> nonzero;
  for (const auto& e : a.effects()) {
    if (is_zero_effect<T>(a.space(), e, tol)) continue;
    if (!is_indecomposable_effect<T>(a.space(), e, tol))
      throw PreconditionViolated("is_extreme_clean: observable has a decomposable effect");
    nonzero.push_back(e);
  }
  return rank(nonzero, tol) == nonzero.size();
}

template <Field T>
T lambda_max_obs(const Observable<T>& a) {
  T total = 0;
  for (const auto& e : a.effects()) total += effect_max(a.space(), std::span<const T>(e));
  return total;
}

template <Field T>
T lambda_min_obs(const Observable<T>& a) {
  T total = 0;
  for (const auto& e : a.effects()) total -= effect_min(a.space(), std::span<const T>(e));
  return total;
}

template class Observable<double>;
template class Observable<Rational>;

#define GPTWB_INSTANTIATE(T)                                                                              \
  template Observable<T> trivial_observable<T>(SpacePtr<T>, const std::vector<T>&);                       \
  template Observable<T> mix_observables<T>(const std::vector<T>&, const std::vector<Observable<T>>&);    \
  template Diagnostic validate<T>(const Observable<T>&, const Tolerance&);                                \
  template bool is_trivial<T>(const Observable<T>&, const Tolerance&);                                    \
  template NoiseReport<T> noise_content<T>(const Observable<T>&);                                         \
  template bool is_zero_effect<T>(const StateSpace<T>&, std::span<const T>, const Tolerance&);            \
  template bool is_indecomposable_effect<T>(const StateSpace<T>&, std::span<const T>, const Tolerance&);  \
  template bool positively_proportional<T>(std::span<const T>, std::span<const T>, const Tolerance&);     \
  template Observable<T> minimally_sufficient<T>(const Observable<T>&, const Tolerance&);                  \
  template bool is_extreme_clean<T>(const Observable<T>&, const Tolerance&);                              \
  template T lambda_max_obs<T>(const Observable<T>&);                                                     \
  template T lambda_min_obs<T>(const Observable<T>&);

GPTWB_INSTANTIATE(double)
GPTWB_INSTANTIATE(Rational)

#undef GPTWB_INSTANTIATE

}  // namespace gptwb
