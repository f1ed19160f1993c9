#include "gptwb/instruments.hpp"

#include "gptwb/postprocess.hpp"

namespace gptwb {

template <Field T>
MPInstrument<T>::MPInstrument(Observable<T> observable, std::vector<Vector<T>> prepared, SpacePtr<T> output,
                              const Tolerance& tol)
    : observable_(std::move(observable)), prepared_(std::move(prepared)), output_(std::move(output)) {
  if (!output_) throw InvalidArgument("MPInstrument: null output space");
  if (auto d = validate(observable_, tol); !d) throw InvalidArgument("MPInstrument: " + d.message);
  if (prepared_.size() != observable_.size())
    throw DimensionMismatch("MPInstrument: one prepared state per outcome required");
  for (std::size_t x = 0; x < prepared_.size(); ++x)
    if (!is_state<T>(*output_, prepared_[x], tol))
      throw InvalidArgument("MPInstrument: prepared state for outcome '" + observable_.labels()[x] +
                            "' is not in the output space");
}

template <Field T>
MPInstrument<T> trash_and_prepare(SpacePtr<T> input, const std::vector<T>& probs, std::vector<Vector<T>> prepared,
                                  SpacePtr<T> output) {
  return MPInstrument<T>(trivial_observable<T>(std::move(input), probs), std::move(prepared), std::move(output));
}

template <Field T>
const Observable<T>& induced_observable(const MPInstrument<T>& i) {
  return i.observable();
}

template <Field T>
bool mp_postprocess_check(const MPInstrument<T>& i, const MPInstrument<T>& j, const Tolerance& tol) {
  return find_postprocessing(i.observable(), j.observable(), tol).has_value();
}

template <Field T>
bool is_indecomposable_mp(const MPInstrument<T>& i, const Tolerance& tol) {
  i.output_space().require_polytopic("is_indecomposable_mp");
  const auto& a = i.observable();
  if (!is_pp_clean(a, tol)) return false;
  for (std::size_t x = 0; x < a.size(); ++x) {
    if (is_zero_effect<T>(a.space(), a.effect(x), tol)) continue;
    if (vertex_index<T>(i.output_space(), i.prepared_states()[x], tol) < 0) return false;
  }
  return true;
}

template <Field T>
bool equiv_indecomposable_check(const MPInstrument<T>& i, const Tolerance& tol) {
  return is_pp_clean(minimally_sufficient(i.observable(), tol), tol);
}

template class MPInstrument<double>;
template class MPInstrument<Rational>;

#define GPTWB_INSTANTIATE(T)                                                                                      \
  template MPInstrument<T> trash_and_prepare<T>(SpacePtr<T>, const std::vector<T>&, std::vector<Vector<T>>,      \
                                                SpacePtr<T>);                                                    \
  template const Observable<T>& induced_observable<T>(const MPInstrument<T>&);                                   \
  template bool mp_postprocess_check<T>(const MPInstrument<T>&, const MPInstrument<T>&, const Tolerance&);       \
  template bool is_indecomposable_mp<T>(const MPInstrument<T>&, const Tolerance&);                               \
  template bool equiv_indecomposable_check<T>(const MPInstrument<T>&, const Tolerance&);

GPTWB_INSTANTIATE(double)
GPTWB_INSTANTIATE(Rational)

#undef GPTWB_INSTANTIATE

}  // namespace gptwb
