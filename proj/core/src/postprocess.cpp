#include "gptwb/postprocess.hpp"

#include "gptwb/lp.hpp"

namespace gptwb {

template <Field T>
void require_same_space(const Observable<T>& a, const Observable<T>& b, const char* op) {
  if (a.space_ptr() == b.space_ptr()) return;
  if (a.space().name() != b.space().name() || a.space().ambient_dim() != b.space().ambient_dim())
    throw InvalidArgument(std::string(op) + ": observables live on different state spaces");
}

template <Field T>
std::optional<Matrix<T>> find_postprocessing(const Observable<T>& b, const Observable<T>& a, const Tolerance& tol) {
  require_same_space(a, b, "find_postprocessing");
  const std::size_t nb = b.size(), na = a.size(), D = a.space().ambient_dim();
  // Column-major layout: nu(y, x) is variable x * nb + y.
  LPProblem<T> p(nb * na);
  for (std::size_t y = 0; y < nb; ++y) {
    Vector<T> row(nb * na, T(0));
    for (std::size_t x = 0; x < na; ++x) row[x * nb + y] = 1;
    p.add_equality(std::move(row), T(1));
  }
  for (std::size_t x = 0; x < na; ++x) {
    for (std::size_t c = 0; c < D; ++c) {
      Vector<T> row(nb * na, T(0));
      for (std::size_t y = 0; y < nb; ++y) row[x * nb + y] = b.effect(y)[c];
      p.add_equality(std::move(row), a.effect(x)[c]);
    }
  }
  auto sol = lp_solve(p, tol);
  if (!sol) return std::nullopt;
  Matrix<T> nu(nb, na);
  for (std::size_t x = 0; x < na; ++x)
    for (std::size_t y = 0; y < nb; ++y) nu(y, x) = sol->x[x * nb + y];
  return nu;
}

template <Field T>
bool are_pp_equivalent(const Observable<T>& a, const Observable<T>& b, const Tolerance& tol) {
  return find_postprocessing(b, a, tol).has_value() && find_postprocessing(a, b, tol).has_value();
}

template <Field T>
bool is_pp_clean(const Observable<T>& a, const Tolerance& tol) {
  for (const auto& e : a.effects()) {
    if (is_zero_effect<T>(a.space(), e, tol)) continue;
    if (!is_indecomposable_effect<T>(a.space(), e, tol)) return false;
  }
  return true;
}

template <Field T>
Observable<T> apply_postprocessing(const Observable<T>& b, const Matrix<T>& nu) {
  if (nu.rows() != b.size()) throw DimensionMismatch("apply_postprocessing: matrix rows differ from outcome count");
  std::vector<Vector<T>> effects(nu.cols(), Vector<T>(b.space().ambient_dim(), T(0)));
  for (std::size_t x = 0; x < nu.cols(); ++x)
    for (std::size_t y = 0; y < nu.rows(); ++y)
      if (nu(y, x) != 0) axpy<T>(effects[x], nu(y, x), b.effect(y));
  return Observable<T>(b.space_ptr(), std::move(effects));
}

#define GPTWB_INSTANTIATE(T)                                                                                   \
  template void require_same_space<T>(const Observable<T>&, const Observable<T>&, const char*);                \
  template std::optional<Matrix<T>> find_postprocessing<T>(const Observable<T>&, const Observable<T>&,         \
                                                           const Tolerance&);                                  \
  template bool are_pp_equivalent<T>(const Observable<T>&, const Observable<T>&, const Tolerance&);            \
  template bool is_pp_clean<T>(const Observable<T>&, const Tolerance&);                                        \
  template Observable<T> apply_postprocessing<T>(const Observable<T>&, const Matrix<T>&);

GPTWB_INSTANTIATE(double)
GPTWB_INSTANTIATE(Rational)

#undef GPTWB_INSTANTIATE

}  // namespace gptwb
