#include "gptwb/simulation.hpp"

#include <cmath>

#include "combinatorics.hpp"
#include "gptwb/linalg.hpp"
#include "gptwb/lp.hpp"
#include "gptwb/postprocess.hpp"

namespace gptwb {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Yes:
      return "yes";
    case Verdict::No:
      return "no";
    case Verdict::Inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

template <Field T>
std::optional<SimWitness<T>> is_simulable(const Observable<T>& a, const std::vector<Observable<T>>& simulators,
                                          const Tolerance& tol) {
  if (simulators.empty()) throw InvalidArgument("is_simulable: empty simulator list");
  for (const auto& b : simulators) require_same_space(a, b, "is_simulable");
  const std::size_t na = a.size(), D = a.space().ambient_dim(), k = simulators.size();
  // Block i holds parts[i](y, x) at offset[i] + x * |Lambda_i| + y; the weights come last.
  std::vector<std::size_t> offset(k);
  std::size_t nvars = 0;
  for (std::size_t i = 0; i < k; ++i) {
    offset[i] = nvars;
    nvars += simulators[i].size() * na;
  }
  const std::size_t weight0 = nvars;
  nvars += k;
  LPProblem<T> p(nvars);
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t nb = simulators[i].size();
    for (std::size_t y = 0; y < nb; ++y) {
      Vector<T> row(nvars, T(0));
      for (std::size_t x = 0; x < na; ++x) row[offset[i] + x * nb + y] = 1;
      row[weight0 + i] = -1;
      p.add_equality(std::move(row), T(0));
    }
  }
  {
    Vector<T> row(nvars, T(0));
    for (std::size_t i = 0; i < k; ++i) row[weight0 + i] = 1;
    p.add_equality(std::move(row), T(1));
  }
  for (std::size_t x = 0; x < na; ++x) {
    for (std::size_t c = 0; c < D; ++c) {
      Vector<T> row(nvars, T(0));
      for (std::size_t i = 0; i < k; ++i) {
        const std::size_t nb = simulators[i].size();
        for (std::size_t y = 0; y < nb; ++y) row[offset[i] + x * nb + y] = simulators[i].effect(y)[c];
      }
      p.add_equality(std::move(row), a.effect(x)[c]);
    }
  }
  auto sol = lp_solve(p, tol);
  if (!sol) return std::nullopt;
  SimWitness<T> w;
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t nb = simulators[i].size();
    Matrix<T> m(nb, na);
    for (std::size_t x = 0; x < na; ++x)
      for (std::size_t y = 0; y < nb; ++y) m(y, x) = sol->x[offset[i] + x * nb + y];
    w.parts.push_back(std::move(m));
    w.weights.push_back(sol->x[weight0 + i]);
  }
  return w;
}

template <Field T>
Observable<T> apply_simulation(const std::vector<Observable<T>>& simulators, const SimWitness<T>& w) {
  if (simulators.empty() || w.parts.size() != simulators.size())
    throw DimensionMismatch("apply_simulation: witness does not match simulators");
  const std::size_t na = w.parts.front().cols();
  std::vector<Vector<T>> effects(na, Vector<T>(simulators.front().space().ambient_dim(), T(0)));
  for (std::size_t i = 0; i < simulators.size(); ++i)
    for (std::size_t x = 0; x < na; ++x)
      for (std::size_t y = 0; y < simulators[i].size(); ++y)
        if (w.parts[i](y, x) != 0) axpy<T>(effects[x], w.parts[i](y, x), simulators[i].effect(y));
  return Observable<T>(simulators.front().space_ptr(), std::move(effects));
}

template <Field T>
bool is_simulation_irreducible(const Observable<T>& a, const Tolerance& tol) {
  auto reduced = minimally_sufficient(a, tol);
  if (!is_pp_clean(reduced, tol)) return false;
  return is_extreme_clean(reduced, tol);
}

template <Field T>
std::vector<Observable<T>> enumerate_irreducibles(const SpacePtr<T>& s, const Tolerance& tol) {
  s->require_polytopic("enumerate_irreducibles");
  const auto& rays = s->dual_rays();
  const std::size_t D = s->ambient_dim();
  if (detail::binomial(rays.size(), std::min(D, rays.size())) * static_cast<double>(D) > 2e5)
    throw Unsupported("enumerate_irreducibles: " + s->name() + " has too many dual rays");
  std::vector<Observable<T>> out;
  for (std::size_t k = 1; k <= std::min(D, rays.size()); ++k) {
    std::vector<Observable<T>> found;
    detail::for_each_combination(rays.size(), k, [&](const std::vector<std::size_t>& subset) {
      Matrix<T> cols(D, k);
      for (std::size_t j = 0; j < k; ++j)
        for (std::size_t c = 0; c < D; ++c) cols(c, j) = rays[subset[j]].direction[c];
      if (rank(cols, tol) != k) return true;
      auto coef = solve_unique<T>(cols, s->unit(), tol);
      if (!coef) return true;
      for (const auto& c : *coef)
        if (!gt<T>(c, T(0), tol)) return true;
      std::vector<Vector<T>> effects;
      for (std::size_t j = 0; j < k; ++j) effects.push_back(scaled<T>(rays[subset[j]].direction, (*coef)[j]));
      Observable<T> cand(s, std::move(effects));
      for (const auto& prev : found)
        if (are_pp_equivalent(prev, cand, tol)) return true;
      found.push_back(std::move(cand));
      return true;
    });
    for (auto& f : found) out.push_back(std::move(f));
  }
  return out;
}

template <Field T>
std::vector<Observable<T>> dichotomic_generators(const SpacePtr<T>& s, const Tolerance& tol) {
  s->require_polytopic("dichotomic_generators");
  std::vector<Vector<T>> chosen;
  std::vector<Observable<T>> gens;
  for (const auto& f : s->extreme_effects()) {
    Vector<T> g = sub<T>(s->unit(), f);
    bool seen = false;
    for (const auto& c : chosen) seen = seen || approx_eq<T>(c, g, tol);
    if (seen) continue;
    chosen.push_back(f);
    gens.emplace_back(s, std::vector<Vector<T>>{f, std::move(g)});
  }
  if (gens.empty()) gens.push_back(trivial_observable<T>(s, {T(1)}));
  return gens;
}

template <Field T>
DichotomicResult<T> is_effectively_dichotomic(const Observable<T>& a, const Tolerance& tol) {
  a.space().require_polytopic("is_effectively_dichotomic");
  DichotomicResult<T> r;
  const T lmax = lambda_max_obs(a);
  for (const auto& e : a.effects()) {
    if (leq<T>(lmax - effect_max(a.space(), std::span<const T>(e)), T(1), tol)) {
      r.verdict = Verdict::Yes;
      r.reason = "screen-a";
      return r;
    }
  }
  if (gt<T>(lmax, T(2), tol)) {
    r.verdict = Verdict::No;
    r.reason = "screen-b";
    return r;
  }
  r.reason = "lp";
  r.witness = is_simulable(a, dichotomic_generators(a.space_ptr(), tol), tol);
  r.verdict = r.witness ? Verdict::Yes : Verdict::No;
  return r;
}

template <Field T>
bool effect_in_Etilde_t(const StateSpace<T>& s, std::span<const T> e, const T& t, const Tolerance& tol) {
  s.require_polytopic("effect_in_Etilde_t");
  if (t < 0 || t > 1) throw InvalidArgument("effect_in_Etilde_t: t must lie in [0, 1]");
  if (e.size() != s.ambient_dim()) throw DimensionMismatch("effect_in_Etilde_t: effect length");
  const std::size_t D = s.ambient_dim();
  // Variables: e' (free, D of them) then p in [0, 1].
  LPProblem<T> p(D + 1);
  for (std::size_t c = 0; c < D; ++c) p.set_free(c);
  p.set_bounds(D, T(0), T(1));
  for (std::size_t c = 0; c < D; ++c) {
    Vector<T> row(D + 1, T(0));
    row[c] = t;
    row[D] = (T(1) - t) * s.unit()[c];
    p.add_equality(std::move(row), e[c]);
  }
  for (const auto& v : s.vertices()) {
    Vector<T> lo(D + 1, T(0)), hi(D + 1, T(0));
    for (std::size_t c = 0; c < D; ++c) {
      lo[c] = v[c];
      hi[c] = -v[c];
    }
    p.add_inequality(std::move(lo), T(0));
    p.add_inequality(std::move(hi), T(-1));
  }
  return lp_solve(p, tol).has_value();
}

template <Field T>
bool effect_in_Ehat_t(const StateSpace<T>& s, std::span<const T> e, const T& t, const Tolerance& tol) {
  if (!s.is_point_symmetric()) throw PreconditionViolated("effect_in_Ehat_t: space is not point-symmetric");
  if (t < 0 || t > 1) throw InvalidArgument("effect_in_Ehat_t: t must lie in [0, 1]");
  const Vector<T> s0 = s.center();
  const T at_center = dot<T>(e, s0);
  if (t == 0) {
    // The trivial segment {p u}.
    return approx_eq<T>(effect_max(s, e), effect_min(s, e), tol) && is_valid_effect(s, e, tol);
  }
  Vector<T> inner(e.begin(), e.end());
  axpy<T>(inner, -(T(1) - t) * at_center, s.unit());
  inner = scaled<T>(inner, T(1) / t);
  return is_valid_effect<T>(s, inner, tol);
}

template <Field T>
bool obs_in_Otilde_t(const Observable<T>& a, const T& t, const Tolerance& tol) {
  if (t < 0 || t > 1) throw InvalidArgument("obs_in_Otilde_t: t must lie in [0, 1]");
  return leq<T>(T(1) - t, noise_content(a).w_trivial, tol);
}

template <Field T>
bool obs_in_O_of_E(const Observable<T>& a, const std::function<bool(std::span<const T>)>& predicate) {
  if (a.size() > 16) throw Unsupported("obs_in_O_of_E: more than 16 outcomes");
  const std::size_t n = a.size();
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    Vector<T> partial(a.space().ambient_dim(), T(0));
    for (std::size_t x = 0; x < n; ++x)
      if (mask >> x & 1) axpy<T>(partial, T(1), a.effect(x));
    if (!predicate(partial)) return false;
  }
  return true;
}

UnambiguousBounds unambiguous_qubit_bounds(double c) {
  if (!(c >= 0 && c <= 1)) throw InvalidArgument("unambiguous_qubit_bounds: overlap must lie in [0, 1]");
  UnambiguousBounds b;
  b.optimal = 1 - c;
  b.dichotomic_bound = c == 0 ? 1.0 : 0.5 * (1 - c * c);
  return b;
}

#define GPTWB_INSTANTIATE(T)                                                                                  \
  template std::optional<SimWitness<T>> is_simulable<T>(const Observable<T>&,                                 \
                                                        const std::vector<Observable<T>>&, const Tolerance&); \
  template Observable<T> apply_simulation<T>(const std::vector<Observable<T>>&, const SimWitness<T>&);        \
  template bool is_simulation_irreducible<T>(const Observable<T>&, const Tolerance&);                         \
  template std::vector<Observable<T>> enumerate_irreducibles<T>(const SpacePtr<T>&, const Tolerance&);        \
  template std::vector<Observable<T>> dichotomic_generators<T>(const SpacePtr<T>&, const Tolerance&);         \
  template DichotomicResult<T> is_effectively_dichotomic<T>(const Observable<T>&, const Tolerance&);          \
  template bool effect_in_Etilde_t<T>(const StateSpace<T>&, std::span<const T>, const T&, const Tolerance&);  \
  template bool effect_in_Ehat_t<T>(const StateSpace<T>&, std::span<const T>, const T&, const Tolerance&);    \
  template bool obs_in_Otilde_t<T>(const Observable<T>&, const T&, const Tolerance&);                         \
  template bool obs_in_O_of_E<T>(const Observable<T>&, const std::function<bool(std::span<const T>)>&);

GPTWB_INSTANTIATE(double)
GPTWB_INSTANTIATE(Rational)

#undef GPTWB_INSTANTIATE

}  // namespace gptwb
