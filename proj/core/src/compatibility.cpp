#include "gptwb/compatibility.hpp"

#include <cmath>
#include <numbers>

#include "gptwb/linalg.hpp"
#include "gptwb/lp.hpp"
#include "gptwb/postprocess.hpp"

namespace gptwb {

template <Field T>
std::vector<std::size_t> JointObservable<T>::unflatten(std::size_t k) const {
  std::vector<std::size_t> idx(shape.size());
  for (std::size_t i = shape.size(); i-- > 0;) {
    idx[i] = k % shape[i];
    k /= shape[i];
  }
  return idx;
}

template <Field T>
Observable<T> JointObservable<T>::marginal(std::size_t i) const {
  if (i >= shape.size()) throw InvalidArgument("JointObservable::marginal: index out of range");
  std::vector<Vector<T>> effects(shape[i], Vector<T>(joint.space().ambient_dim(), T(0)));
  for (std::size_t k = 0; k < joint.size(); ++k) axpy<T>(effects[unflatten(k)[i]], T(1), joint.effect(k));
  return Observable<T>(joint.space_ptr(), std::move(effects));
}

namespace {

template <Field T>
std::vector<std::string> product_labels(const std::vector<Observable<T>>& obs, const JointObservable<T>& j,
                                        std::size_t total) {
  std::vector<std::string> labels;
  for (std::size_t k = 0; k < total; ++k) {
    auto idx = j.unflatten(k);
    std::string l;
    for (std::size_t i = 0; i < idx.size(); ++i) l += (i ? "," : "") + obs[i].labels()[idx[i]];
    labels.push_back(std::move(l));
  }
  return labels;
}

}  // namespace

template <Field T>
std::optional<JointObservable<T>> are_compatible(const std::vector<Observable<T>>& obs, const Tolerance& tol) {
  if (obs.empty()) throw InvalidArgument("are_compatible: no observables");
  for (const auto& o : obs) require_same_space(obs.front(), o, "are_compatible");
  const auto& s = obs.front().space();
  s.require_polytopic("are_compatible");
  JointObservable<T> result;
  double total_d = 1;
  for (const auto& o : obs) {
    result.shape.push_back(o.size());
    total_d *= static_cast<double>(o.size());
  }
  if (total_d > 1e4) throw Unsupported("are_compatible: product outcome set exceeds 10^4");
  const std::size_t K = static_cast<std::size_t>(total_d), D = s.ambient_dim();
  LPProblem<T> p(K * D);
  for (std::size_t j = 0; j < K * D; ++j) p.set_free(j);
  for (std::size_t k = 0; k < K; ++k) {
    for (const auto& v : s.vertices()) {
      Vector<T> row(K * D, T(0));
      for (std::size_t c = 0; c < D; ++c) row[k * D + c] = v[c];
      p.add_inequality(std::move(row), T(0));
    }
  }
  std::vector<std::vector<std::size_t>> tuples(K);
  for (std::size_t k = 0; k < K; ++k) tuples[k] = result.unflatten(k);
  for (std::size_t i = 0; i < obs.size(); ++i) {
    for (std::size_t x = 0; x < obs[i].size(); ++x) {
      for (std::size_t c = 0; c < D; ++c) {
        Vector<T> row(K * D, T(0));
        for (std::size_t k = 0; k < K; ++k)
          if (tuples[k][i] == x) row[k * D + c] = 1;
        p.add_equality(std::move(row), obs[i].effect(x)[c]);
      }
    }
  }
  auto sol = lp_solve(p, tol);
  if (!sol) return std::nullopt;
  std::vector<Vector<T>> effects(K);
  for (std::size_t k = 0; k < K; ++k)
    effects[k].assign(sol->x.begin() + static_cast<std::ptrdiff_t>(k * D),
                      sol->x.begin() + static_cast<std::ptrdiff_t>((k + 1) * D));
  result.joint = Observable<T>(obs.front().space_ptr(), std::move(effects));
  result.joint = Observable<T>(obs.front().space_ptr(), result.joint.effects(), product_labels(obs, result, K));
  return result;
}

namespace {

template <Field T>
void require_dichotomic(const Observable<T>& a, const Observable<T>& b) {
  if (a.size() != 2 || b.size() != 2) throw InvalidArgument("dichotomic compatibility test needs two-outcome observables");
  require_same_space(a, b, "dichotomic_compat_g");
  a.space().require_polytopic("dichotomic_compat_g");
}

// Constraints g >= tau, a - g >= tau, b - g >= tau, u - a - b + g >= tau on every
// vertex, over the variables (g, tau). With tau fixed at 0 this is the plain test.
template <Field T>
LPProblem<T> g_program(const Observable<T>& a, const Observable<T>& b, bool with_margin) {
  const auto& s = a.space();
  const std::size_t D = s.ambient_dim(), n = D + (with_margin ? 1 : 0);
  LPProblem<T> p(n);
  for (std::size_t c = 0; c < D; ++c) p.set_free(c);
  if (with_margin) {
    p.set_bounds(D, std::nullopt, T(1));
    Vector<T> obj(n, T(0));
    obj[D] = 1;
    p.objective = obj;
  }
  const auto& ea = a.effect(0);
  const auto& eb = b.effect(0);
  for (const auto& v : s.vertices()) {
    const T av = dot<T>(ea, v), bv = dot<T>(eb, v), uv = dot<T>(s.unit(), v);
    auto add = [&](const T& sign, const T& rhs) {
      Vector<T> row(n, T(0));
      for (std::size_t c = 0; c < D; ++c) row[c] = sign * v[c];
      if (with_margin) row[D] = -1;
      p.add_inequality(std::move(row), rhs);
    };
    add(T(1), T(0));           // g(v) >= 0
    add(T(-1), -av);           // a(v) - g(v) >= 0
    add(T(-1), -bv);           // b(v) - g(v) >= 0
    add(T(1), av + bv - uv);   // u(v) - a(v) - b(v) + g(v) >= 0
  }
  return p;
}

}  // namespace

template <Field T>
std::optional<Vector<T>> dichotomic_compat_g(const Observable<T>& a, const Observable<T>& b, const Tolerance& tol) {
  require_dichotomic(a, b);
  auto sol = lp_solve(g_program(a, b, false), tol);
  if (!sol) return std::nullopt;
  return sol->x;
}

double dichotomic_compat_margin(const Observable<double>& a, const Observable<double>& b) {
  require_dichotomic(a, b);
  auto sol = lp_solve(g_program(a, b, true));
  if (!sol) throw Error("dichotomic_compat_margin: margin program infeasible");
  return sol->objective;
}

const char* to_string(PsymVerdict v) {
  switch (v) {
    case PsymVerdict::Incompatible:
      return "incompatible";
    case PsymVerdict::NecessaryPassed:
      return "necessary-passed";
    case PsymVerdict::IffCompatible:
      return "compatible";
  }
  return "necessary-passed";
}

namespace {

constexpr double kBoundaryBand = 1e-7;

Vector<double> combine(std::span<const double> a, std::span<const double> b, double sign) {
  if (a.size() != b.size()) throw DimensionMismatch("Bloch vectors differ in length");
  Vector<double> out(a.begin(), a.end());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += sign * b[i];
  return out;
}

}  // namespace

PsymResult psym_compat_test(const StateSpace<double>& s, std::span<const double> a, double alpha,
                            std::span<const double> b, double beta) {
  if (!s.is_point_symmetric()) throw PreconditionViolated("psym_compat_test: space is not point-symmetric");
  PsymResult r;
  r.criterion = effect_norm(s, combine(a, b, 1)) + effect_norm(s, combine(a, b, -1));
  r.boundary = std::abs(r.criterion - 2) <= kBoundaryBand;
  if (r.criterion > 2 + 1e-12) {
    r.verdict = PsymVerdict::Incompatible;
  } else if (std::abs(alpha - 1) <= 1e-12 && std::abs(beta - 1) <= 1e-12) {
    r.verdict = PsymVerdict::IffCompatible;
  } else {
    r.verdict = PsymVerdict::NecessaryPassed;
  }
  return r;
}

JointObservable<double> construct_joint_unbiased(const SpacePtr<double>& s, std::span<const double> a,
                                                 std::span<const double> b, const Tolerance& tol) {
  if (!s->is_point_symmetric()) throw PreconditionViolated("construct_joint_unbiased: space is not point-symmetric");
  const auto plus = combine(a, b, 1), minus = combine(a, b, -1);
  const double np = effect_norm(*s, plus), nm = effect_norm(*s, minus);
  if (np + nm > 2 + tol.eps) throw PreconditionViolated("construct_joint_unbiased: norm criterion violated");
  const double tp = np / 2, tm = nm / 2, t = std::max(0.0, 1 - tp - tm);
  auto part = [&](const Vector<double>& v, double norm, double weight, double sign) {
    Vector<double> dir(v.size(), 0.0);
    if (norm > 0)
      for (std::size_t i = 0; i < v.size(); ++i) dir[i] = sign * weight * v[i] / norm;
    return bloch_effect(dir, weight + 0.5 * t);
  };
  JointObservable<double> j;
  j.shape = {2, 2};
  j.joint = Observable<double>(s,
                               {part(plus, np, tp, 1), part(minus, nm, tm, 1), part(minus, nm, tm, -1),
                                part(plus, np, tp, -1)},
                               {"+,+", "+,-", "-,+", "-,-"});
  return j;
}

template <Field T>
NoiseCompatResult<T> noise_sufficient_compat(const std::vector<Observable<T>>& obs, const Tolerance& tol) {
  if (obs.empty()) throw InvalidArgument("noise_sufficient_compat: no observables");
  for (const auto& o : obs) require_same_space(obs.front(), o, "noise_sufficient_compat");
  const std::size_t m = obs.size();
  NoiseCompatResult<T> r;
  std::vector<NoiseReport<T>> noise;
  for (const auto& o : obs) {
    noise.push_back(noise_content(o));
    r.w_sum += noise.back().w_trivial;
  }
  if (!leq<T>(T(static_cast<long>(m - 1)), r.w_sum, tol)) return r;

  // Shared distribution p_i = 1 - w_i for i < m, remainder on the last.
  r.weights.assign(m, T(0));
  T used = 0;
  for (std::size_t i = 0; i + 1 < m; ++i) {
    r.weights[i] = T(1) - noise[i].w_trivial;
    if (r.weights[i] < 0) r.weights[i] = 0;
    used += r.weights[i];
  }
  r.weights[m - 1] = T(1) - used;
  if (r.weights[m - 1] < 0) r.weights[m - 1] = 0;

  // A^(i) = p_i B^(i) + (1 - p_i) T^(i), with T^(i) proportional to the per-outcome minima.
  std::vector<std::vector<T>> q(m);
  const auto& s = obs.front().space();
  for (std::size_t i = 0; i < m; ++i) {
    const auto& a = obs[i];
    const T w = noise[i].w_trivial;
    const T p = r.weights[i];
    for (std::size_t x = 0; x < a.size(); ++x) {
      if (gt<T>(w, T(0), tol)) {
        T mx = noise[i].minima[x];
        if (mx < 0) mx = 0;
        q[i].push_back(mx / w);
      } else {
        q[i].push_back(T(1) / T(static_cast<long>(a.size())));
      }
    }
    std::vector<Vector<T>> effects;
    for (std::size_t x = 0; x < a.size(); ++x) {
      if (is_zero<T>(p, tol)) {
        effects.push_back(a.effect(x));
      } else {
        Vector<T> e = a.effect(x);
        axpy<T>(e, -(T(1) - p) * q[i][x], s.unit());
        effects.push_back(scaled<T>(e, T(1) / p));
      }
    }
    r.simulators.emplace_back(a.space_ptr(), std::move(effects), a.labels());
    if (!validate(r.simulators.back(), Tolerance{tol.eps * 100}))
      throw Error("noise_sufficient_compat: constructed simulator is not a valid observable");
  }

  // Each A^(i) = sum_j p_j nu^(i,j) B^(j) with nu^(i,i) = identity and nu^(i,j) = rows of q^(i).
  for (std::size_t i = 0; i < m; ++i) {
    SimWitness<T> w;
    w.weights = r.weights;
    for (std::size_t j = 0; j < m; ++j) {
      Matrix<T> part(obs[j].size(), obs[i].size());
      for (std::size_t y = 0; y < obs[j].size(); ++y)
        for (std::size_t x = 0; x < obs[i].size(); ++x)
          part(y, x) = r.weights[j] * (i == j ? (x == y ? T(1) : T(0)) : q[i][x]);
      w.parts.push_back(std::move(part));
    }
    auto rebuilt = apply_simulation(r.simulators, w);
    for (std::size_t x = 0; x < obs[i].size(); ++x)
      if (!approx_eq<T>(rebuilt.effect(x), obs[i].effect(x), Tolerance{tol.eps * 100}))
        throw Error("noise_sufficient_compat: simulation does not reproduce the input");
  }

  // Joint: G_(x_1..x_m) = sum_j p_j B^(j)_{x_j} prod_{i != j} q^(i)_{x_i}.
  JointObservable<T> j;
  std::size_t K = 1;
  for (const auto& o : obs) {
    j.shape.push_back(o.size());
    K *= o.size();
  }
  if (K > 10000) throw Unsupported("noise_sufficient_compat: product outcome set exceeds 10^4");
  std::vector<Vector<T>> effects(K, Vector<T>(s.ambient_dim(), T(0)));
  for (std::size_t k = 0; k < K; ++k) {
    auto idx = j.unflatten(k);
    for (std::size_t jj = 0; jj < m; ++jj) {
      T coef = r.weights[jj];
      for (std::size_t i = 0; i < m; ++i)
        if (i != jj) coef *= q[i][idx[i]];
      if (coef != 0) axpy<T>(effects[k], coef, r.simulators[jj].effect(idx[jj]));
    }
  }
  j.joint = Observable<T>(obs.front().space_ptr(), std::move(effects));
  j.joint = Observable<T>(obs.front().space_ptr(), j.joint.effects(), product_labels(obs, j, K));
  r.joint = std::move(j);
  r.verdict = Verdict::Yes;
  return r;
}

template <Field T>
Observable<T> restrict_to_summand(const Observable<T>& a, std::size_t i) {
  const auto& blocks = a.space().summands();
  if (i >= blocks.size()) throw InvalidArgument("restrict_to_summand: no such summand");
  const auto& blk = blocks[i];
  std::vector<Vector<T>> effects;
  for (const auto& e : a.effects())
    effects.emplace_back(e.begin() + static_cast<std::ptrdiff_t>(blk.coord_offset),
                         e.begin() + static_cast<std::ptrdiff_t>(blk.coord_offset + blk.space->ambient_dim()));
  return Observable<T>(blk.space, std::move(effects), a.labels());
}

template <Field T>
bool is_fully_compatible(const Observable<T>& a, const std::vector<Observable<T>>& irreducibles, const Tolerance& tol) {
  for (const auto& b : irreducibles)
    if (!find_postprocessing(b, a, tol)) return false;
  return true;
}

template <Field T>
bool is_fully_compatible(const Observable<T>& a, const Tolerance& tol) {
  if (a.space().is_direct_sum()) {
    // Observables on a direct sum are tuples of summand observables, and
    // full compatibility holds exactly when it holds in every summand.
    for (std::size_t i = 0; i < a.space().summands().size(); ++i)
      if (!is_fully_compatible(restrict_to_summand(a, i), tol)) return false;
    return true;
  }
  return is_fully_compatible(a, enumerate_irreducibles(a.space_ptr(), tol), tol);
}

template <Field T>
bool is_nondisturbing(const Observable<T>& a, const std::vector<std::vector<std::size_t>>& groups,
                      const Tolerance& tol) {
  const auto& s = a.space();
  s.require_polytopic("is_nondisturbing");
  std::vector<int> owner(s.num_vertices(), -1);
  std::size_t rank_sum = 0;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    if (groups[g].empty()) throw InvalidArgument("is_nondisturbing: empty vertex group");
    std::vector<Vector<T>> members;
    for (auto v : groups[g]) {
      if (v >= s.num_vertices()) throw InvalidArgument("is_nondisturbing: vertex index out of range");
      if (owner[v] != -1) throw InvalidArgument("is_nondisturbing: vertex listed in two groups");
      owner[v] = static_cast<int>(g);
      members.push_back(s.vertices()[v]);
    }
    rank_sum += rank(members, tol);
  }
  for (int o : owner)
    if (o == -1) throw InvalidArgument("is_nondisturbing: vertex groups do not cover the state space");
  if (rank_sum != s.ambient_dim())
    throw InvalidArgument("is_nondisturbing: vertex groups do not span independent blocks");
  for (const auto& e : a.effects()) {
    for (const auto& grp : groups) {
      const T first = dot<T>(e, s.vertices()[grp.front()]);
      for (auto v : grp)
        if (!approx_eq<T>(dot<T>(e, s.vertices()[v]), first, tol)) return false;
    }
  }
  return true;
}

template <Field T>
bool is_nondisturbing(const Observable<T>& a, const Tolerance& tol) {
  const auto& s = a.space();
  std::vector<std::vector<std::size_t>> groups;
  if (s.is_direct_sum()) {
    for (const auto& blk : s.summands()) {
      std::vector<std::size_t> g;
      for (std::size_t k = 0; k < blk.space->num_vertices(); ++k) g.push_back(blk.vertex_offset + k);
      groups.push_back(std::move(g));
    }
  } else {
    std::vector<std::size_t> all;
    for (std::size_t k = 0; k < s.num_vertices(); ++k) all.push_back(k);
    groups.push_back(std::move(all));
  }
  return is_nondisturbing(a, groups, tol);
}

double fc_noise_lower_bound(std::size_t n) {
  if (n < 3 || n % 2 == 0) throw InvalidArgument("fc_noise_lower_bound: n must be an odd integer >= 3");
  const double pi = std::numbers::pi;
  const double nd = static_cast<double>(n);
  const std::size_t m = (n - 1) / 2;
  if (m % 2 == 1) return 1 - std::sin(pi / (2 * nd)) / std::cos(pi / nd);
  const double c = std::cos(pi / nd);
  return 1 - std::sin(pi / (2 * nd)) / (c * c);
}

std::optional<FcSearchResult> find_nontrivial_fully_compatible(const SpacePtr<double>& s, const Tolerance& tol) {
  const auto irr = enumerate_irreducibles(s, tol);
  for (std::size_t g = 0; g < irr.size(); ++g) {
    const auto& G = irr[g];
    const std::size_t k = G.size();
    const auto T0 = trivial_observable<double>(s, std::vector<double>(k, 1.0 / static_cast<double>(k)));
    auto candidate = [&](double t) { return mix_observables<double>({t, 1 - t}, {G, T0}); };
    double lo = 0, hi = 1;
    if (is_fully_compatible(candidate(hi), irr, tol)) lo = hi;
    for (int it = 0; it < 40 && hi - lo > 1e-9; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (is_fully_compatible(candidate(mid), irr, tol))
        lo = mid;
      else
        hi = mid;
    }
    if (lo <= 1e-6) continue;
    auto obs = candidate(lo);
    if (is_trivial(obs, tol)) continue;
    return FcSearchResult{std::move(obs), lo, g};
  }
  return std::nullopt;
}

template struct JointObservable<double>;
template struct JointObservable<Rational>;

#define GPTWB_INSTANTIATE(T)                                                                                    \
  template std::optional<JointObservable<T>> are_compatible<T>(const std::vector<Observable<T>>&,               \
                                                               const Tolerance&);                               \
  template std::optional<Vector<T>> dichotomic_compat_g<T>(const Observable<T>&, const Observable<T>&,          \
                                                           const Tolerance&);                                   \
  template NoiseCompatResult<T> noise_sufficient_compat<T>(const std::vector<Observable<T>>&, const Tolerance&); \
  template bool is_fully_compatible<T>(const Observable<T>&, const Tolerance&);                                 \
  template bool is_fully_compatible<T>(const Observable<T>&, const std::vector<Observable<T>>&,                 \
                                       const Tolerance&);                                                       \
  template Observable<T> restrict_to_summand<T>(const Observable<T>&, std::size_t);                             \
  template bool is_nondisturbing<T>(const Observable<T>&, const std::vector<std::vector<std::size_t>>&,          \
                                    const Tolerance&);                                                          \
  template bool is_nondisturbing<T>(const Observable<T>&, const Tolerance&);

GPTWB_INSTANTIATE(double)
GPTWB_INSTANTIATE(Rational)

#undef GPTWB_INSTANTIATE

}  // namespace gptwb
