#include "gptwb/state_space.hpp"

#include <cmath>
#include <mutex>
#include <numbers>

#include "combinatorics.hpp"
#include "gptwb/linalg.hpp"
#include "gptwb/lp.hpp"

namespace gptwb {

namespace {

constexpr double kMaxSubsets = 2e5;

template <Field T>
bool same_direction(std::span<const T> a, std::span<const T> b, const Tolerance& tol) {
  if constexpr (is_exact_v<T>) {
    return std::equal(a.begin(), a.end(), b.begin(), b.end());
  } else {
    return approx_eq<T>(a, b, Tolerance{std::max(tol.eps, 1e-9) * 100});
  }
}

// Whether x is a convex combination of the given points.
template <Field T>
bool in_convex_hull(const std::vector<Vector<T>>& points, std::span<const T> x, const Tolerance& tol) {
  if (points.empty()) return false;
  const std::size_t k = points.size();
  LPProblem<T> p(k);
  for (std::size_t c = 0; c < x.size(); ++c) {
    Vector<T> row(k);
    for (std::size_t i = 0; i < k; ++i) row[i] = points[i][c];
    p.add_equality(std::move(row), x[c]);
  }
  p.add_equality(Vector<T>(k, T(1)), T(1));
  return lp_solve(p, tol).has_value();
}

}  // namespace

template <Field T>
struct StateSpace<T>::Cache {
  std::once_flag rays_once;
  std::vector<DualRay<T>> rays;
  std::once_flag effects_once;
  std::vector<Vector<T>> effects;
};

template <Field T>
StateSpace<T>::StateSpace(std::string name, std::vector<Vector<T>> vertices, Vector<T> unit,
                          std::vector<Summand<T>> summands, const Tolerance& tol)
    : kind_(SpaceKind::Polytopic),
      name_(std::move(name)),
      ambient_(unit.size()),
      vertices_(std::move(vertices)),
      unit_(std::move(unit)),
      summands_(std::move(summands)),
      tol_(tol),
      cache_(std::make_shared<Cache>()) {
  if (ambient_ == 0) throw InvalidArgument("StateSpace: empty unit functional");
  if (vertices_.empty()) throw InvalidArgument("StateSpace: no vertices");
  for (const auto& v : vertices_) {
    if (v.size() != ambient_) throw DimensionMismatch("StateSpace: vertex length differs from unit length");
    if (!approx_eq<T>(dot<T>(unit_, v), T(1), tol))
      throw InvalidArgument("StateSpace: vertex with u(v) != 1");
  }
  if (rank(vertices_, tol) != ambient_)
    throw InvalidArgument("StateSpace: vertices do not span the ambient space");
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    std::vector<Vector<T>> others;
    for (std::size_t j = 0; j < vertices_.size(); ++j) {
      if (j == i) continue;
      if (approx_eq<T>(vertices_[i], vertices_[j], tol))
        throw InvalidArgument("StateSpace: duplicate vertex");
      others.push_back(vertices_[j]);
    }
    if (in_convex_hull<T>(others, vertices_[i], tol))
      throw InvalidArgument("StateSpace: vertex " + std::to_string(i) + " is not an extreme point");
  }
  // Point symmetry about (0, ..., 0, 1).
  bool unit_is_last = is_zero<T>(unit_.back() - T(1), tol);
  for (std::size_t c = 0; c + 1 < ambient_; ++c) unit_is_last = unit_is_last && is_zero<T>(unit_[c], tol);
  point_symmetric_ = unit_is_last;
  for (std::size_t i = 0; point_symmetric_ && i < vertices_.size(); ++i) {
    Vector<T> mirrored = vertices_[i];
    for (std::size_t c = 0; c + 1 < ambient_; ++c) mirrored[c] = -mirrored[c];
    bool found = false;
    for (const auto& w : vertices_) found = found || approx_eq<T>(mirrored, w, tol);
    point_symmetric_ = found;
  }
}

template <Field T>
StateSpace<T> StateSpace<T>::ball(std::size_t d) {
  if constexpr (is_exact_v<T>) {
    throw Unsupported("norm-ball state spaces require the float backend");
  } else {
    if (d == 0) throw InvalidArgument("make_ball: dimension must be >= 1");
    StateSpace s;
    s.kind_ = SpaceKind::NormBall;
    s.name_ = "ball:" + std::to_string(d);
    s.ambient_ = d + 1;
    s.unit_.assign(d + 1, 0.0);
    s.unit_.back() = 1.0;
    s.point_symmetric_ = true;
    s.cache_ = std::make_shared<Cache>();
    return s;
  }
}

template <Field T>
Vector<T> StateSpace<T>::center() const {
  if (!point_symmetric_) throw PreconditionViolated(name_ + " is not point-symmetric");
  Vector<T> c(ambient_, T(0));
  c.back() = 1;
  return c;
}

template <Field T>
void StateSpace<T>::require_polytopic(const char* op) const {
  if (kind_ != SpaceKind::Polytopic)
    throw Unsupported(std::string(op) + ": requires a polytopic state space, got " + name_);
}

template <Field T>
const std::vector<DualRay<T>>& StateSpace<T>::dual_rays() const {
  std::call_once(cache_->rays_once, [&] { cache_->rays = dual_cone_rays(*this, tol_); });
  return cache_->rays;
}

template <Field T>
const std::vector<Vector<T>>& StateSpace<T>::extreme_effects() const {
  std::call_once(cache_->effects_once, [&] { cache_->effects = gptwb::extreme_effects(*this, tol_); });
  return cache_->effects;
}

template <Field T>
SpacePtr<T> make_classical(std::size_t d) {
  if (d == 0) throw InvalidArgument("make_classical: d must be >= 1");
  std::vector<Vector<T>> vertices;
  for (std::size_t i = 0; i < d; ++i) {
    Vector<T> v(d, T(0));
    v[i] = 1;
    vertices.push_back(std::move(v));
  }
  return std::make_shared<const StateSpace<T>>("classical:" + std::to_string(d), std::move(vertices),
                                               Vector<T>(d, T(1)));
}

SpacePtr<double> make_polygon(std::size_t n) {
  if (n < 3) throw InvalidArgument("make_polygon: n must be >= 3");
  const double pi = std::numbers::pi;
  const double r = std::sqrt(1.0 / std::cos(pi / static_cast<double>(n)));
  std::vector<Vector<double>> vertices;
  for (std::size_t k = 1; k <= n; ++k) {
    const double angle = 2.0 * pi * static_cast<double>(k) / static_cast<double>(n);
    vertices.push_back({r * std::cos(angle), r * std::sin(angle), 1.0});
  }
  return std::make_shared<const StateSpace<double>>("polygon:" + std::to_string(n), std::move(vertices),
                                                    Vector<double>{0.0, 0.0, 1.0});
}

SpacePtr<double> make_ball(std::size_t d) {
  return std::make_shared<const StateSpace<double>>(StateSpace<double>::ball(d));
}

template <Field T>
SpacePtr<T> make_rational_square() {
  std::vector<Vector<T>> vertices{{T(1), T(0), T(1)}, {T(0), T(1), T(1)}, {T(-1), T(0), T(1)}, {T(0), T(-1), T(1)}};
  return std::make_shared<const StateSpace<T>>("square", std::move(vertices), Vector<T>{T(0), T(0), T(1)});
}

template <Field T>
SpacePtr<T> make_polytope(std::string name, std::vector<Vector<T>> vertices, Vector<T> unit,
                          const Tolerance& tol) {
  return std::make_shared<const StateSpace<T>>(std::move(name), std::move(vertices), std::move(unit),
                                               std::vector<Summand<T>>{}, tol);
}

template <Field T>
SpacePtr<T> direct_sum(const std::vector<SpacePtr<T>>& spaces) {
  if (spaces.empty()) throw InvalidArgument("direct_sum: no summands");
  if (spaces.size() == 1) return spaces.front();
  std::vector<Summand<T>> blocks;
  std::size_t dim = 0, nverts = 0;
  std::string name = "dsum:";
  for (std::size_t i = 0; i < spaces.size(); ++i) {
    const auto& s = spaces[i];
    if (s->kind() != SpaceKind::Polytopic) throw Unsupported("direct_sum: summands must be polytopic");
    // Nested sums are flattened so the metadata always lists the atomic blocks.
    if (s->is_direct_sum()) {
      for (const auto& inner : s->summands())
        blocks.push_back({inner.space, dim + inner.coord_offset, nverts + inner.vertex_offset});
    } else {
      blocks.push_back({s, dim, nverts});
    }
    name += (i ? "+" : "") + s->name();
    dim += s->ambient_dim();
    nverts += s->num_vertices();
  }
  std::vector<Vector<T>> vertices;
  Vector<T> unit(dim, T(0));
  std::size_t offset = 0;
  for (const auto& s : spaces) {
    for (const auto& v : s->vertices()) {
      Vector<T> padded(dim, T(0));
      std::copy(v.begin(), v.end(), padded.begin() + static_cast<std::ptrdiff_t>(offset));
      vertices.push_back(std::move(padded));
    }
    std::copy(s->unit().begin(), s->unit().end(), unit.begin() + static_cast<std::ptrdiff_t>(offset));
    offset += s->ambient_dim();
  }
  return std::make_shared<const StateSpace<T>>(std::move(name), std::move(vertices), std::move(unit),
                                               std::move(blocks));
}

template <Field T>
T effect_min(const StateSpace<T>& s, std::span<const T> e) {
  if (e.size() != s.ambient_dim()) throw DimensionMismatch("effect length differs from space dimension");
  if (s.kind() == SpaceKind::NormBall) {
    if constexpr (is_exact_v<T>) {
      throw Unsupported("norm-ball spaces require the float backend");
    } else {
      double n2 = 0;
      for (std::size_t c = 0; c + 1 < e.size(); ++c) n2 += e[c] * e[c];
      return e.back() - std::sqrt(n2);
    }
  }
  T m = dot<T>(e, s.vertices().front());
  for (const auto& v : s.vertices()) {
    T x = dot<T>(e, v);
    if (x < m) m = x;
  }
  return m;
}

template <Field T>
T effect_max(const StateSpace<T>& s, std::span<const T> e) {
  if (e.size() != s.ambient_dim()) throw DimensionMismatch("effect length differs from space dimension");
  if (s.kind() == SpaceKind::NormBall) {
    if constexpr (is_exact_v<T>) {
      throw Unsupported("norm-ball spaces require the float backend");
    } else {
      double n2 = 0;
      for (std::size_t c = 0; c + 1 < e.size(); ++c) n2 += e[c] * e[c];
      return e.back() + std::sqrt(n2);
    }
  }
  T m = dot<T>(e, s.vertices().front());
  for (const auto& v : s.vertices()) {
    T x = dot<T>(e, v);
    if (x > m) m = x;
  }
  return m;
}

template <Field T>
bool is_valid_effect(const StateSpace<T>& s, std::span<const T> e, const Tolerance& tol) {
  return leq<T>(T(0), effect_min(s, e), tol) && leq<T>(effect_max(s, e), T(1), tol);
}

template <Field T>
bool is_state(const StateSpace<T>& s, std::span<const T> x, const Tolerance& tol) {
  if (x.size() != s.ambient_dim()) throw DimensionMismatch("state length differs from space dimension");
  if (!approx_eq<T>(dot<T>(s.unit(), x), T(1), tol)) return false;
  if (s.kind() == SpaceKind::NormBall) {
    T n2 = 0;
    for (std::size_t c = 0; c + 1 < x.size(); ++c) n2 += x[c] * x[c];
    return leq<T>(n2, T(1), tol);
  }
  return in_convex_hull<T>(s.vertices(), x, tol);
}

template <Field T>
long vertex_index(const StateSpace<T>& s, std::span<const T> x, const Tolerance& tol) {
  for (std::size_t i = 0; i < s.num_vertices(); ++i)
    if (approx_eq<T>(s.vertices()[i], x, tol)) return static_cast<long>(i);
  return -1;
}

template <Field T>
std::vector<DualRay<T>> dual_cone_rays(const StateSpace<T>& s, const Tolerance& tol) {
  s.require_polytopic("dual_cone_rays");
  const std::size_t D = s.ambient_dim();
  const auto& verts = s.vertices();
  if (detail::binomial(verts.size(), D - 1) > kMaxSubsets)
    throw Unsupported("dual_cone_rays: " + s.name() + " is too large for facet enumeration");
  std::vector<DualRay<T>> rays;
  if (D == 1) {
    rays.push_back({Vector<T>{T(1) / verts.front()[0]}, {}});
    return rays;
  }
  detail::for_each_combination(verts.size(), D - 1, [&](const std::vector<std::size_t>& subset) {
    std::vector<Vector<T>> rows;
    for (auto i : subset) rows.push_back(verts[i]);
    auto ns = null_space(Matrix<T>::from_rows(rows), tol);
    if (ns.size() != 1) return true;
    Vector<T> r = std::move(ns.front());
    bool nonneg = true, nonpos = true;
    for (const auto& v : verts) {
      T x = dot<T>(r, v);
      if (!leq<T>(T(0), x, tol)) nonneg = false;
      if (!leq<T>(x, T(0), tol)) nonpos = false;
    }
    if (!nonneg && !nonpos) return true;
    if (!nonneg) r = scaled<T>(r, T(-1));
    T top = 0;
    for (const auto& v : verts) {
      T x = dot<T>(r, v);
      if (x > top) top = x;
    }
    r = scaled<T>(r, T(1) / top);
    for (const auto& existing : rays)
      if (same_direction<T>(existing.direction, r, tol)) return true;
    DualRay<T> ray{std::move(r), {}};
    for (std::size_t i = 0; i < verts.size(); ++i)
      if (is_zero<T>(dot<T>(ray.direction, verts[i]), tol)) ray.vanishing.push_back(i);
    rays.push_back(std::move(ray));
    return true;
  });
  return rays;
}

template <Field T>
std::vector<Vector<T>> extreme_effects(const StateSpace<T>& s, const Tolerance& tol) {
  s.require_polytopic("extreme_effects");
  const std::size_t D = s.ambient_dim();
  const auto& verts = s.vertices();
  if (detail::binomial(verts.size(), D) * std::pow(2.0, static_cast<double>(D)) > 4 * kMaxSubsets)
    throw Unsupported("extreme_effects: " + s.name() + " is too large for vertex enumeration");
  std::vector<Vector<T>> out;
  detail::for_each_combination(verts.size(), D, [&](const std::vector<std::size_t>& subset) {
    std::vector<Vector<T>> rows;
    for (auto i : subset) rows.push_back(verts[i]);
    const auto m = Matrix<T>::from_rows(rows);
    if (rank(m, tol) != D) return true;
    for (std::size_t mask = 0; mask < (std::size_t{1} << D); ++mask) {
      Vector<T> b(D);
      for (std::size_t k = 0; k < D; ++k) b[k] = (mask >> k & 1) ? T(1) : T(0);
      auto e = solve_unique<T>(m, b, tol);
      if (!e || !is_valid_effect<T>(s, *e, tol)) continue;
      if (is_zero<T>(max_abs<T>(*e), tol) || approx_eq<T>(*e, s.unit(), tol)) continue;
      bool seen = false;
      for (const auto& f : out) seen = seen || same_direction<T>(f, *e, tol);
      if (!seen) out.push_back(std::move(*e));
    }
    return true;
  });
  return out;
}

double effect_norm(const StateSpace<double>& s, std::span<const double> a) {
  if (!s.is_point_symmetric()) throw PreconditionViolated("effect_norm: " + s.name() + " is not point-symmetric");
  if (a.size() + 1 != s.ambient_dim()) throw DimensionMismatch("effect_norm: vector length");
  if (s.kind() == SpaceKind::NormBall) {
    double n2 = 0;
    for (double x : a) n2 += x * x;
    return std::sqrt(n2);
  }
  double m = 0;
  for (const auto& v : s.vertices()) {
    double x = 0;
    for (std::size_t c = 0; c < a.size(); ++c) x += a[c] * v[c];
    m = std::max(m, x);
  }
  return m;
}

Vector<double> bloch_effect(std::span<const double> a, double alpha) {
  Vector<double> e(a.begin(), a.end());
  for (auto& x : e) x *= 0.5;
  e.push_back(0.5 * alpha);
  return e;
}

BlochForm bloch_form(std::span<const double> e) {
  if (e.empty()) throw InvalidArgument("bloch_form: empty effect");
  BlochForm f;
  f.a.assign(e.begin(), e.end() - 1);
  for (auto& x : f.a) x *= 2;
  f.alpha = 2 * e.back();
  return f;
}

template class StateSpace<double>;
template class StateSpace<Rational>;

#define GPTWB_INSTANTIATE(T)                                                                    \
  template SpacePtr<T> make_classical<T>(std::size_t);                                          \
  template SpacePtr<T> make_rational_square<T>();                                               \
  template SpacePtr<T> make_polytope<T>(std::string, std::vector<Vector<T>>, Vector<T>,         \
                                        const Tolerance&);                                      \
  template SpacePtr<T> direct_sum<T>(const std::vector<SpacePtr<T>>&);                          \
  template bool is_valid_effect<T>(const StateSpace<T>&, std::span<const T>, const Tolerance&); \
  template T effect_min<T>(const StateSpace<T>&, std::span<const T>);                           \
  template T effect_max<T>(const StateSpace<T>&, std::span<const T>);                           \
  template bool is_state<T>(const StateSpace<T>&, std::span<const T>, const Tolerance&);        \
  template long vertex_index<T>(const StateSpace<T>&, std::span<const T>, const Tolerance&);    \
  template std::vector<DualRay<T>> dual_cone_rays<T>(const StateSpace<T>&, const Tolerance&);   \
  template std::vector<Vector<T>> extreme_effects<T>(const StateSpace<T>&, const Tolerance&);

GPTWB_INSTANTIATE(double)
GPTWB_INSTANTIATE(Rational)

#undef GPTWB_INSTANTIATE

}  // namespace gptwb
