#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "gptwb/matrix.hpp"

namespace gptwb {

enum class SpaceKind { Polytopic, NormBall };

/// An extreme ray of the cone of positive functionals, scaled so that its
/// largest value on a vertex is 1.
template <Field T>
struct DualRay {
  Vector<T> direction;
  std::vector<std::size_t> vanishing;  // vertex indices where direction·v == 0
};

template <Field T>
class StateSpace;

template <Field T>
using SpacePtr = std::shared_ptr<const StateSpace<T>>;

/// One block of a direct sum: the summand and where its coordinates and
/// vertices sit inside the combined space.
template <Field T>
struct Summand {
  SpacePtr<T> space;
  std::size_t coord_offset = 0;
  std::size_t vertex_offset = 0;
};

/// Compact convex base of a cone in R^D. Polytopic spaces are given by their
/// vertices (each with u·v = 1); norm balls are {(x, 1) : |x|_2 <= 1}.
/// Point-symmetric spaces use the convention u = (0, ..., 0, 1) and centre
/// s0 = (0, ..., 0, 1), so effects have the form (a/2, alpha/2).
template <Field T>
class StateSpace {
 public:
  /// Vertices must be distinct extreme points whose span is all of R^D.
  StateSpace(std::string name, std::vector<Vector<T>> vertices, Vector<T> unit,
             std::vector<Summand<T>> summands = {}, const Tolerance& tol = {});

  /// Euclidean unit ball of dimension d (float realization only).
  static StateSpace ball(std::size_t d);

  SpaceKind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  /// D: dimension of the ambient vector space.
  std::size_t ambient_dim() const { return ambient_; }
  /// d = D - 1.
  std::size_t affine_dim() const { return ambient_ - 1; }
  const std::vector<Vector<T>>& vertices() const { return vertices_; }
  std::size_t num_vertices() const { return vertices_.size(); }
  const Vector<T>& unit() const { return unit_; }
  const std::vector<Summand<T>>& summands() const { return summands_; }
  bool is_direct_sum() const { return summands_.size() > 1; }
  /// Symmetric under inversion through s0 = (0, ..., 0, 1) with u = (0, ..., 0, 1).
  bool is_point_symmetric() const { return point_symmetric_; }
  /// The inversion centre (0, ..., 0, 1) for point-symmetric spaces.
  Vector<T> center() const;

  /// Extreme rays of the dual cone; computed once and cached.
  const std::vector<DualRay<T>>& dual_rays() const;
  /// Nontrivial extreme points of the effect space; computed once and cached.
  const std::vector<Vector<T>>& extreme_effects() const;

  void require_polytopic(const char* op) const;

 private:
  StateSpace() = default;
  struct Cache;

  SpaceKind kind_ = SpaceKind::Polytopic;
  std::string name_;
  std::size_t ambient_ = 0;
  std::vector<Vector<T>> vertices_;
  Vector<T> unit_;
  std::vector<Summand<T>> summands_;
  bool point_symmetric_ = false;
  Tolerance tol_;
  std::shared_ptr<Cache> cache_;
};

/// (d-1)-simplex with the standard basis as vertices; u sums coordinates.
template <Field T>
SpacePtr<T> make_classical(std::size_t d);

/// Regular n-gon with vertices (r cos(2k pi/n), r sin(2k pi/n), 1), r = sqrt(sec(pi/n)).
SpacePtr<double> make_polygon(std::size_t n);

/// Euclidean ball of dimension d.
SpacePtr<double> make_ball(std::size_t d);

/// The square with vertices (+-1, 0, 1), (0, +-1, 1): a rational affine image of the 4-gon.
template <Field T>
SpacePtr<T> make_rational_square();

/// Arbitrary polytope from its vertices and unit functional.
template <Field T>
SpacePtr<T> make_polytope(std::string name, std::vector<Vector<T>> vertices, Vector<T> unit,
                          const Tolerance& tol = {});

/// Block direct sum; vertices of each summand are padded with zeros elsewhere.
template <Field T>
SpacePtr<T> direct_sum(const std::vector<SpacePtr<T>>& spaces);

/// 0 <= e(s) <= 1 on every state.
template <Field T>
bool is_valid_effect(const StateSpace<T>& s, std::span<const T> e, const Tolerance& tol = {});

/// Smallest and largest value of e on the state space.
template <Field T>
T effect_min(const StateSpace<T>& s, std::span<const T> e);
template <Field T>
T effect_max(const StateSpace<T>& s, std::span<const T> e);

/// Whether x is a state: u·x = 1 and x lies in the convex hull of the vertices.
template <Field T>
bool is_state(const StateSpace<T>& s, std::span<const T> x, const Tolerance& tol = {});

/// Index of the vertex equal to x, or -1.
template <Field T>
long vertex_index(const StateSpace<T>& s, std::span<const T> x, const Tolerance& tol = {});

template <Field T>
std::vector<DualRay<T>> dual_cone_rays(const StateSpace<T>& s, const Tolerance& tol = {});

/// Nontrivial extreme effects (o and u excluded).
template <Field T>
std::vector<Vector<T>> extreme_effects(const StateSpace<T>& s, const Tolerance& tol = {});

/// Effect norm |a|_E = max over states of a·x, for point-symmetric spaces.
double effect_norm(const StateSpace<double>& s, std::span<const double> a);

/// Effect (a/2, alpha/2) in functional coordinates.
Vector<double> bloch_effect(std::span<const double> a, double alpha);

struct BlochForm {
  Vector<double> a;
  double alpha = 0;
};
BlochForm bloch_form(std::span<const double> e);

}  // namespace gptwb
