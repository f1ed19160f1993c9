#pragma once

// Closed-form reference objects and seeded random generators shared by the
// unit and acceptance tests. Nothing here calls into the library's solvers.

#include <cmath>
#include <numbers>
#include <random>

#include "gptwb/observable.hpp"

namespace gptwb::testing {

inline double polygon_radius(std::size_t n) { return std::sqrt(1.0 / std::cos(std::numbers::pi / double(n))); }

/// Vertex k (1-based, wraps) of the regular n-gon.
inline Vector<double> polygon_vertex(std::size_t n, std::size_t k) {
  const double r = polygon_radius(n);
  const double a = 2.0 * std::numbers::pi * double(k) / double(n);
  return {r * std::cos(a), r * std::sin(a), 1.0};
}

/// The effect vanishing on the edge between vertices k and k+1 and equal to 1
/// on the opposite edge (even n) or opposite vertex (odd n).
inline Vector<double> polygon_edge_effect(std::size_t n, std::size_t k) {
  const double r = polygon_radius(n);
  const double pi = std::numbers::pi;
  const double theta = (2.0 * double(k) + 1.0) * pi / double(n);
  const double h = r * std::cos(pi / double(n));
  const double c = std::cos(theta), s = std::sin(theta);
  if (n % 2 == 0) return {-c / (2.0 * h), -s / (2.0 * h), 0.5};
  return {-c / (h + r), -s / (h + r), h / (h + r)};
}

inline Vector<double> complement(const Vector<double>& e) {
  Vector<double> f(e.size());
  for (std::size_t i = 0; i < e.size(); ++i) f[i] = -e[i];
  f.back() += 1.0;
  return f;
}

template <Field T>
T random_fraction(std::mt19937_64& rng, int lo, int hi, int den) {
  std::uniform_int_distribution<int> d(lo, hi);
  if constexpr (is_exact_v<T>)
    return T(d(rng), den);
  else
    return T(d(rng)) / T(den);
}

/// A random k-outcome observable: trivial weights p_x u perturbed along random
/// zero-sum directions, scaled by a random fraction of the largest step that
/// keeps every effect nonnegative on the vertices. Exact for rational T.
template <Field T>
Observable<T> random_observable(const SpacePtr<T>& s, std::size_t k, std::mt19937_64& rng) {
  const std::size_t D = s->ambient_dim();
  std::vector<T> p(k);
  T total = 0;
  for (auto& x : p) {
    x = random_fraction<T>(rng, 1, 6, 1);
    total += x;
  }
  for (auto& x : p) x /= total;
  std::vector<Vector<T>> h(k, Vector<T>(D, T(0)));
  for (std::size_t x = 0; x + 1 < k; ++x)
    for (std::size_t c = 0; c < D; ++c) {
      h[x][c] = random_fraction<T>(rng, -6, 6, 6);
      h[k - 1][c] -= h[x][c];
    }
  bool have = false;
  T step = 0;
  for (std::size_t x = 0; x < k; ++x)
    for (const auto& v : s->vertices()) {
      T hv = 0;
      for (std::size_t c = 0; c < D; ++c) hv += h[x][c] * v[c];
      if (hv < 0) {
        T lim = p[x] / -hv;
        if (!have || lim < step) step = lim;
        have = true;
      }
    }
  if (!have) step = 1;
  step *= random_fraction<T>(rng, 2, 8, 8);
  std::vector<Vector<T>> effects(k);
  for (std::size_t x = 0; x < k; ++x) {
    effects[x] = Vector<T>(D);
    for (std::size_t c = 0; c < D; ++c) effects[x][c] = p[x] * s->unit()[c] + step * h[x][c];
  }
  return Observable<T>(s, std::move(effects));
}

inline Matrix<double> random_stochastic(std::mt19937_64& rng, std::size_t r, std::size_t c, double zero_prob = 0.2) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Matrix<double> m(r, c);
  for (std::size_t i = 0; i < r; ++i) {
    double sum = 0;
    for (std::size_t j = 0; j < c; ++j) {
      m(i, j) = u(rng) < zero_prob ? 0.0 : u(rng);
      sum += m(i, j);
    }
    if (sum == 0) {
      m(i, 0) = 1;
      sum = 1;
    }
    for (std::size_t j = 0; j < c; ++j) m(i, j) /= sum;
  }
  return m;
}

}  // namespace gptwb::testing
