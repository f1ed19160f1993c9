#include <benchmark/benchmark.h>

#include <random>

#include "gptwb/communication.hpp"
#include "gptwb/compatibility.hpp"
#include "gptwb/postprocess.hpp"

using namespace gptwb;

namespace {

Observable<double> edge_pair(const SpacePtr<double>& s, std::size_t k) {
  auto irr = enumerate_irreducibles<double>(s);
  return irr[k % irr.size()];
}

Observable<double> noisy(const Observable<double>& a, double t) {
  std::vector<double> p(a.size(), 1.0 / static_cast<double>(a.size()));
  return mix_observables<double>({1 - t, t}, {a, trivial_observable<double>(a.space_ptr(), p)});
}

Matrix<double> random_stochastic(std::uint64_t seed, std::size_t r, std::size_t c) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Matrix<double> m(r, c);
  for (std::size_t i = 0; i < r; ++i) {
    double s = 0;
    for (std::size_t j = 0; j < c; ++j) s += (m(i, j) = u(rng));
    for (std::size_t j = 0; j < c; ++j) m(i, j) /= s;
  }
  return m;
}

}  // namespace

static void BM_EnumerateIrreducibles(benchmark::State& state) {
  auto s = make_polygon(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_irreducibles<double>(s));
}
BENCHMARK(BM_EnumerateIrreducibles)->DenseRange(4, 10);

static void BM_SpaceDims(benchmark::State& state) {
  auto s = make_polygon(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(space_dims(s));
}
BENCHMARK(BM_SpaceDims)->Arg(5)->Arg(8)->Arg(12);

static void BM_AreCompatiblePair(benchmark::State& state) {
  auto s = make_polygon(static_cast<std::size_t>(state.range(0)));
  auto a = noisy(edge_pair(s, 0), 0.4), b = noisy(edge_pair(s, 1), 0.4);
  for (auto _ : state) benchmark::DoNotOptimize(are_compatible<double>({a, b}));
}
BENCHMARK(BM_AreCompatiblePair)->DenseRange(4, 9);

static void BM_AreCompatibleExact(benchmark::State& state) {
  auto s = make_rational_square<Rational>();
  Observable<Rational> a(s, {{Rational(1, 4), 0, Rational(1, 2)}, {Rational(-1, 4), 0, Rational(1, 2)}});
  Observable<Rational> b(s, {{0, Rational(1, 4), Rational(1, 2)}, {0, Rational(-1, 4), Rational(1, 2)}});
  for (auto _ : state) benchmark::DoNotOptimize(are_compatible<Rational>({a, b}));
}
BENCHMARK(BM_AreCompatibleExact);

static void BM_IsSimulable(benchmark::State& state) {
  auto s = make_polygon(static_cast<std::size_t>(state.range(0)));
  auto irr = enumerate_irreducibles<double>(s);
  std::vector<double> w(irr.size(), 1.0 / static_cast<double>(irr.size()));
  // Coarse-grain every irreducible to two outcomes so the mixture is well defined.
  std::vector<Observable<double>> coarse;
  for (const auto& g : irr) {
    Matrix<double> nu(g.size(), 2);
    for (std::size_t y = 0; y < g.size(); ++y) nu(y, y % 2) = 1;
    coarse.push_back(apply_postprocessing(g, nu));
  }
  auto target = mix_observables(w, coarse);
  for (auto _ : state) benchmark::DoNotOptimize(is_simulable(target, irr));
}
BENCHMARK(BM_IsSimulable)->DenseRange(4, 8);

static void BM_FindPostprocessing(benchmark::State& state) {
  auto s = make_polygon(6);
  auto irr = enumerate_irreducibles<double>(s);
  const auto& fine = irr.back();
  Matrix<double> nu(fine.size(), 2);
  for (std::size_t y = 0; y < fine.size(); ++y) nu(y, y == 0 ? 0 : 1) = 1;
  auto coarse = apply_postprocessing(fine, nu);
  for (auto _ : state) benchmark::DoNotOptimize(find_postprocessing(fine, coarse));
}
BENCHMARK(BM_FindPostprocessing);

static void BM_FcSearch(benchmark::State& state) {
  auto s = make_polygon(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(find_nontrivial_fully_compatible(s));
}
BENCHMARK(BM_FcSearch)->Arg(5)->Arg(6)->Arg(7);

static void BM_UltraweakAlternating(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  auto c = random_stochastic(1, n, n);
  auto d = random_stochastic(2, n, n) * c * random_stochastic(3, n, n);
  for (auto _ : state) benchmark::DoNotOptimize(ultraweak_leq(d, c));
}
BENCHMARK(BM_UltraweakAlternating)->DenseRange(2, 5);

static void BM_Monotones(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  auto c = random_stochastic(4, n, n);
  for (auto _ : state) benchmark::DoNotOptimize(monotones(c));
}
BENCHMARK(BM_Monotones)->DenseRange(2, 6);

BENCHMARK_MAIN();
