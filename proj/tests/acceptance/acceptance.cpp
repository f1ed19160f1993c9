// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fail.
// Pass criterion numbers as arguments to run a subset.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "gptwb/communication.hpp"
#include "gptwb/compatibility.hpp"
#include "gptwb/postprocess.hpp"

using namespace gptwb;
using namespace gptwb::testing;

namespace {

struct Check {
  bool ok = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail.str("");
      detail << what;
    }
  }
};

// Width of the excluded band around boundary cases.
constexpr double kBand = 1e-7;

double sec(double x) { return 1 / std::cos(x); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool marginals_match(const JointObservable<double>& g, const std::vector<Observable<double>>& obs, double tol) {
  for (std::size_t i = 0; i < obs.size(); ++i) {
    const auto m = g.marginal(i);
    for (std::size_t x = 0; x < m.size(); ++x)
      if (!approx_eq<double>(m.effect(x), obs[i].effect(x), Tolerance{tol})) return false;
  }
  return true;
}

double marginal_error(const JointObservable<double>& g, const std::vector<Observable<double>>& obs) {
  double err = 0;
  for (std::size_t i = 0; i < obs.size(); ++i) {
    const auto m = g.marginal(i);
    for (std::size_t x = 0; x < m.size(); ++x)
      for (std::size_t k = 0; k < m.effect(x).size(); ++k) err = std::max(err, std::abs(m.effect(x)[k] - obs[i].effect(x)[k]));
  }
  return err;
}

Observable<double> unbiased(const SpacePtr<double>& s, const Vector<double>& a) {
  const auto e = bloch_effect(a, 1.0);
  return Observable<double>(s, {e, complement(e)});
}

Vector<double> random_direction(std::mt19937_64& rng, std::size_t dim) {
  std::normal_distribution<double> g;
  Vector<double> v(dim);
  double n = 0;
  do {
    for (auto& x : v) x = g(rng);
    n = std::sqrt(dot<double>(v, v));
  } while (n < 1e-6);
  return scaled<double>(v, 1 / n);
}

Observable<double> to_float(const Observable<Rational>& a, const SpacePtr<double>& s) {
  std::vector<Vector<double>> e;
  for (const auto& x : a.effects()) e.push_back(convert_vector<Rational, double>(x));
  return Observable<double>(s, e);
}

// 1. Physical dimensions of classical spaces and polygons.
void dimension_table(Check& c) {
  const auto t0 = std::chrono::steady_clock::now();
  for (std::size_t d = 1; d <= 5; ++d) {
    auto r = space_dims(make_classical<double>(d));
    c.require(r.d_op == d && std::abs(r.lambda_max - static_cast<double>(d)) < 1e-6 && r.d_lin == d,
              "classical:" + std::to_string(d) + " is not (d, d, d)");
  }
  for (std::size_t n : {4u, 6u, 8u}) {
    auto r = space_dims(make_polygon(n));
    c.require(r.d_op == 2 && std::abs(r.lambda_max - 2.0) < 1e-6 && r.d_lin == 3,
              "S_" + std::to_string(n) + " is not (2, 2, 3)");
  }
  double worst = 0;
  for (std::size_t n : {5u, 7u, 9u}) {
    auto r = space_dims(make_polygon(n));
    const double expected = 1 + sec(std::numbers::pi / static_cast<double>(n));
    worst = std::max(worst, std::abs(r.lambda_max - expected));
    c.require(std::abs(r.lambda_max - expected) < 1e-6, "lambda_max(S_" + std::to_string(n) + ") off");
  }
  const double t = seconds_since(t0);
  c.require(t < 10, "runtime above 10 s");
  if (c.ok) c.detail << "max |lambda_max - (1 + sec(pi/n))| = " << worst << ", " << t << " s";
}

// 2. Irreducible counts against the closed forms for n = 4..9.
void irreducible_counts(Check& c) {
  const auto t0 = std::chrono::steady_clock::now();
  std::ostringstream counts;
  for (std::size_t n = 4; n <= 9; ++n) {
    std::size_t di = 0, tri = 0, other = 0;
    for (const auto& g : enumerate_irreducibles<double>(make_polygon(n))) {
      if (g.size() == 2)
        ++di;
      else if (g.size() == 3)
        ++tri;
      else
        ++other;
    }
    std::size_t want_di = 0, want_tri = 0;
    if (n % 2 == 0) {
      const std::size_t m = n / 2;
      want_di = m;
      want_tri = m * (m - 1) * (m - 2) / 3;
    } else {
      const std::size_t m = (n - 1) / 2;
      want_tri = m * (m + 1) * (2 * m + 1) / 6;
    }
    c.require(di == want_di && tri == want_tri && other == 0,
              "S_" + std::to_string(n) + ": got " + std::to_string(di) + "/" + std::to_string(tri) + "/" +
                  std::to_string(other));
    if (n == 4) c.require(di + tri == 2, "S_4 does not have exactly 2");
    if (n == 5) c.require(di + tri == 5, "S_5 does not have exactly 5");
    counts << (n > 4 ? " " : "") << "S_" << n << "=" << di << "+" << tri;
  }
  const double t = seconds_since(t0);
  c.require(t < 30, "runtime above 30 s");
  if (c.ok) c.detail << counts.str() << ", " << t << " s";
}

// 3. Noise bound for nontrivial fully compatible observables on odd polygons.
void noise_bound_table(Check& c) {
  const std::pair<std::size_t, double> table[] = {{5, 0.528}, {7, 0.753}, {9, 0.803}, {11, 0.852}, {13, 0.872}};
  double worst = 0;
  for (auto [n, want] : table) {
    const double got = fc_noise_lower_bound(n);
    worst = std::max(worst, std::abs(got - want));
    c.require(std::abs(got - want) <= 1e-3, "n=" + std::to_string(n) + ": " + std::to_string(got));
  }
  if (c.ok) c.detail << "max deviation " << worst;
}

// 4. Every observable is simulable from the irreducibles.
void universal_simulability(Check& c) {
  std::mt19937_64 rng(4);
  std::size_t done = 0;
  for (std::size_t n = 4; n <= 7; ++n) {
    auto s = make_polygon(n);
    const auto irr = enumerate_irreducibles<double>(s);
    for (int i = 0; i < 100; ++i) {
      auto a = random_observable(s, 2 + i % 4, rng);
      auto w = is_simulable(a, irr);
      bool ok = w.has_value();
      if (ok) {
        const auto back = apply_simulation(irr, *w);
        for (std::size_t x = 0; x < a.size(); ++x) ok = ok && approx_eq<double>(back.effect(x), a.effect(x), Tolerance{1e-8});
      }
      c.require(ok, "S_" + std::to_string(n) + " sample " + std::to_string(i) + " not simulable");
      done += ok;
    }
  }
  if (c.ok) c.detail << done << "/400 simulated and reconstructed";
}

// 5. Norm criterion against the joint LP on the hexagon, and closed forms on the ball.
void norm_criterion_vs_lp(Check& c) {
  auto s = make_polygon(6);
  // Half-length Bloch vector along an extreme effect, so the grid straddles the boundary.
  const auto a = scaled<double>(bloch_form(polygon_edge_effect(6, 1)).a, 0.5);
  std::size_t compared = 0, skipped = 0, yes = 0;
  for (int i = 0; i < 10; ++i) {
    const double theta = 2 * std::numbers::pi * (i + 0.37) / 10;
    Vector<double> dir{std::cos(theta), std::sin(theta)};
    dir = scaled<double>(dir, 1 / effect_norm(*s, dir));
    for (int j = 1; j <= 10; ++j) {
      const auto b = scaled<double>(dir, j / 10.0);
      const auto r = psym_compat_test(*s, a, 1.0, b, 1.0);
      if (std::abs(r.criterion - 2) <= kBand) {
        ++skipped;
        continue;
      }
      const bool criterion_yes = r.verdict == PsymVerdict::IffCompatible && r.criterion <= 2;
      const bool lp_yes = are_compatible<double>({unbiased(s, a), unbiased(s, b)}).has_value();
      c.require(criterion_yes == lp_yes, "disagreement at grid point " + std::to_string(i) + "," + std::to_string(j));
      ++compared;
      yes += lp_yes;
    }
  }
  auto q = make_ball(3);
  const auto ortho = psym_compat_test(*q, Vector<double>{1, 0, 0}, 1, Vector<double>{0, 1, 0}, 1);
  c.require(ortho.verdict == PsymVerdict::Incompatible && std::abs(ortho.criterion - 2 * std::sqrt(2.0)) < 1e-12,
            "orthogonal qubit pair not incompatible");
  const auto same = psym_compat_test(*q, Vector<double>{0, 1, 0}, 1, Vector<double>{0, 1, 0}, 1);
  c.require(same.verdict == PsymVerdict::IffCompatible && same.criterion <= 2 + kBand, "equal qubit pair not compatible");
  if (c.ok) c.detail << compared << " grid points agree (" << yes << " compatible), " << skipped << " in band";
}

// 6. Closed-form dichotomic criterion against the joint LP.
void dichotomic_vs_lp(Check& c) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0.0, 0.6);
  // Half the pairs are random, half are noisy extreme dichotomic observables,
  // which are incompatible far more often.
  auto noisy_extreme = [&](const SpacePtr<double>& s, std::size_t n) {
    const auto e = polygon_edge_effect(n, std::uniform_int_distribution<std::size_t>(0, n - 1)(rng));
    Observable<double> g(s, {e, complement(e)});
    const double t = u(rng);
    return mix_observables<double>({1 - t, t}, {g, trivial_observable<double>(s, {0.5, 0.5})});
  };
  std::size_t compared = 0, skipped = 0, yes = 0;
  for (int i = 0; compared < 500; ++i) {
    const std::size_t n = 4 + i % 5;
    auto s = make_polygon(n);
    auto a = i % 2 ? noisy_extreme(s, n) : random_observable(s, 2, rng);
    auto b = i % 2 ? noisy_extreme(s, n) : random_observable(s, 2, rng);
    if (std::abs(dichotomic_compat_margin(a, b)) <= kBand) {
      ++skipped;
      continue;
    }
    const bool g = dichotomic_compat_g<double>(a, b).has_value();
    c.require(g == are_compatible<double>({a, b}).has_value(), "disagreement on pair " + std::to_string(i));
    ++compared;
    yes += g;
  }
  if (c.ok) c.detail << compared << " pairs agree (" << yes << " compatible), " << skipped << " in band";
}

// 7. Explicit joint for unbiased pairs within the norm criterion.
void unbiased_joint_construction(Check& c) {
  std::mt19937_64 rng(7);
  double worst = 0;
  for (auto s : {make_polygon(6), make_ball(3)}) {
    const std::size_t dim = s->ambient_dim() - 1;
    int built = 0;
    while (built < 100) {
      std::uniform_real_distribution<double> len(0.0, 1.0);
      auto da = random_direction(rng, dim), db = random_direction(rng, dim);
      const auto a = scaled<double>(da, len(rng) / effect_norm(*s, da));
      const auto b = scaled<double>(db, len(rng) / effect_norm(*s, db));
      if (psym_compat_test(*s, a, 1.0, b, 1.0).criterion > 2) continue;
      ++built;
      const auto g = construct_joint_unbiased(s, a, b);
      worst = std::max(worst, marginal_error(g, {unbiased(s, a), unbiased(s, b)}));
      bool valid = true;
      for (const auto& e : g.joint.effects()) valid = valid && is_valid_effect<double>(*s, e);
      c.require(valid, "invalid joint effect on " + s->name());
    }
  }
  c.require(worst < 1e-10, "marginal error " + std::to_string(worst));
  if (c.ok) c.detail << "200 joints, max marginal error " << worst;
}

// 8. Enough noise makes any family compatible.
void noise_sufficient_families(Check& c) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int confirmed = 0;
  for (int i = 0; i < 100; ++i) {
    auto s = make_polygon(4 + i % 4);
    const std::size_t m = i % 2 ? 3 : 2;
    // Weights t_i with sum m - 1 + slack, each in [0, 1].
    std::vector<double> t(m);
    double slack = 0.05 * u(rng);
    for (;;) {
      double sum = 0;
      for (auto& x : t) sum += (x = u(rng));
      const double scale = (static_cast<double>(m) - 1 + slack) / sum;
      bool ok = true;
      for (auto& x : t) ok = ok && (x *= scale) <= 1;
      if (ok) break;
    }
    std::vector<Observable<double>> family;
    double wsum = 0;
    for (std::size_t k = 0; k < m; ++k) {
      auto g = random_observable(s, 2 + (i + k) % 2, rng);
      std::vector<double> p(g.size(), 1.0 / static_cast<double>(g.size()));
      family.push_back(mix_observables<double>({1 - t[k], t[k]}, {g, trivial_observable<double>(s, p)}));
      wsum += noise_content(family.back()).w_trivial;
    }
    c.require(wsum >= static_cast<double>(m) - 1 - 1e-12, "family " + std::to_string(i) + " below the noise threshold");
    auto joint = are_compatible(family);
    const bool ok = joint && marginals_match(*joint, family, 1e-8);
    c.require(ok, "family " + std::to_string(i) + " not confirmed by the joint LP");
    confirmed += ok;
  }
  if (c.ok) c.detail << confirmed << "/100 families confirmed";
}

// 9. Identity and uniform matrices bound every communication matrix.
void ultraweak_sandwich(Check& c) {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 100; ++i) {
    const std::size_t n = 2 + i % 4, m = 2 + (i / 4) % 4;
    auto mat = random_stochastic(rng, n, m, 0.3);
    const std::size_t k = std::min(n, m);
    const auto low = ultraweak_leq(Matrix<double>::uniform(k), mat);
    const auto high = ultraweak_leq(mat, Matrix<double>::identity(k));
    c.require(low.verdict == Verdict::Yes, "V below M failed for matrix " + std::to_string(i));
    c.require(high.verdict == Verdict::Yes, "M below identity failed for matrix " + std::to_string(i));
    const auto mono = monotones(mat);
    c.require(mono.lambda_min < static_cast<double>(mono.iota) &&
                  static_cast<double>(mono.iota) <= mono.lambda_max + kBand,
              "monotone chain broken on matrix " + std::to_string(i));
  }
  if (c.ok) c.detail << "100 matrices sandwiched, chain holds";
}

// 10. Fully compatible and non-disturbing observables across spaces.
void fc_nd_landscape(Check& c) {
  std::mt19937_64 rng(10);
  auto hex = make_polygon(6);
  int trivial_seen = 0;
  for (int i = 0; i < 200; ++i) {
    auto a = i % 10 == 0 ? trivial_observable<double>(hex, {0.25, 0.75}) : random_observable(hex, 2 + i % 3, rng);
    const bool triv = is_trivial(a);
    trivial_seen += triv;
    c.require(is_fully_compatible(a) == triv, "hexagon sample " + std::to_string(i) + " breaks FC = trivial");
  }
  for (const auto& g : enumerate_irreducibles<double>(hex))
    c.require(!is_fully_compatible(g), "hexagon irreducible is fully compatible");

  auto p5 = make_polygon(5);
  auto f5 = find_nontrivial_fully_compatible(p5);
  c.require(f5.has_value(), "no nontrivial FC observable found on S_5");
  double w5 = 0;
  if (f5) {
    w5 = noise_content(f5->observable).w_trivial;
    c.require(!is_trivial(f5->observable) && w5 >= 0.528 - 1e-6, "S_5 FC member has noise content " + std::to_string(w5));
  }

  auto c3 = make_classical<double>(3);
  for (int i = 0; i < 100; ++i)
    c.require(is_nondisturbing(random_observable(c3, 2 + i % 3, rng), {{0}, {1}, {2}}),
              "classical observable " + std::to_string(i) + " disturbs");

  auto p7 = make_polygon(7);
  auto s = direct_sum<double>({p5, p7});
  Observable<double> indicator(s, {{0, 0, 1, 0, 0, 0}, {0, 0, 0, 0, 0, 1}});
  c.require(is_nondisturbing(indicator) && !is_trivial(indicator), "block indicator not a nontrivial ND member");
  auto f7 = find_nontrivial_fully_compatible(p7);
  if (f5 && f7 && f5->observable.size() == f7->observable.size()) {
    std::vector<Vector<double>> effects;
    for (std::size_t x = 0; x < f5->observable.size(); ++x) {
      Vector<double> e = f5->observable.effect(x);
      e.insert(e.end(), f7->observable.effect(x).begin(), f7->observable.effect(x).end());
      effects.push_back(e);
    }
    Observable<double> blockwise(s, effects);
    c.require(is_fully_compatible(blockwise) && !is_nondisturbing(blockwise), "blockwise FC observable not separated");
  } else {
    c.require(false, "could not build the blockwise FC observable");
  }
  if (c.ok)
    c.detail << "hexagon FC only on " << trivial_seen << " trivial samples, S_5 FC noise " << w5
             << ", direct-sum separations hold";
}

// 11. Restricted-effect observable outside the noisy set at t = 0.2.
void restriction_gap(Check& c) {
  auto s = make_polygon(6);
  const double t = 0.2;
  const double r = (1.0 - 1.5 * t) / (1.0 - t);
  std::vector<Vector<double>> effects;
  for (std::size_t k : {0u, 2u, 4u})
    effects.push_back(add<double>(scaled<double>(polygon_edge_effect(6, k), t), scaled<double>(s->unit(), (1 - t) * r / 3)));
  Observable<double> a(s, effects);
  c.require(static_cast<bool>(validate(a)), "construction is not an observable");
  c.require(obs_in_O_of_E<double>(a, [&](std::span<const double> e) { return effect_in_Etilde_t<double>(*s, e, t); }),
            "not in O(E~_t)");
  c.require(!obs_in_Otilde_t<double>(a, t), "unexpectedly in O~_t");
  if (c.ok) c.detail << "noise content " << noise_content(a).w_trivial << " < 1 - t = " << 1 - t;
}

// 12. Effectively dichotomic measurements lose at unambiguous discrimination.
void unambiguous_gap(Check& c) {
  double smallest = 1;
  for (int k = 1; k <= 99; ++k) {
    const double overlap = k / 100.0;
    const auto b = unambiguous_qubit_bounds(overlap);
    c.require(std::abs(b.optimal - (1 - overlap)) < 1e-12, "optimum is not 1 - c");
    c.require(b.dichotomic_bound < b.optimal, "no gap at c = " + std::to_string(overlap));
    smallest = std::min(smallest, b.optimal - b.dichotomic_bound);
  }
  for (double overlap : {0.0, 1.0}) {
    const auto b = unambiguous_qubit_bounds(overlap);
    c.require(std::abs(b.optimal - b.dichotomic_bound) <= 1e-12, "bounds differ at c = " + std::to_string(overlap));
  }
  if (c.ok) c.detail << "strict gap on 99 points, smallest " << smallest;
}

// 13. Exact and float backends reach the same verdicts.
void backend_coherence(Check& c) {
  std::mt19937_64 rng(13);
  const std::pair<SpacePtr<Rational>, SpacePtr<double>> spaces[] = {
      {make_classical<Rational>(3), make_classical<double>(3)},
      {make_rational_square<Rational>(), make_rational_square<double>()},
  };
  std::size_t checks = 0;
  for (int i = 0; i < 200; ++i) {
    const auto& [se, sf] = spaces[i % 2];
    auto a = random_observable(se, 2 + i % 2, rng);
    auto b = random_observable(se, 2 + (i / 2) % 3, rng);
    auto af = to_float(a, sf), bf = to_float(b, sf);
    const bool agree = find_postprocessing(a, b).has_value() == find_postprocessing(af, bf).has_value() &&
                       find_postprocessing(b, a).has_value() == find_postprocessing(bf, af).has_value() &&
                       are_compatible<Rational>({a, b}).has_value() == are_compatible<double>({af, bf}).has_value() &&
                       is_simulable<Rational>(a, {b}).has_value() == is_simulable<double>(af, {bf}).has_value() &&
                       is_trivial(a) == is_trivial(af);
    c.require(agree, "verdicts differ on instance " + std::to_string(i));
    checks += 5;
  }
  if (c.ok) c.detail << checks << " verdicts agree on 200 instances";
}

struct Criterion {
  int id;
  const char* name;
  void (*run)(Check&);
};

const Criterion kCriteria[] = {
    {1, "dimension table", dimension_table},
    {2, "irreducible counts", irreducible_counts},
    {3, "FC noise bound table", noise_bound_table},
    {4, "universal simulability", universal_simulability},
    {5, "norm criterion vs joint LP", norm_criterion_vs_lp},
    {6, "dichotomic criterion vs joint LP", dichotomic_vs_lp},
    {7, "unbiased joint construction", unbiased_joint_construction},
    {8, "noise-sufficient compatibility", noise_sufficient_families},
    {9, "ultraweak sandwich", ultraweak_sandwich},
    {10, "FC/ND landscape", fc_nd_landscape},
    {11, "restricted-effect gap", restriction_gap},
    {12, "unambiguous discrimination gap", unambiguous_gap},
    {13, "backend coherence", backend_coherence},
};

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  int failed = 0;
  const auto t0 = std::chrono::steady_clock::now();
  for (const auto& cr : kCriteria) {
    if (!only.empty() && !only.count(cr.id)) continue;
    Check c;
    const auto t = std::chrono::steady_clock::now();
    try {
      cr.run(c);
    } catch (const std::exception& e) {
      c.ok = false;
      c.detail.str("");
      c.detail << "exception: " << e.what();
    }
    failed += !c.ok;
    std::printf("%s %2d %-34s %s [%.2f s]\n", c.ok ? "PASS" : "FAIL", cr.id, cr.name, c.detail.str().c_str(),
                seconds_since(t));
    std::fflush(stdout);
  }
  std::printf("%d failed, total %.2f s\n", failed, seconds_since(t0));
  return failed ? 1 : 0;
}
