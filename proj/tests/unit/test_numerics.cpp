#include <gtest/gtest.h>

#include <random>

#include "gptwb/linalg.hpp"
#include "gptwb/lp.hpp"

using namespace gptwb;

namespace {

Matrix<double> random_positive(std::mt19937_64& rng, std::size_t r, std::size_t c) {
  std::uniform_real_distribution<double> d(0.1, 1.0);
  Matrix<double> m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = d(rng);
  return m;
}

// Largest pairwise-disjoint-support row subset by exhaustive enumeration.
std::size_t brute_force_orthogonal(const Matrix<double>& m) {
  std::size_t best = 0;
  const std::size_t n = m.rows();
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i) {
      if (!(mask >> i & 1)) continue;
      bool nonzero = false;
      for (std::size_t j = 0; j < m.cols(); ++j) nonzero |= m(i, j) > 0;
      if (!nonzero) ok = false;
      for (std::size_t k = i + 1; k < n && ok; ++k) {
        if (!(mask >> k & 1)) continue;
        for (std::size_t j = 0; j < m.cols(); ++j)
          if (m(i, j) > 0 && m(k, j) > 0) ok = false;
      }
    }
    if (ok) best = std::max<std::size_t>(best, std::popcount(mask));
  }
  return best;
}

}  // namespace

TEST(Rank, Identity) { EXPECT_EQ(rank(Matrix<double>::identity(3)), 3u); }

TEST(Rank, ConstantMatrixHasRankOne) {
  EXPECT_EQ(rank(Matrix<double>::uniform(4)), 1u);
  EXPECT_EQ(rank(Matrix<Rational>::uniform(4)), 1u);
}

TEST(Rank, ProductOfThinFactors) {
  std::mt19937_64 rng(7);
  auto a = random_positive(rng, 4, 2);
  auto b = random_positive(rng, 2, 6);
  EXPECT_EQ(rank(a * b), 2u);
}

TEST(Rank, ProductNeverExceedsFactors) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> dim(1, 5);
  for (int trial = 0; trial < 200; ++trial) {
    auto a = random_positive(rng, dim(rng), dim(rng));
    auto b = random_positive(rng, a.cols(), dim(rng));
    EXPECT_LE(rank(a * b), std::min(rank(a), rank(b)));
  }
}

TEST(NullSpace, VectorsAreAnnihilated) {
  Matrix<Rational> m{{1, 2, 3}, {2, 4, 6}};
  auto basis = null_space(m);
  ASSERT_EQ(basis.size(), 2u);
  for (const auto& v : basis)
    for (auto x : m * std::span<const Rational>(v)) EXPECT_EQ(x, 0);
}

TEST(SolveUnique, RejectsSingularSystems) {
  Matrix<double> m{{1, 1}, {2, 2}};
  std::vector<double> b{1, 2};
  EXPECT_FALSE(solve_unique<double>(m, b).has_value());
  Matrix<double> ok{{2, 0}, {0, 4}};
  auto x = solve_unique<double>(ok, b);
  ASSERT_TRUE(x.has_value());
  EXPECT_DOUBLE_EQ((*x)[0], 0.5);
  EXPECT_DOUBLE_EQ((*x)[1], 0.5);
}

TEST(OrthogonalRows, Examples) {
  EXPECT_EQ(count_orthogonal_rows(Matrix<double>::identity(5)), 5u);
  EXPECT_EQ(count_orthogonal_rows(Matrix<double>::uniform(4)), 1u);
  Matrix<double> c{{0.5, 0.5, 0}, {0, 0, 1}, {0.3, 0.3, 0.4}};
  std::size_t expected = brute_force_orthogonal(c);
  EXPECT_EQ(expected, 2u);
  EXPECT_EQ(count_orthogonal_rows(c), expected);
}

TEST(OrthogonalRows, MatchesBruteForce) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> rows(1, 12), cols(1, 8);
  std::bernoulli_distribution keep(0.3);
  for (int trial = 0; trial < 300; ++trial) {
    Matrix<double> m(rows(rng), cols(rng));
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = keep(rng) ? 1.0 : 0.0;
    EXPECT_EQ(count_orthogonal_rows(m), brute_force_orthogonal(m));
  }
}

TEST(LinearProgram, BoxMaximum) {
  LPProblem<double> p(1);
  p.set_bounds(0, 0.0, 1.0);
  p.objective = std::vector<double>{1.0};
  auto sol = lp_solve(p);
  ASSERT_TRUE(sol.has_value());
  EXPECT_NEAR(sol->x[0], 1.0, 1e-12);
  EXPECT_NEAR(sol->objective, 1.0, 1e-12);
}

TEST(LinearProgram, ContradictoryBoundsAreInfeasible) {
  LPProblem<Rational> p(1);
  p.set_free(0);
  p.add_inequality({Rational(1)}, Rational(1));
  p.add_inequality({Rational(-1)}, Rational(0));
  EXPECT_FALSE(lp_solve(p).has_value());
}

TEST(LinearProgram, UnboundedThrows) {
  LPProblem<double> p(2);
  p.objective = std::vector<double>{1.0, 0.0};
  p.add_inequality({1.0, -1.0}, 0.0);
  EXPECT_THROW(lp_solve(p), UnboundedObjective);
}

TEST(LinearProgram, FreeAndMirroredVariables) {
  // maximize -x - y with x free, y <= 3, x + y = 1, x >= -2  ->  any optimum has value -1
  LPProblem<Rational> p(2);
  p.set_free(0);
  p.set_bounds(1, std::nullopt, Rational(3));
  p.objective = std::vector<Rational>{-1, -1};
  p.add_equality({1, 1}, 1);
  p.add_inequality({1, 0}, -2);
  auto sol = lp_solve(p);
  ASSERT_TRUE(sol.has_value());
  EXPECT_EQ(sol->objective, -1);
  EXPECT_EQ(lp_violation<Rational>(p, sol->x), 0);
}

TEST(LinearProgram, DegenerateTransportationProblem) {
  // 3x3 doubly stochastic matrices, maximize the trace: optimum 3 at the identity.
  LPProblem<double> p(9);
  std::vector<double> obj(9, 0.0);
  for (int i = 0; i < 3; ++i) obj[i * 3 + i] = 1;
  p.objective = obj;
  for (int i = 0; i < 3; ++i) {
    std::vector<double> r(9, 0.0), c(9, 0.0);
    for (int j = 0; j < 3; ++j) {
      r[i * 3 + j] = 1;
      c[j * 3 + i] = 1;
    }
    p.add_equality(r, 1);
    p.add_equality(c, 1);
  }
  auto sol = lp_solve(p);
  ASSERT_TRUE(sol.has_value());
  EXPECT_NEAR(sol->objective, 3.0, 1e-12);
  EXPECT_LE(lp_violation<double>(p, sol->x), 1e-9);
}

TEST(LinearProgram, ExactAndFloatAgreeOnRandomRationalInstances) {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> coef(-4, 4), nvars(1, 4), nrows(1, 4);
  std::bernoulli_distribution with_objective(0.5);
  int feasible = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = nvars(rng);
    LPProblem<Rational> pe(n);
    LPProblem<double> pf(n);
    for (std::size_t j = 0; j < n; ++j) {
      pe.set_bounds(j, Rational(0), Rational(3));
      pf.set_bounds(j, 0.0, 3.0);
    }
    auto add_rows = [&](int count, bool equality) {
      for (int k = 0; k < count; ++k) {
        std::vector<Rational> re(n);
        std::vector<double> rf(n);
        for (std::size_t j = 0; j < n; ++j) {
          int c = coef(rng);
          re[j] = c;
          rf[j] = c;
        }
        int h = coef(rng);
        if (equality) {
          pe.add_equality(re, Rational(h, 2));
          pf.add_equality(rf, h / 2.0);
        } else {
          pe.add_inequality(re, Rational(h));
          pf.add_inequality(rf, h);
        }
      }
    };
    add_rows(nrows(rng), false);
    add_rows(nrows(rng) - 1, true);
    if (with_objective(rng)) {
      std::vector<Rational> oe(n);
      std::vector<double> of(n);
      for (std::size_t j = 0; j < n; ++j) {
        int c = coef(rng);
        oe[j] = c;
        of[j] = c;
      }
      pe.objective = oe;
      pf.objective = of;
    }
    auto se = lp_solve(pe);
    auto sf = lp_solve(pf);
    ASSERT_EQ(se.has_value(), sf.has_value()) << "trial " << trial;
    if (!se) continue;
    ++feasible;
    EXPECT_EQ(lp_violation<Rational>(pe, se->x), 0);
    EXPECT_LE(lp_violation<double>(pf, sf->x), 1e-9);
    if (pe.objective) {
      EXPECT_NEAR(se->objective.convert_to<double>(), sf->objective, 1e-9);
    }
  }
  EXPECT_GT(feasible, 100);
}

TEST(ScalarParsing, DecimalsAreExact) {
  EXPECT_EQ(parse_scalar<Rational>("0.1"), Rational(1, 10));
  EXPECT_EQ(parse_scalar<Rational>("-2.5e-1"), Rational(-1, 4));
  EXPECT_EQ(parse_scalar<Rational>("1/3"), Rational(1, 3));
  EXPECT_DOUBLE_EQ(parse_scalar<double>("0.1"), 0.1);
  EXPECT_THROW(parse_scalar<double>("abc"), SchemaError);
}
