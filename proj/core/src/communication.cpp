#include "gptwb/communication.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "combinatorics.hpp"
#include "gptwb/linalg.hpp"
#include "gptwb/lp.hpp"

namespace gptwb {

namespace {

std::size_t ceil_minus_eps(double x, const Tolerance& tol) {
  return static_cast<std::size_t>(std::max(0.0, std::ceil(x - tol.eps)));
}

std::size_t ceil_sqrt(std::size_t r) {
  std::size_t q = 0;
  while (q * q < r) ++q;
  return q;
}

Matrix<double> random_stochastic(std::mt19937_64& rng, std::size_t rows, std::size_t cols) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Matrix<double> m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    double s = 0;
    for (std::size_t j = 0; j < cols; ++j) {
      m(i, j) = -std::log(1.0 - u(rng));
      s += m(i, j);
    }
    for (std::size_t j = 0; j < cols; ++j) m(i, j) /= s;
  }
  return m;
}

// min_X sum_ij |(A X B - D)_ij| over X (r x c) >= 0, optionally with every
// row of X summing to 1. Either A or B may be empty, standing for the identity.
struct FitResult {
  Matrix<double> x;
  double residual = 0;
};

FitResult fit_middle(const Matrix<double>& a, const Matrix<double>& b, const Matrix<double>& d, std::size_t r,
                     std::size_t c, bool stochastic_rows) {
  const std::size_t out_rows = a.empty() ? r : a.rows();
  const std::size_t out_cols = b.empty() ? c : b.cols();
  const std::size_t nx = r * c, nv = nx + out_rows * out_cols;
  LPProblem<double> p(nv);
  std::vector<double> obj(nv, 0.0);
  for (std::size_t v = nx; v < nv; ++v) {
    p.set_bounds(v, 0.0, std::nullopt);
    obj[v] = -1;
  }
  p.objective = obj;
  if (stochastic_rows) {
    for (std::size_t i = 0; i < r; ++i) {
      std::vector<double> row(nv, 0.0);
      for (std::size_t j = 0; j < c; ++j) row[i * c + j] = 1;
      p.add_equality(std::move(row), 1.0);
    }
  }
  for (std::size_t i = 0; i < out_rows; ++i) {
    for (std::size_t j = 0; j < out_cols; ++j) {
      // (A X B)_ij = sum_{k,l} A_ik X_kl B_lj
      std::vector<double> row(nv, 0.0);
      for (std::size_t k = 0; k < r; ++k) {
        const double aik = a.empty() ? (k == i ? 1.0 : 0.0) : a(i, k);
        if (aik == 0) continue;
        for (std::size_t l = 0; l < c; ++l) {
          const double blj = b.empty() ? (l == j ? 1.0 : 0.0) : b(l, j);
          row[k * c + l] += aik * blj;
        }
      }
      auto neg = row;
      for (auto& v : neg) v = -v;
      const std::size_t t = nx + i * out_cols + j;
      row[t] = 1;  // t + (AXB)_ij >= D_ij
      neg[t] = 1;  // t - (AXB)_ij >= -D_ij
      p.add_inequality(std::move(row), d(i, j));
      p.add_inequality(std::move(neg), -d(i, j));
    }
  }
  auto sol = lp_solve(p);
  if (!sol) throw Error("fit_middle: residual program infeasible");
  FitResult f{Matrix<double>(r, c), 0.0};
  for (std::size_t v = nx; v < nv; ++v) f.residual += sol->x[v];
  for (std::size_t k = 0; k < r; ++k)
    for (std::size_t l = 0; l < c; ++l) f.x(k, l) = std::max(0.0, sol->x[k * c + l]);
  return f;
}

double residual_inf(const Matrix<double>& a, const Matrix<double>& b) { return max_abs_diff(a, b); }

}  // namespace

CommMatrix build_comm_matrix(const std::vector<Vector<double>>& states, const Observable<double>& m,
                             const Tolerance& tol) {
  if (states.empty()) throw InvalidArgument("build_comm_matrix: no states");
  CommMatrix out;
  out.matrix = Matrix<double>(states.size(), m.size());
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (!is_state<double>(m.space(), states[i], tol))
      throw InvalidArgument("build_comm_matrix: state " + std::to_string(i) + " is not in the state space");
    for (std::size_t j = 0; j < m.size(); ++j) out.matrix(i, j) = dot<double>(m.effect(j), states[i]);
  }
  out.states = states;
  out.observable = m;
  return out;
}

double lambda_max(const Matrix<double>& c) {
  double total = 0;
  for (std::size_t j = 0; j < c.cols(); ++j) {
    double m = c(0, j);
    for (std::size_t i = 1; i < c.rows(); ++i) m = std::max(m, c(i, j));
    total += m;
  }
  return total;
}

double lambda_min(const Matrix<double>& c) {
  double total = 0;
  for (std::size_t j = 0; j < c.cols(); ++j) {
    double m = c(0, j);
    for (std::size_t i = 1; i < c.rows(); ++i) m = std::min(m, c(i, j));
    total -= m;
  }
  return total;
}

std::optional<NonnegFactorization> find_nonneg_factorization(const Matrix<double>& c, std::size_t k,
                                                             const SearchConfig& cfg, const Tolerance& tol) {
  const std::size_t n = c.rows(), m = c.cols();
  if (k == 0) return std::nullopt;
  if (k >= n) {
    // C = I C (padded with zero columns when k > n).
    NonnegFactorization f{Matrix<double>(n, k), Matrix<double>(k, m)};
    for (std::size_t i = 0; i < n; ++i) {
      f.w(i, i) = 1;
      for (std::size_t j = 0; j < m; ++j) f.h(i, j) = c(i, j);
    }
    return f;
  }
  if (k >= m) {
    NonnegFactorization f{Matrix<double>(n, k), Matrix<double>(k, m)};
    for (std::size_t j = 0; j < m; ++j) {
      f.h(j, j) = 1;
      for (std::size_t i = 0; i < n; ++i) f.w(i, j) = c(i, j);
    }
    return f;
  }
  for (int restart = 0; restart < cfg.restarts; ++restart) {
    std::mt19937_64 rng(cfg.seed + 7919 * k + 104729 * static_cast<std::uint64_t>(restart));
    std::uniform_real_distribution<double> u(0.05, 1.0);
    Matrix<double> w(n, k), h(k, m);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t r = 0; r < k; ++r) w(i, r) = u(rng);
    for (std::size_t r = 0; r < k; ++r)
      for (std::size_t j = 0; j < m; ++j) h(r, j) = u(rng);
    // Hierarchical alternating least squares.
    for (int iter = 0; iter < 3000; ++iter) {
      const auto wt = w.transpose();
      const auto a = wt * c, b = wt * w;
      for (std::size_t r = 0; r < k; ++r) {
        if (b(r, r) <= 1e-300) continue;
        for (std::size_t j = 0; j < m; ++j) {
          double bh = 0;
          for (std::size_t q = 0; q < k; ++q) bh += b(r, q) * h(q, j);
          h(r, j) = std::max(0.0, h(r, j) + (a(r, j) - bh) / b(r, r));
        }
      }
      const auto ht = h.transpose();
      const auto a2 = c * ht, b2 = h * ht;
      for (std::size_t r = 0; r < k; ++r) {
        if (b2(r, r) <= 1e-300) continue;
        for (std::size_t i = 0; i < n; ++i) {
          double wb = 0;
          for (std::size_t q = 0; q < k; ++q) wb += w(i, q) * b2(q, r);
          w(i, r) = std::max(0.0, w(i, r) + (a2(i, r) - wb) / b2(r, r));
        }
      }
      if (iter % 100 == 99 && residual_inf(w * h, c) < 1e-13) break;
    }
    if (residual_inf(w * h, c) > 1e-3) continue;
    // Polish with alternating LPs so the residual reaches the tolerance exactly.
    for (int round = 0; round < 10; ++round) {
      if (residual_inf(w * h, c) <= tol.eps) break;
      h = fit_middle(w, Matrix<double>(), c, k, m, false).x;
      w = fit_middle(Matrix<double>(), h, c, n, k, false).x;
    }
    if (residual_inf(w * h, c) <= tol.eps) return NonnegFactorization{std::move(w), std::move(h)};
  }
  return std::nullopt;
}

RankInterval nn_rank_bounds(const Matrix<double>& c, const SearchConfig& cfg, const Tolerance& tol) {
  const std::size_t cap = std::min(c.rows(), c.cols());
  RankInterval r;
  r.lo = std::max(rank(c, tol), ceil_minus_eps(lambda_max(c), tol));
  r.lo = std::min(r.lo, cap);
  r.hi = cap;
  for (std::size_t k = r.lo; k < cap; ++k) {
    if (find_nonneg_factorization(c, k, cfg, tol)) {
      r.hi = k;
      break;
    }
  }
  return r;
}

MonotoneReport monotones(const Matrix<double>& c, const SearchConfig& cfg, const Tolerance& tol) {
  if (!is_row_stochastic(c, tol)) throw InvalidArgument("monotones: matrix is not row-stochastic");
  MonotoneReport r;
  r.iota = count_orthogonal_rows(c, tol);
  r.lambda_max = lambda_max(c);
  r.lambda_min = lambda_min(c);
  r.rank = rank(c, tol);
  r.nn_rank = nn_rank_bounds(c, cfg, tol);
  r.psd_rank.lo = std::max(ceil_sqrt(r.rank), ceil_minus_eps(r.lambda_max, tol));
  r.psd_rank.hi = r.nn_rank.hi;
  r.psd_rank.lo = std::min(r.psd_rank.lo, r.psd_rank.hi);
  return r;
}

namespace {

bool row_is_mixture(const std::vector<Vector<double>>& rows, std::size_t i, const std::vector<bool>& alive,
                    const Tolerance& tol) {
  std::vector<std::size_t> others;
  for (std::size_t k = 0; k < rows.size(); ++k)
    if (k != i && alive[k]) others.push_back(k);
  if (others.empty()) return false;
  LPProblem<double> p(others.size());
  for (std::size_t j = 0; j < rows[i].size(); ++j) {
    std::vector<double> r(others.size());
    for (std::size_t k = 0; k < others.size(); ++k) r[k] = rows[others[k]][j];
    p.add_equality(std::move(r), rows[i][j]);
  }
  p.add_equality(std::vector<double>(others.size(), 1.0), 1.0);
  return lp_solve(p, tol).has_value();
}

}  // namespace

Matrix<double> canonical_reduce(const Matrix<double>& c, const Tolerance& tol) {
  if (!is_row_stochastic(c, tol)) throw InvalidArgument("canonical_reduce: matrix is not row-stochastic");
  Matrix<double> cur = c;
  while (true) {
    bool changed = false;
    // Columns: drop zeros, merge positive multiples into their first occurrence.
    std::vector<Vector<double>> cols;
    for (std::size_t j = 0; j < cur.cols(); ++j) {
      auto col = cur.column(j);
      if (max_abs<double>(col) <= tol.eps) {
        changed = true;
        continue;
      }
      bool merged = false;
      for (auto& kept : cols) {
        if (positively_proportional<double>(kept, col, tol)) {
          axpy<double>(kept, 1.0, col);
          merged = true;
          changed = true;
          break;
        }
      }
      if (!merged) cols.push_back(std::move(col));
    }
    cur = Matrix<double>::from_rows(cols).transpose();
    // Rows: drop those that are convex mixtures of the others, latest first.
    auto rows = cur.to_rows();
    std::vector<bool> alive(rows.size(), true);
    for (std::size_t i = rows.size(); i-- > 0;) {
      if (row_is_mixture(rows, i, alive, tol)) {
        alive[i] = false;
        changed = true;
      }
    }
    std::vector<Vector<double>> kept;
    for (std::size_t i = 0; i < rows.size(); ++i)
      if (alive[i]) kept.push_back(rows[i]);
    cur = Matrix<double>::from_rows(kept);
    if (!changed) return cur;
  }
}

bool is_identity_like(const Matrix<double>& m, const Tolerance& tol) {
  if (m.rows() != m.cols()) return false;
  std::vector<bool> used(m.cols(), false);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    std::size_t ones = 0, at = 0;
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (approx_eq<double>(m(i, j), 1.0, tol)) {
        ++ones;
        at = j;
      } else if (!is_zero<double>(m(i, j), tol)) {
        return false;
      }
    }
    if (ones != 1 || used[at]) return false;
    used[at] = true;
  }
  return true;
}

UltraweakResult ultraweak_leq(const Matrix<double>& d, const Matrix<double>& c, const SearchConfig& cfg,
                              const Tolerance& tol) {
  if (!is_row_stochastic(d, tol) || !is_row_stochastic(c, tol))
    throw InvalidArgument("ultraweak_leq: inputs must be row-stochastic");
  UltraweakResult res;
  auto no = [&](const char* name) {
    res.verdict = Verdict::No;
    res.violated = name;
    res.method = "monotone";
    return res;
  };
  if (count_orthogonal_rows(d, tol) > count_orthogonal_rows(c, tol)) return no("iota");
  if (lambda_max(d) > lambda_max(c) + tol.eps) return no("lambda_max");
  if (lambda_min(d) > lambda_min(c) + tol.eps) return no("lambda_min");
  const std::size_t rank_d = rank(d, tol);
  if (rank_d > rank(c, tol)) return no("rank");
  const std::size_t nn_lo_d = std::max(rank_d, ceil_minus_eps(lambda_max(d), tol));
  const RankInterval nn_c = nn_rank_bounds(c, cfg, tol);
  if (nn_lo_d > nn_c.hi) return no("nn_rank");
  const std::size_t psd_lo_d = std::max(ceil_sqrt(rank_d), ceil_minus_eps(lambda_max(d), tol));
  if (psd_lo_d > nn_c.hi) return no("psd_rank");

  auto accept = [&](Matrix<double> l, Matrix<double> r, const char* method) {
    res.residual = residual_inf(l * c * r, d);
    res.verdict = res.residual <= tol.eps ? Verdict::Yes : Verdict::Inconclusive;
    res.method = method;
    if (res.verdict == Verdict::Yes) {
      res.left = std::move(l);
      res.right = std::move(r);
    }
    return res;
  };

  // D a permutation of 1_k: pick k orthogonal rows of C and group columns by support.
  if (is_identity_like(d, tol)) {
    const std::size_t k = d.rows();
    auto chosen = max_orthogonal_row_set(c, tol);
    if (chosen.size() < k) return no("iota");
    Matrix<double> l(k, c.rows()), r(c.cols(), k);
    std::vector<std::size_t> target(k);
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = 0; b < k; ++b)
        if (d(a, b) > 0.5) target[a] = b;
    std::vector<bool> assigned(c.cols(), false);
    for (std::size_t a = 0; a < k; ++a) {
      l(a, chosen[a]) = 1;
      for (std::size_t j = 0; j < c.cols(); ++j) {
        if (!is_zero<double>(c(chosen[a], j), tol)) {
          r(j, target[a]) = 1;
          assigned[j] = true;
        }
      }
    }
    for (std::size_t j = 0; j < c.cols(); ++j)
      if (!assigned[j]) r(j, 0) = 1;
    return accept(std::move(l), std::move(r), "orthogonal-rows");
  }

  // C a permutation of 1_k: D <= C iff D has a nonnegative factorization of inner size k.
  if (is_identity_like(c, tol)) {
    const std::size_t k = c.rows();
    if (nn_lo_d > k) return no("nn_rank");
    auto f = find_nonneg_factorization(d, k, cfg, tol);
    if (!f) {
      res.verdict = Verdict::Inconclusive;
      res.method = "nn-factorization";
      return res;
    }
    // Rescale D = W H into row-stochastic factors: H rows normalized, W absorbs the scale.
    Matrix<double> l(d.rows(), k), r(k, d.cols());
    for (std::size_t q = 0; q < k; ++q) {
      double s = 0;
      for (std::size_t j = 0; j < d.cols(); ++j) s += f->h(q, j);
      for (std::size_t i = 0; i < d.rows(); ++i) l(i, q) = f->w(i, q) * s;
      for (std::size_t j = 0; j < d.cols(); ++j) r(q, j) = s > 0 ? f->h(q, j) / s : 1.0 / static_cast<double>(d.cols());
    }
    // Undo the permutation: C = P with P(a, pi(a)) = 1, so use L P^T and R.
    Matrix<double> perm_t(k, k);
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = 0; b < k; ++b)
        if (c(a, b) > 0.5) perm_t(b, a) = 1;
    return accept(l * perm_t, std::move(r), "nn-factorization");
  }

  // Alternating LPs over L with R fixed and R with L fixed; restarts alternate
  // which factor is drawn at random first.
  double best = std::numeric_limits<double>::infinity();
  for (int restart = 0; restart < cfg.restarts; ++restart) {
    std::mt19937_64 rng(cfg.seed + 15485863ull * static_cast<std::uint64_t>(restart + 1));
    const bool left_first = restart % 2 == 1;
    Matrix<double> l = left_first ? random_stochastic(rng, d.rows(), c.rows()) : Matrix<double>();
    Matrix<double> r = left_first ? Matrix<double>() : random_stochastic(rng, c.cols(), d.cols());
    double last = std::numeric_limits<double>::infinity();
    int stalls = 0, kicks = 0;
    for (int round = 0; round < cfg.max_rounds; ++round) {
      if (!left_first || round > 0) l = fit_middle(Matrix<double>(), c * r, d, d.rows(), c.rows(), true).x;
      auto fit = fit_middle(l * c, Matrix<double>(), d, c.cols(), d.cols(), true);
      r = std::move(fit.x);
      const double resid = residual_inf(l * c * r, d);
      best = std::min(best, resid);
      if (resid <= tol.eps) return accept(std::move(l), std::move(r), "alternating-lp");
      stalls = fit.residual > last * (1 - 1e-6) ? stalls + 1 : 0;
      last = fit.residual;
      if (stalls >= 3) {
        // Stuck in a local minimum: shake R towards a random stochastic matrix.
        if (++kicks > 3) break;
        const auto noise = random_stochastic(rng, c.cols(), d.cols());
        for (std::size_t i = 0; i < r.rows(); ++i)
          for (std::size_t j = 0; j < r.cols(); ++j) r(i, j) = 0.6 * r(i, j) + 0.4 * noise(i, j);
        stalls = 0;
        last = std::numeric_limits<double>::infinity();
      }
    }
  }
  res.verdict = Verdict::Inconclusive;
  res.method = "alternating-lp";
  res.residual = best;
  return res;
}

std::size_t operational_dimension(const StateSpace<double>& s, const Tolerance& tol) {
  s.require_polytopic("operational_dimension");
  const std::size_t D = s.ambient_dim(), N = s.num_vertices();
  const auto& verts = s.vertices();
  auto distinguishable = [&](const std::vector<std::size_t>& subset) {
    const std::size_t k = subset.size(), nv = k * D;
    LPProblem<double> p(nv);
    for (std::size_t j = 0; j < nv; ++j) p.set_free(j);
    for (const auto& v : verts) {
      std::vector<double> rest(nv, 0.0);
      for (std::size_t i = 0; i < k; ++i) {
        std::vector<double> row(nv, 0.0);
        for (std::size_t c = 0; c < D; ++c) {
          row[i * D + c] = v[c];
          rest[i * D + c] = -v[c];
        }
        p.add_inequality(std::move(row), 0.0);
      }
      p.add_inequality(std::move(rest), -dot<double>(s.unit(), v));
    }
    for (std::size_t i = 0; i < k; ++i) {
      std::vector<double> row(nv, 0.0);
      for (std::size_t c = 0; c < D; ++c) row[i * D + c] = verts[subset[i]][c];
      p.add_equality(std::move(row), 1.0);
    }
    return lp_solve(p, tol).has_value();
  };
  std::size_t best = 1;
  for (std::size_t k = 2; k <= std::min(N, D); ++k) {
    bool found = false;
    detail::for_each_combination(N, k, [&](const std::vector<std::size_t>& subset) {
      found = distinguishable(subset);
      return !found;
    });
    if (!found) break;
    best = k;
  }
  return best;
}

std::pair<double, Observable<double>> information_storability(const SpacePtr<double>& s, const Tolerance& tol) {
  s->require_polytopic("information_storability");
  const std::size_t D = s->ambient_dim(), N = s->num_vertices(), nv = N * D;
  const auto& verts = s->vertices();
  LPProblem<double> p(nv);
  for (std::size_t j = 0; j < nv; ++j) p.set_free(j);
  std::vector<double> obj(nv, 0.0);
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t c = 0; c < D; ++c) obj[i * D + c] = verts[i][c];
  p.objective = obj;
  for (std::size_t i = 0; i < N; ++i) {
    for (const auto& v : verts) {
      std::vector<double> row(nv, 0.0);
      for (std::size_t c = 0; c < D; ++c) row[i * D + c] = v[c];
      p.add_inequality(std::move(row), 0.0);
    }
  }
  for (std::size_t c = 0; c < D; ++c) {
    std::vector<double> row(nv, 0.0);
    for (std::size_t i = 0; i < N; ++i) row[i * D + c] = 1;
    p.add_equality(std::move(row), s->unit()[c]);
  }
  auto sol = lp_solve(p, tol);
  if (!sol) throw Error("information_storability: program infeasible");
  std::vector<Vector<double>> effects;
  for (std::size_t i = 0; i < N; ++i)
    effects.emplace_back(sol->x.begin() + static_cast<std::ptrdiff_t>(i * D),
                         sol->x.begin() + static_cast<std::ptrdiff_t>((i + 1) * D));
  return {sol->objective, Observable<double>(s, std::move(effects))};
}

SpaceDims space_dims(const SpacePtr<double>& s, const Tolerance& tol) {
  s->require_polytopic("space_dims");
  SpaceDims d;
  d.d_lin = rank(s->vertices(), tol);
  d.d_op = operational_dimension(*s, tol);
  auto [lmax, optimal] = information_storability(s, tol);
  d.lambda_max = lmax;
  std::vector<Observable<double>> family = enumerate_irreducibles(s, tol);
  family.push_back(std::move(optimal));
  // Uniform mixture of all (f, u - f) with outcomes kept apart: its effects
  // span the dual space, so its matrix attains rank d_lin.
  const auto& ext = s->extreme_effects();
  if (!ext.empty()) {
    const double w = 1.0 / static_cast<double>(ext.size());
    std::vector<Vector<double>> effects;
    for (const auto& f : ext) {
      effects.push_back(scaled<double>(f, w));
      effects.push_back(scaled<double>(sub<double>(s->unit(), f), w));
    }
    family.emplace_back(s, std::move(effects));
  }
  for (const auto& m : family) {
    const auto c = build_comm_matrix(s->vertices(), m, tol).matrix;
    const std::size_t r = rank(c, tol);
    const std::size_t lm = ceil_minus_eps(lambda_max(c), tol);
    d.d_cl_lo = std::max(d.d_cl_lo, std::max(r, lm));
    d.d_q_lo = std::max(d.d_q_lo, std::max(ceil_sqrt(r), lm));
  }
  return d;
}

}  // namespace gptwb
