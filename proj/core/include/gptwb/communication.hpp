#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gptwb/simulation.hpp"

namespace gptwb {

/// Row-stochastic matrix of outcome probabilities C(i, j) = M_j(s_i), with the
/// prepared states and measured observable attached when known.
struct CommMatrix {
  Matrix<double> matrix;
  std::vector<Vector<double>> states;
  std::optional<Observable<double>> observable;
};

struct RankInterval {
  std::size_t lo = 0;
  std::size_t hi = 0;
};

struct MonotoneReport {
  std::size_t iota = 0;
  double lambda_max = 0;
  double lambda_min = 0;
  std::size_t rank = 0;
  RankInterval nn_rank;
  RankInterval psd_rank;
};

/// Seeds and budgets for the randomized searches (factorizations, majorization).
struct SearchConfig {
  std::uint64_t seed = 20240601;
  int restarts = 8;
  int max_rounds = 50;
};

CommMatrix build_comm_matrix(const std::vector<Vector<double>>& states, const Observable<double>& m,
                             const Tolerance& tol = {});

/// sum_j max_i C(i, j)
double lambda_max(const Matrix<double>& c);
/// -sum_j min_i C(i, j)
double lambda_min(const Matrix<double>& c);

/// A nonnegative factorization C = W H with inner dimension k, if the
/// randomized search finds one reproducing C to within eps.
struct NonnegFactorization {
  Matrix<double> w;
  Matrix<double> h;
};
std::optional<NonnegFactorization> find_nonneg_factorization(const Matrix<double>& c, std::size_t k,
                                                             const SearchConfig& cfg = {}, const Tolerance& tol = {});

/// Certified bounds on the nonnegative rank: lo from rank and lambda_max, hi
/// from the smallest factorization found (at most min(n, m)).
RankInterval nn_rank_bounds(const Matrix<double>& c, const SearchConfig& cfg = {}, const Tolerance& tol = {});

MonotoneReport monotones(const Matrix<double>& c, const SearchConfig& cfg = {}, const Tolerance& tol = {});

/// Drops zero columns, merges proportional columns and removes rows that are
/// convex mixtures of the remaining rows, until nothing changes.
Matrix<double> canonical_reduce(const Matrix<double>& c, const Tolerance& tol = {});

struct UltraweakResult {
  Verdict verdict = Verdict::Inconclusive;
  std::string violated;  // monotone name when verdict is No
  std::string method;    // how the verdict was reached
  std::optional<Matrix<double>> left, right;
  double residual = 0;
};

/// Decides D = L C R for row-stochastic L, R: monotone screens give No,
/// identity shortcuts and alternating LPs give verified Yes witnesses, and
/// anything else is Inconclusive.
UltraweakResult ultraweak_leq(const Matrix<double>& d, const Matrix<double>& c, const SearchConfig& cfg = {},
                              const Tolerance& tol = {});

/// Whether the matrix is a permutation of the identity.
bool is_identity_like(const Matrix<double>& m, const Tolerance& tol = {});

struct SpaceDims {
  std::size_t d_op = 0;
  double lambda_max = 0;
  std::size_t d_lin = 0;
  std::size_t d_cl_lo = 0;
  std::size_t d_q_lo = 0;
};

/// Physical dimensions of a polytopic state space; d_cl and d_q are lower bounds.
SpaceDims space_dims(const SpacePtr<double>& s, const Tolerance& tol = {});

/// Largest k such that some k vertices are perfectly distinguishable.
std::size_t operational_dimension(const StateSpace<double>& s, const Tolerance& tol = {});

/// sup over observables of sum_x max_s A_x(s), with an optimal observable.
std::pair<double, Observable<double>> information_storability(const SpacePtr<double>& s, const Tolerance& tol = {});

}  // namespace gptwb
