#include "gptwb/lp.hpp"

#include <algorithm>
#include <string>

namespace gptwb {

template <Field T>
std::size_t LPProblem<T>::add_var(std::optional<T> lo, std::optional<T> hi) {
  for (auto& r : eq_rows) r.push_back(T(0));
  for (auto& r : ineq_rows) r.push_back(T(0));
  if (objective) objective->push_back(T(0));
  lower.push_back(std::move(lo));
  upper.push_back(std::move(hi));
  return num_vars++;
}

template <Field T>
void LPProblem<T>::add_equality(Vector<T> row, T rhs) {
  if (row.size() != num_vars) throw DimensionMismatch("LPProblem: equality row length");
  eq_rows.push_back(std::move(row));
  eq_rhs.push_back(std::move(rhs));
}

template <Field T>
void LPProblem<T>::add_inequality(Vector<T> row, T rhs) {
  if (row.size() != num_vars) throw DimensionMismatch("LPProblem: inequality row length");
  ineq_rows.push_back(std::move(row));
  ineq_rhs.push_back(std::move(rhs));
}

template <Field T>
void LPProblem<T>::set_free(std::size_t j) {
  set_bounds(j, std::nullopt, std::nullopt);
}

template <Field T>
void LPProblem<T>::set_bounds(std::size_t j, std::optional<T> lo, std::optional<T> hi) {
  if (j >= num_vars) throw InvalidArgument("LPProblem: variable index out of range");
  lower[j] = std::move(lo);
  upper[j] = std::move(hi);
}

template <Field T>
void LPProblem<T>::validate() const {
  auto check_rows = [&](const std::vector<Vector<T>>& rows, const Vector<T>& rhs, const char* what) {
    if (rows.size() != rhs.size()) throw DimensionMismatch(std::string("LPProblem: ") + what + " rhs count");
    for (const auto& r : rows)
      if (r.size() != num_vars) throw DimensionMismatch(std::string("LPProblem: ") + what + " row length");
  };
  check_rows(eq_rows, eq_rhs, "equality");
  check_rows(ineq_rows, ineq_rhs, "inequality");
  if (objective && objective->size() != num_vars) throw DimensionMismatch("LPProblem: objective length");
  if (lower.size() != num_vars || upper.size() != num_vars)
    throw DimensionMismatch("LPProblem: bound vector length");
}

template <Field T>
T lp_violation(const LPProblem<T>& p, std::span<const T> x) {
  if (x.size() != p.num_vars) throw DimensionMismatch("lp_violation: point length");
  T worst = 0;
  auto bump = [&](const T& v) {
    if (v > worst) worst = v;
  };
  for (std::size_t k = 0; k < p.eq_rows.size(); ++k)
    bump(abs_value<T>(dot<T>(p.eq_rows[k], x) - p.eq_rhs[k]));
  for (std::size_t k = 0; k < p.ineq_rows.size(); ++k) bump(p.ineq_rhs[k] - dot<T>(p.ineq_rows[k], x));
  for (std::size_t j = 0; j < p.num_vars; ++j) {
    if (p.lower[j]) bump(*p.lower[j] - x[j]);
    if (p.upper[j]) bump(x[j] - *p.upper[j]);
  }
  return worst;
}

namespace {

// How an original variable is expressed through nonnegative standard-form columns.
enum class VarForm { Shift, Mirror, Split };

struct VarMap {
  VarForm form;
  std::size_t col;
};

template <Field T>
class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols, const Tolerance& tol)
      : a_(rows, cols + 1), basis_(rows, 0), tol_(tol) {}

  std::size_t rows() const { return a_.rows(); }
  std::size_t cols() const { return a_.cols() - 1; }
  T& at(std::size_t i, std::size_t j) { return a_(i, j); }
  const T& at(std::size_t i, std::size_t j) const { return a_(i, j); }
  T& rhs(std::size_t i) { return a_(i, cols()); }
  std::vector<std::size_t>& basis() { return basis_; }

  // Runs simplex minimizing cost·y with columns >= allowed_end barred from
  // entering. Returns false when unbounded.
  bool minimize(const Vector<T>& cost, std::size_t allowed_end) {
    reduced_.assign(cols() + 1, T(0));
    for (std::size_t j = 0; j < cols(); ++j) reduced_[j] = cost[j];
    for (std::size_t i = 0; i < rows(); ++i) {
      const T& cb = cost[basis_[i]];
      if (cb == 0) continue;
      for (std::size_t j = 0; j <= cols(); ++j) reduced_[j] -= cb * a_(i, j);
    }
    const std::size_t max_iter = 50000 + 50 * (rows() + cols());
    for (std::size_t iter = 0; iter < max_iter; ++iter) {
      std::size_t enter = cols();
      for (std::size_t j = 0; j < allowed_end; ++j) {
        if (negative(reduced_[j])) {
          enter = j;
          break;
        }
      }
      if (enter == cols()) return true;
      std::size_t leave = rows();
      T best_ratio = 0;
      for (std::size_t i = 0; i < rows(); ++i) {
        const T& piv = a_(i, enter);
        if (!pivot_candidate(piv)) continue;
        T b = a_(i, cols());
        if constexpr (!is_exact_v<T>) {
          if (b < 0) b = 0;
        }
        T ratio = b / piv;
        if (leave == rows() || ratio < best_ratio - ratio_slack() ||
            (!(ratio > best_ratio + ratio_slack()) && basis_[i] < basis_[leave])) {
          leave = i;
          best_ratio = ratio;
        }
      }
      if (leave == rows()) return false;
      pivot(leave, enter);
    }
    throw Error("lp_solve: iteration limit reached");
  }

  T objective_value() const { return -reduced_[cols()]; }

  void pivot(std::size_t p, std::size_t q) {
    const std::size_t width = cols() + 1;
    const T inv = T(1) / a_(p, q);
    for (std::size_t j = 0; j < width; ++j) a_(p, j) *= inv;
    a_(p, q) = 1;
    auto eliminate = [&](auto&& row_at) {
      const T f = row_at(q);
      if (f == 0) return;
      for (std::size_t j = 0; j < width; ++j) {
        const T& v = a_(p, j);
        if (v != 0) row_at(j) -= f * v;
      }
      row_at(q) = 0;
    };
    for (std::size_t i = 0; i < rows(); ++i) {
      if (i == p) continue;
      eliminate([&](std::size_t j) -> T& { return a_(i, j); });
    }
    if (!reduced_.empty()) eliminate([&](std::size_t j) -> T& { return reduced_[j]; });
    basis_[p] = q;
  }

  bool pivot_candidate(const T& v) const {
    if constexpr (is_exact_v<T>) {
      return v > 0;
    } else {
      return v > 1e-9;
    }
  }

  bool nonzero_pivot(const T& v) const {
    if constexpr (is_exact_v<T>) {
      return v != 0;
    } else {
      return std::abs(v) > 1e-7;
    }
  }

  void drop_row(std::size_t r) {
    Matrix<T> smaller(rows() - 1, cols() + 1);
    for (std::size_t i = 0, k = 0; i < rows(); ++i) {
      if (i == r) continue;
      for (std::size_t j = 0; j <= cols(); ++j) smaller(k, j) = a_(i, j);
      ++k;
    }
    a_ = std::move(smaller);
    basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(r));
  }

 private:
  bool negative(const T& v) const {
    if constexpr (is_exact_v<T>) {
      return v < 0;
    } else {
      return v < -1e-10;
    }
  }

  T ratio_slack() const {
    if constexpr (is_exact_v<T>) {
      return T(0);
    } else {
      return 1e-12;
    }
  }

  Matrix<T> a_;
  std::vector<std::size_t> basis_;
  Vector<T> reduced_;
  Tolerance tol_;
};

}  // namespace

template <Field T>
std::optional<LPSolution<T>> lp_solve(const LPProblem<T>& p, const Tolerance& tol) {
  p.validate();
  const std::size_t n = p.num_vars;

  // Standard form: every column nonnegative.
  std::vector<VarMap> vars(n);
  std::size_t ncols = 0;
  std::vector<std::pair<std::size_t, T>> range_rows;  // (column, width) for y <= width
  for (std::size_t j = 0; j < n; ++j) {
    if (p.lower[j]) {
      vars[j] = {VarForm::Shift, ncols++};
      if (p.upper[j]) {
        T width = *p.upper[j] - *p.lower[j];
        if (width < 0 && !leq<T>(*p.lower[j], *p.upper[j], tol)) return std::nullopt;
        if (width < 0) width = 0;
        range_rows.emplace_back(vars[j].col, width);
      }
    } else if (p.upper[j]) {
      vars[j] = {VarForm::Mirror, ncols++};
    } else {
      vars[j] = {VarForm::Split, ncols};
      ncols += 2;
    }
  }
  const std::size_t structural = ncols;

  struct Row {
    Vector<T> coef;  // over structural columns
    T rhs;
    int slack_sign;  // 0: equality, -1: surplus (>=), +1: slack (<=)
  };
  std::vector<Row> rows;
  auto translate = [&](const Vector<T>& a, const T& b, int sign) {
    Row r{Vector<T>(structural, T(0)), b, sign};
    for (std::size_t j = 0; j < n; ++j) {
      if (a[j] == 0) continue;
      switch (vars[j].form) {
        case VarForm::Shift:
          r.coef[vars[j].col] += a[j];
          r.rhs -= a[j] * *p.lower[j];
          break;
        case VarForm::Mirror:
          r.coef[vars[j].col] -= a[j];
          r.rhs -= a[j] * *p.upper[j];
          break;
        case VarForm::Split:
          r.coef[vars[j].col] += a[j];
          r.coef[vars[j].col + 1] -= a[j];
          break;
      }
    }
    rows.push_back(std::move(r));
  };
  for (std::size_t k = 0; k < p.eq_rows.size(); ++k) translate(p.eq_rows[k], p.eq_rhs[k], 0);
  for (std::size_t k = 0; k < p.ineq_rows.size(); ++k) translate(p.ineq_rows[k], p.ineq_rhs[k], -1);
  for (const auto& [col, width] : range_rows) {
    Row r{Vector<T>(structural, T(0)), width, +1};
    r.coef[col] = 1;
    rows.push_back(std::move(r));
  }

  // Rows whose rhs is negative get negated so the initial basis is feasible.
  std::size_t num_slack = 0;
  for (const auto& r : rows)
    if (r.slack_sign != 0) ++num_slack;
  std::vector<int> flipped_sign(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    auto& r = rows[i];
    int s = r.slack_sign;
    if (r.rhs < 0) {
      for (auto& c : r.coef) c = -c;
      r.rhs = -r.rhs;
      s = -s;
    }
    flipped_sign[i] = s;
  }
  std::size_t num_art = 0;
  for (std::size_t i = 0; i < rows.size(); ++i)
    if (flipped_sign[i] != 1) ++num_art;

  const std::size_t m = rows.size();
  const std::size_t total = structural + num_slack + num_art;
  Tableau<T> tab(m, total, tol);
  std::size_t slack_col = structural;
  std::size_t art_col = structural + num_slack;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < structural; ++j) tab.at(i, j) = rows[i].coef[j];
    tab.rhs(i) = rows[i].rhs;
    if (rows[i].slack_sign != 0) {
      tab.at(i, slack_col) = T(flipped_sign[i]);
      if (flipped_sign[i] == 1) tab.basis()[i] = slack_col;
      ++slack_col;
    }
    if (flipped_sign[i] != 1) {
      tab.at(i, art_col) = 1;
      tab.basis()[i] = art_col;
      ++art_col;
    }
  }

  const std::size_t first_art = structural + num_slack;
  if (num_art > 0) {
    Vector<T> cost(total, T(0));
    for (std::size_t j = first_art; j < total; ++j) cost[j] = 1;
    tab.minimize(cost, total);
    T infeas = tab.objective_value();
    if constexpr (is_exact_v<T>) {
      if (infeas > 0) return std::nullopt;
    } else {
      if (infeas > tol.eps) return std::nullopt;
    }
    // Drive remaining artificials out of the basis; rows that cannot pivot are redundant.
    for (std::size_t i = 0; i < tab.rows();) {
      if (tab.basis()[i] < first_art) {
        ++i;
        continue;
      }
      std::size_t q = first_art;
      T best = 0;
      for (std::size_t j = 0; j < first_art; ++j) {
        if (!tab.nonzero_pivot(tab.at(i, j))) continue;
        if constexpr (is_exact_v<T>) {
          q = j;
          break;
        } else {
          if (std::abs(tab.at(i, j)) > best) {
            best = std::abs(tab.at(i, j));
            q = j;
          }
        }
      }
      if (q == first_art) {
        tab.drop_row(i);
      } else {
        tab.pivot(i, q);
        ++i;
      }
    }
  }

  Vector<T> cost(total, T(0));
  if (p.objective) {
    for (std::size_t j = 0; j < n; ++j) {
      const T& c = (*p.objective)[j];
      if (c == 0) continue;
      switch (vars[j].form) {
        case VarForm::Shift:
          cost[vars[j].col] -= c;
          break;
        case VarForm::Mirror:
          cost[vars[j].col] += c;
          break;
        case VarForm::Split:
          cost[vars[j].col] -= c;
          cost[vars[j].col + 1] += c;
          break;
      }
    }
    if (!tab.minimize(cost, first_art)) throw UnboundedObjective("lp_solve: objective is unbounded");
  }

  Vector<T> y(total, T(0));
  for (std::size_t i = 0; i < tab.rows(); ++i) {
    T v = tab.rhs(i);
    if constexpr (!is_exact_v<T>) {
      if (v < 0) v = 0;
    }
    y[tab.basis()[i]] = v;
  }
  LPSolution<T> sol;
  sol.x.assign(n, T(0));
  for (std::size_t j = 0; j < n; ++j) {
    switch (vars[j].form) {
      case VarForm::Shift:
        sol.x[j] = *p.lower[j] + y[vars[j].col];
        break;
      case VarForm::Mirror:
        sol.x[j] = *p.upper[j] - y[vars[j].col];
        break;
      case VarForm::Split:
        sol.x[j] = y[vars[j].col] - y[vars[j].col + 1];
        break;
    }
  }
  if (p.objective) sol.objective = dot<T>(*p.objective, sol.x);
  return sol;
}

template struct LPProblem<double>;
template struct LPProblem<Rational>;
template std::optional<LPSolution<double>> lp_solve(const LPProblem<double>&, const Tolerance&);
template std::optional<LPSolution<Rational>> lp_solve(const LPProblem<Rational>&, const Tolerance&);
template double lp_violation(const LPProblem<double>&, std::span<const double>);
template Rational lp_violation(const LPProblem<Rational>&, std::span<const Rational>);

}  // namespace gptwb
