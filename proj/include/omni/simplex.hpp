#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "omni/error.hpp"
#include "omni/rational.hpp"

namespace omni {

/// Minimise objective·x subject to rows and x >= 0.
struct LinearProgram {
  enum class Sense { GreaterEqual, Equal };

  struct Term {
    int var;
    Rational coef;
  };

  struct Row {
    std::vector<Term> terms;
    Sense sense = Sense::GreaterEqual;
    Rational rhs;
  };

  int num_vars = 0;
  std::vector<Row> rows;
  std::vector<Rational> objective;

  void add_row(std::vector<Term> terms, Sense sense, Rational rhs) {
    rows.push_back({std::move(terms), sense, std::move(rhs)});
  }

  void validate() const {
    if (num_vars < 0) throw Error(ErrorCode::InvalidArgument, "negative variable count");
    if (static_cast<int>(objective.size()) != num_vars)
      throw Error(ErrorCode::InvalidArgument, "objective length must equal the variable count");
    for (const auto& row : rows)
      for (const auto& t : row.terms)
        if (t.var < 0 || t.var >= num_vars)
          throw Error(ErrorCode::InvalidArgument, "row references undeclared variable " + std::to_string(t.var));
  }

  Rational row_value(const Row& row, const std::vector<Rational>& x) const {
    Rational v = 0;
    for (const auto& t : row.terms) v += t.coef * x[static_cast<std::size_t>(t.var)];
    return v;
  }

  Rational objective_value(const std::vector<Rational>& x) const {
    Rational v = 0;
    for (int j = 0; j < num_vars; ++j) v += objective[static_cast<std::size_t>(j)] * x[static_cast<std::size_t>(j)];
    return v;
  }

  bool is_feasible(const std::vector<Rational>& x) const {
    if (static_cast<int>(x.size()) != num_vars) return false;
    for (const auto& xi : x)
      if (sgn(xi) < 0) return false;
    for (const auto& row : rows) {
      const Rational v = row_value(row, x);
      if (row.sense == Sense::Equal ? v != row.rhs : v < row.rhs) return false;
    }
    return true;
  }
};

struct LpSolution {
  Rational value;
  std::vector<Rational> x;
};

namespace detail {

/// Dense rational tableau for the two-phase primal simplex method. Pivoting
/// follows Bland's smallest-index rule for both the entering and the leaving
/// variable, which guarantees termination on degenerate programs.
class SimplexTableau {
 public:
  explicit SimplexTableau(const LinearProgram& lp) : num_structural_(lp.num_vars) {
    const std::size_t m = lp.rows.size();
    // Column layout: structural | one slack per inequality row | artificials.
    int slack_count = 0;
    for (const auto& row : lp.rows)
      if (row.sense == LinearProgram::Sense::GreaterEqual) ++slack_count;
    first_artificial_ = num_structural_ + slack_count;
    std::vector<bool> needs_artificial(m, false);
    int artificial_count = 0;
    for (std::size_t i = 0; i < m; ++i) {
      const auto& row = lp.rows[i];
      needs_artificial[i] = row.sense == LinearProgram::Sense::Equal || sgn(row.rhs) > 0;
      if (needs_artificial[i]) ++artificial_count;
    }
    num_cols_ = first_artificial_ + artificial_count;

    tableau_.assign(m, std::vector<Rational>(static_cast<std::size_t>(num_cols_), Rational(0)));
    rhs_.assign(m, Rational(0));
    basis_.assign(m, -1);

    int slack = num_structural_;
    int artificial = first_artificial_;
    for (std::size_t i = 0; i < m; ++i) {
      const auto& row = lp.rows[i];
      auto& t = tableau_[i];
      for (const auto& term : row.terms) t[static_cast<std::size_t>(term.var)] += term.coef;
      rhs_[i] = row.rhs;
      int slack_col = -1;
      if (row.sense == LinearProgram::Sense::GreaterEqual) {
        slack_col = slack++;
        t[static_cast<std::size_t>(slack_col)] = -1;
      }
      // Keep rhs >= 0; an inequality with rhs <= 0 becomes a <= row whose slack is basic.
      const bool flip = needs_artificial[i] ? sgn(rhs_[i]) < 0 : true;
      if (flip) {
        for (auto& v : t) v = -v;
        rhs_[i] = -rhs_[i];
      }
      if (needs_artificial[i]) {
        t[static_cast<std::size_t>(artificial)] = 1;
        basis_[i] = artificial++;
      } else {
        basis_[i] = slack_col;
      }
    }
  }

  /// Runs both phases. Throws Infeasible / Unbounded.
  LpSolution solve(const std::vector<Rational>& objective) {
    allowed_cols_ = num_cols_;
    // Phase 1: minimise the sum of the artificials.
    std::vector<Rational> cost(static_cast<std::size_t>(num_cols_), Rational(0));
    for (int j = first_artificial_; j < num_cols_; ++j) cost[static_cast<std::size_t>(j)] = 1;
    price_out(cost);
    if (!run(cost)) throw Error(ErrorCode::Unbounded, "phase one is unbounded");
    Rational infeasibility = 0;
    for (std::size_t i = 0; i < basis_.size(); ++i)
      if (basis_[i] >= first_artificial_) infeasibility += rhs_[i];
    if (sgn(infeasibility) > 0) throw Error(ErrorCode::Infeasible, "no point satisfies every row");
    drive_out_artificials();

    // Phase 2 over structural and slack columns only.
    allowed_cols_ = first_artificial_;
    std::fill(cost.begin(), cost.end(), Rational(0));
    for (int j = 0; j < num_structural_; ++j) cost[static_cast<std::size_t>(j)] = objective[static_cast<std::size_t>(j)];
    price_out(cost);
    if (!run(cost)) throw Error(ErrorCode::Unbounded, "objective is unbounded below");

    LpSolution sol;
    sol.x.assign(static_cast<std::size_t>(num_structural_), Rational(0));
    for (std::size_t i = 0; i < basis_.size(); ++i)
      if (basis_[i] < num_structural_) sol.x[static_cast<std::size_t>(basis_[i])] = rhs_[i];
    sol.value = 0;
    for (int j = 0; j < num_structural_; ++j)
      sol.value += objective[static_cast<std::size_t>(j)] * sol.x[static_cast<std::size_t>(j)];
    return sol;
  }

  std::size_t pivots() const noexcept { return pivots_; }

 private:
  /// Turns raw costs into reduced costs for the current basis.
  void price_out(std::vector<Rational>& cost) const {
    for (std::size_t i = 0; i < basis_.size(); ++i) {
      const Rational cb = cost[static_cast<std::size_t>(basis_[i])];
      if (sgn(cb) == 0) continue;
      const auto& row = tableau_[i];
      for (int j = 0; j < num_cols_; ++j)
        if (sgn(row[static_cast<std::size_t>(j)]) != 0) cost[static_cast<std::size_t>(j)] -= cb * row[static_cast<std::size_t>(j)];
    }
  }

  /// Bland iterations until optimal (true) or unbounded (false).
  bool run(std::vector<Rational>& cost) {
    for (;;) {
      int entering = -1;
      for (int j = 0; j < allowed_cols_; ++j) {
        if (sgn(cost[static_cast<std::size_t>(j)]) < 0) {
          entering = j;
          break;
        }
      }
      if (entering < 0) return true;
      int leaving = -1;
      Rational best_ratio;
      for (std::size_t i = 0; i < basis_.size(); ++i) {
        const Rational& a = tableau_[i][static_cast<std::size_t>(entering)];
        if (sgn(a) <= 0) continue;
        Rational ratio = rhs_[i] / a;
        if (leaving < 0 || ratio < best_ratio ||
            (ratio == best_ratio && basis_[i] < basis_[static_cast<std::size_t>(leaving)])) {
          leaving = static_cast<int>(i);
          best_ratio = std::move(ratio);
        }
      }
      if (leaving < 0) return false;
      pivot(static_cast<std::size_t>(leaving), entering, &cost);
    }
  }

  void pivot(std::size_t r, int col, std::vector<Rational>* cost) {
    ++pivots_;
    auto& prow = tableau_[r];
    const Rational piv = prow[static_cast<std::size_t>(col)];
    std::vector<std::size_t> nonzero;
    for (std::size_t j = 0; j < prow.size(); ++j) {
      if (sgn(prow[j]) != 0) {
        prow[j] /= piv;
        nonzero.push_back(j);
      }
    }
    rhs_[r] /= piv;
    for (std::size_t i = 0; i < tableau_.size(); ++i) {
      if (i == r) continue;
      auto& row = tableau_[i];
      if (sgn(row[static_cast<std::size_t>(col)]) == 0) continue;
      const Rational f = row[static_cast<std::size_t>(col)];
      for (std::size_t j : nonzero) row[j] -= f * prow[j];
      rhs_[i] -= f * rhs_[r];
    }
    if (cost) {
      auto& c = *cost;
      if (sgn(c[static_cast<std::size_t>(col)]) != 0) {
        const Rational f = c[static_cast<std::size_t>(col)];
        for (std::size_t j : nonzero) c[j] -= f * prow[j];
      }
    }
    basis_[r] = col;
  }

  /// After a successful phase one, every artificial still basic sits at zero.
  /// Swap it for any structural or slack column in its row; a row with no such
  /// column is a linear combination of the others and is dropped.
  void drive_out_artificials() {
    for (std::size_t i = 0; i < basis_.size();) {
      if (basis_[i] < first_artificial_) {
        ++i;
        continue;
      }
      int col = -1;
      for (int j = 0; j < first_artificial_; ++j) {
        if (sgn(tableau_[i][static_cast<std::size_t>(j)]) != 0) {
          col = j;
          break;
        }
      }
      if (col >= 0) {
        pivot(i, col, nullptr);
        ++i;
      } else {
        tableau_.erase(tableau_.begin() + static_cast<std::ptrdiff_t>(i));
        rhs_.erase(rhs_.begin() + static_cast<std::ptrdiff_t>(i));
        basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(i));
      }
    }
  }

  int num_structural_;
  int first_artificial_ = 0;
  int num_cols_ = 0;
  int allowed_cols_ = 0;
  std::vector<std::vector<Rational>> tableau_;
  std::vector<Rational> rhs_;
  std::vector<int> basis_;
  std::size_t pivots_ = 0;
};

}  // namespace detail

/// Exact minimum of a linear program together with a basic optimal point.
/// Deterministic: identical programs always yield the same vertex.
inline LpSolution simplex_min(const LinearProgram& lp) {
  lp.validate();
  detail::SimplexTableau tableau(lp);
  return tableau.solve(lp.objective);
}

/// Checks a dual vector for `lp` (one multiplier per row: nonnegative on >=
/// rows, free on = rows). Returns the dual objective rhs·y when y is dual
/// feasible, i.e. sum_i y_i a_ij <= c_j for every variable j; otherwise nullopt.
/// By weak duality a feasible y's objective is a lower bound on the minimum.
inline std::optional<Rational> dual_objective(const LinearProgram& lp, const std::vector<Rational>& y) {
  lp.validate();
  if (y.size() != lp.rows.size()) return std::nullopt;
  std::vector<Rational> reduced = lp.objective;
  Rational value = 0;
  for (std::size_t i = 0; i < lp.rows.size(); ++i) {
    const auto& row = lp.rows[i];
    if (row.sense == LinearProgram::Sense::GreaterEqual && sgn(y[i]) < 0) return std::nullopt;
    if (sgn(y[i]) == 0) continue;
    for (const auto& t : row.terms) reduced[static_cast<std::size_t>(t.var)] -= y[i] * t.coef;
    value += y[i] * row.rhs;
  }
  for (const auto& r : reduced)
    if (sgn(r) < 0) return std::nullopt;
  return value;
}

}  // namespace omni
