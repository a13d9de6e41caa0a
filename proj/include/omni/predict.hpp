#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "omni/constraints.hpp"
#include "omni/lexlp.hpp"

namespace omni {

/// Limit of |intersection of m-s missing sets| / k among m users when every
/// user holds each packet independently with probability p.
inline double z_value(int m, int s, double p) {
  if (!(p > 0.0 && p < 1.0)) throw Error(ErrorCode::InvalidArgument, "p must lie strictly between 0 and 1");
  if (s < 0 || s >= m) throw Error(ErrorCode::InvalidArgument, "need 0 <= s < m");
  const double q = 1.0 - p;
  const double qm = std::pow(q, m);
  return (std::pow(q, m - s) - qm) / (1.0 - qm);
}

/// Square linear system over the rates, variable index round * n + user.
struct SleSystem {
  int users = 0;
  int rounds = 0;
  std::vector<std::vector<Rational>> matrix;
  std::vector<Rational> rhs;
  /// Which equation family produced each row.
  std::vector<std::string> row_tags;

  int dimension() const noexcept { return users * rounds; }
  int var(int round, int user) const noexcept { return round * users + user; }

  void add_row(std::vector<std::pair<int, int>> vars_with_sign, Rational value, std::string tag) {
    std::vector<Rational> row(static_cast<std::size_t>(dimension()), Rational(0));
    for (auto [v, sign] : vars_with_sign) row[static_cast<std::size_t>(v)] += sign;
    matrix.push_back(std::move(row));
    rhs.push_back(std::move(value));
    row_tags.push_back(std::move(tag));
  }
};

/// Exact solve by fraction-free (Bareiss) elimination. Throws SingularSystem.
inline std::vector<Rational> solve_exact(const SleSystem& sys) {
  const std::size_t n = static_cast<std::size_t>(sys.dimension());
  if (sys.matrix.size() != n || sys.rhs.size() != n)
    throw Error(ErrorCode::SingularSystem, "system is not square: " + std::to_string(sys.matrix.size()) +
                                               " rows for " + std::to_string(n) + " unknowns");
  // Scale each row to integers, then eliminate on the augmented integer matrix.
  std::vector<std::vector<mpz_class>> a(n, std::vector<mpz_class>(n + 1));
  for (std::size_t i = 0; i < n; ++i) {
    mpz_class scale = 1;
    for (const auto& v : sys.matrix[i]) scale = lcm(scale, v.get_den());
    scale = lcm(scale, sys.rhs[i].get_den());
    for (std::size_t j = 0; j < n; ++j) a[i][j] = sys.matrix[i][j].get_num() * (scale / sys.matrix[i][j].get_den());
    a[i][n] = sys.rhs[i].get_num() * (scale / sys.rhs[i].get_den());
  }
  mpz_class prev = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    while (piv < n && a[piv][k] == 0) ++piv;
    if (piv == n) throw Error(ErrorCode::SingularSystem, "coefficient matrix is singular");
    if (piv != k) std::swap(a[piv], a[k]);
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j <= n; ++j) {
        a[i][j] = a[i][j] * a[k][k] - a[i][k] * a[k][j];
        mpz_divexact(a[i][j].get_mpz_t(), a[i][j].get_mpz_t(), prev.get_mpz_t());
      }
      a[i][k] = 0;
    }
    prev = a[k][k];
  }
  std::vector<Rational> x(n);
  for (std::size_t ii = n; ii-- > 0;) {
    Rational acc(a[ii][n]);
    for (std::size_t j = ii + 1; j < n; ++j) acc -= Rational(a[ii][j]) * x[j];
    x[ii] = acc / Rational(a[ii][ii]);
    x[ii].canonicalize();
  }
  return x;
}

namespace detail {

inline Rational count(std::size_t c) { return Rational(static_cast<unsigned long>(c)); }

inline RateMatrix to_rate_matrix(const SleSystem& sys, const std::vector<Rational>& x) {
  RateMatrix rates(sys.rounds, sys.users);
  for (int l = 0; l < sys.rounds; ++l)
    for (int i = 0; i < sys.users; ++i) rates.at(l, i) = x[static_cast<std::size_t>(sys.var(l, i))];
  return rates;
}

inline void require_nonnegative(const RateMatrix& rates) {
  for (int l = 0; l < rates.rounds(); ++l)
    for (int i = 0; i < rates.users(); ++i)
      if (sgn(rates.at(l, i)) < 0)
        throw Error(ErrorCode::NegativeRate, "rate of user " + std::to_string(i + 1) + " in round " +
                                                 std::to_string(l + 1) + " is " + to_fraction_string(rates.at(l, i)));
}

inline void require_split_first_group(const Instance& inst) {
  if (inst.group_size(0) < 2)
    throw Error(ErrorCode::InvalidArgument, "first group needs at least two users");
}

}  // namespace detail

/// Local omniscience system for random instances. In round 0 only the first
/// group transmits and every user's missing count equals the rate of the
/// rest of the group; in later rounds only the newly added users transmit,
/// each prefix of them covering what the remaining group members all miss.
inline SleSystem assemble_slo_sle(const Instance& inst) {
  detail::require_split_first_group(inst);
  SleSystem sys;
  sys.users = inst.n();
  sys.rounds = inst.rounds();
  const int n1 = inst.group_size(0);
  for (int i = 0; i < n1; ++i) {
    std::vector<std::pair<int, int>> vars;
    for (int j = 0; j < n1; ++j)
      if (j != i) vars.emplace_back(sys.var(0, j), 1);
    sys.add_row(std::move(vars), detail::count(inst.missing(0, i).count()), "first-group-complement");
  }
  for (int l = 1; l < inst.rounds(); ++l) {
    const int prev = inst.previous_group_size(l);
    const UserMask group = inst.group_mask(l);
    for (int j = 1; j <= inst.group_size(l) - prev; ++j) {
      std::vector<std::pair<int, int>> vars;
      UserMask prefix = 0;
      for (int u = prev; u < prev + j; ++u) {
        vars.emplace_back(sys.var(l, u), 1);
        prefix |= UserMask{1} << u;
      }
      sys.add_row(std::move(vars), detail::count(inst.intersect_missing(group & ~prefix, l)), "new-user-prefix");
    }
  }
  for (int l = 0; l < inst.rounds(); ++l)
    for (int i = inst.group_size(l); i < inst.n(); ++i) sys.add_row({{sys.var(l, i), 1}}, 0, "outside-group-silent");
  for (int l = 1; l < inst.rounds(); ++l)
    for (int i = 0; i < inst.previous_group_size(l); ++i) sys.add_row({{sys.var(l, i), 1}}, 0, "earlier-group-silent");
  return sys;
}

/// Pivot user for group l of the global omniscience system: the j in group l
/// maximising sum_{i in group l, i != j} |missing_i| + |missing of everyone
/// outside group l \ {j}|, smallest index on ties.
inline int sgo_pivot_user(const Instance& inst, int l) {
  const UserMask group = inst.group_mask(l);
  int best = -1;
  std::size_t best_score = 0;
  for (int j = 0; j < inst.group_size(l); ++j) {
    const UserMask rest = group & ~(UserMask{1} << j);
    std::size_t score = inst.intersect_missing(inst.all_users() & ~rest);
    for (int i = 0; i < inst.group_size(l); ++i)
      if (i != j) score += inst.missing(i).count();
    if (best < 0 || score > best_score) {
      best = j;
      best_score = score;
    }
  }
  return best;
}

/// Index of the group shell (users added by that group) containing `user`.
inline int shell_of(const Instance& inst, int user) {
  for (int m = 0; m < inst.rounds(); ++m)
    if (user < inst.group_size(m)) return m;
  throw Error(ErrorCode::InvalidArgument, "user outside every group");
}

/// Global omniscience system for random instances: one pivot row per group
/// except the last, one row per user fixing the cumulative rate of everyone
/// else, silence for users outside the previous group in rounds after the
/// first, and equal rates for the previous group's members in those rounds.
inline SleSystem assemble_sgo_sle(const Instance& inst) {
  if (inst.rounds() >= 2) detail::require_split_first_group(inst);
  SleSystem sys;
  sys.users = inst.n();
  sys.rounds = inst.rounds();
  const UserMask all = inst.all_users();
  for (int l = 0; l + 1 < inst.rounds(); ++l) {
    const int j = sgo_pivot_user(inst, l);
    const int shell = shell_of(inst, j);
    const UserMask rest = inst.group_mask(l) & ~(UserMask{1} << j);
    std::vector<std::pair<int, int>> vars;
    for (int m = 0; m <= shell; ++m)
      for (int u = 0; u < inst.n(); ++u)
        if (contains(rest, u)) vars.emplace_back(sys.var(m, u), 1);
    sys.add_row(std::move(vars), detail::count(inst.intersect_missing(all & ~rest)), "pivot");
  }
  for (int l = 0; l < inst.rounds(); ++l) {
    for (int i = inst.previous_group_size(l); i < inst.group_size(l); ++i) {
      std::vector<std::pair<int, int>> vars;
      for (int m = 0; m <= l; ++m)
        for (int u = 0; u < inst.n(); ++u)
          if (u != i) vars.emplace_back(sys.var(m, u), 1);
      sys.add_row(std::move(vars), detail::count(inst.missing(i).count()), "others-cover-user");
    }
  }
  for (int l = 1; l < inst.rounds(); ++l)
    for (int i = inst.previous_group_size(l); i < inst.n(); ++i)
      sys.add_row({{sys.var(l, i), 1}}, 0, "outside-previous-group-silent");
  for (int l = 1; l < inst.rounds(); ++l)
    for (int i = 1; i < inst.previous_group_size(l); ++i)
      sys.add_row({{sys.var(l, i), 1}, {sys.var(l, 0), -1}}, 0, "previous-group-equal");
  return sys;
}

/// Solves the local omniscience system. Throws SingularSystem or NegativeRate;
/// either means the instance is not typical and the LP should be used instead.
inline RateMatrix slo_sle_solve(const Instance& inst) {
  const SleSystem sys = assemble_slo_sle(inst);
  RateMatrix rates = detail::to_rate_matrix(sys, solve_exact(sys));
  detail::require_nonnegative(rates);
  return rates;
}

inline RateMatrix sgo_sle_solve(const Instance& inst) {
  const SleSystem sys = assemble_sgo_sle(inst);
  RateMatrix rates = detail::to_rate_matrix(sys, solve_exact(sys));
  detail::require_nonnegative(rates);
  return rates;
}

inline RateMatrix sle_solve(const Instance& inst, Mode mode) {
  return mode == Mode::Slo ? slo_sle_solve(inst) : sgo_sle_solve(inst);
}

/// Closed-form local omniscience rates for two groups.
inline RateMatrix slo_closed_form(const Instance& inst) {
  if (inst.rounds() != 2) throw Error(ErrorCode::NotTwoGroups, "closed form needs exactly two groups");
  detail::require_split_first_group(inst);
  const int n = inst.n();
  const int n1 = inst.group_size(0);
  RateMatrix rates(2, n);
  Rational total = 0;
  for (int j = 0; j < n1; ++j) total += detail::count(inst.missing(0, j).count());
  const Rational share = total / (n1 - 1);
  for (int i = 0; i < n1; ++i) rates.at(0, i) = share - detail::count(inst.missing(0, i).count());
  // Each later user covers the increment of what everyone outside its prefix misses.
  auto outside_prefix = [&](int len) {
    const UserMask prefix = prefix_mask(n1 + len) & ~prefix_mask(n1);
    return detail::count(inst.intersect_missing(inst.all_users() & ~prefix, 1));
  };
  for (int i = n1; i < n; ++i) {
    const int pos = i - n1 + 1;
    rates.at(1, i) = outside_prefix(pos) - outside_prefix(pos - 1);
  }
  detail::require_nonnegative(rates);
  return rates;
}

/// Closed-form global omniscience rates for two groups.
inline RateMatrix sgo_closed_form(const Instance& inst) {
  if (inst.rounds() != 2) throw Error(ErrorCode::NotTwoGroups, "closed form needs exactly two groups");
  detail::require_split_first_group(inst);
  const int n = inst.n();
  const int n1 = inst.group_size(0);
  const int pivot = sgo_pivot_user(inst, 0);
  const UserMask rest = inst.group_mask(0) & ~(UserMask{1} << pivot);
  Rational in_rest = 0, out_rest = 0;
  for (int j = 0; j < n; ++j) (contains(rest, j) ? in_rest : out_rest) += detail::count(inst.missing(j).count());
  const Rational common = detail::count(inst.intersect_missing(inst.all_users() & ~rest));

  RateMatrix rates(2, n);
  const Rational first_share = (in_rest + common) / (n1 - 1);
  const Rational second_share = (out_rest - common) / (n - n1);
  for (int i = 0; i < n; ++i) {
    const Rational miss = detail::count(inst.missing(i).count());
    rates.at(0, i) = (i < n1 ? first_share : second_share) - miss;
  }
  const Rational equal_rate = out_rest / (n1 * (n - n1)) - in_rest / (n1 * (n1 - 1)) -
                              Rational(n - 1) * common / (n1 * (n1 - 1) * (n - n1));
  for (int i = 0; i < n1; ++i) rates.at(1, i) = equal_rate;
  detail::require_nonnegative(rates);
  return rates;
}

/// Dual multipliers for one stage LP (one per row of build_stage_lp's output).
struct DualCertificate {
  std::vector<Rational> multipliers;
  bool feasible = false;
  Rational objective;
};

struct SloDualReport {
  DualCertificate stage1;
  DualCertificate stage2;
  /// (1/(n1-1)) * sum over the first group of its local missing counts.
  Rational expected_stage1;
  /// Packets of the full set that every first-group user misses.
  Rational expected_stage2;
  bool verified = false;
};

/// Builds the two-group local omniscience dual certificates: weight 1/(n1-1)
/// on every first-round cut of size n1-1, plus (second stage only) weight 1 on
/// the cut formed by the second group's new users and -1 on the pinned
/// first-round sum. Verification needs both certificates dual feasible, their
/// objectives equal to the expected values, and those equal to `lex`.
inline SloDualReport slo_dual_certificate(const Instance& inst, const LexResult& lex) {
  if (inst.rounds() != 2) throw Error(ErrorCode::NotTwoGroups, "certificate needs exactly two groups");
  detail::require_split_first_group(inst);
  const int n1 = inst.group_size(0);
  const ConstraintSet cs = slo_constraints(inst);
  SloDualReport rep;
  for (int i = 0; i < n1; ++i) rep.expected_stage1 += detail::count(inst.missing(0, i).count());
  rep.expected_stage1 /= n1 - 1;
  rep.expected_stage2 = detail::count(inst.intersect_missing(inst.group_mask(0)));

  const Rational weight = Rational(1, static_cast<unsigned long>(n1 - 1));
  const UserMask newcomers = inst.all_users() & ~inst.group_mask(0);

  const LinearProgram lp1 = build_stage_lp(cs, 0, {});
  rep.stage1.multipliers.assign(lp1.rows.size(), Rational(0));
  for (std::size_t c = 0; c < cs.constraints.size(); ++c) {
    const auto& con = cs.constraints[c];
    if (con.round == 0 && popcount(con.subset) == n1 - 1) rep.stage1.multipliers[c] = weight;
  }
  if (auto v = dual_objective(lp1, rep.stage1.multipliers)) {
    rep.stage1.feasible = true;
    rep.stage1.objective = *v;
  }

  const LinearProgram lp2 = build_stage_lp(cs, 1, {rep.expected_stage1});
  rep.stage2.multipliers = rep.stage1.multipliers;
  rep.stage2.multipliers.resize(lp2.rows.size(), Rational(0));
  for (std::size_t c = 0; c < cs.constraints.size(); ++c) {
    const auto& con = cs.constraints[c];
    if (con.round == 1 && con.subset == newcomers) rep.stage2.multipliers[c] = 1;
  }
  rep.stage2.multipliers.back() = -1;  // pinned first-round sum
  if (auto v = dual_objective(lp2, rep.stage2.multipliers)) {
    rep.stage2.feasible = true;
    rep.stage2.objective = *v;
  }

  rep.verified = rep.stage1.feasible && rep.stage2.feasible && rep.stage1.objective == rep.expected_stage1 &&
                 rep.stage2.objective == rep.expected_stage2 && lex.round_sums.size() == 2 &&
                 lex.round_sums[0] == rep.expected_stage1 && lex.round_sums[1] == rep.expected_stage2;
  return rep;
}

inline SloDualReport slo_dual_certificate(const Instance& inst) {
  if (inst.rounds() != 2) throw Error(ErrorCode::NotTwoGroups, "certificate needs exactly two groups");
  return slo_dual_certificate(inst, solve_lex(slo_constraints(inst)));
}

}  // namespace omni
