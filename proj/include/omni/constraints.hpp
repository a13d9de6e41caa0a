#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "omni/instance.hpp"

namespace omni {

/// Successive local omniscience (group l learns what it collectively holds)
/// or successive global omniscience (group l learns every packet).
enum class Mode { Slo, Sgo };

inline std::string_view to_string(Mode m) { return m == Mode::Slo ? "slo" : "sgo"; }

inline Mode parse_mode(std::string_view s) {
  if (s == "slo" || s == "SLO") return Mode::Slo;
  if (s == "sgo" || s == "SGO") return Mode::Sgo;
  throw Error(ErrorCode::InvalidArgument, "mode must be slo or sgo, got '" + std::string(s) + "'");
}

/// Cut-set inequality: cumulative rate of `subset` over rounds 0..round is at least rhs.
struct CutConstraint {
  int round = 0;
  UserMask subset = 0;
  std::int64_t rhs = 0;

  friend bool operator==(const CutConstraint&, const CutConstraint&) = default;
};

struct ConstraintSet {
  Mode mode = Mode::Slo;
  int rounds = 0;
  int users = 0;
  std::vector<CutConstraint> constraints;
  /// (round, user) pairs whose rate is fixed to zero.
  std::vector<std::pair<int, int>> zero_forced;

  bool is_zero_forced(int round, int user) const {
    for (const auto& [r, u] : zero_forced)
      if (r == round && u == user) return true;
    return false;
  }
};

/// Local omniscience constraints: for every round l and nonempty S strictly
/// inside group l, rate of S through round l covers the packets of group l's
/// collection missing from every member of the group outside S. Users outside
/// group l are forced silent in round l.
inline ConstraintSet slo_constraints(const Instance& inst) {
  ConstraintSet cs;
  cs.mode = Mode::Slo;
  cs.rounds = inst.rounds();
  cs.users = inst.n();
  for (int l = 0; l < inst.rounds(); ++l) {
    const UserMask group = inst.group_mask(l);
    for (UserMask s = 1; s < group; ++s) {
      cs.constraints.push_back(
          {l, s, static_cast<std::int64_t>(inst.intersect_missing(group & ~s, l))});
    }
    for (int i = inst.group_size(l); i < inst.n(); ++i) cs.zero_forced.emplace_back(l, i);
  }
  return cs;
}

/// Membership test for a global omniscience constraint in round l: S is a
/// proper subset of all users, contains group l-1 and does not contain group l.
inline bool sgo_constraint_member(const Instance& inst, int l, UserMask s) {
  const UserMask all = inst.all_users();
  const UserMask prev = l == 0 ? 0 : inst.group_mask(l - 1);
  return s != all && is_subset(prev, s) && !is_subset(inst.group_mask(l), s);
}

/// Global omniscience constraints, one per round and qualifying S (S empty
/// dropped since its right-hand side is always zero).
inline ConstraintSet sgo_constraints(const Instance& inst) {
  ConstraintSet cs;
  cs.mode = Mode::Sgo;
  cs.rounds = inst.rounds();
  cs.users = inst.n();
  const UserMask all = inst.all_users();
  for (int l = 0; l < inst.rounds(); ++l) {
    for (UserMask s = 1; s < all; ++s) {
      if (!sgo_constraint_member(inst, l, s)) continue;
      cs.constraints.push_back({l, s, static_cast<std::int64_t>(inst.intersect_missing(all & ~s))});
    }
  }
  return cs;
}

inline ConstraintSet build_constraints(const Instance& inst, Mode mode) {
  return mode == Mode::Slo ? slo_constraints(inst) : sgo_constraints(inst);
}

/// True when `rates` meets every cut constraint and every forced zero exactly.
inline bool satisfies(const ConstraintSet& cs, const RateMatrix& rates) {
  if (rates.rounds() != cs.rounds || rates.users() != cs.users) return false;
  if (!rates.all_nonnegative()) return false;
  for (const auto& [r, u] : cs.zero_forced)
    if (rates.at(r, u) != 0) return false;
  for (const auto& c : cs.constraints)
    if (rates.cumulative_sum(c.round, c.subset) < c.rhs) return false;
  return true;
}

}  // namespace omni
