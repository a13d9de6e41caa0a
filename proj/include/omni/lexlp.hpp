#pragma once

#include <utility>
#include <vector>

#include "omni/constraints.hpp"
#include "omni/simplex.hpp"

namespace omni {

/// Maps each free (round, user) rate to an LP variable; zero-forced rates get none.
class RateLayout {
 public:
  explicit RateLayout(const ConstraintSet& cs) : rounds_(cs.rounds), users_(cs.users) {
    index_.assign(static_cast<std::size_t>(rounds_ * users_), -1);
    for (int l = 0; l < rounds_; ++l) {
      for (int i = 0; i < users_; ++i) {
        if (cs.is_zero_forced(l, i)) continue;
        index_[static_cast<std::size_t>(l * users_ + i)] = static_cast<int>(vars_.size());
        vars_.emplace_back(l, i);
      }
    }
  }

  int num_vars() const noexcept { return static_cast<int>(vars_.size()); }
  /// Variable of (round, user), or -1 when the rate is forced to zero.
  int var(int round, int user) const { return index_.at(static_cast<std::size_t>(round * users_ + user)); }
  std::pair<int, int> rate_of(int var) const { return vars_.at(static_cast<std::size_t>(var)); }

  RateMatrix to_rates(const std::vector<Rational>& x) const {
    RateMatrix rates(rounds_, users_);
    for (std::size_t v = 0; v < vars_.size(); ++v) rates.at(vars_[v].first, vars_[v].second) = x[v];
    return rates;
  }

 private:
  int rounds_;
  int users_;
  std::vector<int> index_;
  std::vector<std::pair<int, int>> vars_;
};

/// LP of one lexicographic stage: minimise the sum rate of round `stage`
/// under every cut constraint, with the sum rate of each earlier round j
/// pinned to pinned[j]. Rows appear in constraint order followed by the pins.
inline LinearProgram build_stage_lp(const ConstraintSet& cs, int stage, const std::vector<Rational>& pinned) {
  if (stage < 0 || stage >= cs.rounds) throw Error(ErrorCode::InvalidArgument, "stage out of range");
  if (static_cast<int>(pinned.size()) < stage)
    throw Error(ErrorCode::InvalidArgument, "every earlier stage needs a pinned optimum");
  const RateLayout layout(cs);
  LinearProgram lp;
  lp.num_vars = layout.num_vars();
  lp.objective.assign(static_cast<std::size_t>(lp.num_vars), Rational(0));
  for (int i = 0; i < cs.users; ++i)
    if (int v = layout.var(stage, i); v >= 0) lp.objective[static_cast<std::size_t>(v)] = 1;

  for (const auto& c : cs.constraints) {
    std::vector<LinearProgram::Term> terms;
    for (int m = 0; m <= c.round; ++m)
      for (int i = 0; i < cs.users; ++i)
        if (contains(c.subset, i))
          if (int v = layout.var(m, i); v >= 0) terms.push_back({v, Rational(1)});
    lp.add_row(std::move(terms), LinearProgram::Sense::GreaterEqual, Rational(c.rhs));
  }
  for (int j = 0; j < stage; ++j) {
    std::vector<LinearProgram::Term> terms;
    for (int i = 0; i < cs.users; ++i)
      if (int v = layout.var(j, i); v >= 0) terms.push_back({v, Rational(1)});
    lp.add_row(std::move(terms), LinearProgram::Sense::Equal, pinned[static_cast<std::size_t>(j)]);
  }
  return lp;
}

struct LexResult {
  /// Minimum sum rate of each round, in round order.
  std::vector<Rational> round_sums;
  /// One optimal vertex of the final stage.
  RateMatrix rates;
};

/// Sequential lexicographic minimisation: stage m minimises round m's sum rate
/// with the optima of rounds 0..m-1 pinned by equality rows.
inline LexResult solve_lex(const ConstraintSet& cs) {
  const RateLayout layout(cs);
  LexResult result;
  LpSolution last;
  for (int stage = 0; stage < cs.rounds; ++stage) {
    last = simplex_min(build_stage_lp(cs, stage, result.round_sums));
    result.round_sums.push_back(last.value);
  }
  result.rates = layout.to_rates(last.x);
  return result;
}

}  // namespace omni
