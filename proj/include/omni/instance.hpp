#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "omni/error.hpp"
#include "omni/packet_set.hpp"
#include "omni/rational.hpp"

namespace omni {

/// Largest user count accepted. Constraint generation enumerates 2^n subsets.
inline constexpr int kMaxUsers = 24;

/// A cooperative data exchange instance with nested user groups.
///
/// Indices are 0-based throughout: users 0..n-1, packets 0..k-1 and groups
/// (rounds) 0..rounds()-1. Group l consists of the users 0..group_size(l)-1,
/// so group 0 is the smallest and the last group is every user.
///
/// Instances are immutable once built and cache the per-group packet sets.
class Instance {
 public:
  /// Validates every invariant and throws ErrorCode::InvalidInstance naming
  /// the first one violated.
  Instance(int n, int k, std::vector<PacketSet> holdings, std::vector<int> group_sizes)
      : n_(n), k_(k), holdings_(std::move(holdings)), groups_(std::move(group_sizes)) {
    validate();
    build_caches();
  }

  /// Convenience constructor from 0-based packet index lists.
  static Instance from_lists(int n, int k, const std::vector<std::vector<int>>& holdings,
                             std::vector<int> group_sizes) {
    if (k <= 0) throw Error(ErrorCode::InvalidInstance, "k must be positive");
    if (static_cast<int>(holdings.size()) != n)
      throw Error(ErrorCode::InvalidInstance, "holdings must list exactly n users");
    std::vector<PacketSet> sets;
    sets.reserve(holdings.size());
    for (const auto& list : holdings) {
      PacketSet s(static_cast<std::size_t>(k));
      for (int x : list) {
        if (x < 0 || x >= k)
          throw Error(ErrorCode::InvalidInstance, "packet index out of range 1..k");
        s.set(static_cast<std::size_t>(x));
      }
      sets.push_back(std::move(s));
    }
    return Instance(n, k, std::move(sets), std::move(group_sizes));
  }

  int n() const noexcept { return n_; }
  int k() const noexcept { return k_; }
  int rounds() const noexcept { return static_cast<int>(groups_.size()); }
  const std::vector<int>& group_sizes() const noexcept { return groups_; }

  int group_size(int l) const {
    check_group(l);
    return groups_[static_cast<std::size_t>(l)];
  }
  /// Users of the group before l; empty for l = 0.
  int previous_group_size(int l) const { return l == 0 ? 0 : group_size(l - 1); }
  UserMask group_mask(int l) const { return prefix_mask(group_size(l)); }
  UserMask all_users() const noexcept { return prefix_mask(n_); }

  const PacketSet& holdings(int user) const { return holdings_.at(static_cast<std::size_t>(user)); }
  const std::vector<PacketSet>& all_holdings() const noexcept { return holdings_; }

  /// Packets the users of group l hold between them.
  const PacketSet& collective_packets(int l) const {
    check_group(l);
    return collective_[static_cast<std::size_t>(l)];
  }

  /// Packets of group l's collection that `user` lacks.
  const PacketSet& missing(int l, int user) const {
    check_group(l);
    if (user < 0 || user >= groups_[static_cast<std::size_t>(l)])
      throw Error(ErrorCode::InvalidSubset, "user " + std::to_string(user + 1) + " is not in group " +
                                                std::to_string(l + 1));
    return missing_[static_cast<std::size_t>(l)][static_cast<std::size_t>(user)];
  }
  /// Missing set relative to the whole packet set.
  const PacketSet& missing(int user) const { return missing(rounds() - 1, user); }

  /// Number of packets of group l's collection that no user in `users` holds.
  std::size_t intersect_missing(UserMask users, int l) const {
    check_group(l);
    if (users == 0) throw Error(ErrorCode::InvalidSubset, "user subset is empty");
    if (!is_subset(users, group_mask(l)))
      throw Error(ErrorCode::InvalidSubset, "user subset is not contained in group " + std::to_string(l + 1));
    const auto& miss = missing_[static_cast<std::size_t>(l)];
    int first = std::countr_zero(users);
    UserMask rest = users & (users - 1);
    if (rest == 0) return miss[static_cast<std::size_t>(first)].count();
    PacketSet acc = miss[static_cast<std::size_t>(first)];
    while (rest) {
      int u = std::countr_zero(rest);
      rest &= rest - 1;
      if (rest == 0) return intersection_count(acc, miss[static_cast<std::size_t>(u)]);
      acc &= miss[static_cast<std::size_t>(u)];
    }
    return acc.count();
  }
  /// Same, relative to the whole packet set.
  std::size_t intersect_missing(UserMask users) const { return intersect_missing(users, rounds() - 1); }

  friend bool operator==(const Instance& a, const Instance& b) {
    return a.n_ == b.n_ && a.k_ == b.k_ && a.holdings_ == b.holdings_ && a.groups_ == b.groups_;
  }

 private:
  void check_group(int l) const {
    if (l < 0 || l >= rounds())
      throw Error(ErrorCode::InvalidGroupIndex,
                  "group index " + std::to_string(l) + " outside 0.." + std::to_string(rounds() - 1));
  }

  void validate() const {
    auto fail = [](const std::string& what) { throw Error(ErrorCode::InvalidInstance, what); };
    if (n_ <= 0) fail("n must be positive");
    if (n_ > kMaxUsers) fail("n must not exceed " + std::to_string(kMaxUsers));
    if (k_ <= 0) fail("k must be positive");
    if (static_cast<int>(holdings_.size()) != n_) fail("holdings must list exactly n users");
    for (const auto& h : holdings_)
      if (h.size() != static_cast<std::size_t>(k_)) fail("every holding must be a subset of 1..k");
    if (groups_.empty()) fail("groups must contain at least one entry");
    if (static_cast<int>(groups_.size()) > n_) fail("number of groups must not exceed n");
    for (std::size_t i = 1; i < groups_.size(); ++i)
      if (groups_[i] <= groups_[i - 1]) fail("groups must be strictly increasing");
    if (groups_.front() < 1) fail("group sizes must be positive");
    if (groups_.back() != n_) fail("last group must equal n");
    if (groups_.size() >= 2 && groups_.front() <= 1) fail("first group must exceed 1 when there are two or more groups");
    PacketSet all(static_cast<std::size_t>(k_));
    for (const auto& h : holdings_) all |= h;
    if (all.count() != static_cast<std::size_t>(k_)) fail("union of holdings must cover every packet 1..k");
  }

  void build_caches() {
    collective_.reserve(groups_.size());
    missing_.reserve(groups_.size());
    for (int size : groups_) {
      PacketSet coll(static_cast<std::size_t>(k_));
      for (int i = 0; i < size; ++i) coll |= holdings_[static_cast<std::size_t>(i)];
      std::vector<PacketSet> miss;
      miss.reserve(static_cast<std::size_t>(size));
      for (int i = 0; i < size; ++i) miss.push_back(coll - holdings_[static_cast<std::size_t>(i)]);
      collective_.push_back(std::move(coll));
      missing_.push_back(std::move(miss));
    }
  }

  int n_;
  int k_;
  std::vector<PacketSet> holdings_;
  std::vector<int> groups_;
  std::vector<PacketSet> collective_;
  std::vector<std::vector<PacketSet>> missing_;
};

/// Uniform double in [0, 1) from the top 53 bits; avoids the
/// implementation-defined std distributions so seeds reproduce everywhere.
inline double unit_draw(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Random packet distribution: user i holds packet x independently with
/// probability p. A packet that lands at no user has its whole column drawn
/// again, so the union of holdings is always the full packet set.
inline Instance random_instance(int n, int k, double p, const std::vector<int>& group_sizes,
                                std::uint64_t seed) {
  if (!(p > 0.0 && p < 1.0)) throw Error(ErrorCode::InvalidProbability, "p must lie strictly between 0 and 1");
  if (n <= 0 || n > kMaxUsers) throw Error(ErrorCode::InvalidInstance, "n out of range");
  if (k <= 0) throw Error(ErrorCode::InvalidInstance, "k must be positive");
  std::mt19937_64 rng(seed);
  std::vector<PacketSet> holdings(static_cast<std::size_t>(n), PacketSet(static_cast<std::size_t>(k)));
  for (int x = 0; x < k; ++x) {
    bool covered = false;
    while (!covered) {
      for (int i = 0; i < n; ++i) {
        const bool has = unit_draw(rng) < p;
        holdings[static_cast<std::size_t>(i)].set(static_cast<std::size_t>(x), has);
        covered = covered || has;
      }
    }
  }
  return Instance(n, k, std::move(holdings), group_sizes);
}

/// Transmission rate of every user in every round: rows are rounds, columns users.
class RateMatrix {
 public:
  RateMatrix() = default;
  RateMatrix(int rounds, int users)
      : rounds_(rounds), users_(users), rates_(static_cast<std::size_t>(rounds * users), Rational(0)) {}

  int rounds() const noexcept { return rounds_; }
  int users() const noexcept { return users_; }

  Rational& at(int round, int user) { return rates_.at(index(round, user)); }
  const Rational& at(int round, int user) const { return rates_.at(index(round, user)); }

  /// Sum over `users` of the rates in one round.
  Rational subset_sum(int round, UserMask users) const {
    Rational s = 0;
    for (int i = 0; i < users_; ++i)
      if (contains(users, i)) s += at(round, i);
    return s;
  }
  Rational round_sum(int round) const { return subset_sum(round, prefix_mask(users_)); }

  /// Sum of subset_sum over rounds 0..last_round.
  Rational cumulative_sum(int last_round, UserMask users) const {
    Rational s = 0;
    for (int m = 0; m <= last_round; ++m) s += subset_sum(m, users);
    return s;
  }

  std::vector<Rational> round_sums() const {
    std::vector<Rational> out;
    for (int l = 0; l < rounds_; ++l) out.push_back(round_sum(l));
    return out;
  }

  bool all_nonnegative() const {
    for (const auto& r : rates_)
      if (sgn(r) < 0) return false;
    return true;
  }

  friend bool operator==(const RateMatrix&, const RateMatrix&) = default;

 private:
  std::size_t index(int round, int user) const {
    if (round < 0 || round >= rounds_ || user < 0 || user >= users_)
      throw Error(ErrorCode::InvalidArgument, "rate index out of range");
    return static_cast<std::size_t>(round * users_ + user);
  }

  int rounds_ = 0;
  int users_ = 0;
  std::vector<Rational> rates_;
};

}  // namespace omni
