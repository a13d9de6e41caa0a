#include <gtest/gtest.h>

#include <algorithm>

#include "test_support.hpp"

namespace omni {
namespace {

using testing::inst_a;

bool has(const ConstraintSet& cs, CutConstraint c) {
  return std::find(cs.constraints.begin(), cs.constraints.end(), c) != cs.constraints.end();
}

TEST(SloConstraints, InstanceA) {
  const ConstraintSet cs = slo_constraints(inst_a());
  EXPECT_EQ(cs.constraints.size(), 8u);
  EXPECT_TRUE(has(cs, {1, 0b011, 2}));  // S={1,2}: user 3 misses two packets
  EXPECT_TRUE(has(cs, {1, 0b100, 1}));  // S={3}: users 1 and 2 both miss packet 3
  EXPECT_TRUE(has(cs, {0, 0b001, 1}));
  EXPECT_EQ(cs.zero_forced, (std::vector<std::pair<int, int>>{{0, 2}}));
}

TEST(SloConstraints, TwoUserExchange) {
  const Instance inst = Instance::from_lists(2, 2, {{0}, {1}}, {2});
  const ConstraintSet cs = slo_constraints(inst);
  EXPECT_EQ(cs.constraints, (std::vector<CutConstraint>{{0, 0b01, 1}, {0, 0b10, 1}}));
  EXPECT_TRUE(cs.zero_forced.empty());
}

TEST(SgoConstraints, InstanceA) {
  const ConstraintSet cs = sgo_constraints(inst_a());
  ASSERT_EQ(cs.constraints.size(), 6u);
  int first_round = 0;
  for (const auto& c : cs.constraints) first_round += c.round == 0;
  EXPECT_EQ(first_round, 5);
  for (UserMask s : {0b001u, 0b010u, 0b100u, 0b101u, 0b110u})
    EXPECT_TRUE(std::any_of(cs.constraints.begin(), cs.constraints.end(),
                            [&](const CutConstraint& c) { return c.round == 0 && c.subset == s; }));
  EXPECT_TRUE(has(cs, {1, 0b011, 2}));
  EXPECT_TRUE(cs.zero_forced.empty());
}

TEST(SgoConstraints, SingleGroupMatchesLocal) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 5);
    const Instance inst = random_instance(n, 12, 0.5, {n}, rng());
    EXPECT_EQ(slo_constraints(inst).constraints, sgo_constraints(inst).constraints);
  }
}

TEST(ConstraintProperty, CountsMatchEnumeration) {
  std::mt19937_64 rng(17);
  for (int n = 2; n <= 6; ++n) {
    for (int rounds = 1; rounds <= n - 1 || rounds == 1; ++rounds) {
      if (rounds > 1 && rounds > n - 1) break;
      const auto groups = testing::random_groups(n, rounds, rng);
      const Instance inst = random_instance(n, 10, 0.5, groups, rng());
      // Local: every nonempty proper subset of each group.
      std::size_t slo = 0;
      for (int g : groups) slo += (std::size_t{1} << g) - 2;
      EXPECT_EQ(slo_constraints(inst).constraints.size(), slo);
      // Global: closed count from the shell sizes, minus the empty set in round 0.
      std::size_t sgo = 0;
      int prev = 0;
      for (int g : groups) {
        sgo += (std::size_t{1} << (n - g)) * ((std::size_t{1} << (g - prev)) - 1);
        prev = g;
      }
      EXPECT_EQ(sgo_constraints(inst).constraints.size(), sgo - 1);
      // And by direct predicate over all masks.
      std::size_t brute = 0;
      for (int l = 0; l < rounds; ++l) {
        const UserMask prevm = l == 0 ? 0 : prefix_mask(groups[static_cast<std::size_t>(l - 1)]);
        const UserMask cur = prefix_mask(groups[static_cast<std::size_t>(l)]);
        for (UserMask s = 1; s < prefix_mask(n); ++s)
          if ((s & prevm) == prevm && (s & cur) != cur) ++brute;
      }
      EXPECT_EQ(brute, sgo - 1);
    }
  }
}

TEST(ConstraintProperty, RhsIsBoundedByK) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    const Instance inst = random_instance(5, 15, 0.4, {2, 4, 5}, rng());
    for (Mode m : {Mode::Slo, Mode::Sgo})
      for (const auto& c : build_constraints(inst, m).constraints) {
        EXPECT_GE(c.rhs, 0);
        EXPECT_LE(c.rhs, inst.k());
      }
  }
}

TEST(Satisfies, DetectsViolations) {
  const ConstraintSet cs = slo_constraints(inst_a());
  auto good = testing::rate_matrix({testing::rats({1, 1, 0}), testing::rats({0, 0, 1})});
  EXPECT_TRUE(satisfies(cs, good));
  auto short_round = testing::rate_matrix({testing::rats({1, 0, 0}), testing::rats({0, 0, 1})});
  EXPECT_FALSE(satisfies(cs, short_round));
  auto forced = testing::rate_matrix({testing::rats({1, 1, 1}), testing::rats({0, 0, 1})});
  EXPECT_FALSE(satisfies(cs, forced));
}

}  // namespace
}  // namespace omni
