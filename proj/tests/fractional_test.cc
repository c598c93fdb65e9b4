// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ftclust/fractional.h"

#include <gtest/gtest.h>

#include <set>

#include "ftclust/errors.h"
#include "test_util.h"

namespace ftclust {
namespace {

using testing::LineInstance;
using testing::Q;

// Wraps a hand-written (x, y) with its objective.
FractionalSolution Fractional(const Instance& inst,
                              std::vector<std::vector<Rational>> x,
                              std::vector<Rational> y) {
  FractionalSolution lp{std::move(x), std::move(y), 0};
  for (int i = 0; i < inst.num_facilities(); ++i) {
    lp.objective += inst.open_cost[i] * lp.y[i];
    for (int j = 0; j < inst.num_clients(); ++j) {
      lp.objective += lp.x[j][i] * inst.d(j, i);
    }
  }
  return lp;
}

TEST(SolveMatroidRelaxationTest, ForcedSolution) {
  Instance inst = LineInstance({Q("0")}, {Q("5")}, 1, MatroidDescriptor::Free(1));
  FractionalSolution lp = SolveMatroidRelaxation(inst);
  EXPECT_EQ(lp.y[0], 1);
  EXPECT_EQ(lp.x[0][0], 1);
  EXPECT_EQ(lp.objective, 5);
}

TEST(SolveMatroidRelaxationTest, RankBelowRequirement) {
  Instance inst = LineInstance({Q("0")}, {Q("1"), Q("2")}, 2,
                               MatroidDescriptor::Uniform(2, 2));
  inst.constraint = MatroidDescriptor::Uniform(2, 1);
  try {
    SolveMatroidRelaxation(inst);
    FAIL();
  } catch (const InfeasibleError& e) {
    EXPECT_STREQ(e.what(), "no feasible fault-tolerant solution");
  }
}

TEST(SplitFacilitiesTest, NoOpWhenAlreadySplit) {
  Instance inst = LineInstance({Q("0")}, {Q("1"), Q("2")}, 1,
                               MatroidDescriptor::Free(2));
  SplitState s = SplitFacilities(inst, Fractional(inst, {{1, 0}}, {1, 0}));
  EXPECT_EQ(s.num_copies(), 2);
  EXPECT_EQ(s.original_of, (std::vector<int>{0, 1}));
  EXPECT_EQ(s.splits, 0);
}

TEST(SplitFacilitiesTest, BoundarySplit) {
  Instance inst = LineInstance({Q("0")}, {Q("1"), Q("2"), Q("3")}, 2,
                               MatroidDescriptor::Free(3));
  std::vector<Rational> y{Q("0.5"), Q("0.7"), Q("0.8")};
  SplitState s = SplitFacilities(inst, Fractional(inst, {y}, y));
  ASSERT_EQ(s.num_copies(), 4);
  EXPECT_EQ(s.original_of[3], 1);
  EXPECT_EQ(s.y[1], Q("0.5"));
  EXPECT_EQ(s.y[3], Q("0.2"));
  EXPECT_EQ(s.fjt[0][0], (CopySet{0, 1}));
  EXPECT_EQ(s.fjt[0][1], (CopySet{2, 3}));
  EXPECT_EQ(s.order(), (std::vector<int>{0, 1, 3, 2}));
}

TEST(SplitFacilitiesTest, SharedFacilityPerClientSplit) {
  // Facility A (y=0.7) serves c0 with 0.3 and c1 with 0.7.
  Instance inst = LineInstance({Q("0"), Q("10")}, {Q("5"), Q("6")}, 1,
                               MatroidDescriptor::Free(2));
  SplitState s = SplitFacilities(
      inst, Fractional(inst, {{Q("0.3"), Q("0.7")}, {Q("0.7"), Q("0.3")}},
                       {Q("0.7"), 1}));
  std::vector<Rational> copies_of_a;
  for (int k = 0; k < s.num_copies(); ++k) {
    if (s.original_of[k] == 0) copies_of_a.push_back(s.y[k]);
  }
  EXPECT_EQ(copies_of_a, (std::vector<Rational>{Q("0.3"), Q("0.4")}));
  // c0 uses only the first copy of A; c1 uses both.
  EXPECT_EQ(s.Mass(s.fj[0]), 1);
  int a_in_c0 = 0, a_in_c1 = 0;
  for (int k : s.fj[0]) a_in_c0 += s.original_of[k] == 0;
  for (int k : s.fj[1]) a_in_c1 += s.original_of[k] == 0;
  EXPECT_EQ(a_in_c0, 1);
  EXPECT_EQ(a_in_c1, 2);
}

TEST(ClientStatsTest, Examples) {
  Instance one = LineInstance({Q("0")}, {Q("4")}, 1, MatroidDescriptor::Free(1));
  SplitState s1 = SplitFacilities(one, Fractional(one, {{1}}, {1}));
  EXPECT_EQ(s1.stats[0].d_av_t[0], 4);
  EXPECT_EQ(s1.stats[0].d_max_t[0], 4);

  Instance two = LineInstance({Q("0")}, {Q("0"), Q("10")}, 1,
                              MatroidDescriptor::Free(2));
  std::vector<Rational> y{Q("0.9"), Q("0.1")};
  SplitState s2 = SplitFacilities(two, Fractional(two, {y}, y));
  EXPECT_EQ(s2.stats[0].d_av_t[0], 1);
  EXPECT_EQ(s2.stats[0].d_max_t[0], 10);

  Instance three = LineInstance({Q("0")}, {Q("1"), Q("3")}, 2,
                                MatroidDescriptor::Free(2));
  SplitState s3 = SplitFacilities(three, Fractional(three, {{1, 1}}, {1, 1}));
  EXPECT_EQ(s3.stats[0].d_av_t[0], 1);
  EXPECT_EQ(s3.stats[0].d_av_t[1], 3);
  EXPECT_EQ(s3.stats[0].d_av, 2);
  EXPECT_EQ(s3.stats[0].d_max, 3);
}

TEST(BallTest, Examples) {
  Instance inst = LineInstance({Q("0")}, {Q("0"), Q("0"), Q("4")}, 1,
                               MatroidDescriptor::Free(3));
  std::vector<Rational> y{Q("0.5"), Q("0.5"), 0};
  SplitState s = SplitFacilities(inst, Fractional(inst, {y}, y));
  EXPECT_EQ(MakeBall(s, 0, 0).members, (CopySet{0, 1}));
  EXPECT_EQ(MakeBall(s, 0, 100).members, (CopySet{0, 1, 2}));
  const std::vector<char> alive{1, 0, 1};
  EXPECT_EQ(MakeBall(s, 0, 100, alive).members, (CopySet{0, 2}));
}

// Property: on LP optima, d_max(j) is the smallest radius whose ball holds
// mass r, every split invariant holds, and the copy bound is respected.
TEST(SplitFacilitiesTest, RandomInstances) {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    GeneratorOptions opt{seed, 4, 5, static_cast<int>(seed % 3) + 1,
                         ConstraintKind::kMatroid};
    Instance inst = GenerateRandom(opt);
    FractionalSolution lp = SolveMatroidRelaxation(inst);
    SplitState s = SplitFacilities(inst, lp);
    EXPECT_NO_THROW(CheckSplitInvariants(s, lp));
    for (int j = 0; j < inst.num_clients(); ++j) {
      std::set<Rational> radii;
      for (int k = 0; k < s.num_copies(); ++k) radii.insert(s.Dist(j, k));
      std::optional<Rational> smallest;
      for (const Rational& radius : radii) {
        if (s.Mass(MakeBall(s, j, radius).members) >= inst.r) {
          smallest = radius;
          break;
        }
      }
      ASSERT_TRUE(smallest.has_value());
      EXPECT_EQ(*smallest, s.stats[j].d_max) << "seed " << seed;
      // Every copy appears in the tie-break order exactly once.
      std::vector<int> order = s.order();
      std::sort(order.begin(), order.end());
      for (int k = 0; k < s.num_copies(); ++k) EXPECT_EQ(order[k], k);
    }
  }
}

}  // namespace
}  // namespace ftclust
