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

#include <gtest/gtest.h>

#include <optional>

#include "ftclust/errors.h"
#include "ftclust/oracle.h"
#include "test_util.h"

namespace ftclust {
namespace {

using testing::LineInstance;
using testing::Q;

// Plain enumeration of all 2^|F| subsets, no pruning.
Rational Naive(const Instance& inst) {
  std::optional<Rational> best;
  for (int mask = 0; mask < (1 << inst.num_facilities()); ++mask) {
    FacilitySet s;
    for (int i = 0; i < inst.num_facilities(); ++i) {
      if (mask >> i & 1) s.push_back(i);
    }
    if (static_cast<int>(s.size()) < inst.r || !IsFeasibleOpenSet(inst, s)) continue;
    const Rational c = SolutionCost(inst, s).total;
    if (!best || c < *best) best = c;
  }
  return *best;
}

TEST(ExactSolveTest, SingleFacility) {
  Instance inst = LineInstance({Q("0")}, {Q("5")}, 1, MatroidDescriptor::Free(1));
  ExactResult e = ExactSolve(inst);
  EXPECT_EQ(e.opt_set, FacilitySet{0});
  EXPECT_EQ(e.cost.total, 5);
  EXPECT_EQ(e.enumerated, 1);
}

TEST(ExactSolveTest, CheapestPair) {
  // Clients at 0 and 10; pairs {0,1}: 1+3 + 9+7 = 20, {0,2}: 1+8 + 9+2 = 20,
  // {1,2}: 3+8 + 7+2 = 20. All tie, so the lexicographic first wins.
  Instance inst = LineInstance({Q("0"), Q("10")}, {Q("1"), Q("3"), Q("8")}, 2,
                               MatroidDescriptor::Uniform(3, 2));
  ExactResult e = ExactSolve(inst);
  EXPECT_EQ(e.opt_set, (FacilitySet{0, 1}));
  EXPECT_EQ(e.cost.total, 20);
  inst.open_cost = {Q("1"), Q("0"), Q("0")};
  EXPECT_EQ(ExactSolve(inst).opt_set, (FacilitySet{1, 2}));
}

TEST(ExactSolveTest, Errors) {
  Instance over = LineInstance({Q("0")}, {Q("1"), Q("2")}, 2, Knapsack{{2, 3}, 4});
  EXPECT_THROW(ExactSolve(over), InfeasibleError);
  EXPECT_THROW(LpLowerBound(over), InfeasibleError);
  Instance big = LineInstance({Q("0")}, {Q("1"), Q("2"), Q("3")}, 1,
                              MatroidDescriptor::Free(3));
  EXPECT_THROW(ExactSolve(big, 2), SchemaError);
}

TEST(ExactSolveTest, MatchesNaiveEnumeration) {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    GeneratorOptions o;
    o.seed = seed;
    o.num_clients = 2 + seed % 4;
    o.num_facilities = 3 + seed % 4;
    o.r = 1 + seed % 3;
    o.kind = seed % 2 ? ConstraintKind::kMatroid : ConstraintKind::kKnapsack;
    Instance inst = GenerateRandom(o);
    ExactResult e = ExactSolve(inst);
    EXPECT_EQ(e.cost.total, Naive(inst)) << "seed " << seed;
    EXPECT_TRUE(IsFeasibleOpenSet(inst, e.opt_set));
    EXPECT_LE(LpLowerBound(inst, &e), e.cost.total) << "seed " << seed;
    EXPECT_LE(LpLowerBound(inst), e.cost.total) << "seed " << seed;
  }
}

TEST(LpLowerBoundTest, IntegralOptimum) {
  Instance inst = LineInstance({Q("0"), Q("4")}, {Q("0"), Q("4")}, 1,
                               MatroidDescriptor::Free(2));
  EXPECT_EQ(LpLowerBound(inst), ExactSolve(inst).cost.total);
}

}  // namespace
}  // namespace ftclust
