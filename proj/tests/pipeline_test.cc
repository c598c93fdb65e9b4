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

#include "ftclust/bundling.h"
#include "ftclust/errors.h"
#include "ftclust/filtering.h"
#include "ftclust/rounding.h"
#include "test_util.h"

namespace ftclust {
namespace {

using testing::Frac;
using testing::LineInstance;
using testing::Q;

ClientStats Stats(const Rational& d_av, const Rational& d_max) {
  ClientStats s;
  s.d_av_t = {d_av};
  s.d_max_t = {d_max};
  s.d_av = d_av;
  s.d_max = d_max;
  return s;
}

FractionalSolution NearestFill(const Instance& inst, std::vector<Rational> y) {
  FractionalSolution lp;
  lp.y = std::move(y);
  lp.x.assign(inst.num_clients(), std::vector<Rational>(inst.num_facilities()));
  for (int j = 0; j < inst.num_clients(); ++j) {
    Rational need = inst.r;
    for (int i : NearestR(inst, j, [&] {
           FacilitySet all(inst.num_facilities());
           for (int k = 0; k < inst.num_facilities(); ++k) all[k] = k;
           return all;
         }(), inst.num_facilities())) {
      lp.x[j][i] = std::min(lp.y[i], need);
      need -= lp.x[j][i];
    }
  }
  for (int i = 0; i < inst.num_facilities(); ++i) {
    lp.objective += inst.open_cost[i] * lp.y[i];
    for (int j = 0; j < inst.num_clients(); ++j) lp.objective += lp.x[j][i] * inst.d(j, i);
  }
  return lp;
}

TEST(FindDangerousTest, DefiningInequality) {
  Instance inst = LineInstance({Q("0"), Q("1"), Q("2")}, {Q("0")}, 1,
                               MatroidDescriptor::Free(1));
  SplitState s(&inst);
  s.stats = {Stats(1, 10), Stats(4, 4), Stats(0, 0)};
  EXPECT_EQ(FindDangerous(s, Q("3.01")), std::vector<int>{0});
}

TEST(FilterConflictsTest, Examples) {
  Instance far = LineInstance({Q("0"), Q("100")}, {Q("0")}, 1, MatroidDescriptor::Free(1));
  SplitState s(&far);
  s.stats = {Stats(1, 50), Stats(1, 50)};
  EXPECT_TRUE(FilterConflicts(s, Q("3.1"), {}).d_prime.empty());
  FilterState f = FilterConflicts(s, Q("3.1"), {0, 1});
  EXPECT_EQ(f.d_prime, (std::vector<int>{0, 1}));
  EXPECT_EQ(f.demand, (std::vector<int>{1, 1}));

  Instance near = LineInstance({Q("0"), Q("5")}, {Q("0")}, 1, MatroidDescriptor::Free(1));
  SplitState t(&near);
  t.stats = {Stats(2, 50), Stats(1, 50)};
  f = FilterConflicts(t, Q("3.1"), {0, 1});
  EXPECT_EQ(f.d_prime, std::vector<int>{1});
  EXPECT_EQ(f.demand, (std::vector<int>{0, 2}));
  EXPECT_EQ(f.marked_by, (std::vector<int>{1, 1}));
}

TEST(FilterStateTest, Radius) {
  Instance inst = LineInstance({Q("0")}, {Q("0")}, 1, MatroidDescriptor::Free(1));
  SplitState s(&inst);
  s.stats = {Stats(1, 9)};
  FilterState f;
  f.gamma = 3 + inst.delta;
  EXPECT_EQ(f.Radius(s, 0), Frac(90, 31));
}

TEST(BundlingTest, SingleSafeClient) {
  Instance inst = LineInstance({Q("0")}, {Q("1"), Q("2"), Q("3")}, 1,
                               MatroidDescriptor::Free(3));
  SplitState s = SplitFacilities(inst, NearestFill(inst, {Q("1/2"), Q("3/4"), Q("1/4")}));
  Certificate cert;
  FilterState f = RunFiltering(s, 3 + inst.delta, &cert);
  BundleState b = RunBundling(&s, f, &cert);
  ASSERT_EQ(b.bundles.size(), 1u);
  EXPECT_EQ(b.queues[0], std::vector<int>{0});
  EXPECT_EQ(s.Mass(b.bundles[0]), 1);
  for (int k : b.bundles[0]) EXPECT_LE(s.original_of[k], 1);
}

TEST(BundlingTest, CoLocatedClientsShareBundle) {
  Instance inst = LineInstance({Q("0"), Q("0")}, {Q("1")}, 1, MatroidDescriptor::Free(1));
  SplitState s = SplitFacilities(inst, NearestFill(inst, {Q("1")}));
  Certificate cert;
  FilterState f = RunFiltering(s, 3 + inst.delta, &cert);
  BundleState b = RunBundling(&s, f, &cert);
  ASSERT_EQ(b.bundles.size(), 1u);
  EXPECT_EQ(b.queues[0], std::vector<int>{0});
  EXPECT_EQ(b.queues[1], std::vector<int>{0});
  ASSERT_EQ(b.events.size(), 2u);
  EXPECT_EQ(b.events[0].kind, BundleEventKind::kCreate);
  EXPECT_EQ(b.events[1].kind, BundleEventKind::kAbsorb);
}

TEST(BundlingTest, NoAlienCheckRejectsSyntheticViolation) {
  Instance inst = LineInstance({Q("0"), Q("10")}, {Q("0"), Q("1")}, 2,
                               MatroidDescriptor::Free(2));
  SplitState s(&inst);
  s.stats = {Stats(1, 12), Stats(1, 12)};
  FilterState f;
  f.gamma = 3;
  BundleEvent e{BundleEventKind::kFreezeNoAlien, 0, -1, 1, 1, Rational(4)};
  Certificate cert;
  CheckNoAlienEvent(s, f, e, &cert);  // 4 >= (1 - 1/3) * 12 / 2
  e.candidate_dmax = Q("3.9");
  try {
    CheckNoAlienEvent(s, f, e, &cert);
    FAIL();
  } catch (const InvariantError& err) {
    EXPECT_EQ(err.check(), "lemma3.distance");
  }
  e.candidate_dmax = 4;
  e.witness_queue = 0;
  try {
    CheckNoAlienEvent(s, f, e, &cert);
    FAIL();
  } catch (const InvariantError& err) {
    EXPECT_EQ(err.check(), "lemma3.queue_size");
  }
}

TEST(BoundsTest, Constants) {
  EXPECT_EQ(MatroidBound(3), 138);
  EXPECT_EQ(Lemma8Factor(3), Frac(13, 3));
  EXPECT_EQ(Lemma9Factor(3), Frac(60, 4));
  EXPECT_EQ(KnapsackBound(3, 0), 138 + Frac(13, 3) + 1);
  EXPECT_LT(MatroidBound(Q("3.1")), 139);
}

TEST(SolveMatroidTest, SinglePair) {
  Instance inst = LineInstance({Q("0")}, {Q("5")}, 1, MatroidDescriptor::Free(1));
  MatroidRun run = SolveMatroidInstance(inst);
  EXPECT_EQ(run.solution.open_set, FacilitySet{0});
  EXPECT_EQ(run.solution.cost.total, 5);
  EXPECT_EQ(run.round.solves, 1);
}

TEST(SolveMatroidTest, UniformRankEqualsRequirement) {
  Instance inst = LineInstance({Q("0"), Q("4"), Q("9")},
                               {Q("1"), Q("2"), Q("5"), Q("7"), Q("8")}, 2,
                               MatroidDescriptor::Uniform(5, 2));
  MatroidRun run = SolveMatroidInstance(inst);
  EXPECT_EQ(run.solution.open_set.size(), 2u);
}

TEST(SolveMatroidTest, CoLocatedFreeFacilities) {
  Instance inst = LineInstance({Q("0"), Q("1")}, {Q("3"), Q("3"), Q("3")}, 1,
                               MatroidDescriptor::Free(3));
  MatroidRun run = SolveMatroidInstance(inst);
  EXPECT_FALSE(run.solution.open_set.empty());
  EXPECT_EQ(run.solution.cost.total, 5);
}

TEST(SolveMatroidTest, DangerousBallHoldsRBundles) {
  // One far client pulls a little mass from a distant facility; its ball
  // around the near cluster holds r unit bundles at the first vertex.
  Instance inst = LineInstance({Q("0")}, {Q("0"), Q("0"), Q("100")}, 1,
                               MatroidDescriptor::Free(3));
  FractionalSolution lp;
  lp.y = {Q("1/2"), Q("9/20"), Q("1/20")};
  lp.x = {{Q("1/2"), Q("9/20"), Q("1/20")}};
  lp.objective = 5;
  MatroidRun run = SolveMatroidFrom(inst, lp);
  ASSERT_EQ(run.filter.dangerous, std::vector<int>{0});
  EXPECT_EQ(run.round.d1, std::vector<int>{0});
  EXPECT_EQ(run.solution.cost.total, 0);
}

// Crafted fractional points reach every branch of filtering, bundling and
// the iterative rounding; all runtime checks must hold.
TEST(PipelinePropertyTest, CraftedMatroidPoints) {
  int with_dangerous = 0, d0 = 0, d1 = 0, noalien = 0, noshell = 0;
  for (std::uint64_t seed = 1; seed <= 400; ++seed) {
    testing::CraftedCase c = testing::MakeCraftedCase(seed, ConstraintKind::kMatroid);
    MatroidRun run = SolveMatroidFrom(c.inst, c.lp);
    with_dangerous += !run.filter.dangerous.empty();
    d0 += run.round.d0.size();
    d1 += run.round.d1.size();
    for (const BundleEvent& e : run.bundles.events) {
      noalien += e.kind == BundleEventKind::kFreezeNoAlien;
      noshell += e.kind == BundleEventKind::kFreezeNoShell;
    }
    EXPECT_TRUE(IsFeasibleOpenSet(c.inst, run.solution.open_set));
    EXPECT_LE(run.solution.cost.total, run.bound);
  }
  EXPECT_GT(with_dangerous, 0);
  EXPECT_GT(d0, 0);
  EXPECT_GT(d1, 0);
  EXPECT_GT(noalien, 0);
  EXPECT_GT(noshell, 0);
}

TEST(PipelinePropertyTest, GeneratedInstances) {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    GeneratorOptions o;
    o.seed = seed;
    o.num_clients = 2 + seed % 5;
    o.num_facilities = 3 + seed % 4;
    o.r = 1 + seed % 3;
    Instance inst = GenerateRandom(o);
    MatroidRun run = SolveMatroidInstance(inst);
    EXPECT_TRUE(IsFeasibleOpenSet(inst, run.solution.open_set));
    EXPECT_GE(static_cast<int>(run.solution.open_set.size()), inst.r);
    EXPECT_LE(run.round.solves, static_cast<int>(run.filter.d_prime.size()) + 1);
  }
}

}  // namespace
}  // namespace ftclust
