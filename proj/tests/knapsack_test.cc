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

#include <cmath>
#include <random>

#include "ftclust/errors.h"
#include "ftclust/knapsack.h"
#include "test_util.h"

namespace ftclust {
namespace {

using testing::Frac;
using testing::LineInstance;
using testing::Q;

Knapsack Budget(std::vector<Rational> weights, Rational budget) {
  return Knapsack{std::move(weights), std::move(budget)};
}

TEST(KumarDeltaTest, Examples) {
  const std::vector<Rational> d = {0, 3, 5};
  EXPECT_EQ(KumarDelta(d, 4), Frac(7, 2));
  EXPECT_EQ(KumarDelta(d, 0), 0);
  EXPECT_EQ(KumarDelta(std::vector<Rational>{0}, 7), 7);
  EXPECT_THROW(KumarDelta(std::vector<Rational>{1, 2}, 1), std::invalid_argument);
}

TEST(KumarDeltaTest, Maximality) {
  std::mt19937_64 rng(7);
  auto uniform = [&](int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng); };
  const Rational quantum = Frac(1, 1000000);
  auto excess = [](const std::vector<Rational>& d, const Rational& delta) {
    Rational s = 0;
    for (const Rational& v : d) {
      if (delta > v) s += delta - v;
    }
    return s;
  };
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<Rational> d{0};
    const int n = uniform(0, 8);
    for (int k = 0; k < n; ++k) d.push_back(Frac(uniform(0, 400), uniform(1, 4)));
    const Rational opt = Frac(uniform(0, 300), uniform(1, 3));
    const Rational delta = KumarDelta(d, opt);
    EXPECT_LE(excess(d, delta), opt);
    EXPECT_GT(excess(d, delta + quantum), opt);
  }
}

TEST(GuessGridTest, Examples) {
  EXPECT_EQ(GeometricGrid(0, 0, Q("0.1")), std::vector<Rational>{0});
  const std::vector<Rational> g = GeometricGrid(1, 100, Q("0.1"));
  EXPECT_LE(g.size(), 51u);
  EXPECT_EQ(g[0], 0);
  EXPECT_EQ(g[1], 1);
  EXPECT_GE(g.back(), 100);
  bool bracket = false;
  for (const Rational& v : GeometricGrid(Q("0.3"), 50, Q("0.1"))) {
    bracket = bracket || (v >= 10 && v <= 11);
  }
  EXPECT_TRUE(bracket);
}

TEST(GuessGridTest, ZeroCostsAndCardinality) {
  Instance inst = LineInstance({Q("0"), Q("2")}, {Q("1"), Q("4")}, 1,
                               Budget({1, 1}, 1));
  GuessGrid g = MakeGuessGrid(inst, Frac(1, 20));
  EXPECT_EQ(g.optf_values, std::vector<Rational>{0});
  EXPECT_EQ(g.lb, 1);
  EXPECT_EQ(g.ub, 4 + 2);
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    GeneratorOptions o;
    o.seed = seed;
    o.kind = ConstraintKind::kKnapsack;
    o.r = 1 + seed % 3;
    Instance gen = GenerateRandom(o);
    GuessGrid grid = MakeGuessGrid(gen, gen.epsilon);
    const double ratio = Rational(grid.ub / grid.lb).get_d();
    const double side = std::ceil(std::log(ratio) / std::log(1.05) - 1e-9) + 2;
    EXPECT_LE(static_cast<double>(grid.size()), side * side);
  }
}

TEST(SolveKnapsackRelaxationTest, PatternFixings) {
  Instance inst = LineInstance({Q("0")}, {Q("1"), Q("3")}, 1, Budget({1, 1}, 5));
  FractionalSolution lp = SolveKnapsackRelaxation(inst, OpenPattern(inst));
  EXPECT_EQ(lp.objective, 1);
  KnapsackPattern p = OpenPattern(inst);
  p.allowed_facility[0] = 0;
  EXPECT_EQ(SolveKnapsackRelaxation(inst, p).objective, 3);
  p.allowed_pair[0][1] = 0;
  EXPECT_THROW(SolveKnapsackRelaxation(inst, p), InfeasibleError);
  // OPT' = 0 leaves only the zero-distance pairs.
  EXPECT_THROW(SolveKnapsackRelaxation(inst, PatternFor(inst, {0, 0})), InfeasibleError);
}

// Two originals; copies are laid out explicitly.
struct Synthetic {
  Instance inst;
  SplitState state;
  RoundState rs;
};

Synthetic MakeSynthetic(std::vector<int> original_of, std::vector<Rational> z,
                        std::vector<CopySet> bundles, std::vector<Rational> weights) {
  Synthetic s;
  std::vector<Rational> pos(weights.size(), Rational(1));
  s.inst = LineInstance({Q("0")}, pos, 1, Budget(weights, 100));
  s.state = SplitState(&s.inst);
  s.state.original_of = std::move(original_of);
  s.state.y = z;
  s.rs.z = std::move(z);
  s.rs.alive.assign(s.rs.z.size(), 1);
  s.rs.bundles = std::move(bundles);
  s.rs.bundle_alive.assign(s.rs.bundles.size(), 1);
  return s;
}

TEST(ClassifyTTest, IntegralIsZero) {
  Synthetic s = MakeSynthetic({0, 1}, {1, 0}, {{0}}, {1, 1});
  Certificate cert;
  TCase t = ClassifyT(s.state, s.rs, &cert);
  EXPECT_EQ(t.T, 0);
  EXPECT_TRUE(t.chain.empty());
}

TEST(ClassifyTTest, OneNonTightChain) {
  Synthetic s = MakeSynthetic({0, 1, 1}, {Q("0.4"), Q("0.6"), Q("0.4")}, {{0, 1}}, {2, 1});
  Certificate cert;
  TCase t = ClassifyT(s.state, s.rs, &cert);
  EXPECT_EQ(t.T, 1);
  EXPECT_EQ(t.nontight, std::vector<int>{0});
  EXPECT_EQ(t.chain, (std::vector<int>{0, 1, 2}));
  std::vector<char> open = RoundChain(s.state, t, 0, &s.rs, &cert);
  EXPECT_EQ(open, (std::vector<char>{0, 1, 0}));
  EXPECT_EQ(s.rs.bundles[0], CopySet{1});
}

TEST(ClassifyTTest, TwoNonTightChain) {
  Synthetic s = MakeSynthetic({0, 1}, {Q("0.3"), Q("0.7")}, {{0, 1}}, {1, 3});
  Certificate cert;
  TCase t = ClassifyT(s.state, s.rs, &cert);
  EXPECT_EQ(t.T, 2);
  EXPECT_EQ(t.chain, (std::vector<int>{1, 0}));  // heavier endpoint first
  std::vector<char> open = RoundChain(s.state, t, 0, &s.rs, &cert);
  EXPECT_EQ(open, (std::vector<char>{1, 0}));
  EXPECT_EQ(s.rs.bundles[0], CopySet{0});

  Synthetic tie = MakeSynthetic({0, 1}, {Q("0.3"), Q("0.7")}, {{0, 1}}, {2, 2});
  EXPECT_EQ(ClassifyT(tie.state, tie.rs, &cert).chain, (std::vector<int>{0, 1}));
}

TEST(ClassifyTTest, ThreeNonTightIsAnInvariantFailure) {
  Synthetic s = MakeSynthetic({0, 1, 2}, {Q("0.5"), Q("0.5"), Q("0.5")}, {}, {1, 1, 1});
  Certificate cert;
  try {
    ClassifyT(s.state, s.rs, &cert);
    FAIL();
  } catch (const InvariantError& e) {
    EXPECT_EQ(e.check(), "knapsack.t_range");
  }
}

TEST(ClassifyTTest, BrokenChainIsAnInvariantFailure) {
  // Non-tight copy with no partner while another fractional copy remains.
  Synthetic s = MakeSynthetic({0, 1, 1}, {Q("0.4"), Q("0.5"), Q("0.5")}, {}, {1, 1});
  Certificate cert;
  try {
    ClassifyT(s.state, s.rs, &cert);
    FAIL();
  } catch (const InvariantError& e) {
    EXPECT_EQ(e.check(), "knapsack.chain");
  }
}

TEST(RoundFlowTest, TwoTightOriginalsOneBundle) {
  // A = {a1, a2}, B = {b1, b2}, one bundle {a1, b1}.
  Synthetic s = MakeSynthetic({0, 0, 1, 1}, {Q("0.5"), Q("0.5"), Q("0.5"), Q("0.5")},
                              {{0, 2}}, {1, 1});
  Certificate cert;
  EXPECT_EQ(ClassifyT(s.state, s.rs, &cert).T, 0);
  std::vector<char> open = RoundFlow(s.state, &s.rs, &cert);
  EXPECT_EQ(open[0] + open[1], 1);
  EXPECT_EQ(open[2] + open[3], 1);
  ASSERT_EQ(s.rs.bundles[0].size(), 1u);
  const int chosen = s.rs.bundles[0][0];
  EXPECT_TRUE(chosen == 0 || chosen == 2);
  EXPECT_TRUE(open[chosen]);
}

TEST(RoundFlowTest, DummyCapacityZero) {
  // Two bundles over the copies of two originals: every unit goes through a
  // bundle.
  Synthetic s = MakeSynthetic({0, 0, 1, 1}, {Q("0.5"), Q("0.5"), Q("0.5"), Q("0.5")},
                              {{0, 2}, {1, 3}}, {1, 1});
  Certificate cert;
  std::vector<char> open = RoundFlow(s.state, &s.rs, &cert);
  EXPECT_EQ(open[0] + open[1] + open[2] + open[3], 2);
  EXPECT_TRUE(open[s.rs.bundles[0][0]]);
  EXPECT_TRUE(open[s.rs.bundles[1][0]]);
  EXPECT_NE(s.state.original_of[s.rs.bundles[0][0]],
            s.state.original_of[s.rs.bundles[1][0]]);
}

TEST(SolveKnapsackTest, SinglePair) {
  Instance inst = LineInstance({Q("0")}, {Q("5")}, 1, Budget({1}, 1));
  KnapsackRun run = SolveKnapsackInstance(inst);
  EXPECT_EQ(run.solution.open_set, FacilitySet{0});
  EXPECT_EQ(run.solution.cost.total, 5);
}

TEST(SolveKnapsackTest, BudgetBelowLightestSet) {
  Instance inst = LineInstance({Q("0")}, {Q("1"), Q("2")}, 2, Budget({2, 3}, 4));
  try {
    SolveKnapsackInstance(inst);
    FAIL();
  } catch (const InfeasibleError& e) {
    EXPECT_STREQ(e.what(), "no feasible fault-tolerant solution");
  }
}

TEST(SolveKnapsackTest, OnlyOneFeasibleSet) {
  Instance inst = LineInstance({Q("0"), Q("6")}, {Q("0"), Q("3"), Q("6")}, 2,
                               Budget({5, 1, 1}, 2));
  KnapsackRun run = SolveKnapsackInstance(inst);
  EXPECT_EQ(run.solution.open_set, (FacilitySet{1, 2}));
}

TEST(SolveKnapsackTest, GeneratedInstances) {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    GeneratorOptions o;
    o.seed = seed;
    o.kind = ConstraintKind::kKnapsack;
    o.num_clients = 2 + seed % 4;
    o.num_facilities = 3 + seed % 3;
    o.r = 1 + seed % 3;
    Instance inst = GenerateRandom(o);
    KnapsackRun run = SolveKnapsackInstance(inst);
    EXPECT_TRUE(IsFeasibleOpenSet(inst, run.solution.open_set));
    EXPECT_GE(static_cast<int>(run.solution.open_set.size()), inst.r);
    EXPECT_LE(run.tcase.T, 2);
    EXPECT_LE(run.patterns, static_cast<int>(run.grid.size()));
  }
}

TEST(SolveKnapsackTest, CraftedPoints) {
  int dangerous = 0, chains = 0;
  for (std::uint64_t seed = 1; seed <= 400; ++seed) {
    testing::CraftedCase c = testing::MakeCraftedCase(seed, ConstraintKind::kKnapsack);
    Rational big = 0;
    for (const auto& row : c.inst.metric.matrix()) {
      for (const Rational& v : row) big += v;
    }
    KnapsackRun run = SolveKnapsackFrom(c.inst, {c.inst.r * big, 3}, c.lp);
    dangerous += !run.filter.dangerous.empty();
    chains += run.tcase.T > 0;
    EXPECT_TRUE(IsFeasibleOpenSet(c.inst, run.solution.open_set));
  }
  EXPECT_GT(dangerous, 0);
  EXPECT_GT(chains, 0);
}

}  // namespace
}  // namespace ftclust
