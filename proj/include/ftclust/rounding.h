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

#ifndef FTCLUST_ROUNDING_H_
#define FTCLUST_ROUNDING_H_

#include <optional>
#include <string>
#include <vector>

#include "ftclust/bundling.h"
#include "ftclust/certificate.h"
#include "ftclust/filtering.h"
#include "ftclust/fractional.h"
#include "ftclust/instance.h"

namespace ftclust {

// Constants of the analysis at gamma.
Rational Lemma8Factor(const Rational& gamma);  // (3g^2-g+2)/(g(g-1))
Rational Lemma9Factor(const Rational& gamma);  // (7g^2-2g+3)/(g-1)^2
Rational MatroidBound(const Rational& gamma);  // B(gamma)
Rational KnapsackBound(const Rational& gamma, const Rational& epsilon);

enum class ClientStatus { kUndecided, kD0, kD1 };

struct ObjectiveEvent {
  std::string event;  // "solve", "d0", "d1"
  int client = -1;
  Rational value;
};

// State of Algorithm 2. Bundles and queues start as copies of BundleState
// and are rewritten by D1 events.
struct RoundState {
  std::vector<Rational> z;        // per copy; deleted copies hold 0
  std::vector<char> alive;
  std::vector<CopySet> bundles;
  std::vector<char> bundle_alive;
  std::vector<char> shell;
  std::vector<std::vector<int>> queues;
  std::vector<ClientStatus> status;
  std::vector<int> d0, d1;        // in event order
  std::vector<ObjectiveEvent> history;
  std::vector<FacilitySet> cuts;  // retained matroid cuts
  int solves = 0;
  int cut_rounds = 0;
  Rational initial_optimum;
};

struct IterativeOptions {
  bool knapsack = false;
  // K-IR.6: copies of facilities with f > opt_f_guess are fixed to 0.
  std::optional<Rational> opt_f_guess;
};

// Algorithm 2 over M-IR (matroid) or K-IR (knapsack). Checks Lemma 5 and
// Lemma 6 along the way; for the matroid also Lemma 7 at exit.
RoundState RunIterative(const SplitState& state, const FilterState& filt,
                        const BundleState& bund, const IterativeOptions& options,
                        Certificate* cert);

// M-IR / K-IR objective at `z` for the current D0/D1/queues of `rs`.
Rational IterativeObjective(const SplitState& state, const FilterState& filt,
                            const RoundState& rs, std::span<const Rational> z);

// Lemmas 8 and 9 on an integral opening: `open[k]` marks opened copies and
// every live bundle must hold exactly one of them. `dangerous_scope` lists
// the D' members checked against Lemma 8.
void CheckFinalBundles(const SplitState& state, const FilterState& filt,
                       const BundleState& initial, const RoundState& rs,
                       std::span<const char> open,
                       std::span<const int> dangerous_scope, Certificate* cert);

struct MatroidRun {
  Solution solution;
  Certificate cert;
  FractionalSolution lp;
  SplitState split;
  FilterState filter;
  BundleState bundles;
  RoundState round;
  Rational bound_base;  // f_total + sum_j r d_av(j)
  Rational bound;       // B(gamma) * bound_base
};

// Full FTMtMed pipeline. Throws InfeasibleError or InvariantError.
MatroidRun SolveMatroidInstance(const Instance& inst);

// Same pipeline from a given feasible fractional point instead of the LP
// optimum. Each client's x must fill its nearest facilities first.
MatroidRun SolveMatroidFrom(const Instance& inst, FractionalSolution lp);

}  // namespace ftclust

#endif  // FTCLUST_ROUNDING_H_
