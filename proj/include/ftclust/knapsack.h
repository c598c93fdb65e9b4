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

#ifndef FTCLUST_KNAPSACK_H_
#define FTCLUST_KNAPSACK_H_

#include <span>
#include <tuple>
#include <vector>

#include "ftclust/bundling.h"
#include "ftclust/certificate.h"
#include "ftclust/filtering.h"
#include "ftclust/fractional.h"
#include "ftclust/instance.h"
#include "ftclust/rounding.h"

namespace ftclust {

struct GuessPair {
  Rational opt;
  Rational opt_f;
};

// {0} plus the powers (1+eps)^k for ceil(log lb) <= k <= ceil(log ub).
// Only {0} when lb is not positive.
std::vector<Rational> GeometricGrid(const Rational& lb, const Rational& ub,
                                    const Rational& eps);

struct GuessGrid {
  Rational lb, ub;      // OPT' axis
  Rational lb_f, ub_f;  // OPT'_f axis
  std::vector<Rational> opt_values;
  std::vector<Rational> optf_values;

  size_t size() const { return opt_values.size() * optf_values.size(); }
};

GuessGrid MakeGuessGrid(const Instance& inst, const Rational& eps);

// max{delta >= 0 : sum_k max(0, delta - distances[k]) <= opt}. `distances`
// must contain a zero (the client itself).
Rational KumarDelta(std::span<const Rational> distances, const Rational& opt);
Rational KumarDelta(const Instance& inst, int client, const Rational& opt);

// Variables fixed to zero by K-LP.3 and K-LP.4.
struct KnapsackPattern {
  std::vector<std::vector<char>> allowed_pair;  // [client][facility]
  std::vector<char> allowed_facility;

  bool operator<(const KnapsackPattern& o) const {
    return std::tie(allowed_pair, allowed_facility) <
           std::tie(o.allowed_pair, o.allowed_facility);
  }
};

KnapsackPattern PatternFor(const Instance& inst, const GuessPair& guess);
KnapsackPattern OpenPattern(const Instance& inst);  // nothing fixed

// K-LP: M-LP variables plus the knapsack row, with pattern fixings as upper
// bounds of zero.
LinearProgram KnapsackRelaxationLp(const Instance& inst, const KnapsackPattern& pattern);

// Vertex optimum of K-LP restricted by `pattern`; throws InfeasibleError.
FractionalSolution SolveKnapsackRelaxation(const Instance& inst,
                                           const KnapsackPattern& pattern);

struct TCase {
  int T = 0;
  std::vector<int> nontight;  // originals
  std::vector<int> chain;     // copies i_0, i_1, ...
};

// Counts non-tight originals at the K-IR exit and rebuilds the alternating
// chain for T in {1, 2}. Throws InvariantError on any other structure.
TCase ClassifyT(const SplitState& state, const RoundState& rs,
                Certificate* cert);

// Integral opening per copy after the case-specific rounding. Chain and flow
// bundles in `rs` are replaced by their singleton subsets.
std::vector<char> RoundChain(const SplitState& state, const TCase& tcase,
                             const Rational& opt_f, RoundState* rs,
                             Certificate* cert);
std::vector<char> RoundFlow(const SplitState& state, RoundState* rs,
                            Certificate* cert);

struct KnapsackRun {
  Solution solution;
  Certificate cert;
  GuessPair guess;
  TCase tcase;
  FractionalSolution lp;
  SplitState split;
  FilterState filter;
  BundleState bundles;
  RoundState round;
  // Driver statistics.
  GuessGrid grid;
  int patterns = 0;
  int infeasible_patterns = 0;
};

// One pipeline run for a fixed guess; throws InfeasibleError when K-LP is.
KnapsackRun SolveKnapsackGuess(const Instance& inst, const GuessPair& guess,
                               const KnapsackPattern& pattern);

// Pipeline from a given K-LP point (split onward). The point must satisfy the
// knapsack row and K-LP.4 for `guess`.
KnapsackRun SolveKnapsackFrom(const Instance& inst, const GuessPair& guess,
                              FractionalSolution lp);

// Best solution over the whole guess grid.
KnapsackRun SolveKnapsackInstance(const Instance& inst);

// max{B(gamma), 7 + (gamma + 6) C8}: coefficient of the LP value in the
// per-guess bound cost <= coef * LP + C8 * OPT' + OPT'_f.
Rational KnapsackGuessCoefficient(const Rational& gamma);

}  // namespace ftclust

#endif  // FTCLUST_KNAPSACK_H_
