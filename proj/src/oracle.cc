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

#include "ftclust/oracle.h"

#include <functional>
#include <optional>
#include <string>

#include "ftclust/errors.h"
#include "ftclust/fractional.h"
#include "ftclust/knapsack.h"
#include "ftclust/matroid.h"

namespace ftclust {

ExactResult ExactSolve(const Instance& inst, int guard) {
  const int nf = inst.num_facilities();
  if (nf > guard) {
    throw SchemaError("oracle guard: " + std::to_string(nf) + " facilities exceed " +
                      std::to_string(guard));
  }
  ExactResult out;
  std::optional<Rational> best;
  FacilitySet current;

  std::function<void(int, const Rational&, const Rational&)> visit =
      [&](int next, const Rational& f_sum, const Rational& w_sum) {
        if (static_cast<int>(current.size()) >= inst.r) {
          const CostBreakdown c = SolutionCost(inst, current);
          ++out.enumerated;
          // DFS emits sets in lexicographic order, so the first minimum wins.
          if (!best || c.total < *best) {
            best = c.total;
            out.opt_set = current;
            out.cost = c;
          }
        }
        for (int i = next; i < nf; ++i) {
          const Rational f = f_sum + inst.open_cost[i];
          if (best && f > *best) continue;
          Rational w = w_sum;
          current.push_back(i);
          bool ok;
          if (inst.is_matroid()) {
            ok = IsIndependent(inst.matroid(), current);
          } else {
            w += inst.knapsack().weights[i];
            ok = w <= inst.knapsack().budget;
          }
          if (ok) visit(i + 1, f, w);
          current.pop_back();
        }
      };
  visit(0, Rational(0), Rational(0));
  if (!best) throw InfeasibleError("no feasible fault-tolerant solution");
  return out;
}

Rational LpLowerBound(const Instance& inst, const ExactResult* exact) {
  if (inst.is_matroid()) return SolveMatroidRelaxation(inst).objective;
  if (exact == nullptr) return SolveKnapsackRelaxation(inst, OpenPattern(inst)).objective;
  const GuessPair guess{exact->cost.total, exact->cost.facility_cost};
  return SolveKnapsackRelaxation(inst, PatternFor(inst, guess)).objective;
}

}  // namespace ftclust
