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

#ifndef FTCLUST_ORACLE_H_
#define FTCLUST_ORACLE_H_

#include <cstdint>

#include "ftclust/instance.h"

namespace ftclust {

inline constexpr int kDefaultOracleGuard = 20;

struct ExactResult {
  FacilitySet opt_set;
  CostBreakdown cost;
  std::int64_t enumerated = 0;  // feasible sets whose cost was evaluated
};

// Minimum-cost feasible open set; ties go to the lexicographically smallest
// sorted set. Throws SchemaError when |F| > guard, InfeasibleError when no
// set is feasible.
ExactResult ExactSolve(const Instance& inst, int guard = kDefaultOracleGuard);

// M-LP optimum for matroid instances. For knapsack instances, K-LP with the
// guess (OPT, OPT_f) taken from `exact` when given, else K-LP without any
// guess-based fixing.
Rational LpLowerBound(const Instance& inst, const ExactResult* exact = nullptr);

}  // namespace ftclust

#endif  // FTCLUST_ORACLE_H_
