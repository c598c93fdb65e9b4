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

#ifndef FTCLUST_TESTS_TEST_UTIL_H_
#define FTCLUST_TESTS_TEST_UTIL_H_

#include <cstdint>
#include <string>
#include <vector>

#include "ftclust/fractional.h"
#include "ftclust/instance.h"
#include "ftclust/rational.h"

namespace ftclust::testing {

inline Rational Q(const char* text) { return ParseRational(text); }

// Canonical num/den; mpq_class(num, den) does not reduce.
inline Rational Frac(long num, long den) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

// Points on a line: clients at `client_pos`, facilities at `facility_pos`.
Instance LineInstance(const std::vector<Rational>& client_pos,
                      const std::vector<Rational>& facility_pos, int r,
                      SideConstraint constraint,
                      std::vector<Rational> open_cost = {});

// An instance on clustered points with a hand-made fractional point: random
// y (mostly tiny or near 1) and x filling each client from its nearest
// facilities. Such points produce dangerous clients far more often than LP
// optima do. Matroid cases use a uniform matroid of rank ceil(sum y); knapsack
// cases use a budget equal to the fractional weight.
struct CraftedCase {
  Instance inst;
  FractionalSolution lp;
};

CraftedCase MakeCraftedCase(std::uint64_t seed, ConstraintKind kind);

}  // namespace ftclust::testing

#endif  // FTCLUST_TESTS_TEST_UTIL_H_
