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

#ifndef FTCLUST_FILTERING_H_
#define FTCLUST_FILTERING_H_

#include <vector>

#include "ftclust/certificate.h"
#include "ftclust/fractional.h"

namespace ftclust {

struct FilterState {
  Rational gamma;
  std::vector<int> dangerous;       // D, ascending client id
  std::vector<int> d_prime;         // D', in selection order
  std::vector<int> demand;          // n_j per client, 0 outside D'
  std::vector<int> marked_by;       // marker in D' per client, -1 if safe
  std::vector<char> is_dangerous;
  std::vector<char> in_d_prime;

  // d_max(j) / gamma.
  Rational Radius(const SplitState& state, int j) const {
    return state.stats[j].d_max / gamma;
  }
};

// D = {j : d_max(j) > 3 gamma d_av^r(j)}.
std::vector<int> FindDangerous(const SplitState& state, const Rational& gamma);

// Greedy conflict filtering in (d_av, id) order.
FilterState FilterConflicts(const SplitState& state, const Rational& gamma,
                            const std::vector<int>& dangerous);

// Runs both steps above and checks the Lemma 1 invariants.
FilterState RunFiltering(const SplitState& state, const Rational& gamma,
                         Certificate* cert);

// B_j for every j in D', over the copies whose `alive` flag is set.
std::vector<Ball> BuildBalls(const SplitState& state, const FilterState& filt,
                             std::span<const char> alive = {});

// Lemma 1 and its proof steps; throws InvariantError.
void CheckFilterInvariants(const SplitState& state, const FilterState& filt,
                           Certificate* cert);

}  // namespace ftclust

#endif  // FTCLUST_FILTERING_H_
