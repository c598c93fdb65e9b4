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

#include "ftclust/filtering.h"

#include <algorithm>
#include <string>

namespace ftclust {

std::vector<int> FindDangerous(const SplitState& state, const Rational& gamma) {
  std::vector<int> out;
  const int r = state.instance().r;
  for (int j = 0; j < state.instance().num_clients(); ++j) {
    const ClientStats& s = state.stats[j];
    if (s.d_max > 3 * gamma * s.d_av_t[r - 1]) out.push_back(j);
  }
  return out;
}

FilterState FilterConflicts(const SplitState& state, const Rational& gamma,
                            const std::vector<int>& dangerous) {
  const int nc = state.instance().num_clients();
  FilterState f;
  f.gamma = gamma;
  f.dangerous = dangerous;
  f.demand.assign(nc, 0);
  f.marked_by.assign(nc, -1);
  f.is_dangerous.assign(nc, 0);
  f.in_d_prime.assign(nc, 0);
  for (int j : dangerous) f.is_dangerous[j] = 1;
  std::vector<int> order = dangerous;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return state.stats[a].d_av < state.stats[b].d_av;
  });
  const Instance& inst = state.instance();
  for (int j : order) {
    if (f.marked_by[j] >= 0) continue;
    f.d_prime.push_back(j);
    f.in_d_prime[j] = 1;
    for (int k : order) {
      if (f.marked_by[k] >= 0) continue;
      const Rational bound =
          6 * std::max(state.stats[j].d_av, state.stats[k].d_av);
      if (k == j || inst.client_distance(j, k) <= bound) {
        f.marked_by[k] = j;
        ++f.demand[j];
      }
    }
  }
  return f;
}

FilterState RunFiltering(const SplitState& state, const Rational& gamma,
                         Certificate* cert) {
  FilterState f = FilterConflicts(state, gamma, FindDangerous(state, gamma));
  CheckFilterInvariants(state, f, cert);
  return f;
}

std::vector<Ball> BuildBalls(const SplitState& state, const FilterState& filt,
                             std::span<const char> alive) {
  std::vector<Ball> balls;
  for (int j : filt.d_prime) {
    balls.push_back(MakeBall(state, j, filt.Radius(state, j), alive));
  }
  return balls;
}

void CheckFilterInvariants(const SplitState& state, const FilterState& filt,
                           Certificate* cert) {
  const Instance& inst = state.instance();
  const int r = inst.r;
  const Rational& gamma = filt.gamma;
  auto name = [&](int j) { return "client " + inst.client_ids[j]; };
  for (int j = 0; j < inst.num_clients(); ++j) {
    const ClientStats& s = state.stats[j];
    cert->Check("filter.dangerous_definition",
                (s.d_max > 3 * gamma * s.d_av_t[r - 1]) == bool(filt.is_dangerous[j]),
                name(j));
  }
  int total = 0;
  std::vector<int> position(inst.num_clients(), -1);
  for (size_t p = 0; p < filt.d_prime.size(); ++p) position[filt.d_prime[p]] = p;
  for (int j : filt.d_prime) total += filt.demand[j];
  cert->Check("filter.demand_sum", total == static_cast<int>(filt.dangerous.size()));
  for (size_t p = 1; p < filt.d_prime.size(); ++p) {
    cert->Check("filter.marker_order",
                state.stats[filt.d_prime[p - 1]].d_av <= state.stats[filt.d_prime[p]].d_av);
  }
  for (int k : filt.dangerous) {
    const int j = filt.marked_by[k];
    cert->Check("filter.marked_once", j >= 0 && filt.in_d_prime[j], name(k));
    cert->Check("filter.conflict",
                inst.client_distance(j, k) <=
                    6 * std::max(state.stats[j].d_av, state.stats[k].d_av),
                name(k));
    cert->Check("filter.marker_d_av", state.stats[k].d_av >= state.stats[j].d_av,
                name(k));
  }
  std::vector<Ball> balls = BuildBalls(state, filt);
  for (size_t a = 0; a < balls.size(); ++a) {
    const int j = filt.d_prime[a];
    const Rational mass = state.Mass(balls[a].members);
    cert->Check("lemma1.ball_mass",
                mass >= r - Rational(1, 3) && mass < r, name(j));
    for (size_t b = a + 1; b < balls.size(); ++b) {
      const int jj = filt.d_prime[b];
      CopySet common;
      std::set_intersection(balls[a].members.begin(), balls[a].members.end(),
                            balls[b].members.begin(), balls[b].members.end(),
                            std::back_inserter(common));
      cert->Check("lemma1.disjoint_balls", common.empty(),
                  name(j) + " and " + name(jj));
      const Rational& dj = state.stats[j].d_max;
      const Rational& djj = state.stats[jj].d_max;
      cert->Check("lemma1.separation",
                  inst.client_distance(j, jj) >=
                      std::max(dj, djj) - std::min(dj, djj) / gamma,
                  name(j) + " and " + name(jj));
    }
  }
}

}  // namespace ftclust
