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

#include "ftclust/fractional.h"

#include <algorithm>
#include <string>

#include "ftclust/errors.h"
#include "ftclust/lp.h"

namespace ftclust {
namespace {

void InsertSorted(CopySet* set, int value) {
  set->insert(std::lower_bound(set->begin(), set->end(), value), value);
}

bool Contains(const CopySet& set, int value) {
  return std::binary_search(set.begin(), set.end(), value);
}

void Require(bool ok, const char* check, const std::string& detail) {
  if (!ok) throw InvariantError(check, detail);
}

}  // namespace

LinearProgram MatroidRelaxationLp(const Instance& inst) {
  const int nc = inst.num_clients();
  const int nf = inst.num_facilities();
  LinearProgram lp;
  for (int i = 0; i < nf; ++i) {
    lp.AddVariable("y_" + std::to_string(i), 0, Rational(1), inst.open_cost[i]);
  }
  for (int j = 0; j < nc; ++j) {
    for (int i = 0; i < nf; ++i) {
      lp.AddVariable("x_" + std::to_string(i) + "_" + std::to_string(j), 0, Rational(1),
                     inst.d(j, i));
    }
  }
  for (int j = 0; j < nc; ++j) {
    std::vector<std::pair<int, Rational>> terms;
    for (int i = 0; i < nf; ++i) terms.emplace_back(RelaxationXVar(inst, j, i), 1);
    lp.AddConstraint("assign_" + std::to_string(j), std::move(terms),
                     Relation::kEqual, inst.r);
  }
  for (int j = 0; j < nc; ++j) {
    for (int i = 0; i < nf; ++i) {
      lp.AddConstraint("open_" + std::to_string(i) + "_" + std::to_string(j),
                       {{RelaxationXVar(inst, j, i), 1}, {i, -1}}, Relation::kLessEqual,
                       0);
    }
  }
  return lp;
}

FractionalSolution SolveMatroidRelaxation(const Instance& inst) {
  const int nc = inst.num_clients();
  const int nf = inst.num_facilities();
  LinearProgram lp = MatroidRelaxationLp(inst);
  std::vector<int> y_var(nf);
  for (int i = 0; i < nf; ++i) y_var[i] = i;
  std::vector<std::vector<int>> x_var(nc, std::vector<int>(nf));
  for (int j = 0; j < nc; ++j) {
    for (int i = 0; i < nf; ++i) x_var[j][i] = RelaxationXVar(inst, j, i);
  }
  std::vector<int> identity(nf);
  for (int i = 0; i < nf; ++i) identity[i] = i;
  MatroidCutStats stats;
  VertexSolution sol;
  try {
    sol = SolveWithMatroidCuts(std::move(lp), inst.matroid(), y_var, identity,
                               nullptr, &stats);
  } catch (const InfeasibleError&) {
    throw InfeasibleError("no feasible fault-tolerant solution");
  }
  FractionalSolution out;
  out.y.resize(nf);
  out.x.assign(nc, std::vector<Rational>(nf));
  for (int i = 0; i < nf; ++i) out.y[i] = sol.values[y_var[i]];
  for (int j = 0; j < nc; ++j) {
    for (int i = 0; i < nf; ++i) out.x[j][i] = sol.values[x_var[j][i]];
  }
  out.objective = sol.objective;
  out.cut_rounds = stats.rounds;
  out.cuts_added = stats.cuts_added;
  return out;
}

void SplitState::RebuildPositions() {
  position_.assign(order_.size(), 0);
  for (size_t p = 0; p < order_.size(); ++p) position_[order_[p]] = p;
}

int SplitState::Split(int k, const Rational& first_mass) {
  if (sgn(first_mass) <= 0 || first_mass >= y[k]) {
    throw InvariantError("split.mass", "split mass must lie strictly inside");
  }
  const int fresh = num_copies();
  original_of.push_back(original_of[k]);
  y.push_back(y[k] - first_mass);
  y[k] = first_mass;
  order_.insert(std::find(order_.begin(), order_.end(), k) + 1, fresh);
  RebuildPositions();
  for (auto& set : fj) {
    if (Contains(set, k)) InsertSorted(&set, fresh);
  }
  for (auto& groups : fjt) {
    for (auto& set : groups) {
      if (Contains(set, k)) InsertSorted(&set, fresh);
    }
  }
  ++splits;
  return fresh;
}

std::vector<int> SplitState::SortedForClient(int client,
                                             std::span<const int> copies) const {
  std::vector<int> out(copies.begin(), copies.end());
  std::sort(out.begin(), out.end(), [&](int a, int b) {
    int c = cmp(Dist(client, a), Dist(client, b));
    if (c != 0) return c < 0;
    if (original_of[a] != original_of[b]) return original_of[a] < original_of[b];
    return position_[a] < position_[b];
  });
  return out;
}

Rational SplitState::Mass(std::span<const int> copies) const {
  Rational m = 0;
  for (int k : copies) m += y[k];
  return m;
}

SplitState SplitFacilities(const Instance& inst, const FractionalSolution& lp) {
  const int nc = inst.num_clients();
  const int nf = inst.num_facilities();
  const int r = inst.r;
  SplitState state(&inst);
  state.lp_objective = lp.objective;
  // xs[k][j]: assignment of client j to copy k.
  std::vector<std::vector<Rational>> xs;
  for (int i = 0; i < nf; ++i) {
    state.original_of.push_back(i);
    state.y.push_back(lp.y[i]);
    std::vector<Rational> col(nc);
    for (int j = 0; j < nc; ++j) col[j] = lp.x[j][i];
    xs.push_back(std::move(col));
  }
  state.order_.resize(nf);
  for (int i = 0; i < nf; ++i) state.order_[i] = i;
  state.RebuildPositions();

  // Per-client splitting so that x_kj is 0 or y_k for processed clients.
  for (int j = 0; j < nc; ++j) {
    for (int k = 0; k < state.num_copies(); ++k) {
      const Rational v = xs[k][j];
      if (sgn(v) == 0 || v == state.y[k]) continue;
      const int fresh = state.Split(k, v);
      std::vector<Rational> col(nc);
      for (int jj = 0; jj < nc; ++jj) {
        const Rational w = xs[k][jj];
        if (jj < j) {
          if (sgn(w) != 0) {
            xs[k][jj] = state.y[k];
            col[jj] = state.y[fresh];
          }
        } else if (jj == j) {
          xs[k][jj] = state.y[k];
          col[jj] = 0;
        } else {
          xs[k][jj] = std::min(w, state.y[k]);
          col[jj] = w - xs[k][jj];
        }
      }
      xs.push_back(std::move(col));
    }
  }
  state.fj.assign(nc, {});
  for (int j = 0; j < nc; ++j) {
    for (int k = 0; k < state.num_copies(); ++k) {
      if (sgn(xs[k][j]) > 0) state.fj[j].push_back(k);
    }
  }
  // Split at unit-mass boundaries along each client's distance order.
  for (int j = 0; j < nc; ++j) {
    std::vector<int> sorted = state.SortedForClient(j, state.fj[j]);
    Rational cumulative = 0;
    int next_boundary = 1;
    for (size_t p = 0; p < sorted.size(); ++p) {
      const int k = sorted[p];
      if (next_boundary < r && cumulative < next_boundary &&
          cumulative + state.y[k] > next_boundary) {
        const int fresh = state.Split(k, next_boundary - cumulative);
        sorted.insert(sorted.begin() + p + 1, fresh);
      }
      cumulative += state.y[k];
      while (next_boundary < r && cumulative >= next_boundary) ++next_boundary;
    }
  }
  state.fjt.assign(nc, std::vector<CopySet>(r));
  for (int j = 0; j < nc; ++j) {
    std::vector<int> sorted = state.SortedForClient(j, state.fj[j]);
    Rational cumulative = 0;
    for (int k : sorted) {
      // The group is determined by where the copy's mass starts.
      mpz_class t = cumulative.get_num() / cumulative.get_den();
      int group = static_cast<int>(t.get_si());
      if (group >= r) group = r - 1;
      state.fjt[j][group].push_back(k);
      cumulative += state.y[k];
    }
    for (auto& g : state.fjt[j]) std::sort(g.begin(), g.end());
  }
  state.stats.resize(nc);
  for (int j = 0; j < nc; ++j) state.stats[j] = ComputeClientStats(state, j);
  state.f_total = 0;
  for (int k = 0; k < state.num_copies(); ++k) {
    state.f_total += inst.open_cost[state.original_of[k]] * state.y[k];
  }
  CheckSplitInvariants(state, lp);
  return state;
}

ClientStats ComputeClientStats(const SplitState& state, int client) {
  const int r = state.instance().r;
  ClientStats s;
  s.d_av_t.assign(r, Rational(0));
  s.d_max_t.assign(r, Rational(0));
  Rational sum = 0;
  for (int t = 0; t < r; ++t) {
    for (int k : state.fjt[client][t]) {
      const Rational& d = state.Dist(client, k);
      s.d_av_t[t] += state.y[k] * d;
      s.d_max_t[t] = std::max(s.d_max_t[t], d);
    }
    sum += s.d_av_t[t];
  }
  s.d_av = sum / r;
  s.d_max = s.d_max_t[r - 1];
  return s;
}

void CheckSplitInvariants(const SplitState& state, const FractionalSolution& lp) {
  const Instance& inst = state.instance();
  const int nc = inst.num_clients();
  const int nf = inst.num_facilities();
  const int r = inst.r;
  for (int k = 0; k < state.num_copies(); ++k) {
    Require(sgn(state.y[k]) >= 0 && state.y[k] <= 1, "split.y_range",
            "copy " + std::to_string(k));
  }
  std::vector<Rational> mass(nf);
  for (int k = 0; k < state.num_copies(); ++k) {
    mass[state.original_of[k]] += state.y[k];
  }
  for (int i = 0; i < nf; ++i) {
    Require(mass[i] == lp.y[i], "split.mass_conservation",
            "facility " + inst.facility_ids[i]);
  }
  Rational objective = state.f_total;
  for (int j = 0; j < nc; ++j) {
    Require(state.Mass(state.fj[j]) == r, "split.client_volume",
            "client " + inst.client_ids[j]);
    CopySet joined;
    for (int t = 0; t < r; ++t) {
      const auto& g = state.fjt[j][t];
      Require(state.Mass(g) == 1, "split.unit_groups",
              "client " + inst.client_ids[j] + " group " + std::to_string(t + 1));
      joined.insert(joined.end(), g.begin(), g.end());
      if (t + 1 < r) {
        Rational far = 0;
        for (int k : g) far = std::max(far, state.Dist(j, k));
        for (int k : state.fjt[j][t + 1]) {
          Require(state.Dist(j, k) >= far, "split.group_order",
                  "client " + inst.client_ids[j]);
        }
      }
    }
    std::sort(joined.begin(), joined.end());
    Require(joined == state.fj[j], "split.partition",
            "client " + inst.client_ids[j]);
    const ClientStats& s = state.stats[j];
    for (int t = 0; t < r; ++t) {
      Require(s.d_av_t[t] <= s.d_max_t[t], "split.chain",
              "client " + inst.client_ids[j]);
      if (t + 1 < r) {
        Require(s.d_max_t[t] <= s.d_av_t[t + 1], "split.chain",
                "client " + inst.client_ids[j]);
      }
    }
    Rational sum = 0;
    for (const auto& v : s.d_av_t) sum += v;
    Require(r * s.d_av == sum, "split.d_av_sum", "client " + inst.client_ids[j]);
    objective += r * s.d_av;
  }
  Require(objective == lp.objective, "split.objective",
          "split objective differs from the relaxation optimum");
  Require(state.num_copies() <= nf * (2 * nc + 1), "split.copy_bound",
          std::to_string(state.num_copies()) + " copies");
}

bool InBall(const SplitState& state, int client, const Rational& radius,
            int copy) {
  return state.Dist(client, copy) <= radius;
}

Ball MakeBall(const SplitState& state, int client, const Rational& radius,
              std::span<const char> alive) {
  Ball b{client, radius, {}};
  for (int k = 0; k < state.num_copies(); ++k) {
    if (!alive.empty() && !alive[k]) continue;
    if (InBall(state, client, radius, k)) b.members.push_back(k);
  }
  return b;
}

}  // namespace ftclust
