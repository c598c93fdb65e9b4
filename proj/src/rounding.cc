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

#include "ftclust/rounding.h"

#include <algorithm>
#include <map>
#include <string>

#include "ftclust/errors.h"
#include "ftclust/lp.h"

namespace ftclust {
namespace {

bool Intersects(const CopySet& a, const CopySet& b) {
  CopySet common;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(common));
  return !common.empty();
}

std::string Who(const SplitState& state, int j) {
  return "client " + state.instance().client_ids[j];
}

// Live members of B_j.
CopySet LiveBall(const SplitState& state, const FilterState& filt,
                 const RoundState& rs, int j) {
  return MakeBall(state, j, filt.Radius(state, j), rs.alive).members;
}

CopySet QueuePrefix(const RoundState& rs, int j, int count) {
  CopySet out;
  for (int t = 0; t < count; ++t) {
    const CopySet& u = rs.bundles[rs.queues[j][t]];
    out.insert(out.end(), u.begin(), u.end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Per-copy objective coefficients and the constant term.
void Coefficients(const SplitState& state, const FilterState& filt,
                  const RoundState& rs, std::vector<Rational>* coef,
                  Rational* constant) {
  const Instance& inst = state.instance();
  const int r = inst.r;
  coef->assign(state.num_copies(), Rational(0));
  *constant = 0;
  for (int k = 0; k < state.num_copies(); ++k) {
    if (rs.alive[k]) (*coef)[k] = inst.open_cost[state.original_of[k]];
  }
  for (int j : filt.d_prime) {
    const Rational n = filt.demand[j];
    switch (rs.status[j]) {
      case ClientStatus::kUndecided: {
        const Rational cap = state.stats[j].d_max / filt.gamma;
        *constant += n * r * cap;
        for (int k : LiveBall(state, filt, rs, j)) {
          (*coef)[k] += n * (state.Dist(j, k) - cap);
        }
        break;
      }
      case ClientStatus::kD0:
      case ClientStatus::kD1: {
        const int count = rs.status[j] == ClientStatus::kD0 ? r - 1 : r;
        for (int k : QueuePrefix(rs, j, count)) {
          if (rs.alive[k]) (*coef)[k] += n * state.Dist(j, k);
        }
        break;
      }
    }
  }
}

}  // namespace

Rational Lemma8Factor(const Rational& g) {
  return (3 * g * g - g + 2) / (g * (g - 1));
}

Rational Lemma9Factor(const Rational& g) {
  return (7 * g * g - 2 * g + 3) / ((g - 1) * (g - 1));
}

Rational MatroidBound(const Rational& g) {
  const Rational a = 7 + (3 * g * g - g + 2) / (g - 1);
  const Rational b = 3 + (21 * g * g * g - 6 * g * g + 9 * g) / ((g - 1) * (g - 1));
  return std::max(a, b);
}

Rational KnapsackBound(const Rational& g, const Rational& eps) {
  return MatroidBound(g) + (1 + eps) * Lemma8Factor(g) + (1 + eps);
}

Rational IterativeObjective(const SplitState& state, const FilterState& filt,
                            const RoundState& rs, std::span<const Rational> z) {
  std::vector<Rational> coef;
  Rational value;
  Coefficients(state, filt, rs, &coef, &value);
  for (int k = 0; k < state.num_copies(); ++k) {
    if (rs.alive[k]) value += coef[k] * z[k];
  }
  return value;
}

RoundState RunIterative(const SplitState& state, const FilterState& filt,
                        const BundleState& bund, const IterativeOptions& options,
                        Certificate* cert) {
  const Instance& inst = state.instance();
  const int r = inst.r;
  const int nf = state.num_copies();
  RoundState rs;
  rs.z.assign(nf, Rational(0));
  rs.alive.assign(nf, 1);
  rs.bundles = bund.bundles;
  rs.bundle_alive.assign(bund.bundles.size(), 1);
  rs.shell = bund.shell;
  rs.queues = bund.queues;
  rs.status.assign(inst.num_clients(), ClientStatus::kUndecided);

  Rational lemma5 = state.f_total;
  for (int k : filt.dangerous) lemma5 += r * state.stats[k].d_av;

  std::optional<Rational> last_value;
  while (true) {
    std::vector<Rational> coef;
    LinearProgram lp;
    Coefficients(state, filt, rs, &coef, &lp.objective_constant);
    std::vector<int> var_of(nf, -1), copy_vars, copy_original;
    for (int k = 0; k < nf; ++k) {
      if (!rs.alive[k]) continue;
      const int i = state.original_of[k];
      Rational upper = 1;
      if (options.opt_f_guess && inst.open_cost[i] > *options.opt_f_guess) upper = 0;
      var_of[k] = lp.AddVariable("z_" + std::to_string(k), 0, upper, coef[k]);
      copy_vars.push_back(var_of[k]);
      copy_original.push_back(i);
    }
    auto terms_of = [&](const CopySet& copies, auto weight) {
      std::vector<std::pair<int, Rational>> terms;
      for (int k : copies) {
        if (rs.alive[k]) terms.emplace_back(var_of[k], weight(k));
      }
      return terms;
    };
    auto unit = [](int) { return Rational(1); };
    for (size_t u = 0; u < rs.bundles.size(); ++u) {
      if (!rs.bundle_alive[u]) continue;
      lp.AddConstraint("bundle_" + std::to_string(u), terms_of(rs.bundles[u], unit),
                       Relation::kEqual, 1);
    }
    for (int j : filt.d_prime) {
      if (rs.status[j] != ClientStatus::kUndecided) continue;
      const CopySet ball = LiveBall(state, filt, rs, j);
      lp.AddConstraint("ball_lo_" + std::to_string(j), terms_of(ball, unit),
                       Relation::kGreaterEqual, r - 1);
      lp.AddConstraint("ball_hi_" + std::to_string(j), terms_of(ball, unit),
                       Relation::kLessEqual, r);
    }
    VertexSolution sol;
    if (options.knapsack) {
      std::map<int, CopySet> copies_of;
      for (int k = 0; k < nf; ++k) {
        if (rs.alive[k]) copies_of[state.original_of[k]].push_back(k);
      }
      for (const auto& [i, copies] : copies_of) {
        lp.AddConstraint("copies_" + std::to_string(i), terms_of(copies, unit),
                         Relation::kLessEqual, 1);
      }
      CopySet live;
      for (int k = 0; k < nf; ++k) {
        if (rs.alive[k]) live.push_back(k);
      }
      lp.AddConstraint("knapsack",
                       terms_of(live, [&](int k) {
                         return inst.knapsack().weights[state.original_of[k]];
                       }),
                       Relation::kLessEqual, inst.knapsack().budget);
      sol = SolveVertex(lp);
      if (sol.status != LpStatus::kOptimal) {
        throw InvariantError("alg2.solve", "auxiliary LP is not solvable");
      }
    } else {
      AddCopyCuts(&lp, inst.matroid(), copy_vars, copy_original, rs.cuts);
      MatroidCutStats stats;
      try {
        sol = SolveWithMatroidCuts(lp, inst.matroid(), copy_vars, copy_original,
                                   &rs.cuts, &stats);
      } catch (const InfeasibleError&) {
        throw InvariantError("alg2.solve", "auxiliary LP is infeasible");
      }
      rs.cut_rounds += stats.rounds;
    }
    ++rs.solves;
    for (int k = 0; k < nf; ++k) {
      if (rs.alive[k]) rs.z[k] = sol.values[var_of[k]];
    }
    cert->Check("alg2.objective_consistent",
                sol.objective == IterativeObjective(state, filt, rs, rs.z));
    if (rs.solves == 1) {
      rs.initial_optimum = sol.objective;
      cert->Check("lemma5.initial_optimum", sol.objective <= lemma5,
                  sol.objective.get_str() + " > " + lemma5.get_str());
    } else {
      cert->Check("lemma6.monotone", sol.objective <= *last_value);
    }
    rs.history.push_back({"solve", -1, sol.objective});
    cert->Check("alg2.iterations",
                rs.solves <= static_cast<int>(filt.d_prime.size()) + 1);

    // Lines 4-5: drop zero copies everywhere.
    for (int k = 0; k < nf; ++k) {
      if (rs.alive[k] && sgn(rs.z[k]) == 0) rs.alive[k] = 0;
    }
    for (auto& u : rs.bundles) {
      std::erase_if(u, [&](int k) { return !rs.alive[k]; });
    }

    int tight_r = -1, tight_r1 = -1;
    std::vector<int> ids = filt.d_prime;
    std::sort(ids.begin(), ids.end());
    for (int j : ids) {
      if (rs.status[j] != ClientStatus::kUndecided) continue;
      Rational mass = 0;
      for (int k : LiveBall(state, filt, rs, j)) mass += rs.z[k];
      if (mass == r && tight_r < 0) tight_r = j;
      if (mass == r - 1 && tight_r1 < 0) tight_r1 = j;
    }
    const Rational before = IterativeObjective(state, filt, rs, rs.z);
    if (tight_r >= 0) {
      const int j = tight_r;
      const CopySet fresh = [&] {
        CopySet ball = LiveBall(state, filt, rs, j);
        CopySet prefix = QueuePrefix(rs, j, r - 1);
        CopySet out;
        std::set_difference(ball.begin(), ball.end(), prefix.begin(), prefix.end(),
                            std::back_inserter(out));
        return out;
      }();
      Rational fresh_mass = 0;
      for (int k : fresh) fresh_mass += rs.z[k];
      cert->Check("lemma6.new_bundle_mass", fresh_mass == 1, Who(state, j));
      std::vector<char> protect(rs.bundles.size(), 0);
      for (int c = 0; c < inst.num_clients(); ++c) {
        const int keep = filt.in_d_prime[c] ? r - 1 : static_cast<int>(rs.queues[c].size());
        for (int t = 0; t < keep && t < static_cast<int>(rs.queues[c].size()); ++t) {
          protect[rs.queues[c][t]] = 1;
        }
      }
      std::vector<int> removed;
      for (size_t u = 0; u < rs.bundles.size(); ++u) {
        if (rs.bundle_alive[u] && Intersects(rs.bundles[u], fresh)) {
          cert->Check("alg2.removed_shell", rs.shell[u] && !protect[u],
                      "bundle " + std::to_string(u));
          rs.bundle_alive[u] = 0;
          removed.push_back(u);
        }
      }
      const int id = static_cast<int>(rs.bundles.size());
      rs.bundles.push_back(fresh);
      rs.bundle_alive.push_back(1);
      rs.shell.push_back(0);
      rs.queues[j][r - 1] = id;
      for (int jp : filt.d_prime) {
        int& last = rs.queues[jp][r - 1];
        if (std::find(removed.begin(), removed.end(), last) != removed.end()) last = id;
      }
      rs.status[j] = ClientStatus::kD1;
      rs.d1.push_back(j);
      const Rational after = IterativeObjective(state, filt, rs, rs.z);
      cert->Check("lemma6.d1_unchanged", after == before, Who(state, j));
      rs.history.push_back({"d1", j, after});
      last_value = after;
    } else if (tight_r1 >= 0) {
      const int j = tight_r1;
      rs.status[j] = ClientStatus::kD0;
      rs.d0.push_back(j);
      const Rational after = IterativeObjective(state, filt, rs, rs.z);
      cert->Check("lemma6.d0_decrease",
                  before - after ==
                      filt.demand[j] * state.stats[j].d_max / filt.gamma,
                  Who(state, j));
      rs.history.push_back({"d0", j, after});
      last_value = after;
    } else {
      break;
    }
  }
  if (!options.knapsack) {
    for (int k = 0; k < nf; ++k) {
      cert->Check("lemma7.integral", !rs.alive[k] || IsIntegral(rs.z[k]),
                  "copy " + std::to_string(k));
    }
    for (int j : filt.d_prime) {
      cert->Check("lemma7.partition", rs.status[j] != ClientStatus::kUndecided,
                  Who(state, j));
    }
  }
  return rs;
}

void CheckFinalBundles(const SplitState& state, const FilterState& filt,
                       const BundleState& initial, const RoundState& rs,
                       std::span<const char> open,
                       std::span<const int> dangerous_scope, Certificate* cert) {
  const Instance& inst = state.instance();
  const int r = inst.r;
  std::vector<int> open_of;
  for (size_t u = 0; u < rs.bundles.size(); ++u) {
    if (!rs.bundle_alive[u]) continue;
    int count = 0, chosen = -1;
    for (int k : rs.bundles[u]) {
      if (open[k]) {
        ++count;
        chosen = k;
      }
    }
    cert->Check("final.one_open_per_bundle", count == 1,
                "bundle " + std::to_string(u));
    open_of.push_back(chosen);
  }
  auto sorted_distances = [&](int j) {
    std::vector<Rational> d;
    for (int k : open_of) d.push_back(state.Dist(j, k));
    std::sort(d.begin(), d.end());
    return d;
  };
  const Rational c8 = Lemma8Factor(filt.gamma);
  const Rational c9 = Lemma9Factor(filt.gamma);
  for (int j : dangerous_scope) {
    const Rational radius = filt.Radius(state, j);
    int inside = 0;
    for (int k : open_of) inside += InBall(state, j, radius, k) ? 1 : 0;
    cert->Check("lemma8.bundles_in_ball", inside >= r - 1, Who(state, j));
    std::vector<Rational> d = sorted_distances(j);
    cert->Check("lemma8.rth_bundle",
                static_cast<int>(d.size()) >= r &&
                    d[r - 1] <= c8 * state.stats[j].d_max,
                Who(state, j));
  }
  for (int j = 0; j < inst.num_clients(); ++j) {
    if (filt.is_dangerous[j]) continue;
    const int l = static_cast<int>(initial.queues[j].size());
    std::vector<Rational> d = sorted_distances(j);
    bool ok = static_cast<int>(d.size()) >= r;
    for (int t = 0; ok && t < r; ++t) {
      const Rational& dt = state.stats[j].d_max_t[t];
      const Rational limit = (t + 1 < r || l == r) ? Rational(3 * dt) : Rational(c9 * dt);
      ok = d[t] <= limit;
    }
    cert->Check("lemma9.safe_witnesses", ok, Who(state, j));
  }
}

MatroidRun SolveMatroidInstance(const Instance& inst) {
  if (!inst.is_matroid()) throw SchemaError("instance has no matroid constraint");
  return SolveMatroidFrom(inst, SolveMatroidRelaxation(inst));
}

MatroidRun SolveMatroidFrom(const Instance& inst, FractionalSolution lp) {
  if (!inst.is_matroid()) throw SchemaError("instance has no matroid constraint");
  MatroidRun run;
  run.lp = std::move(lp);
  run.split = SplitFacilities(inst, run.lp);
  run.cert.Check("split.invariants", true);
  const Rational gamma = 3 + inst.delta;
  run.filter = RunFiltering(run.split, gamma, &run.cert);
  run.bundles = RunBundling(&run.split, run.filter, &run.cert);
  run.round = RunIterative(run.split, run.filter, run.bundles, {}, &run.cert);

  const SplitState& s = run.split;
  std::vector<char> open(s.num_copies(), 0);
  std::vector<int> copies_open(inst.num_facilities(), 0);
  FacilitySet chosen;
  for (int k = 0; k < s.num_copies(); ++k) {
    if (run.round.alive[k] && run.round.z[k] == 1) {
      open[k] = 1;
      if (copies_open[s.original_of[k]]++ == 0) chosen.push_back(s.original_of[k]);
    }
  }
  for (int i = 0; i < inst.num_facilities(); ++i) {
    run.cert.Check("extract.one_copy_per_facility", copies_open[i] <= 1,
                   "facility " + inst.facility_ids[i]);
  }
  std::sort(chosen.begin(), chosen.end());
  run.cert.Check("extract.independent", IsIndependent(inst.matroid(), chosen));
  run.cert.Check("extract.size", static_cast<int>(chosen.size()) >= inst.r);
  CheckFinalBundles(s, run.filter, run.bundles, run.round, open,
                    run.filter.d_prime, &run.cert);
  run.solution = MakeSolution(inst, chosen);
  run.bound_base = s.f_total;
  for (int j = 0; j < inst.num_clients(); ++j) run.bound_base += inst.r * s.stats[j].d_av;
  run.bound = MatroidBound(gamma) * run.bound_base;
  run.cert.Check("theorem1.cost_bound", run.solution.cost.total <= run.bound,
                 run.solution.cost.total.get_str() + " > " + run.bound.get_str());
  return run;
}

}  // namespace ftclust
