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

#include "ftclust/knapsack.h"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/edmonds_karp_max_flow.hpp>

#include "ftclust/errors.h"
#include "ftclust/lp.h"

namespace ftclust {
namespace {

// Smallest k with q^k >= x (x > 0, q > 1), together with q^k.
std::pair<long, Rational> CeilLog(const Rational& q, const Rational& x) {
  long k = 0;
  Rational p = 1;
  if (p >= x) {
    while (Rational(p / q) >= x) {
      p /= q;
      --k;
    }
  } else {
    while (p < x) {
      p *= q;
      ++k;
    }
  }
  return {k, p};
}

Rational CopyMass(const SplitState& state, const RoundState& rs, int original) {
  Rational mass = 0;
  for (int k = 0; k < state.num_copies(); ++k) {
    if (rs.alive[k] && state.original_of[k] == original) mass += rs.z[k];
  }
  return mass;
}

bool Fractional(const Rational& v) { return sgn(v) > 0 && v < 1; }

// Partner of `k` through a live bundle whose fractional members are exactly
// two copies; -1 when there is none.
int BundlePartner(const RoundState& rs, int k) {
  for (size_t u = 0; u < rs.bundles.size(); ++u) {
    if (!rs.bundle_alive[u]) continue;
    const CopySet& b = rs.bundles[u];
    if (std::find(b.begin(), b.end(), k) == b.end()) continue;
    std::vector<int> frac;
    for (int c : b) {
      if (rs.alive[c] && Fractional(rs.z[c])) frac.push_back(c);
    }
    if (frac.size() != 2) return -1;
    return frac[0] == k ? frac[1] : frac[0];
  }
  return -1;
}

// Partner of `k` among the fractional copies of an upper-tight original.
int CopyPartner(const SplitState& state, const RoundState& rs, int k) {
  const int i = state.original_of[k];
  if (CopyMass(state, rs, i) != 1) return -1;
  std::vector<int> frac;
  for (int c = 0; c < state.num_copies(); ++c) {
    if (rs.alive[c] && state.original_of[c] == i && Fractional(rs.z[c])) {
      frac.push_back(c);
    }
  }
  if (frac.size() != 2) return -1;
  return frac[0] == k ? frac[1] : frac[0];
}

std::vector<int> WalkChain(const SplitState& state, const RoundState& rs, int start) {
  std::vector<int> chain{start};
  while (true) {
    const int cur = chain.back();
    const bool bundle_step = chain.size() % 2 == 1;
    const int next = bundle_step ? BundlePartner(rs, cur) : CopyPartner(state, rs, cur);
    if (next < 0 || std::find(chain.begin(), chain.end(), next) != chain.end()) break;
    chain.push_back(next);
  }
  return chain;
}

}  // namespace

std::vector<Rational> GeometricGrid(const Rational& lb, const Rational& ub,
                                    const Rational& eps) {
  std::vector<Rational> out{Rational(0)};
  if (sgn(lb) <= 0) return out;
  const Rational q = 1 + eps;
  auto [k_lo, p] = CeilLog(q, lb);
  const long k_hi = CeilLog(q, ub).first;
  for (long k = k_lo; k <= k_hi; ++k) {
    out.push_back(p);
    p *= q;
  }
  return out;
}

GuessGrid MakeGuessGrid(const Instance& inst, const Rational& eps) {
  GuessGrid g;
  const int nc = inst.num_clients();
  const int nf = inst.num_facilities();
  std::optional<Rational> lb, lb_f;
  Rational f_sum = 0;
  for (int i = 0; i < nf; ++i) {
    const Rational& f = inst.open_cost[i];
    f_sum += f;
    if (sgn(f) > 0) {
      if (!lb_f || f < *lb_f) lb_f = f;
      if (!lb || f < *lb) lb = f;
    }
  }
  g.ub = f_sum;
  for (int j = 0; j < nc; ++j) {
    std::vector<Rational> d;
    for (int i = 0; i < nf; ++i) {
      d.push_back(inst.d(j, i));
      if (sgn(d.back()) > 0 && (!lb || d.back() < *lb)) lb = d.back();
    }
    std::sort(d.rbegin(), d.rend());
    for (int t = 0; t < inst.r && t < nf; ++t) g.ub += d[t];
  }
  g.lb = lb.value_or(Rational(0));
  g.lb_f = lb_f.value_or(Rational(0));
  g.ub_f = f_sum;
  g.opt_values = GeometricGrid(g.lb, g.ub, eps);
  g.optf_values = GeometricGrid(g.lb_f, g.ub_f, eps);
  return g;
}

Rational KumarDelta(std::span<const Rational> distances, const Rational& opt) {
  std::vector<Rational> d(distances.begin(), distances.end());
  std::sort(d.begin(), d.end());
  if (d.empty() || sgn(d[0]) != 0) {
    throw std::invalid_argument("KumarDelta needs the zero self-distance");
  }
  Rational prefix = 0;
  const size_t n = d.size();
  for (size_t k = 1; k <= n; ++k) {
    prefix += d[k - 1];
    Rational delta = (opt + prefix) / static_cast<long>(k);
    if (k == n || delta <= d[k]) return delta;
  }
  return 0;  // unreachable
}

Rational KumarDelta(const Instance& inst, int client, const Rational& opt) {
  std::vector<Rational> d;
  for (int j = 0; j < inst.num_clients(); ++j) d.push_back(inst.client_distance(client, j));
  return KumarDelta(d, opt);
}

KnapsackPattern PatternFor(const Instance& inst, const GuessPair& guess) {
  KnapsackPattern p;
  p.allowed_pair.assign(inst.num_clients(),
                        std::vector<char>(inst.num_facilities(), 0));
  for (int j = 0; j < inst.num_clients(); ++j) {
    const Rational delta = KumarDelta(inst, j, guess.opt);
    for (int i = 0; i < inst.num_facilities(); ++i) {
      p.allowed_pair[j][i] = inst.d(j, i) <= delta;
    }
  }
  p.allowed_facility.resize(inst.num_facilities());
  for (int i = 0; i < inst.num_facilities(); ++i) {
    p.allowed_facility[i] = inst.open_cost[i] <= guess.opt_f;
  }
  return p;
}

KnapsackPattern OpenPattern(const Instance& inst) {
  KnapsackPattern p;
  p.allowed_pair.assign(inst.num_clients(),
                        std::vector<char>(inst.num_facilities(), 1));
  p.allowed_facility.assign(inst.num_facilities(), 1);
  return p;
}

LinearProgram KnapsackRelaxationLp(const Instance& inst, const KnapsackPattern& pattern) {
  LinearProgram lp = MatroidRelaxationLp(inst);
  for (int i = 0; i < inst.num_facilities(); ++i) {
    if (!pattern.allowed_facility[i]) lp.vars[i].upper = 0;
    for (int j = 0; j < inst.num_clients(); ++j) {
      if (!pattern.allowed_pair[j][i]) lp.vars[RelaxationXVar(inst, j, i)].upper = 0;
    }
  }
  std::vector<std::pair<int, Rational>> weight;
  for (int i = 0; i < inst.num_facilities(); ++i) {
    weight.emplace_back(i, inst.knapsack().weights[i]);
  }
  lp.AddConstraint("knapsack", std::move(weight), Relation::kLessEqual,
                   inst.knapsack().budget);
  return lp;
}

FractionalSolution SolveKnapsackRelaxation(const Instance& inst,
                                           const KnapsackPattern& pattern) {
  const int nc = inst.num_clients();
  const int nf = inst.num_facilities();
  const LinearProgram lp = KnapsackRelaxationLp(inst, pattern);
  const VertexSolution sol = SolveVertex(lp);
  if (sol.status != LpStatus::kOptimal) {
    throw InfeasibleError("no feasible fault-tolerant solution");
  }
  FractionalSolution out;
  out.y.resize(nf);
  out.x.assign(nc, std::vector<Rational>(nf));
  for (int i = 0; i < nf; ++i) out.y[i] = sol.values[i];
  for (int j = 0; j < nc; ++j) {
    for (int i = 0; i < nf; ++i) out.x[j][i] = sol.values[RelaxationXVar(inst, j, i)];
  }
  out.objective = sol.objective;
  return out;
}

TCase ClassifyT(const SplitState& state, const RoundState& rs, Certificate* cert) {
  const Instance& inst = state.instance();
  TCase tc;
  for (int i = 0; i < inst.num_facilities(); ++i) {
    if (Fractional(CopyMass(state, rs, i))) tc.nontight.push_back(i);
  }
  tc.T = static_cast<int>(tc.nontight.size());
  cert->Check("knapsack.t_range", tc.T <= 2, "T = " + std::to_string(tc.T));
  if (tc.T == 0) return tc;

  std::vector<int> ends;
  for (int i : tc.nontight) {
    std::vector<int> frac;
    for (int k = 0; k < state.num_copies(); ++k) {
      if (rs.alive[k] && state.original_of[k] == i && Fractional(rs.z[k])) frac.push_back(k);
    }
    cert->Check("knapsack.nontight_single_copy", frac.size() == 1,
                "facility " + inst.facility_ids[i]);
    ends.push_back(frac[0]);
  }
  if (tc.T == 2) {
    const Rational& w0 = inst.knapsack().weights[tc.nontight[0]];
    const Rational& w1 = inst.knapsack().weights[tc.nontight[1]];
    if (w1 > w0) std::swap(ends[0], ends[1]);
  }
  tc.chain = WalkChain(state, rs, ends[0]);

  const size_t len = tc.chain.size();
  bool ok = tc.T == 1 ? len % 2 == 1 : (len % 2 == 0 && tc.chain.back() == ends[1]);
  // The chain has to account for every fractional copy.
  int frac_total = 0;
  for (int k = 0; k < state.num_copies(); ++k) {
    if (rs.alive[k] && Fractional(rs.z[k])) ++frac_total;
  }
  ok = ok && static_cast<int>(len) == frac_total;
  for (size_t t = 0; ok && t + 1 < len; ++t) {
    ok = rs.z[tc.chain[t]] + rs.z[tc.chain[t + 1]] == 1;
  }
  cert->Check("knapsack.chain", ok, "T = " + std::to_string(tc.T));
  return tc;
}

std::vector<char> RoundChain(const SplitState& state, const TCase& tcase,
                             const Rational& opt_f, RoundState* rs,
                             Certificate* cert) {
  const Instance& inst = state.instance();
  std::vector<char> open(state.num_copies(), 0);
  for (int k = 0; k < state.num_copies(); ++k) open[k] = rs->alive[k] && rs->z[k] == 1;
  const std::vector<int>& chain = tcase.chain;
  for (size_t t = 0; t < chain.size(); ++t) open[chain[t]] = t % 2 == 1;
  for (size_t t = 0; t + 1 < chain.size(); t += 2) {
    for (auto& u : rs->bundles) {
      if (std::find(u.begin(), u.end(), chain[t]) != u.end()) u = {chain[t + 1]};
    }
  }
  Rational before = 0, after = 0, f_before = 0, f_after = 0;
  for (int k : chain) {
    const int i = state.original_of[k];
    before += inst.knapsack().weights[i] * rs->z[k];
    f_before += inst.open_cost[i] * rs->z[k];
    if (open[k]) {
      after += inst.knapsack().weights[i];
      f_after += inst.open_cost[i];
    }
  }
  cert->Check("knapsack.chain_weight", after <= before);
  if (tcase.T == 1) cert->Check("knapsack.t1_opening_cost", f_after <= f_before);
  if (tcase.T == 2) cert->Check("knapsack.t2_opening_cost", f_after <= f_before + opt_f);
  return open;
}

std::vector<char> RoundFlow(const SplitState& state, RoundState* rs,
                            Certificate* cert) {
  using Traits = boost::adjacency_list_traits<boost::vecS, boost::vecS, boost::directedS>;
  using Graph = boost::adjacency_list<
      boost::vecS, boost::vecS, boost::directedS, boost::no_property,
      boost::property<boost::edge_capacity_t, long,
                      boost::property<boost::edge_residual_capacity_t, long,
                                      boost::property<boost::edge_reverse_t,
                                                      Traits::edge_descriptor>>>>;
  const int nf = state.num_copies();
  std::vector<char> open(nf, 0);
  std::vector<int> f1;
  for (int k = 0; k < nf; ++k) {
    if (!rs->alive[k]) continue;
    if (rs->z[k] == 1) open[k] = 1;
    if (Fractional(rs->z[k])) f1.push_back(k);
  }
  if (f1.empty()) return open;

  std::map<int, int> original_node;  // g(F1)
  for (int k : f1) original_node.emplace(state.original_of[k], 0);
  std::vector<int> u1;
  for (size_t u = 0; u < rs->bundles.size(); ++u) {
    if (!rs->bundle_alive[u]) continue;
    for (int k : rs->bundles[u]) {
      if (rs->alive[k] && Fractional(rs->z[k])) {
        u1.push_back(u);
        break;
      }
    }
  }
  for (const auto& [i, node] : original_node) {
    cert->Check("knapsack.t0_upper_tight", CopyMass(state, *rs, i) == 1);
  }

  Graph g;
  auto cap = boost::get(boost::edge_capacity, g);
  auto rev = boost::get(boost::edge_reverse, g);
  auto res = boost::get(boost::edge_residual_capacity, g);
  auto add = [&](int a, int b, long c) {
    auto e = boost::add_edge(a, b, g).first;
    auto back = boost::add_edge(b, a, g).first;
    cap[e] = c;
    cap[back] = 0;
    rev[e] = back;
    rev[back] = e;
    return e;
  };
  int next = 0;
  const int s = next++, t = next++, bottom = next++;
  for (auto& [i, node] : original_node) node = next++;
  std::map<int, int> copy_node, bundle_node;
  for (int k : f1) copy_node[k] = next++;
  for (int u : u1) bundle_node[u] = next++;
  while (static_cast<int>(boost::num_vertices(g)) < next) boost::add_vertex(g);

  for (const auto& [i, node] : original_node) add(s, node, 1);
  std::map<std::pair<int, int>, Traits::edge_descriptor> into_bundle;
  for (int k : f1) {
    add(original_node[state.original_of[k]], copy_node[k], 1);
    add(copy_node[k], bottom, 1);
  }
  for (int u : u1) {
    for (int k : rs->bundles[u]) {
      if (copy_node.count(k)) into_bundle[{k, u}] = add(copy_node[k], bundle_node[u], 1);
    }
    add(bundle_node[u], t, 1);
  }
  const long slack = static_cast<long>(original_node.size()) - static_cast<long>(u1.size());
  cert->Check("knapsack.t0_capacity", slack >= 0);
  add(bottom, t, slack);

  const long flow = boost::edmonds_karp_max_flow(g, s, t);
  cert->Check("knapsack.t0_flow_value", flow == static_cast<long>(original_node.size()),
              std::to_string(flow));

  for (int k : f1) {
    const int i = state.original_of[k];
    auto e = boost::edge(original_node[i], copy_node[k], g).first;
    open[k] = cap[e] - res[e] == 1;
  }
  for (int u : u1) {
    int chosen = -1;
    for (int k : rs->bundles[u]) {
      auto it = into_bundle.find({k, u});
      if (it != into_bundle.end() && cap[it->second] - res[it->second] == 1) chosen = k;
    }
    cert->Check("knapsack.t0_bundle_served", chosen >= 0, "bundle " + std::to_string(u));
    rs->bundles[u] = {chosen};
  }
  return open;
}

Rational KnapsackGuessCoefficient(const Rational& gamma) {
  return std::max(MatroidBound(gamma), Rational(7 + (gamma + 6) * Lemma8Factor(gamma)));
}

KnapsackRun SolveKnapsackGuess(const Instance& inst, const GuessPair& guess,
                               const KnapsackPattern& pattern) {
  if (inst.is_matroid()) throw SchemaError("instance has no knapsack constraint");
  return SolveKnapsackFrom(inst, guess, SolveKnapsackRelaxation(inst, pattern));
}

KnapsackRun SolveKnapsackFrom(const Instance& inst, const GuessPair& guess,
                              FractionalSolution lp) {
  if (inst.is_matroid()) throw SchemaError("instance has no knapsack constraint");
  KnapsackRun run;
  run.guess = guess;
  run.lp = std::move(lp);
  run.split = SplitFacilities(inst, run.lp);
  const Rational gamma = 3 + inst.delta;
  run.filter = RunFiltering(run.split, gamma, &run.cert);
  run.bundles = RunBundling(&run.split, run.filter, &run.cert);
  IterativeOptions options;
  options.knapsack = true;
  options.opt_f_guess = guess.opt_f;
  run.round = RunIterative(run.split, run.filter, run.bundles, options, &run.cert);
  run.tcase = ClassifyT(run.split, run.round, &run.cert);
  const std::vector<char> open =
      run.tcase.T == 0 ? RoundFlow(run.split, &run.round, &run.cert)
                       : RoundChain(run.split, run.tcase, guess.opt_f, &run.round, &run.cert);

  const SplitState& s = run.split;
  std::vector<int> copies_open(inst.num_facilities(), 0);
  FacilitySet chosen;
  for (int k = 0; k < s.num_copies(); ++k) {
    if (open[k] && copies_open[s.original_of[k]]++ == 0) chosen.push_back(s.original_of[k]);
  }
  for (int i = 0; i < inst.num_facilities(); ++i) {
    run.cert.Check("extract.one_copy_per_facility", copies_open[i] <= 1,
                   "facility " + inst.facility_ids[i]);
  }
  std::sort(chosen.begin(), chosen.end());
  Rational weight = 0;
  for (int i : chosen) weight += inst.knapsack().weights[i];
  run.cert.Check("knapsack.weight", weight <= inst.knapsack().budget,
                 weight.get_str() + " > " + inst.knapsack().budget.get_str());
  run.cert.Check("extract.size", static_cast<int>(chosen.size()) >= inst.r);
  CheckFinalBundles(s, run.filter, run.bundles, run.round, open, run.filter.d_prime,
                    &run.cert);
  run.solution = MakeSolution(inst, chosen);
  const Rational limit = KnapsackGuessCoefficient(gamma) * run.lp.objective +
                         Lemma8Factor(gamma) * guess.opt + guess.opt_f;
  run.cert.Check("theorem2.guess_bound", run.solution.cost.total <= limit,
                 run.solution.cost.total.get_str() + " > " + limit.get_str());
  return run;
}

KnapsackRun SolveKnapsackInstance(const Instance& inst) {
  if (inst.is_matroid()) throw SchemaError("instance has no knapsack constraint");
  const GuessGrid grid = MakeGuessGrid(inst, inst.epsilon);
  std::map<KnapsackPattern, int> seen;  // pattern -> 1 feasible, 0 infeasible
  std::optional<KnapsackRun> best;
  Certificate merged;
  int infeasible = 0;
  for (const Rational& opt : grid.opt_values) {
    for (const Rational& opt_f : grid.optf_values) {
      const GuessPair guess{opt, opt_f};
      KnapsackPattern pattern = PatternFor(inst, guess);
      if (seen.count(pattern)) continue;
      KnapsackRun run;
      try {
        run = SolveKnapsackGuess(inst, guess, pattern);
      } catch (const InfeasibleError&) {
        seen.emplace(std::move(pattern), 0);
        ++infeasible;
        continue;
      }
      seen.emplace(std::move(pattern), 1);
      merged.Merge(run.cert);
      if (!best || run.solution.cost.total < best->solution.cost.total) best = std::move(run);
    }
  }
  if (!best) throw InfeasibleError("no feasible fault-tolerant solution");
  best->cert = merged;
  best->grid = grid;
  best->patterns = static_cast<int>(seen.size());
  best->infeasible_patterns = infeasible;
  return *std::move(best);
}

}  // namespace ftclust
