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

#include "ftclust/report.h"

#include <openssl/evp.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "ftclust/errors.h"
#include "ftclust/knapsack.h"
#include "ftclust/rounding.h"

namespace ftclust {
namespace {

using ordered_json = nlohmann::ordered_json;

std::string Str(const Rational& v) { return FormatRational(v); }

ordered_json Ids(const std::vector<std::string>& names, const std::vector<int>& idx) {
  ordered_json out = ordered_json::array();
  for (int i : idx) out.push_back(names[i]);
  return out;
}

ordered_json CostJson(const CostBreakdown& c) {
  return {{"facility", Str(c.facility_cost)},
          {"service", Str(c.service_cost)},
          {"total", Str(c.total)}};
}

ordered_json SolutionJson(const Instance& inst, const Solution& s) {
  ordered_json assignment = ordered_json::object();
  for (int j = 0; j < inst.num_clients(); ++j) {
    assignment[inst.client_ids[j]] = Ids(inst.facility_ids, s.assignment[j]);
  }
  return {{"open", Ids(inst.facility_ids, s.open_set)},
          {"assignment", assignment},
          {"cost", CostJson(s.cost)}};
}

ordered_json PipelineDetails(const Instance& inst, const SplitState& split,
                             const FilterState& filt, const BundleState& bund,
                             const RoundState& round) {
  int shells = 0;
  for (char c : bund.shell) shells += c;
  ordered_json events = ordered_json::object();
  for (auto kind : {BundleEventKind::kCreate, BundleEventKind::kAbsorb,
                    BundleEventKind::kFreezeNoAlien, BundleEventKind::kFreezeNoShell}) {
    int n = 0;
    for (const BundleEvent& e : bund.events) n += e.kind == kind;
    events[EventName(kind)] = n;
  }
  return {{"copies", split.num_copies()},
          {"splits", split.splits},
          {"dangerous", Ids(inst.client_ids, filt.dangerous)},
          {"d_prime", Ids(inst.client_ids, filt.d_prime)},
          {"bundles", bund.bundles.size()},
          {"shell_bundles", shells},
          {"bundle_events", events},
          {"d0", Ids(inst.client_ids, round.d0)},
          {"d1", Ids(inst.client_ids, round.d1)},
          {"iterative_solves", round.solves},
          {"iterative_cut_rounds", round.cut_rounds}};
}

void WriteFile(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

void WriteDumps(const std::string& dir, const Instance& inst, const LinearProgram& lp,
                const SplitState& split, const BundleState& bund,
                const RoundState& round) {
  std::filesystem::create_directories(dir);
  const std::filesystem::path base(dir);
  std::ostringstream lp_text;
  WriteCplexLp(lp, lp_text);
  WriteFile(base / "relaxation.lp", lp_text.str());

  ordered_json s;
  s["copies"] = ordered_json::array();
  for (int k = 0; k < split.num_copies(); ++k) {
    s["copies"].push_back({{"copy", k},
                           {"facility", inst.facility_ids[split.original_of[k]]},
                           {"y", Str(split.y[k])}});
  }
  s["order"] = split.order();
  s["partitions"] = ordered_json::object();
  for (int j = 0; j < inst.num_clients(); ++j) {
    s["partitions"][inst.client_ids[j]] = {{"F_j", split.fj[j]}, {"F_jt", split.fjt[j]}};
  }
  WriteFile(base / "split.json", s.dump(2) + "\n");

  std::string lines;
  for (const BundleEvent& e : bund.events) {
    ordered_json line{{"stage", "bundle"},
                      {"event", EventName(e.kind)},
                      {"client", inst.client_ids[e.client]},
                      {"bundle", e.bundle}};
    if (e.kind == BundleEventKind::kFreezeNoAlien) {
      line["witness"] = inst.client_ids[e.witness];
      line["witness_queue"] = e.witness_queue;
      line["candidate_dmax"] = Str(e.candidate_dmax);
    }
    lines += line.dump() + "\n";
  }
  for (const ObjectiveEvent& e : round.history) {
    ordered_json line{{"stage", "iterative"}, {"event", e.event}};
    if (e.client >= 0) line["client"] = inst.client_ids[e.client];
    line["objective"] = Str(e.value);
    lines += line.dump() + "\n";
  }
  WriteFile(base / "events.jsonl", lines);
}

}  // namespace

std::string Sha256Hex(std::string_view data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

std::string InstanceDigest(const Instance& inst) {
  return "sha256:" + Sha256Hex(SerializeInstance(inst));
}

RunOutcome RunSolve(const Instance& inst, const RunOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  RunOutcome out;
  out.command = "solve";
  const Rational gamma = 3 + inst.delta;
  if (inst.is_matroid()) {
    out.mode = "matroid";
    MatroidRun run = SolveMatroidInstance(inst);
    out.solution = run.solution;
    out.cert = run.cert;
    out.lp_bound = run.lp.objective;
    out.lp_bound_kind = "M-LP";
    out.bound_factor = MatroidBound(gamma);
    out.certified_bound = run.bound;
    out.details = PipelineDetails(inst, run.split, run.filter, run.bundles, run.round);
    out.details["lp_cut_rounds"] = run.lp.cut_rounds;
    out.details["lp_cuts"] = run.lp.cuts_added;
    if (options.dump_dir) {
      WriteDumps(*options.dump_dir, inst, MatroidRelaxationLp(inst), run.split,
                 run.bundles, run.round);
    }
  } else {
    out.mode = "knapsack";
    KnapsackRun run = SolveKnapsackInstance(inst);
    out.solution = run.solution;
    out.cert = run.cert;
    out.lp_bound = SolveKnapsackRelaxation(inst, OpenPattern(inst)).objective;
    out.lp_bound_kind = "K-LP";
    out.bound_factor = KnapsackBound(gamma, inst.epsilon);
    out.details = PipelineDetails(inst, run.split, run.filter, run.bundles, run.round);
    out.details["guess"] = {{"opt", Str(run.guess.opt)}, {"opt_f", Str(run.guess.opt_f)}};
    out.details["winning_lp"] = Str(run.lp.objective);
    out.details["T"] = run.tcase.T;
    out.details["nontight"] = Ids(inst.facility_ids, run.tcase.nontight);
    out.details["chain"] = run.tcase.chain;
    out.details["grid"] = {{"opt_values", run.grid.opt_values.size()},
                           {"optf_values", run.grid.optf_values.size()},
                           {"pairs", run.grid.size()},
                           {"lb", Str(run.grid.lb)},
                           {"ub", Str(run.grid.ub)},
                           {"patterns", run.patterns},
                           {"infeasible_patterns", run.infeasible_patterns}};
    if (options.dump_dir) {
      WriteDumps(*options.dump_dir, inst,
                 KnapsackRelaxationLp(inst, PatternFor(inst, run.guess)), run.split,
                 run.bundles, run.round);
    }
  }
  if (options.timings) {
    out.elapsed_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - start)
                         .count();
  }
  return out;
}

RunOutcome RunCompare(const Instance& inst, const RunOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  RunOutcome out = RunSolve(inst, options);
  out.command = "compare";
  out.exact = ExactSolve(inst, options.oracle_guard);
  const Rational exact = out.exact->cost.total;
  const Rational total = out.solution.cost.total;
  if (!inst.is_matroid()) {
    out.lp_bound = LpLowerBound(inst, &*out.exact);
    out.lp_bound_kind = "K-LP at (OPT, OPT_f)";
  }
  out.cert.Check("oracle.lp_le_exact", out.lp_bound <= exact,
                 Str(out.lp_bound) + " > " + Str(exact));
  out.cert.Check("oracle.exact_le_total", exact <= total,
                 Str(exact) + " > " + Str(total));
  if (!inst.is_matroid()) {
    out.cert.Check("theorem2.cost_bound", total <= out.bound_factor * exact,
                   Str(total) + " > " + Str(out.bound_factor * exact));
  }
  if (options.timings) {
    out.elapsed_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - start)
                         .count();
  }
  return out;
}

ordered_json BuildReport(const Instance& inst, const RunOutcome& o) {
  ordered_json r;
  r["schema"] = kReportSchema;
  r["command"] = o.command;
  r["mode"] = o.mode;
  r["instance_digest"] = InstanceDigest(inst);
  r["parameters"] = {{"r", inst.r},
                     {"delta", Str(inst.delta)},
                     {"epsilon", Str(inst.epsilon)},
                     {"gamma", Str(3 + inst.delta)}};
  r["solution"] = SolutionJson(inst, o.solution);

  ordered_json cert;
  cert["status"] = "pass";
  ordered_json checks = ordered_json::object();
  for (const auto& [name, n] : o.cert.counts()) {
    checks[name] = {{"status", "pass"}, {"count", n}};
  }
  cert["checks"] = checks;
  cert["bound_factor"] = Str(o.bound_factor);
  cert["bound_factor_approx"] = ToDouble(o.bound_factor);
  if (o.certified_bound) cert["certified_bound"] = Str(*o.certified_bound);
  cert["lp_lower_bound"] = Str(o.lp_bound);
  r["certificate"] = cert;

  r["lp_bound"] = {{"kind", o.lp_bound_kind}, {"value", Str(o.lp_bound)}};
  Rational denom = o.lp_bound;
  if (o.exact) {
    r["exact"] = {{"open", Ids(inst.facility_ids, o.exact->opt_set)},
                  {"cost", CostJson(o.exact->cost)},
                  {"enumerated", o.exact->enumerated}};
    if (o.exact->cost.total > denom) denom = o.exact->cost.total;
  }
  if (sgn(denom) > 0) {
    const Rational ratio = o.solution.cost.total / denom;
    r["ratio"] = {{"value", Str(ratio)}, {"approx", ToDouble(ratio)}};
  } else {
    r["ratio"] = nullptr;
  }
  r["pipeline"] = o.details;
  if (o.elapsed_ms) r["timings"] = {{"elapsed_ms", *o.elapsed_ms}};
  return r;
}

}  // namespace ftclust
