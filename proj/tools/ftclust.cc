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

// ftclust: solve, compare and generate fault-tolerant median instances.
//
// Exit codes: 0 ok, 1 schema or I/O error, 2 infeasible instance,
// 3 runtime invariant failure (the failing check is named on stderr).

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "ftclust/errors.h"
#include "ftclust/instance.h"
#include "ftclust/report.h"

namespace {

using namespace ftclust;

struct SolveFlags {
  std::string path;
  std::string mode;
  std::string delta;
  std::string epsilon;
  std::string out;
  std::string dump_dir;
  bool timings = false;
  int oracle_guard = kDefaultOracleGuard;
};

struct GenFlags {
  std::uint64_t seed = 1;
  int clients = 5;
  int facilities = 5;
  int r = 1;
  std::string kind = "matroid";
  int grid = 10;
  std::string out;
};

void Emit(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream file(out, std::ios::binary);
  file << text;
  if (!file) throw std::runtime_error("cannot write " + out);
}

Instance Prepare(const SolveFlags& f) {
  Instance inst = LoadInstanceFile(f.path);
  if (!f.delta.empty()) inst.delta = ParseRational(f.delta);
  if (!f.epsilon.empty()) inst.epsilon = ParseRational(f.epsilon);
  ValidateInstance(inst);
  if (!f.mode.empty() && f.mode != (inst.is_matroid() ? "matroid" : "knapsack")) {
    throw SchemaError("mode " + f.mode + " does not match the instance constraint");
  }
  return inst;
}

int Run(const SolveFlags& f, bool compare) {
  const Instance inst = Prepare(f);
  RunOptions options;
  if (!f.dump_dir.empty()) options.dump_dir = f.dump_dir;
  options.timings = f.timings;
  options.oracle_guard = f.oracle_guard;
  const RunOutcome outcome = compare ? RunCompare(inst, options) : RunSolve(inst, options);
  Emit(BuildReport(inst, outcome).dump(2) + "\n", f.out);
  return 0;
}

int Gen(const GenFlags& f) {
  GeneratorOptions o;
  o.seed = f.seed;
  o.num_clients = f.clients;
  o.num_facilities = f.facilities;
  o.r = f.r;
  o.grid = f.grid;
  o.kind = f.kind == "knapsack" ? ConstraintKind::kKnapsack : ConstraintKind::kMatroid;
  if (f.clients < 1 || f.facilities < 1 || f.r < 1 || f.grid < 1) {
    throw SchemaError("sizes must be positive");
  }
  Emit(SerializeInstance(GenerateRandom(o)), f.out);
  return 0;
}

void AddSolveFlags(CLI::App* cmd, SolveFlags* f) {
  cmd->add_option("instance", f->path, "Instance JSON file")->required();
  cmd->add_option("--mode", f->mode, "Expected constraint kind")
      ->check(CLI::IsMember({"matroid", "knapsack"}));
  cmd->add_option("--delta", f->delta, "Override delta (gamma = 3 + delta)");
  cmd->add_option("--epsilon", f->epsilon, "Override the guess-grid epsilon");
  cmd->add_option("--out", f->out, "Write the report here instead of stdout");
  cmd->add_option("--debug-dumps", f->dump_dir,
                  "Directory for relaxation.lp, split.json and events.jsonl");
  cmd->add_flag("--timings", f->timings, "Add wall-clock timings to the report");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fault-tolerant matroid and knapsack median"};
  app.require_subcommand(1);
  SolveFlags solve, compare;
  GenFlags gen;
  CLI::App* solve_cmd = app.add_subcommand("solve", "Run the approximation pipeline");
  AddSolveFlags(solve_cmd, &solve);
  CLI::App* compare_cmd =
      app.add_subcommand("compare", "Pipeline plus exact oracle and LP sandwich");
  AddSolveFlags(compare_cmd, &compare);
  compare_cmd->add_option("--oracle-guard", compare.oracle_guard,
                          "Largest facility count the oracle enumerates");
  CLI::App* gen_cmd = app.add_subcommand("gen", "Generate a random instance");
  gen_cmd->add_option("--seed", gen.seed, "Generator seed");
  gen_cmd->add_option("--clients", gen.clients, "Number of clients");
  gen_cmd->add_option("--facilities", gen.facilities, "Number of facilities");
  gen_cmd->add_option("--r", gen.r, "Fault-tolerance requirement");
  gen_cmd->add_option("--kind", gen.kind, "Side constraint")
      ->check(CLI::IsMember({"matroid", "knapsack"}));
  gen_cmd->add_option("--grid", gen.grid, "Coordinate range [0, grid]");
  gen_cmd->add_option("--out", gen.out, "Output file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  try {
    if (*solve_cmd) return Run(solve, false);
    if (*compare_cmd) return Run(compare, true);
    return Gen(gen);
  } catch (const InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return 2;
  } catch (const InvariantError& e) {
    std::cerr << "invariant failure: " << e.check() << ": " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
