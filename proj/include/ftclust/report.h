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

#ifndef FTCLUST_REPORT_H_
#define FTCLUST_REPORT_H_

#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "ftclust/certificate.h"
#include "ftclust/instance.h"
#include "ftclust/oracle.h"

namespace ftclust {

inline constexpr const char* kReportSchema = "ftclust/1";

std::string Sha256Hex(std::string_view data);

// "sha256:<hex>" of the canonical serialization.
std::string InstanceDigest(const Instance& inst);

struct RunOptions {
  std::optional<std::string> dump_dir;  // CPLEX LP, split state, event log
  bool timings = false;
  int oracle_guard = kDefaultOracleGuard;
};

struct RunOutcome {
  std::string command;  // "solve" or "compare"
  std::string mode;     // "matroid" or "knapsack"
  Solution solution;
  Certificate cert;
  Rational lp_bound;
  std::string lp_bound_kind;
  Rational bound_factor;                    // B(gamma) or B_k(gamma, eps)
  std::optional<Rational> certified_bound;  // matroid: B(gamma) * LP value
  std::optional<ExactResult> exact;
  nlohmann::ordered_json details;
  std::optional<double> elapsed_ms;
};

// Runs the pipeline matching the instance's side constraint. Throws
// InfeasibleError, InvariantError or (I/O for dumps) std::runtime_error.
RunOutcome RunSolve(const Instance& inst, const RunOptions& options);

// RunSolve plus the exact oracle and the sandwich checks.
RunOutcome RunCompare(const Instance& inst, const RunOptions& options);

nlohmann::ordered_json BuildReport(const Instance& inst, const RunOutcome& outcome);

}  // namespace ftclust

#endif  // FTCLUST_REPORT_H_
