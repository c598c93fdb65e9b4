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

#ifndef FTCLUST_LP_H_
#define FTCLUST_LP_H_

#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ftclust/matroid.h"
#include "ftclust/rational.h"

namespace ftclust {

enum class Relation { kLessEqual, kEqual, kGreaterEqual };

struct LpVariable {
  std::string name;
  Rational lower = 0;
  std::optional<Rational> upper;  // nullopt means +infinity
  Rational cost = 0;
};

struct LpConstraint {
  std::string name;
  std::vector<std::pair<int, Rational>> terms;
  Relation relation = Relation::kLessEqual;
  Rational rhs = 0;
};

// Minimization problem over bounded-below variables.
struct LinearProgram {
  std::vector<LpVariable> vars;
  std::vector<LpConstraint> constraints;
  Rational objective_constant = 0;

  int AddVariable(std::string name, Rational lower, std::optional<Rational> upper,
                  Rational cost);
  int AddConstraint(std::string name, std::vector<std::pair<int, Rational>> terms,
                    Relation relation, Rational rhs);
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

struct VertexSolution {
  LpStatus status = LpStatus::kInfeasible;
  std::vector<Rational> values;
  Rational objective;
  // Active set at `values`: variable bounds as ("var", index) and rows as
  // ("row", index). A vertex has an active set of full column rank.
  std::vector<std::pair<std::string, int>> tight;
  int pivots = 0;
};

// Exact primal simplex (bounded variables, two phases, Bland's rule).
// Returns an optimal basic solution or the infeasible/unbounded status.
VertexSolution SolveVertex(const LinearProgram& lp);

// Objective value of `values` including the constant.
Rational EvaluateObjective(const LinearProgram& lp,
                           std::span<const Rational> values);

// True iff `values` satisfies every bound and row exactly.
bool IsFeasible(const LinearProgram& lp, std::span<const Rational> values);

// Rank of the active constraint set at `values`; equal to vars.size() iff
// the point is a vertex of the feasible region.
int ActiveRank(const LinearProgram& lp, std::span<const Rational> values);

// Cutting-plane loop for z(S) <= rank(g(S)) over copies. Variables listed in
// `copy_vars` are the copies; `original_of[k]` is the facility of copy k.
// Added cuts are appended to `cuts` (as sets of originals) so callers can
// retain them across re-solves. Throws InfeasibleError if the LP is
// infeasible.
struct MatroidCutStats {
  int rounds = 0;
  int cuts_added = 0;
};

VertexSolution SolveWithMatroidCuts(LinearProgram lp,
                                    const MatroidDescriptor& m,
                                    std::span<const int> copy_vars,
                                    std::span<const int> original_of,
                                    std::vector<FacilitySet>* cuts,
                                    MatroidCutStats* stats = nullptr);

// Appends the rows z(g^{-1}(S)) <= rank(S) for each cut in `cuts`.
void AddCopyCuts(LinearProgram* lp, const MatroidDescriptor& m,
                 std::span<const int> copy_vars, std::span<const int> original_of,
                 const std::vector<FacilitySet>& cuts);

// CPLEX LP text, coefficients printed as decimals.
void WriteCplexLp(const LinearProgram& lp, std::ostream& out);

}  // namespace ftclust

#endif  // FTCLUST_LP_H_
