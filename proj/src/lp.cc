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

#include "ftclust/lp.h"

#include <algorithm>
#include <iomanip>
#include <sstream>

#include "ftclust/errors.h"

namespace ftclust {

int LinearProgram::AddVariable(std::string name, Rational lower,
                               std::optional<Rational> upper, Rational cost) {
  vars.push_back({std::move(name), std::move(lower), std::move(upper),
                  std::move(cost)});
  return static_cast<int>(vars.size()) - 1;
}

int LinearProgram::AddConstraint(std::string name,
                                 std::vector<std::pair<int, Rational>> terms,
                                 Relation relation, Rational rhs) {
  constraints.push_back(
      {std::move(name), std::move(terms), relation, std::move(rhs)});
  return static_cast<int>(constraints.size()) - 1;
}

namespace {

// Dense bounded-variable tableau. Columns: structural, then one slack per row
// (row + slack = rhs), then artificials.
class Simplex {
 public:
  explicit Simplex(const LinearProgram& lp) : lp_(lp) {
    n_ = static_cast<int>(lp.vars.size());
    m_ = static_cast<int>(lp.constraints.size());
    lower_.resize(n_ + m_);
    upper_.resize(n_ + m_);
    for (int j = 0; j < n_; ++j) {
      lower_[j] = lp.vars[j].lower;
      upper_[j] = lp.vars[j].upper;
      if (upper_[j] && *upper_[j] < *lower_[j]) infeasible_bounds_ = true;
    }
    for (int i = 0; i < m_; ++i) {
      switch (lp.constraints[i].relation) {
        case Relation::kLessEqual:
          lower_[n_ + i] = Rational(0);
          break;
        case Relation::kGreaterEqual:
          upper_[n_ + i] = Rational(0);
          break;
        case Relation::kEqual:
          lower_[n_ + i] = Rational(0);
          upper_[n_ + i] = Rational(0);
          break;
      }
    }
  }

  VertexSolution Run() {
    VertexSolution out;
    if (infeasible_bounds_) {
      out.status = LpStatus::kInfeasible;
      return out;
    }
    Initialize();
    // Phase 1: drive artificials to zero.
    std::vector<Rational> phase1(total_);
    for (int j = n_ + m_; j < total_; ++j) phase1[j] = 1;
    ComputeReducedCosts(phase1);
    if (Iterate() != LpStatus::kOptimal) {
      throw std::logic_error("phase 1 cannot be unbounded");
    }
    for (int j = n_ + m_; j < total_; ++j) {
      if (sgn(x_[j]) != 0) {
        out.status = LpStatus::kInfeasible;
        out.pivots = pivots_;
        return out;
      }
      upper_[j] = Rational(0);
    }
    std::vector<Rational> phase2(total_);
    for (int j = 0; j < n_; ++j) phase2[j] = lp_.vars[j].cost;
    ComputeReducedCosts(phase2);
    out.status = Iterate();
    out.pivots = pivots_;
    if (out.status != LpStatus::kOptimal) return out;
    out.values.assign(x_.begin(), x_.begin() + n_);
    out.objective = EvaluateObjective(lp_, out.values);
    return out;
  }

 private:
  void Initialize() {
    total_ = n_ + m_;
    std::vector<int> art_row;
    std::vector<Rational> residual(m_);
    x_.assign(n_ + m_, Rational(0));
    for (int j = 0; j < n_; ++j) x_[j] = *lower_[j];
    for (int i = 0; i < m_; ++i) {
      residual[i] = lp_.constraints[i].rhs;
      for (const auto& [j, a] : lp_.constraints[i].terms) {
        residual[i] -= a * x_[j];
      }
    }
    std::vector<int> needs_art(m_, 0);
    for (int i = 0; i < m_; ++i) {
      const int s = n_ + i;
      bool fits = (!lower_[s] || residual[i] >= *lower_[s]) &&
                  (!upper_[s] || residual[i] <= *upper_[s]);
      if (!fits) {
        needs_art[i] = sgn(residual[i]);
        art_row.push_back(i);
      }
    }
    total_ = n_ + m_ + static_cast<int>(art_row.size());
    lower_.resize(total_, Rational(0));
    upper_.resize(total_);
    x_.resize(total_, Rational(0));
    tableau_.assign(m_, std::vector<Rational>(total_));
    basis_.assign(m_, -1);
    position_.assign(total_, -1);
    for (int i = 0; i < m_; ++i) {
      auto& row = tableau_[i];
      for (const auto& [j, a] : lp_.constraints[i].terms) row[j] += a;
      row[n_ + i] = 1;
    }
    for (size_t a = 0; a < art_row.size(); ++a) {
      const int i = art_row[a];
      const int col = n_ + m_ + static_cast<int>(a);
      auto& row = tableau_[i];
      if (needs_art[i] < 0) {
        for (auto& v : row) v = -v;
      }
      row[col] = 1;
      basis_[i] = col;
      position_[col] = i;
      x_[col] = abs(residual[i]);
    }
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] >= 0) continue;
      basis_[i] = n_ + i;
      position_[n_ + i] = i;
      x_[n_ + i] = residual[i];
    }
    // Slacks of rows that received an artificial sit at their finite bound.
    for (int i : art_row) {
      const int s = n_ + i;
      x_[s] = lower_[s] ? *lower_[s] : *upper_[s];
    }
  }

  void ComputeReducedCosts(const std::vector<Rational>& cost) {
    reduced_ = cost;
    for (int i = 0; i < m_; ++i) {
      const Rational& cb = cost[basis_[i]];
      if (sgn(cb) == 0) continue;
      const auto& row = tableau_[i];
      for (int j = 0; j < total_; ++j) {
        if (sgn(row[j]) != 0) reduced_[j] -= cb * row[j];
      }
    }
  }

  bool AtLower(int j) const { return lower_[j] && x_[j] == *lower_[j]; }
  bool AtUpper(int j) const { return upper_[j] && x_[j] == *upper_[j]; }
  bool Fixed(int j) const {
    return lower_[j] && upper_[j] && *lower_[j] == *upper_[j];
  }

  LpStatus Iterate() {
    while (true) {
      int entering = -1;
      int dir = 0;
      for (int j = 0; j < total_; ++j) {
        if (position_[j] >= 0 || Fixed(j)) continue;
        const int d = sgn(reduced_[j]);
        if (d < 0 && (!upper_[j] || x_[j] < *upper_[j])) {
          entering = j;
          dir = 1;
          break;
        }
        if (d > 0 && (!lower_[j] || x_[j] > *lower_[j])) {
          entering = j;
          dir = -1;
          break;
        }
      }
      if (entering < 0) return LpStatus::kOptimal;

      // Ratio test; ties go to the smallest basic variable index.
      std::optional<Rational> best;
      int leave_row = -1;
      bool leave_to_upper = false;
      for (int i = 0; i < m_; ++i) {
        const Rational& alpha = tableau_[i][entering];
        const int s = sgn(alpha) * dir;  // basic var moves by -s * theta
        if (s == 0) continue;
        const int b = basis_[i];
        std::optional<Rational> theta;
        bool to_upper = false;
        if (s > 0 && lower_[b]) {
          theta = (x_[b] - *lower_[b]) / abs(alpha);
        } else if (s < 0 && upper_[b]) {
          theta = (*upper_[b] - x_[b]) / abs(alpha);
          to_upper = true;
        }
        if (!theta) continue;
        if (!best || *theta < *best ||
            (*theta == *best && b < basis_[leave_row])) {
          best = theta;
          leave_row = i;
          leave_to_upper = to_upper;
        }
      }
      std::optional<Rational> flip;
      if (lower_[entering] && upper_[entering]) {
        flip = *upper_[entering] - *lower_[entering];
      }
      if (!best && !flip) return LpStatus::kUnbounded;

      if (flip && (!best || *flip < *best)) {
        const Rational& theta = *flip;
        x_[entering] += dir * theta;
        for (int i = 0; i < m_; ++i) {
          const Rational& alpha = tableau_[i][entering];
          if (sgn(alpha) != 0) x_[basis_[i]] -= dir * alpha * theta;
        }
        ++pivots_;
        continue;
      }

      const Rational theta = *best;
      if (sgn(theta) != 0) {
        x_[entering] += dir * theta;
        for (int i = 0; i < m_; ++i) {
          const Rational& alpha = tableau_[i][entering];
          if (sgn(alpha) != 0) x_[basis_[i]] -= dir * alpha * theta;
        }
      }
      const int leaving = basis_[leave_row];
      x_[leaving] = leave_to_upper ? *upper_[leaving] : *lower_[leaving];
      Pivot(leave_row, entering);
      ++pivots_;
    }
  }

  void Pivot(int row, int col) {
    auto& prow = tableau_[row];
    const Rational inv = 1 / prow[col];
    std::vector<int> nonzero;
    for (int j = 0; j < total_; ++j) {
      if (sgn(prow[j]) != 0) {
        prow[j] *= inv;
        nonzero.push_back(j);
      }
    }
    auto eliminate = [&](std::vector<Rational>& target) {
      const Rational factor = target[col];
      if (sgn(factor) == 0) return;
      for (int j : nonzero) target[j] -= factor * prow[j];
    };
    for (int i = 0; i < m_; ++i) {
      if (i != row) eliminate(tableau_[i]);
    }
    eliminate(reduced_);
    position_[basis_[row]] = -1;
    basis_[row] = col;
    position_[col] = row;
  }

  const LinearProgram& lp_;
  int n_ = 0;
  int m_ = 0;
  int total_ = 0;
  bool infeasible_bounds_ = false;
  std::vector<std::optional<Rational>> lower_;
  std::vector<std::optional<Rational>> upper_;
  std::vector<Rational> x_;
  std::vector<std::vector<Rational>> tableau_;
  std::vector<Rational> reduced_;
  std::vector<int> basis_;
  std::vector<int> position_;
  int pivots_ = 0;
};

Rational RowActivity(const LpConstraint& c, std::span<const Rational> values) {
  Rational sum = 0;
  for (const auto& [j, a] : c.terms) sum += a * values[j];
  return sum;
}

}  // namespace

Rational EvaluateObjective(const LinearProgram& lp,
                           std::span<const Rational> values) {
  Rational obj = lp.objective_constant;
  for (size_t j = 0; j < lp.vars.size(); ++j) {
    if (sgn(lp.vars[j].cost) != 0) obj += lp.vars[j].cost * values[j];
  }
  return obj;
}

bool IsFeasible(const LinearProgram& lp, std::span<const Rational> values) {
  if (values.size() != lp.vars.size()) return false;
  for (size_t j = 0; j < lp.vars.size(); ++j) {
    if (values[j] < lp.vars[j].lower) return false;
    if (lp.vars[j].upper && values[j] > *lp.vars[j].upper) return false;
  }
  for (const auto& c : lp.constraints) {
    const Rational act = RowActivity(c, values);
    switch (c.relation) {
      case Relation::kLessEqual:
        if (act > c.rhs) return false;
        break;
      case Relation::kGreaterEqual:
        if (act < c.rhs) return false;
        break;
      case Relation::kEqual:
        if (act != c.rhs) return false;
        break;
    }
  }
  return true;
}

namespace {

std::vector<std::pair<std::string, int>> ActiveSet(
    const LinearProgram& lp, std::span<const Rational> values) {
  std::vector<std::pair<std::string, int>> tight;
  for (size_t j = 0; j < lp.vars.size(); ++j) {
    if (values[j] == lp.vars[j].lower ||
        (lp.vars[j].upper && values[j] == *lp.vars[j].upper)) {
      tight.emplace_back("var", static_cast<int>(j));
    }
  }
  for (size_t i = 0; i < lp.constraints.size(); ++i) {
    if (RowActivity(lp.constraints[i], values) == lp.constraints[i].rhs) {
      tight.emplace_back("row", static_cast<int>(i));
    }
  }
  return tight;
}

}  // namespace

int ActiveRank(const LinearProgram& lp, std::span<const Rational> values) {
  const int n = static_cast<int>(lp.vars.size());
  std::vector<std::vector<Rational>> rows;
  for (const auto& [kind, idx] : ActiveSet(lp, values)) {
    std::vector<Rational> row(n);
    if (kind == "var") {
      row[idx] = 1;
    } else {
      for (const auto& [j, a] : lp.constraints[idx].terms) row[j] += a;
    }
    rows.push_back(std::move(row));
  }
  int rank = 0;
  for (int col = 0; col < n && rank < static_cast<int>(rows.size()); ++col) {
    int pivot = -1;
    for (int i = rank; i < static_cast<int>(rows.size()); ++i) {
      if (sgn(rows[i][col]) != 0) {
        pivot = i;
        break;
      }
    }
    if (pivot < 0) continue;
    std::swap(rows[rank], rows[pivot]);
    for (int i = rank + 1; i < static_cast<int>(rows.size()); ++i) {
      if (sgn(rows[i][col]) == 0) continue;
      Rational f = rows[i][col] / rows[rank][col];
      for (int j = col; j < n; ++j) rows[i][j] -= f * rows[rank][j];
    }
    ++rank;
  }
  return rank;
}

VertexSolution SolveVertex(const LinearProgram& lp) {
  Simplex simplex(lp);
  VertexSolution sol = simplex.Run();
  if (sol.status == LpStatus::kOptimal) sol.tight = ActiveSet(lp, sol.values);
  return sol;
}

void AddCopyCuts(LinearProgram* lp, const MatroidDescriptor& m,
                 std::span<const int> copy_vars, std::span<const int> original_of,
                 const std::vector<FacilitySet>& cuts) {
  for (const auto& cut : cuts) {
    std::vector<std::pair<int, Rational>> terms;
    for (size_t k = 0; k < copy_vars.size(); ++k) {
      if (std::binary_search(cut.begin(), cut.end(), original_of[k])) {
        terms.emplace_back(copy_vars[k], Rational(1));
      }
    }
    if (terms.empty()) continue;
    lp->AddConstraint("rank_cut", std::move(terms), Relation::kLessEqual,
                      Rational(Rank(m, cut)));
  }
}

VertexSolution SolveWithMatroidCuts(LinearProgram lp,
                                    const MatroidDescriptor& m,
                                    std::span<const int> copy_vars,
                                    std::span<const int> original_of,
                                    std::vector<FacilitySet>* cuts,
                                    MatroidCutStats* stats) {
  MatroidCutStats local;
  // Cuts are never dropped, and each one is violated when added, so at most
  // 2^|F| rounds can occur.
  while (true) {
    VertexSolution sol = SolveVertex(lp);
    ++local.rounds;
    if (sol.status == LpStatus::kInfeasible) {
      if (stats) *stats = local;
      throw InfeasibleError("linear program is infeasible");
    }
    if (sol.status == LpStatus::kUnbounded) {
      throw std::logic_error("linear program is unbounded");
    }
    std::vector<Rational> z(copy_vars.size());
    for (size_t k = 0; k < copy_vars.size(); ++k) z[k] = sol.values[copy_vars[k]];
    auto cut = SeparateCopies(m, original_of, z);
    if (!cut) {
      if (stats) *stats = local;
      return sol;
    }
    AddCopyCuts(&lp, m, copy_vars, original_of, {cut->originals});
    if (cuts) cuts->push_back(cut->originals);
    ++local.cuts_added;
  }
}

void WriteCplexLp(const LinearProgram& lp, std::ostream& out) {
  auto num = [](const Rational& v) {
    std::ostringstream s;
    s << std::setprecision(15) << v.get_d();
    return s.str();
  };
  auto var_name = [&](int j) {
    return lp.vars[j].name.empty() ? "x" + std::to_string(j) : lp.vars[j].name;
  };
  auto expr = [&](const std::vector<std::pair<int, Rational>>& terms) {
    std::string s;
    for (const auto& [j, a] : terms) {
      if (sgn(a) == 0) continue;
      s += (sgn(a) < 0 ? " - " : " + ") + num(abs(a)) + " " + var_name(j);
    }
    return s.empty() ? std::string(" 0 ") + var_name(0) : s;
  };
  std::vector<std::pair<int, Rational>> obj;
  for (size_t j = 0; j < lp.vars.size(); ++j) {
    obj.emplace_back(static_cast<int>(j), lp.vars[j].cost);
  }
  out << "\\ objective constant " << num(lp.objective_constant) << "\n";
  out << "Minimize\n obj:" << expr(obj) << "\nSubject To\n";
  for (size_t i = 0; i < lp.constraints.size(); ++i) {
    const auto& c = lp.constraints[i];
    const char* rel = c.relation == Relation::kLessEqual      ? "<="
                      : c.relation == Relation::kGreaterEqual ? ">="
                                                              : "=";
    out << " c" << i << ":" << expr(c.terms) << " " << rel << " " << num(c.rhs)
        << "\n";
  }
  out << "Bounds\n";
  for (size_t j = 0; j < lp.vars.size(); ++j) {
    out << " " << num(lp.vars[j].lower) << " <= " << var_name(j);
    if (lp.vars[j].upper) out << " <= " << num(*lp.vars[j].upper);
    out << "\n";
  }
  out << "End\n";
}

}  // namespace ftclust
