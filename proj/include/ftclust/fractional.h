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

#ifndef FTCLUST_FRACTIONAL_H_
#define FTCLUST_FRACTIONAL_H_

#include <span>
#include <vector>

#include "ftclust/instance.h"
#include "ftclust/lp.h"
#include "ftclust/rational.h"

namespace ftclust {

// Sorted copy ids.
using CopySet = std::vector<int>;

// Fractional solution (x, y) of the natural relaxation over originals.
struct FractionalSolution {
  std::vector<std::vector<Rational>> x;  // [client][facility]
  std::vector<Rational> y;               // [facility]
  Rational objective;
  int cut_rounds = 0;
  int cuts_added = 0;
};

// Optimal vertex of the matroid relaxation; throws InfeasibleError with
// "no feasible fault-tolerant solution" when none exists.
// M-LP without matroid cuts. Variable i is y_i; x_ij is RelaxationXVar.
LinearProgram MatroidRelaxationLp(const Instance& inst);

inline int RelaxationXVar(const Instance& inst, int client, int facility) {
  return inst.num_facilities() * (1 + client) + facility;
}

FractionalSolution SolveMatroidRelaxation(const Instance& inst);

struct ClientStats {
  std::vector<Rational> d_av_t;   // t = 1..r stored at index t-1
  std::vector<Rational> d_max_t;
  Rational d_av;
  Rational d_max;  // d_max_t[r-1]
};

// Facility copies after splitting. Each copy k sits at the location of
// facility original_of[k] and carries opening mass y[k]; each client j is
// served fully by the copies in fj[j], split into r unit-mass groups fjt[j].
class SplitState;
SplitState SplitFacilities(const Instance& inst, const FractionalSolution& lp);

class SplitState {
 public:
  SplitState() = default;
  explicit SplitState(const Instance* inst) : inst_(inst) {}

  const Instance& instance() const { return *inst_; }
  int num_copies() const { return static_cast<int>(y.size()); }

  const Rational& Dist(int client, int copy) const {
    return inst_->d(client, original_of[copy]);
  }

  // Splits copy k into k (mass `first_mass`) and a new co-located copy with
  // the remaining mass, placed right after k in the tie-break order. The new
  // copy joins every fj / fjt group containing k. Returns the new id.
  int Split(int k, const Rational& first_mass);

  // `copies` ordered by distance to `client`, then original id, then the
  // global copy order.
  std::vector<int> SortedForClient(int client, std::span<const int> copies) const;

  Rational Mass(std::span<const int> copies) const;

  // Copy ids in tie-break order; splits insert right after their parent.
  const std::vector<int>& order() const { return order_; }

  std::vector<int> original_of;
  std::vector<Rational> y;
  std::vector<CopySet> fj;
  std::vector<std::vector<CopySet>> fjt;
  std::vector<ClientStats> stats;
  Rational f_total;
  Rational lp_objective;
  int splits = 0;

 private:
  friend SplitState SplitFacilities(const Instance&, const FractionalSolution&);
  void RebuildPositions();

  const Instance* inst_ = nullptr;
  std::vector<int> order_;
  std::vector<int> position_;
};

// Duplicates facilities so that every x_kj is 0 or y_k, and each client's
// support is an exact union of r unit-volume groups. Checks every split
// invariant before returning.
SplitState SplitFacilities(const Instance& inst, const FractionalSolution& lp);

ClientStats ComputeClientStats(const SplitState& state, int client);

// Throws InvariantError on the first broken split invariant.
void CheckSplitInvariants(const SplitState& state, const FractionalSolution& lp);

struct Ball {
  int center = -1;
  Rational radius;
  CopySet members;
};

// Closed ball over the copies whose `alive` flag is set (all copies when the
// span is empty).
Ball MakeBall(const SplitState& state, int client, const Rational& radius,
              std::span<const char> alive = {});

bool InBall(const SplitState& state, int client, const Rational& radius,
            int copy);

}  // namespace ftclust

#endif  // FTCLUST_FRACTIONAL_H_
