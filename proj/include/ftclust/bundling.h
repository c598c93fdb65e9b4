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

#ifndef FTCLUST_BUNDLING_H_
#define FTCLUST_BUNDLING_H_

#include <vector>

#include "ftclust/certificate.h"
#include "ftclust/filtering.h"
#include "ftclust/fractional.h"

namespace ftclust {

enum class BundleEventKind { kCreate, kAbsorb, kFreezeNoAlien, kFreezeNoShell };

struct BundleEvent {
  BundleEventKind kind;
  int client = -1;
  int bundle = -1;            // created/absorbed bundle, or the shell witness
  int witness = -1;           // j' in D' for kFreezeNoAlien
  int witness_queue = 0;      // |Q_j'| at event time
  Rational candidate_dmax;    // max_{i in U} d(i, j) of the proposal
};

struct BundleState {
  std::vector<CopySet> bundles;          // by creation index
  std::vector<int> creator;
  std::vector<char> shell;
  std::vector<std::vector<int>> queues;  // per client, bundle ids in order
  std::vector<char> frozen;
  std::vector<BundleEvent> events;
};

// Algorithm 1. Splits copies of `state` at unit boundaries when a new bundle
// needs part of a copy, and checks Lemmas 2-4 before returning.
BundleState RunBundling(SplitState* state, const FilterState& filt,
                        Certificate* cert);

// Lemma 3 at a noalien freeze.
void CheckNoAlienEvent(const SplitState& state, const FilterState& filt,
                       const BundleEvent& event, Certificate* cert);

// Post-loop structure: masses, disjointness, queue sizes, shells, Lemmas 2
// and 4.
void CheckBundleInvariants(const SplitState& state, const FilterState& filt,
                           const BundleState& bund, Certificate* cert);

const char* EventName(BundleEventKind kind);

}  // namespace ftclust

#endif  // FTCLUST_BUNDLING_H_
