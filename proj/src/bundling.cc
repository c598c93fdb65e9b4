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

#include "ftclust/bundling.h"

#include <algorithm>
#include <optional>
#include <string>

namespace ftclust {
namespace {

bool Intersects(const CopySet& a, const CopySet& b) {
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i == *j) return true;
    if (*i < *j) {
      ++i;
    } else {
      ++j;
    }
  }
  return false;
}

CopySet Minus(const CopySet& a, const CopySet& b) {
  CopySet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(),
                      std::back_inserter(out));
  return out;
}

void InsertSorted(CopySet* set, int value) {
  set->insert(std::lower_bound(set->begin(), set->end(), value), value);
}

Rational MaxDist(const SplitState& state, int client, const CopySet& copies) {
  Rational m = 0;
  for (int k : copies) m = std::max(m, state.Dist(client, k));
  return m;
}

// Nearest unit volume of `pool` for `client`. The last copy may only be
// partly used; `last_share` is the mass it contributes.
struct Candidate {
  int client = -1;
  CopySet copies;
  Rational dmax;
  int last = -1;
  Rational last_share;
};

std::optional<Candidate> Propose(const SplitState& state, int client,
                                 const CopySet& pool) {
  Candidate c;
  c.client = client;
  Rational mass = 0;
  for (int k : state.SortedForClient(client, pool)) {
    c.copies.push_back(k);
    c.last = k;
    c.last_share = std::min(state.y[k], Rational(1 - mass));
    mass += state.y[k];
    if (mass >= 1) break;
  }
  if (mass < 1) return std::nullopt;
  std::sort(c.copies.begin(), c.copies.end());
  c.dmax = MaxDist(state, client, c.copies);
  return c;
}

}  // namespace

const char* EventName(BundleEventKind kind) {
  switch (kind) {
    case BundleEventKind::kCreate:
      return "create";
    case BundleEventKind::kAbsorb:
      return "absorb";
    case BundleEventKind::kFreezeNoAlien:
      return "freeze_noalien";
    case BundleEventKind::kFreezeNoShell:
      return "freeze_noshell";
  }
  return "";
}

BundleState RunBundling(SplitState* state, const FilterState& filt,
                        Certificate* cert) {
  const Instance& inst = state->instance();
  const int nc = inst.num_clients();
  const int r = inst.r;
  BundleState b;
  b.queues.assign(nc, {});
  b.frozen.assign(nc, 0);
  std::vector<CopySet> pool = state->fj;
  std::vector<char> eligible(nc, 0);
  for (int j = 0; j < nc; ++j) {
    eligible[j] = !filt.is_dangerous[j] || filt.in_d_prime[j];
  }
  auto queue_union = [&](int j) {
    CopySet all;
    for (int u : b.queues[j]) all.insert(all.end(), b.bundles[u].begin(), b.bundles[u].end());
    std::sort(all.begin(), all.end());
    return all;
  };
  auto potential = [&] {
    int p = 0;
    for (int j = 0; j < nc; ++j) {
      if (!eligible[j]) continue;
      p += r - static_cast<int>(b.queues[j].size());
      p += pool[j].empty() ? 0 : 1;
    }
    return p;
  };
  auto first_intersecting = [&](const CopySet& u, bool shells_only) {
    for (size_t id = 0; id < b.bundles.size(); ++id) {
      if (shells_only && !b.shell[id]) continue;
      if (Intersects(u, b.bundles[id])) return static_cast<int>(id);
    }
    return -1;
  };
  auto absorb = [&](int j, int id) {
    b.queues[j].push_back(id);
    pool[j] = Minus(pool[j], b.bundles[id]);
    b.events.push_back({BundleEventKind::kAbsorb, j, id, -1, 0, 0});
  };
  auto create = [&](Candidate c) {
    if (c.last_share < state->y[c.last]) {
      const int fresh = state->Split(c.last, c.last_share);
      for (auto& p : pool) {
        if (std::binary_search(p.begin(), p.end(), c.last)) InsertSorted(&p, fresh);
      }
      for (const auto& u : b.bundles) {
        cert->Check("bundle.split_outside_bundles",
                    !std::binary_search(u.begin(), u.end(), c.last));
      }
    }
    const int id = static_cast<int>(b.bundles.size());
    b.bundles.push_back(c.copies);
    b.creator.push_back(c.client);
    b.shell.push_back(0);
    b.queues[c.client].push_back(id);
    pool[c.client] = Minus(pool[c.client], c.copies);
    b.events.push_back({BundleEventKind::kCreate, c.client, id, -1, 0, c.dmax});
    return id;
  };

  while (true) {
    std::optional<Candidate> best;
    for (int j = 0; j < nc; ++j) {
      if (!eligible[j] || static_cast<int>(b.queues[j].size()) >= r ||
          pool[j].empty()) {
        continue;
      }
      std::optional<Candidate> c = Propose(*state, j, pool[j]);
      cert->Check("bundle.pool_volume", c.has_value(),
                  "client " + inst.client_ids[j] + " has less than unit volume left");
      if (!best || c->dmax < best->dmax) best = std::move(c);
    }
    if (!best) break;
    const int before = potential();
    const int j = best->client;
    if (filt.in_d_prime[j]) {
      const int hit = first_intersecting(best->copies, false);
      if (hit >= 0) {
        absorb(j, hit);
      } else {
        const int id = create(*best);
        if (static_cast<int>(b.queues[j].size()) == r) b.shell[id] = 1;
      }
    } else {
      int witness = -1;
      std::vector<int> witnesses = filt.d_prime;
      std::sort(witnesses.begin(), witnesses.end());
      for (int jp : witnesses) {
        const Rational radius = filt.Radius(*state, jp);
        bool inside = false, outside = false;
        for (int k : best->copies) {
          (InBall(*state, jp, radius, k) ? inside : outside) = true;
        }
        if (inside && outside && !Intersects(best->copies, queue_union(jp))) {
          witness = jp;
          break;
        }
      }
      if (witness >= 0) {
        pool[j].clear();
        b.frozen[j] = 1;
        BundleEvent e{BundleEventKind::kFreezeNoAlien, j, -1, witness,
                      static_cast<int>(b.queues[witness].size()), best->dmax};
        CheckNoAlienEvent(*state, filt, e, cert);
        b.events.push_back(e);
      } else if (int shell = first_intersecting(best->copies, true); shell >= 0) {
        pool[j].clear();
        b.frozen[j] = 1;
        b.events.push_back({BundleEventKind::kFreezeNoShell, j, shell, -1, 0,
                            best->dmax});
      } else if (int hit = first_intersecting(best->copies, false); hit >= 0) {
        absorb(j, hit);
      } else {
        create(*best);
      }
    }
    cert->Check("bundle.progress", potential() < before);
  }
  CheckBundleInvariants(*state, filt, b, cert);
  return b;
}

void CheckNoAlienEvent(const SplitState& state, const FilterState& filt,
                       const BundleEvent& e, Certificate* cert) {
  const int r = state.instance().r;
  const std::string who = "client " + state.instance().client_ids[e.client];
  cert->Check("lemma3.queue_size", e.witness_queue >= r - 1, who);
  cert->Check("lemma3.distance",
              e.candidate_dmax >=
                  (1 - 1 / filt.gamma) * state.stats[e.witness].d_max / 2,
              who);
}

void CheckBundleInvariants(const SplitState& state, const FilterState& filt,
                           const BundleState& b, Certificate* cert) {
  const Instance& inst = state.instance();
  const int r = inst.r;
  const int nb = static_cast<int>(b.bundles.size());
  std::vector<int> owner(state.num_copies(), -1);
  for (int u = 0; u < nb; ++u) {
    cert->Check("bundle.unit_mass", state.Mass(b.bundles[u]) == 1,
                "bundle " + std::to_string(u));
    for (int k : b.bundles[u]) {
      cert->Check("bundle.disjoint", owner[k] < 0, "copy " + std::to_string(k));
      owner[k] = u;
    }
  }
  std::vector<CopySet> balls;
  for (int jp : filt.d_prime) {
    balls.push_back(MakeBall(state, jp, filt.Radius(state, jp)).members);
  }
  auto subset = [](const CopySet& a, const CopySet& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
  };
  for (int j = 0; j < inst.num_clients(); ++j) {
    const auto& q = b.queues[j];
    const std::string who = "client " + inst.client_ids[j];
    const int size = static_cast<int>(q.size());
    if (filt.in_d_prime[j]) {
      cert->Check("bundle.queue_size", size == r, who);
    } else if (filt.is_dangerous[j]) {
      cert->Check("bundle.queue_size", size == 0, who);
    } else {
      cert->Check("bundle.queue_size", size <= r, who);
    }
    std::vector<int> sorted = q;
    std::sort(sorted.begin(), sorted.end());
    cert->Check("bundle.queue_distinct",
                std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end(), who);
    for (int t = 0; t < size; ++t) {
      cert->Check("lemma2.queue_distance",
                  MaxDist(state, j, b.bundles[q[t]]) <= 3 * state.stats[j].d_max_t[t],
                  who + " position " + std::to_string(t + 1));
    }
  }
  for (int u = 0; u < nb; ++u) {
    const int c = b.creator[u];
    const bool rth = filt.in_d_prime[c] && b.queues[c].size() == size_t(r) &&
                     b.queues[c][r - 1] == u;
    cert->Check("bundle.shell_definition", bool(b.shell[u]) == rth,
                "bundle " + std::to_string(u));
  }
  for (size_t p = 0; p < filt.d_prime.size(); ++p) {
    const int jp = filt.d_prime[p];
    const auto& q = b.queues[jp];
    const std::string who = "client " + inst.client_ids[jp];
    for (int t = 0; t + 1 < r; ++t) {
      cert->Check("lemma4.queue_in_ball", subset(b.bundles[q[t]], balls[p]), who);
    }
    for (int u = 0; u < nb; ++u) {
      const bool in_prefix = std::find(q.begin(), q.begin() + (r - 1), u) !=
                             q.begin() + (r - 1);
      cert->Check("lemma4.inside_iff_prefix",
                  subset(b.bundles[u], balls[p]) == in_prefix,
                  who + " bundle " + std::to_string(u));
    }
  }
  for (int j = 0; j < inst.num_clients(); ++j) {
    if (filt.is_dangerous[j]) continue;
    for (int u : b.queues[j]) {
      for (size_t p = 0; p < balls.size(); ++p) {
        cert->Check("lemma4.safe_no_straddle",
                    !Intersects(b.bundles[u], balls[p]) ||
                        subset(b.bundles[u], balls[p]),
                    "client " + inst.client_ids[j]);
      }
    }
  }
}

}  // namespace ftclust
