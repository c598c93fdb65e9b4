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

#include "ftclust/matroid.h"

#include <algorithm>
#include <bit>
#include <numeric>
#include <string>

#include "ftclust/errors.h"

namespace ftclust {
namespace {

std::uint64_t ToMask(std::span<const int> subset) {
  std::uint64_t mask = 0;
  for (int e : subset) mask |= std::uint64_t{1} << e;
  return mask;
}

FacilitySet FromMask(std::uint64_t mask) {
  FacilitySet out;
  for (int e = 0; mask != 0; ++e, mask >>= 1) {
    if (mask & 1) out.push_back(e);
  }
  return out;
}

// Best prefix of `order` (already sorted by decreasing mass) under the rank
// function min(|prefix|, cap). Returns the prefix length, 0 if none violates.
size_t BestPrefix(const std::vector<int>& order,
                  std::span<const Rational> ybar, int cap, Rational* excess) {
  Rational running = 0;
  Rational best = 0;
  size_t best_len = 0;
  for (size_t s = 0; s < order.size(); ++s) {
    running += ybar[order[s]];
    Rational violation = running - std::min<long>(s + 1, cap);
    if (violation > best) {
      best = violation;
      best_len = s + 1;
    }
  }
  *excess = best;
  return best_len;
}

std::vector<int> SortedSupport(std::span<const int> elements,
                               std::span<const Rational> ybar) {
  std::vector<int> order;
  for (int e : elements) {
    if (sgn(ybar[e]) > 0) order.push_back(e);
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return ybar[a] > ybar[b]; });
  return order;
}

}  // namespace

MatroidDescriptor MatroidDescriptor::Uniform(int ground_size, int k) {
  return {ground_size, UniformMatroid{k}};
}

MatroidDescriptor MatroidDescriptor::Partition(int ground_size,
                                               std::vector<FacilitySet> blocks,
                                               std::vector<int> caps) {
  for (auto& b : blocks) std::sort(b.begin(), b.end());
  return {ground_size, PartitionMatroid{std::move(blocks), std::move(caps)}};
}

MatroidDescriptor MatroidDescriptor::Free(int ground_size) {
  return {ground_size, FreeMatroid{}};
}

MatroidDescriptor MatroidDescriptor::Explicit(
    int ground_size, const std::vector<FacilitySet>& independent) {
  if (ground_size > 64) {
    throw SchemaError("explicit matroids support at most 64 facilities");
  }
  std::vector<std::uint64_t> masks{0};
  for (const auto& s : independent) masks.push_back(ToMask(s));
  std::sort(masks.begin(), masks.end());
  masks.erase(std::unique(masks.begin(), masks.end()), masks.end());
  return {ground_size, ExplicitMatroid{std::move(masks)}};
}

void ValidateMatroid(const MatroidDescriptor& m) {
  const int n = m.ground_size;
  if (const auto* u = std::get_if<UniformMatroid>(&m.variant)) {
    if (u->k < 0 || u->k > n) {
      throw SchemaError("uniform matroid needs 0 <= k <= |F|, got k=" +
                        std::to_string(u->k));
    }
  } else if (const auto* p = std::get_if<PartitionMatroid>(&m.variant)) {
    if (p->blocks.size() != p->caps.size()) {
      throw SchemaError("partition matroid: blocks and caps differ in length");
    }
    std::vector<int> seen(n, 0);
    for (size_t b = 0; b < p->blocks.size(); ++b) {
      if (p->caps[b] < 0) throw SchemaError("partition matroid: negative cap");
      for (int e : p->blocks[b]) {
        if (e < 0 || e >= n) throw SchemaError("partition block out of range");
        if (seen[e]++) {
          throw SchemaError("partition blocks overlap on facility " +
                            std::to_string(e));
        }
      }
    }
    for (int e = 0; e < n; ++e) {
      if (!seen[e]) {
        throw SchemaError("partition blocks do not cover facility " +
                          std::to_string(e));
      }
    }
  } else if (const auto* x = std::get_if<ExplicitMatroid>(&m.variant)) {
    if (n > 64) throw SchemaError("explicit matroid ground set too large");
    for (auto s : x->independent) {
      if (n < 64 && (s >> n) != 0) {
        throw SchemaError("explicit matroid set outside the ground set");
      }
    }
    if (n > 16) return;
    const auto& fam = x->independent;
    auto member = [&](std::uint64_t s) {
      return std::binary_search(fam.begin(), fam.end(), s);
    };
    for (auto s : fam) {
      for (std::uint64_t rest = s; rest != 0; rest &= rest - 1) {
        std::uint64_t bit = rest & -rest;
        if (!member(s & ~bit)) {
          throw SchemaError("explicit matroid is not downward closed");
        }
      }
    }
    for (auto a : fam) {
      for (auto b : fam) {
        if (std::popcount(a) >= std::popcount(b)) continue;
        bool extended = false;
        for (std::uint64_t rest = b & ~a; rest != 0; rest &= rest - 1) {
          if (member(a | (rest & -rest))) {
            extended = true;
            break;
          }
        }
        if (!extended) {
          throw SchemaError("explicit matroid violates the exchange property");
        }
      }
    }
  }
}

int Rank(const MatroidDescriptor& m, std::span<const int> subset) {
  if (const auto* u = std::get_if<UniformMatroid>(&m.variant)) {
    return std::min<int>(subset.size(), u->k);
  }
  if (const auto* p = std::get_if<PartitionMatroid>(&m.variant)) {
    std::vector<int> block_of(m.ground_size, -1);
    for (size_t b = 0; b < p->blocks.size(); ++b) {
      for (int e : p->blocks[b]) block_of[e] = b;
    }
    std::vector<int> count(p->blocks.size(), 0);
    for (int e : subset) ++count[block_of[e]];
    int rank = 0;
    for (size_t b = 0; b < count.size(); ++b) {
      rank += std::min(count[b], p->caps[b]);
    }
    return rank;
  }
  if (std::holds_alternative<FreeMatroid>(m.variant)) {
    return static_cast<int>(subset.size());
  }
  const auto& fam = std::get<ExplicitMatroid>(m.variant).independent;
  const std::uint64_t mask = ToMask(subset);
  int best = 0;
  for (auto s : fam) {
    if ((s & ~mask) == 0) best = std::max(best, std::popcount(s));
  }
  return best;
}

bool IsIndependent(const MatroidDescriptor& m, std::span<const int> subset) {
  return Rank(m, subset) == static_cast<int>(subset.size());
}

std::optional<ViolatedCut> SeparateExhaustive(const MatroidDescriptor& m,
                                              std::span<const Rational> ybar) {
  const int n = m.ground_size;
  if (n > 20) throw std::invalid_argument("exhaustive separation: |F| > 20");
  std::optional<ViolatedCut> best;
  Rational best_violation = 0;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
    FacilitySet s = FromMask(mask);
    Rational mass = 0;
    for (int e : s) mass += ybar[e];
    const int rank = Rank(m, s);
    Rational violation = mass - rank;
    if (sgn(violation) <= 0) continue;
    if (!best || violation > best_violation ||
        (violation == best_violation && s < best->subset)) {
      best_violation = violation;
      best = ViolatedCut{std::move(s), rank, mass};
    }
  }
  return best;
}

std::optional<ViolatedCut> Separate(const MatroidDescriptor& m,
                                    std::span<const Rational> ybar) {
  const int n = m.ground_size;
  if (std::holds_alternative<ExplicitMatroid>(m.variant)) {
    return SeparateExhaustive(m, ybar);
  }
  FacilitySet chosen;
  Rational excess_total = 0;
  auto take_prefix = [&](std::span<const int> elements, int cap) {
    std::vector<int> order = SortedSupport(elements, ybar);
    Rational excess;
    size_t len = BestPrefix(order, ybar, cap, &excess);
    chosen.insert(chosen.end(), order.begin(), order.begin() + len);
    excess_total += excess;
  };
  std::vector<int> all(n);
  std::iota(all.begin(), all.end(), 0);
  if (const auto* u = std::get_if<UniformMatroid>(&m.variant)) {
    take_prefix(all, u->k);
  } else if (const auto* p = std::get_if<PartitionMatroid>(&m.variant)) {
    for (size_t b = 0; b < p->blocks.size(); ++b) {
      take_prefix(p->blocks[b], p->caps[b]);
    }
  } else {
    // Free matroid: rank(S) = |S|, so only elements above 1 can violate.
    for (int e = 0; e < n; ++e) {
      if (ybar[e] > 1) {
        chosen.push_back(e);
        excess_total += ybar[e] - 1;
      }
    }
  }
  if (sgn(excess_total) <= 0) return std::nullopt;
  std::sort(chosen.begin(), chosen.end());
  ViolatedCut cut;
  cut.rank = Rank(m, chosen);
  for (int e : chosen) cut.mass += ybar[e];
  cut.subset = std::move(chosen);
  return cut;
}

std::optional<CopyCut> SeparateCopies(const MatroidDescriptor& m,
                                      std::span<const int> original_of,
                                      std::span<const Rational> z) {
  std::vector<Rational> aggregated(m.ground_size);
  for (size_t k = 0; k < z.size(); ++k) aggregated[original_of[k]] += z[k];
  auto cut = Separate(m, aggregated);
  if (!cut) return std::nullopt;
  CopyCut out;
  out.originals = cut->subset;
  out.rank = cut->rank;
  out.mass = cut->mass;
  for (size_t k = 0; k < z.size(); ++k) {
    if (std::binary_search(cut->subset.begin(), cut->subset.end(),
                           original_of[k])) {
      out.copies.push_back(static_cast<int>(k));
    }
  }
  return out;
}

}  // namespace ftclust
