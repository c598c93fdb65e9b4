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

#ifndef FTCLUST_MATROID_H_
#define FTCLUST_MATROID_H_

#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "ftclust/rational.h"

namespace ftclust {

// Facilities are referred to by their index in Instance::facility_ids.
using FacilitySet = std::vector<int>;

struct UniformMatroid {
  int k = 0;
  bool operator==(const UniformMatroid&) const = default;
};

struct PartitionMatroid {
  std::vector<FacilitySet> blocks;
  std::vector<int> caps;
  bool operator==(const PartitionMatroid&) const = default;
};

struct FreeMatroid {
  bool operator==(const FreeMatroid&) const = default;
};

// Independent sets as bitmasks over at most 64 facilities. The empty set is
// always a member.
struct ExplicitMatroid {
  std::vector<std::uint64_t> independent;
  bool operator==(const ExplicitMatroid&) const = default;
};

struct MatroidDescriptor {
  int ground_size = 0;
  std::variant<UniformMatroid, PartitionMatroid, FreeMatroid, ExplicitMatroid>
      variant;

  bool operator==(const MatroidDescriptor&) const = default;

  static MatroidDescriptor Uniform(int ground_size, int k);
  static MatroidDescriptor Partition(int ground_size,
                                     std::vector<FacilitySet> blocks,
                                     std::vector<int> caps);
  static MatroidDescriptor Free(int ground_size);
  // `independent` need not list the empty set.
  static MatroidDescriptor Explicit(int ground_size,
                                    const std::vector<FacilitySet>& independent);
};

// Checks the descriptor's axioms and throws SchemaError on violation. For
// explicit matroids downward closure and exchange are checked when the ground
// set has at most 16 elements.
void ValidateMatroid(const MatroidDescriptor& m);

int Rank(const MatroidDescriptor& m, std::span<const int> subset);
bool IsIndependent(const MatroidDescriptor& m, std::span<const int> subset);

struct ViolatedCut {
  FacilitySet subset;  // sorted
  int rank = 0;
  Rational mass;
};

// Finds a subset S maximizing ybar(S) - rank(S) and returns it when that
// violation is positive. ybar may exceed 1 per element (aggregated copies).
std::optional<ViolatedCut> Separate(const MatroidDescriptor& m,
                                    std::span<const Rational> ybar);

// Cut over duplicated facilities. `original_of[k]` is the facility of copy k.
struct CopyCut {
  std::vector<int> copies;  // sorted copy ids
  FacilitySet originals;
  int rank = 0;
  Rational mass;
};

std::optional<CopyCut> SeparateCopies(const MatroidDescriptor& m,
                                      std::span<const int> original_of,
                                      std::span<const Rational> z);

// Exhaustive reference used for cross-checking; requires ground_size <= 20.
std::optional<ViolatedCut> SeparateExhaustive(const MatroidDescriptor& m,
                                              std::span<const Rational> ybar);

}  // namespace ftclust

#endif  // FTCLUST_MATROID_H_
