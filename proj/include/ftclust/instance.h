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

#ifndef FTCLUST_INSTANCE_H_
#define FTCLUST_INSTANCE_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "ftclust/matroid.h"
#include "ftclust/rational.h"

namespace ftclust {

// Distances over clients followed by facilities. Point p < num_clients is a
// client, otherwise facility p - num_clients.
class Metric {
 public:
  Metric() = default;
  explicit Metric(std::vector<std::vector<Rational>> matrix);

  int size() const { return static_cast<int>(matrix_.size()); }
  const Rational& operator()(int p, int q) const { return matrix_[p][q]; }
  const std::vector<std::vector<Rational>>& matrix() const { return matrix_; }

  bool operator==(const Metric&) const = default;

 private:
  std::vector<std::vector<Rational>> matrix_;
};

// Throws SchemaError naming the offending pair or triple.
void ValidateMetric(const Metric& metric,
                    std::span<const std::string> point_names);

struct Knapsack {
  std::vector<Rational> weights;
  Rational budget;
  bool operator==(const Knapsack&) const = default;
};

using SideConstraint = std::variant<MatroidDescriptor, Knapsack>;

// Denominator used when coordinates are turned into distances.
inline constexpr unsigned long kCoordinateDenominator = 1000000;

struct Instance {
  std::vector<std::string> client_ids;
  std::vector<std::string> facility_ids;
  // Optional planar/n-dimensional coordinates, kept for round trips.
  std::vector<std::vector<Rational>> client_coords;
  std::vector<std::vector<Rational>> facility_coords;
  Metric metric;
  std::vector<Rational> open_cost;
  int r = 1;
  SideConstraint constraint = MatroidDescriptor::Free(0);
  Rational delta{1, 10};
  Rational epsilon{1, 20};

  int num_clients() const { return static_cast<int>(client_ids.size()); }
  int num_facilities() const { return static_cast<int>(facility_ids.size()); }

  // Client-facility distance.
  const Rational& d(int client, int facility) const {
    return metric(client, num_clients() + facility);
  }
  const Rational& client_distance(int a, int b) const { return metric(a, b); }

  bool is_matroid() const {
    return std::holds_alternative<MatroidDescriptor>(constraint);
  }
  const MatroidDescriptor& matroid() const {
    return std::get<MatroidDescriptor>(constraint);
  }
  const Knapsack& knapsack() const { return std::get<Knapsack>(constraint); }

  bool operator==(const Instance&) const = default;
};

// Checks every instance invariant; throws SchemaError.
void ValidateInstance(const Instance& inst);

Instance LoadInstance(std::string_view json_text);
Instance LoadInstanceFile(const std::string& path);
std::string SerializeInstance(const Instance& inst);

// Sum of the r smallest distances from `client` to members of `open`.
// Throws InfeasibleError when |open| < r.
Rational ServiceCostR(const Instance& inst, int client,
                      std::span<const int> open, int r);

// The r nearest members of `open`, ties broken by facility index.
std::vector<int> NearestR(const Instance& inst, int client,
                          std::span<const int> open, int r);

struct CostBreakdown {
  Rational facility_cost;
  Rational service_cost;
  Rational total;
};

CostBreakdown SolutionCost(const Instance& inst, std::span<const int> open);

struct Solution {
  FacilitySet open_set;                       // sorted facility indices
  std::vector<std::vector<int>> assignment;   // per client, nearest first
  CostBreakdown cost;
};

// Opens `open` and assigns every client its r nearest members.
Solution MakeSolution(const Instance& inst, FacilitySet open);

// Side-constraint feasibility of an open set (independence or budget).
bool IsFeasibleOpenSet(const Instance& inst, std::span<const int> open);

enum class ConstraintKind { kMatroid, kKnapsack };

struct GeneratorOptions {
  std::uint64_t seed = 1;
  int num_clients = 5;
  int num_facilities = 5;
  int r = 1;
  ConstraintKind kind = ConstraintKind::kMatroid;
  int grid = 10;  // coordinates drawn from [0, grid]^2
};

// Deterministic for a fixed seed. Throws SchemaError when nF < r.
Instance GenerateRandom(const GeneratorOptions& options);

}  // namespace ftclust

#endif  // FTCLUST_INSTANCE_H_
