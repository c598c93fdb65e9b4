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

#include "ftclust/instance.h"

#include <algorithm>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include "ftclust/errors.h"
#include "json.hpp"

namespace ftclust {
namespace {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

Rational RationalFromJson(const json& value, const std::string& what) {
  if (value.is_string()) return ParseRational(value.get<std::string>());
  if (value.is_number_integer()) return Rational(value.get<long>());
  if (value.is_number()) return ParseRational(value.dump());
  throw SchemaError(what + ": expected a rational string");
}

const json& Require(const json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw SchemaError(std::string("missing key '") + key + "'");
  }
  return obj.at(key);
}

std::vector<Rational> ParseCoords(const json& point, const std::string& id) {
  std::vector<Rational> coords;
  if (!point.contains("coords")) return coords;
  const json& c = point.at("coords");
  if (!c.is_array() || c.empty()) {
    throw SchemaError("coords of '" + id + "' must be a non-empty array");
  }
  for (const auto& v : c) coords.push_back(RationalFromJson(v, "coords"));
  return coords;
}

Metric MetricFromCoords(const std::vector<std::vector<Rational>>& points,
                        const std::vector<std::string>& names) {
  const size_t n = points.size();
  std::vector<std::vector<Rational>> m(n, std::vector<Rational>(n));
  for (size_t p = 0; p < n; ++p) {
    if (points[p].empty()) {
      throw SchemaError("no 'dist' matrix and point '" + names[p] +
                        "' has no coords");
    }
    if (points[p].size() != points[0].size()) {
      throw SchemaError("coordinate dimension mismatch at '" + names[p] + "'");
    }
  }
  for (size_t p = 0; p < n; ++p) {
    for (size_t q = p + 1; q < n; ++q) {
      Rational sq = 0;
      for (size_t k = 0; k < points[p].size(); ++k) {
        Rational diff = points[p][k] - points[q][k];
        sq += diff * diff;
      }
      m[p][q] = m[q][p] = CeilSqrt(sq, kCoordinateDenominator);
    }
  }
  return Metric(std::move(m));
}

std::vector<std::string> PointNames(const Instance& inst) {
  std::vector<std::string> names = inst.client_ids;
  names.insert(names.end(), inst.facility_ids.begin(), inst.facility_ids.end());
  return names;
}

MatroidDescriptor ParseMatroid(const json& j,
                               const std::map<std::string, int>& fac_index,
                               int num_facilities) {
  if (!j.is_object() || j.size() != 1) {
    throw SchemaError("matroid must have exactly one variant key");
  }
  auto ids_to_set = [&](const json& arr) {
    if (!arr.is_array()) throw SchemaError("matroid set must be an array");
    FacilitySet s;
    for (const auto& id : arr) {
      if (!id.is_string()) throw SchemaError("facility id must be a string");
      auto it = fac_index.find(id.get<std::string>());
      if (it == fac_index.end()) {
        throw SchemaError("matroid references unknown facility '" +
                          id.get<std::string>() + "'");
      }
      s.push_back(it->second);
    }
    std::sort(s.begin(), s.end());
    return s;
  };
  const auto& [kind, body] = *j.items().begin();
  if (kind == "uniform") {
    const json& k = Require(body, "k");
    if (!k.is_number_integer()) throw SchemaError("uniform.k must be integer");
    return MatroidDescriptor::Uniform(num_facilities, k.get<int>());
  }
  if (kind == "partition") {
    std::vector<FacilitySet> blocks;
    std::vector<int> caps;
    for (const auto& b : Require(body, "blocks")) blocks.push_back(ids_to_set(b));
    for (const auto& c : Require(body, "caps")) {
      if (!c.is_number_integer()) throw SchemaError("caps must be integers");
      caps.push_back(c.get<int>());
    }
    return MatroidDescriptor::Partition(num_facilities, std::move(blocks),
                                        std::move(caps));
  }
  if (kind == "free") return MatroidDescriptor::Free(num_facilities);
  if (kind == "explicit") {
    std::vector<FacilitySet> family;
    for (const auto& s : Require(body, "independent")) {
      family.push_back(ids_to_set(s));
    }
    return MatroidDescriptor::Explicit(num_facilities, family);
  }
  throw SchemaError("unknown matroid variant '" + kind + "'");
}

ordered_json MatroidToJson(const MatroidDescriptor& m,
                           const std::vector<std::string>& ids) {
  auto set_to_ids = [&](const FacilitySet& s) {
    ordered_json arr = ordered_json::array();
    for (int e : s) arr.push_back(ids[e]);
    return arr;
  };
  ordered_json out;
  if (const auto* u = std::get_if<UniformMatroid>(&m.variant)) {
    out["uniform"] = {{"k", u->k}};
  } else if (const auto* p = std::get_if<PartitionMatroid>(&m.variant)) {
    ordered_json blocks = ordered_json::array();
    for (const auto& b : p->blocks) blocks.push_back(set_to_ids(b));
    out["partition"] = {{"blocks", blocks}, {"caps", p->caps}};
  } else if (std::holds_alternative<FreeMatroid>(m.variant)) {
    out["free"] = ordered_json::object();
  } else {
    ordered_json family = ordered_json::array();
    for (auto mask : std::get<ExplicitMatroid>(m.variant).independent) {
      if (mask == 0) continue;
      FacilitySet s;
      for (int e = 0; e < 64; ++e) {
        if ((mask >> e) & 1) s.push_back(e);
      }
      family.push_back(set_to_ids(s));
    }
    out["explicit"] = {{"independent", family}};
  }
  return out;
}

}  // namespace

Metric::Metric(std::vector<std::vector<Rational>> matrix)
    : matrix_(std::move(matrix)) {}

void ValidateMetric(const Metric& metric,
                    std::span<const std::string> point_names) {
  const int n = metric.size();
  auto name = [&](int p) {
    return p < static_cast<int>(point_names.size()) ? point_names[p]
                                                    : std::to_string(p);
  };
  for (int p = 0; p < n; ++p) {
    if (static_cast<int>(metric.matrix()[p].size()) != n) {
      throw SchemaError("distance matrix is not square");
    }
  }
  for (int p = 0; p < n; ++p) {
    if (sgn(metric(p, p)) != 0) {
      throw SchemaError("nonzero self distance at '" + name(p) + "'");
    }
    for (int q = 0; q < n; ++q) {
      if (sgn(metric(p, q)) < 0) {
        throw SchemaError("negative distance between '" + name(p) + "' and '" +
                          name(q) + "'");
      }
      if (metric(p, q) != metric(q, p)) {
        throw SchemaError("asymmetric distance between '" + name(p) +
                          "' and '" + name(q) + "'");
      }
    }
  }
  for (int p = 0; p < n; ++p) {
    for (int s = 0; s < n; ++s) {
      for (int q = p + 1; q < n; ++q) {
        if (metric(p, q) > metric(p, s) + metric(s, q)) {
          throw SchemaError("triangle inequality violated on ('" + name(p) +
                            "', '" + name(s) + "', '" + name(q) + "')");
        }
      }
    }
  }
}

void ValidateInstance(const Instance& inst) {
  const int nc = inst.num_clients();
  const int nf = inst.num_facilities();
  if (nc == 0) throw SchemaError("instance has no clients");
  if (nf == 0) throw SchemaError("instance has no facilities");
  std::vector<std::string> names = PointNames(inst);
  std::vector<std::string> sorted = names;
  std::sort(sorted.begin(), sorted.end());
  if (auto dup = std::adjacent_find(sorted.begin(), sorted.end());
      dup != sorted.end()) {
    throw SchemaError("duplicate point id '" + *dup + "'");
  }
  if (inst.metric.size() != nc + nf) {
    throw SchemaError("distance matrix must cover clients and facilities");
  }
  ValidateMetric(inst.metric, names);
  if (static_cast<int>(inst.open_cost.size()) != nf) {
    throw SchemaError("open_cost size mismatch");
  }
  for (int i = 0; i < nf; ++i) {
    if (sgn(inst.open_cost[i]) < 0) {
      throw SchemaError("negative opening cost at '" + inst.facility_ids[i] +
                        "'");
    }
  }
  if (inst.r < 1) throw SchemaError("requirement r must be at least 1");
  if (inst.r > nf) {
    throw SchemaError("requirement r=" + std::to_string(inst.r) +
                      " exceeds |F|=" + std::to_string(nf));
  }
  if (sgn(inst.delta) <= 0) throw SchemaError("delta must be positive");
  if (sgn(inst.epsilon) <= 0) throw SchemaError("epsilon must be positive");
  if (inst.is_matroid()) {
    if (inst.matroid().ground_size != nf) {
      throw SchemaError("matroid ground set differs from facility set");
    }
    ValidateMatroid(inst.matroid());
  } else {
    const Knapsack& k = inst.knapsack();
    if (static_cast<int>(k.weights.size()) != nf) {
      throw SchemaError("knapsack weights size mismatch");
    }
    for (const auto& w : k.weights) {
      if (sgn(w) < 0) throw SchemaError("negative knapsack weight");
    }
    if (sgn(k.budget) < 0) throw SchemaError("negative knapsack budget");
  }
}

Instance LoadInstance(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("invalid JSON: ") + e.what());
  }
  try {
    Instance inst;
    std::vector<std::vector<Rational>> coords;
    for (const char* key : {"clients", "facilities"}) {
      const json& arr = Require(doc, key);
      if (!arr.is_array()) throw SchemaError(std::string(key) + " must be an array");
      for (const auto& p : arr) {
        const json& id = Require(p, "id");
        if (!id.is_string()) throw SchemaError("point id must be a string");
        std::string name = id.get<std::string>();
        auto c = ParseCoords(p, name);
        if (std::string(key) == "clients") {
          inst.client_ids.push_back(name);
          inst.client_coords.push_back(c);
        } else {
          inst.facility_ids.push_back(name);
          inst.facility_coords.push_back(c);
        }
        coords.push_back(std::move(c));
      }
    }
    auto all_empty = [](const auto& v) {
      return std::all_of(v.begin(), v.end(),
                         [](const auto& c) { return c.empty(); });
    };
    if (all_empty(inst.client_coords) && all_empty(inst.facility_coords)) {
      inst.client_coords.clear();
      inst.facility_coords.clear();
    }
    const int nc = inst.num_clients();
    const int nf = inst.num_facilities();
    std::vector<std::string> names = PointNames(inst);
    if (doc.contains("dist")) {
      const json& rows = doc.at("dist");
      if (!rows.is_array() || static_cast<int>(rows.size()) != nc + nf) {
        throw SchemaError("'dist' must be a square matrix over clients then "
                          "facilities");
      }
      std::vector<std::vector<Rational>> m;
      for (const auto& row : rows) {
        if (!row.is_array() || static_cast<int>(row.size()) != nc + nf) {
          throw SchemaError("'dist' row has wrong length");
        }
        std::vector<Rational> out;
        for (const auto& v : row) out.push_back(RationalFromJson(v, "dist"));
        m.push_back(std::move(out));
      }
      inst.metric = Metric(std::move(m));
    } else {
      inst.metric = MetricFromCoords(coords, names);
    }

    std::map<std::string, int> fac_index;
    for (int i = 0; i < nf; ++i) fac_index[inst.facility_ids[i]] = i;
    auto per_facility = [&](const json& obj, const std::string& what) {
      if (!obj.is_object()) throw SchemaError(what + " must be an object");
      std::vector<Rational> out(nf);
      for (const auto& [id, v] : obj.items()) {
        auto it = fac_index.find(id);
        if (it == fac_index.end()) {
          throw SchemaError(what + " references unknown facility '" + id + "'");
        }
        out[it->second] = RationalFromJson(v, what);
      }
      return out;
    };
    inst.open_cost = doc.contains("open_cost")
                         ? per_facility(doc.at("open_cost"), "open_cost")
                         : std::vector<Rational>(nf);
    const json& r = Require(doc, "r");
    if (!r.is_number_integer()) throw SchemaError("r must be an integer");
    inst.r = r.get<int>();

    const json& c = Require(doc, "constraint");
    if (!c.is_object() || c.size() != 1) {
      throw SchemaError("constraint must hold exactly one of matroid/knapsack");
    }
    if (c.contains("matroid")) {
      inst.constraint = ParseMatroid(c.at("matroid"), fac_index, nf);
    } else if (c.contains("knapsack")) {
      const json& k = c.at("knapsack");
      inst.constraint = Knapsack{per_facility(Require(k, "weights"), "weights"),
                                 RationalFromJson(Require(k, "budget"), "budget")};
    } else {
      throw SchemaError("constraint must be 'matroid' or 'knapsack'");
    }
    if (doc.contains("delta")) inst.delta = RationalFromJson(doc["delta"], "delta");
    if (doc.contains("epsilon")) {
      inst.epsilon = RationalFromJson(doc["epsilon"], "epsilon");
    }
    ValidateInstance(inst);
    return inst;
  } catch (const json::exception& e) {
    throw SchemaError(std::string("schema violation: ") + e.what());
  }
}

Instance LoadInstanceFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return LoadInstance(buf.str());
}

std::string SerializeInstance(const Instance& inst) {
  ordered_json doc;
  auto points = [](const std::vector<std::string>& ids,
                   const std::vector<std::vector<Rational>>& coords) {
    ordered_json arr = ordered_json::array();
    for (size_t p = 0; p < ids.size(); ++p) {
      ordered_json pt;
      pt["id"] = ids[p];
      if (p < coords.size() && !coords[p].empty()) {
        ordered_json c = ordered_json::array();
        for (const auto& v : coords[p]) c.push_back(FormatRational(v));
        pt["coords"] = c;
      }
      arr.push_back(pt);
    }
    return arr;
  };
  doc["clients"] = points(inst.client_ids, inst.client_coords);
  doc["facilities"] = points(inst.facility_ids, inst.facility_coords);
  ordered_json dist = ordered_json::array();
  for (const auto& row : inst.metric.matrix()) {
    ordered_json out = ordered_json::array();
    for (const auto& v : row) out.push_back(FormatRational(v));
    dist.push_back(out);
  }
  doc["dist"] = dist;
  auto per_facility = [&](const std::vector<Rational>& values) {
    ordered_json obj = ordered_json::object();
    for (int i = 0; i < inst.num_facilities(); ++i) {
      obj[inst.facility_ids[i]] = FormatRational(values[i]);
    }
    return obj;
  };
  doc["open_cost"] = per_facility(inst.open_cost);
  doc["r"] = inst.r;
  if (inst.is_matroid()) {
    doc["constraint"] = {{"matroid", MatroidToJson(inst.matroid(), inst.facility_ids)}};
  } else {
    doc["constraint"] = {
        {"knapsack",
         {{"weights", per_facility(inst.knapsack().weights)},
          {"budget", FormatRational(inst.knapsack().budget)}}}};
  }
  doc["delta"] = FormatRational(inst.delta);
  doc["epsilon"] = FormatRational(inst.epsilon);
  return doc.dump(2) + "\n";
}

std::vector<int> NearestR(const Instance& inst, int client,
                          std::span<const int> open, int r) {
  if (static_cast<int>(open.size()) < r) {
    throw InfeasibleError("fewer than r open facilities");
  }
  std::vector<int> order(open.begin(), open.end());
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    int c = cmp(inst.d(client, a), inst.d(client, b));
    return c != 0 ? c < 0 : a < b;
  });
  order.resize(r);
  return order;
}

Rational ServiceCostR(const Instance& inst, int client,
                      std::span<const int> open, int r) {
  Rational total = 0;
  for (int i : NearestR(inst, client, open, r)) total += inst.d(client, i);
  return total;
}

CostBreakdown SolutionCost(const Instance& inst, std::span<const int> open) {
  CostBreakdown cost;
  for (int i : open) cost.facility_cost += inst.open_cost[i];
  for (int j = 0; j < inst.num_clients(); ++j) {
    cost.service_cost += ServiceCostR(inst, j, open, inst.r);
  }
  cost.total = cost.facility_cost + cost.service_cost;
  return cost;
}

Solution MakeSolution(const Instance& inst, FacilitySet open) {
  std::sort(open.begin(), open.end());
  open.erase(std::unique(open.begin(), open.end()), open.end());
  Solution sol;
  sol.cost = SolutionCost(inst, open);
  for (int j = 0; j < inst.num_clients(); ++j) {
    sol.assignment.push_back(NearestR(inst, j, open, inst.r));
  }
  sol.open_set = std::move(open);
  return sol;
}

bool IsFeasibleOpenSet(const Instance& inst, std::span<const int> open) {
  if (inst.is_matroid()) return IsIndependent(inst.matroid(), open);
  Rational weight = 0;
  for (int i : open) weight += inst.knapsack().weights[i];
  return weight <= inst.knapsack().budget;
}

Instance GenerateRandom(const GeneratorOptions& options) {
  if (options.num_facilities < options.r) {
    throw SchemaError("generator needs nF >= r");
  }
  if (options.num_clients < 1 || options.r < 1) {
    throw SchemaError("generator needs nC >= 1 and r >= 1");
  }
  std::mt19937_64 rng(options.seed);
  auto uniform = [&](int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
  };
  Instance inst;
  inst.r = options.r;
  auto point = [&] {
    return std::vector<Rational>{Rational(uniform(0, options.grid)),
                                 Rational(uniform(0, options.grid))};
  };
  for (int j = 0; j < options.num_clients; ++j) {
    inst.client_ids.push_back("c" + std::to_string(j));
    inst.client_coords.push_back(point());
  }
  const int nf = options.num_facilities;
  for (int i = 0; i < nf; ++i) {
    inst.facility_ids.push_back("f" + std::to_string(i));
    inst.facility_coords.push_back(point());
    inst.open_cost.emplace_back(uniform(0, 4));
  }
  std::vector<std::vector<Rational>> all = inst.client_coords;
  all.insert(all.end(), inst.facility_coords.begin(), inst.facility_coords.end());
  inst.metric = MetricFromCoords(all, PointNames(inst));

  if (options.kind == ConstraintKind::kMatroid) {
    if (uniform(0, 1) == 0) {
      inst.constraint = MatroidDescriptor::Uniform(nf, uniform(options.r, nf));
    } else {
      const int num_blocks = uniform(1, std::min(nf, 3));
      std::vector<int> perm(nf);
      for (int i = 0; i < nf; ++i) perm[i] = i;
      std::shuffle(perm.begin(), perm.end(), rng);
      std::vector<FacilitySet> blocks(num_blocks);
      for (int p = 0; p < nf; ++p) {
        int b = p < num_blocks ? p : uniform(0, num_blocks - 1);
        blocks[b].push_back(perm[p]);
      }
      std::vector<int> caps(num_blocks);
      int total = 0;
      for (int b = 0; b < num_blocks; ++b) {
        caps[b] = uniform(1, static_cast<int>(blocks[b].size()));
        total += caps[b];
      }
      for (int b = 0; total < options.r; b = (b + 1) % num_blocks) {
        if (caps[b] < static_cast<int>(blocks[b].size())) {
          ++caps[b];
          ++total;
        }
      }
      inst.constraint = MatroidDescriptor::Partition(nf, std::move(blocks),
                                                     std::move(caps));
    }
  } else {
    Knapsack k;
    for (int i = 0; i < nf; ++i) k.weights.emplace_back(uniform(1, 5));
    std::vector<Rational> sorted = k.weights;
    std::sort(sorted.begin(), sorted.end());
    Rational min_r = 0, rest = 0;
    for (int i = 0; i < nf; ++i) (i < options.r ? min_r : rest) += sorted[i];
    const int slack = uniform(0, static_cast<int>(rest.get_d() / 2));
    k.budget = min_r + slack;
    inst.constraint = std::move(k);
  }
  ValidateInstance(inst);
  return inst;
}

}  // namespace ftclust
