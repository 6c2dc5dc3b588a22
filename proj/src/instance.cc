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

#include "crs/instance.h"

#include <fmt/format.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "crs/errors.h"

namespace crs {

void Instance::bad_edge(EdgeId id) {
  throw CrsError(ErrorCode::kInvalidEdgeId, fmt::format("edge id {} out of range", id));
}

void Instance::bad_vertex(VertexId w) {
  throw CrsError(ErrorCode::kInvalidVertex, fmt::format("vertex {} out of range", w));
}

Instance build_instance(int vertex_count, std::span<const EdgeInput> edges) {
  if (vertex_count < 0) {
    throw CrsError(ErrorCode::kInvalidArgument, "negative vertex count");
  }
  Instance inst;
  inst.vertex_count_ = vertex_count;
  inst.edges_.reserve(edges.size());
  inst.incident_.assign(static_cast<std::size_t>(vertex_count), {});
  for (const EdgeInput& e : edges) {
    const auto id = static_cast<EdgeId>(inst.edges_.size());
    if (e.u < 0 || e.u >= vertex_count || e.v < 0 || e.v >= vertex_count) {
      throw CrsError(ErrorCode::kEndpointOutOfRange,
                     fmt::format("edge {}: endpoint ({}, {}) outside [0, {})", id,
                                 e.u, e.v, vertex_count));
    }
    if (e.u == e.v) {
      throw CrsError(ErrorCode::kLoopEdge, fmt::format("edge {}: loop at vertex {}", id, e.u));
    }
    if (e.x < Weight() || e.x > Weight::one()) {
      throw CrsError(ErrorCode::kMarginalOutOfRange,
                     fmt::format("edge {}: x = {} outside [0, 1]", id, format_weight(e.x)));
    }
    inst.edges_.push_back({id, e.u, e.v, e.x});
    inst.incident_[static_cast<std::size_t>(e.u)].push_back(id);
    inst.incident_[static_cast<std::size_t>(e.v)].push_back(id);
  }
  return inst;
}

Instance build_instance(int vertex_count, std::span<const EdgeSpec> edges) {
  std::vector<EdgeInput> in;
  in.reserve(edges.size());
  for (const EdgeSpec& e : edges) {
    if (!std::isfinite(e.x) || e.x < 0.0 || e.x > 1.0) {
      throw CrsError(ErrorCode::kMarginalOutOfRange,
                     fmt::format("edge {}: x = {} outside [0, 1]", in.size(), e.x));
    }
    in.push_back({e.u, e.v, Weight::from_double(e.x)});
  }
  return build_instance(vertex_count, std::span<const EdgeInput>(in));
}

Instance build_instance(int vertex_count, std::initializer_list<EdgeSpec> edges) {
  return build_instance(vertex_count, std::span<const EdgeSpec>(edges.begin(), edges.size()));
}

Instance with_marginals(const Instance& skeleton, std::span<const Weight> x) {
  if (x.size() != static_cast<std::size_t>(skeleton.edge_count())) {
    throw CrsError(ErrorCode::kInvalidArgument, "marginal vector length differs from edge count");
  }
  std::vector<EdgeInput> in;
  in.reserve(x.size());
  for (const EdgeRecord& e : skeleton.edges()) {
    in.push_back({e.u, e.v, x[static_cast<std::size_t>(e.id)]});
  }
  return build_instance(skeleton.vertex_count(), std::span<const EdgeInput>(in));
}

void ForestChecker::reset(int vertex_count) {
  parent_.resize(static_cast<std::size_t>(vertex_count));
  std::iota(parent_.begin(), parent_.end(), 0);
  rank_.assign(static_cast<std::size_t>(vertex_count), 0);
}

VertexId ForestChecker::find(VertexId v) {
  auto idx = static_cast<std::size_t>(v);
  while (parent_[idx] != static_cast<VertexId>(idx)) {
    parent_[idx] = parent_[static_cast<std::size_t>(parent_[idx])];
    idx = static_cast<std::size_t>(parent_[idx]);
  }
  return static_cast<VertexId>(idx);
}

bool ForestChecker::add(VertexId u, VertexId v) {
  VertexId a = find(u);
  VertexId b = find(v);
  if (a == b) return false;
  auto ia = static_cast<std::size_t>(a);
  auto ib = static_cast<std::size_t>(b);
  if (rank_[ia] < rank_[ib]) std::swap(ia, ib);
  parent_[ib] = static_cast<VertexId>(ia);
  if (rank_[ia] == rank_[ib]) ++rank_[ia];
  return true;
}

bool is_forest(const Instance& instance, std::span<const EdgeId> edge_ids) {
  ForestChecker checker(instance.vertex_count());
  bool acyclic = true;
  for (EdgeId id : edge_ids) {
    const EdgeRecord& e = instance.edge(id);  // validates every id
    if (acyclic && !checker.add(e.u, e.v)) acyclic = false;
  }
  return acyclic;
}

Weight induced_load(const Instance& instance, std::span<const std::uint8_t> members) {
  Weight total;
  for (const EdgeRecord& e : instance.edges()) {
    if (members[static_cast<std::size_t>(e.u)] && members[static_cast<std::size_t>(e.v)]) {
      total += e.x;
    }
  }
  return total;
}

bool in_forest_polytope(const Instance& instance, int vertex_cap) {
  const int n = instance.vertex_count();
  for (const EdgeRecord& e : instance.edges()) {
    if (e.x < Weight()) return false;
  }
  if (n > vertex_cap) {
    throw CapExceeded(fmt::format(
        "exact forest-polytope check unavailable: {} vertices exceeds cap {}", n, vertex_cap));
  }
  if (n < 2) return true;
  // Edge masks per subset are built incrementally from the lowest set bit.
  const std::uint32_t full = (std::uint32_t{1} << n) - 1;
  std::vector<std::uint8_t> members(static_cast<std::size_t>(n));
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    const int size = std::popcount(mask);
    if (size < 2) continue;
    for (int i = 0; i < n; ++i) members[static_cast<std::size_t>(i)] = (mask >> i) & 1U;
    if (induced_load(instance, members) > Weight::whole(size - 1)) return false;
  }
  return true;
}

namespace {

template <typename InSet>
Weight incident_load_impl(const Instance& instance, VertexId v, InSet&& in_set,
                          std::optional<std::span<const EdgeId>> restrict) {
  std::vector<std::uint8_t> allowed;
  if (restrict) {
    allowed.assign(static_cast<std::size_t>(instance.edge_count()), 0);
    for (EdgeId id : *restrict) {
      instance.edge(id);
      allowed[static_cast<std::size_t>(id)] = 1;
    }
  }
  Weight total;
  for (EdgeId id : instance.incident(v)) {
    if (restrict && !allowed[static_cast<std::size_t>(id)]) continue;
    const EdgeRecord& e = instance.edge(id);
    if (in_set(e.other(v))) total += e.x;
  }
  return total;
}

}  // namespace

Weight incident_load(const Instance& instance, VertexId v,
                     std::span<const std::uint8_t> others,
                     std::optional<std::span<const EdgeId>> restrict) {
  if (others.size() != static_cast<std::size_t>(instance.vertex_count())) {
    throw CrsError(ErrorCode::kInvalidArgument, "vertex mask size differs from vertex count");
  }
  return incident_load_impl(
      instance, v, [&](VertexId w) { return others[static_cast<std::size_t>(w)] != 0; },
      restrict);
}

Weight incident_load(const Instance& instance, VertexId v, std::span<const VertexId> others,
                     std::optional<std::span<const EdgeId>> restrict) {
  std::vector<std::uint8_t> mask(static_cast<std::size_t>(instance.vertex_count()), 0);
  for (VertexId w : others) {
    if (w < 0 || w >= instance.vertex_count()) {
      throw CrsError(ErrorCode::kInvalidVertex, fmt::format("vertex {} out of range", w));
    }
    mask[static_cast<std::size_t>(w)] = 1;
  }
  return incident_load(instance, v, std::span<const std::uint8_t>(mask), restrict);
}

Instance marginals_from_forests_exact(const Instance& skeleton,
                                      std::span<const std::vector<EdgeId>> forests,
                                      std::span<const std::int64_t> weight_units) {
  if (forests.size() != weight_units.size() || forests.empty()) {
    throw CrsError(ErrorCode::kNotConvexCombination,
                   "need one weight per forest and at least one forest");
  }
  std::int64_t sum = 0;
  for (std::int64_t w : weight_units) {
    if (w < 0) throw CrsError(ErrorCode::kNotConvexCombination, "negative weight");
    sum += w;
  }
  if (sum != Weight::kScale) {
    throw CrsError(ErrorCode::kNotConvexCombination, "weights do not sum to 1");
  }
  std::vector<Weight> x(static_cast<std::size_t>(skeleton.edge_count()));
  for (std::size_t f = 0; f < forests.size(); ++f) {
    if (!is_forest(skeleton, forests[f])) {
      throw CrsError(ErrorCode::kNotAForest, fmt::format("input set {} contains a cycle", f));
    }
    std::vector<EdgeId> ids = forests[f];
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    for (EdgeId id : ids) x[static_cast<std::size_t>(id)] += Weight::from_units(weight_units[f]);
  }
  return with_marginals(skeleton, x);
}

Instance marginals_from_forests(const Instance& skeleton,
                                std::span<const std::vector<EdgeId>> forests,
                                std::span<const double> weights) {
  if (forests.size() != weights.size() || forests.empty()) {
    throw CrsError(ErrorCode::kNotConvexCombination,
                   "need one weight per forest and at least one forest");
  }
  double sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw CrsError(ErrorCode::kNotConvexCombination, "negative weight");
    sum += w;
  }
  if (std::fabs(sum - 1.0) > 1e-12) {
    throw CrsError(ErrorCode::kNotConvexCombination,
                   fmt::format("weights sum to {} instead of 1", sum));
  }
  std::vector<std::int64_t> units(weights.size());
  std::int64_t total = 0;
  std::size_t largest = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    units[i] = Weight::from_double(weights[i]).units();
    total += units[i];
    if (weights[i] > weights[largest]) largest = i;
  }
  // Snap the rounding residue onto the largest share.
  units[largest] += Weight::kScale - total;
  return marginals_from_forests_exact(skeleton, forests, units);
}

}  // namespace crs
