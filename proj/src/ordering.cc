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

#include "crs/ordering.h"

#include <fmt/format.h>

#include <algorithm>

#include "crs/errors.h"

namespace crs {

Labeling::Labeling(std::vector<VertexId> order) {
  for (VertexId v : order) insert_at(v, order_.size());
}

Labeling Labeling::identity(int vertex_count) {
  Labeling l;
  for (VertexId v = 0; v < vertex_count; ++v) l.insert_at(v, l.size());
  return l;
}

Labeling Labeling::uniform(int vertex_count, Rng& rng) {
  Labeling l;
  for (VertexId v = 0; v < vertex_count; ++v) l.insert_random(v, rng);
  return l;
}

int Labeling::rank(VertexId v) const {
  if (!contains(v)) {
    throw CrsError(ErrorCode::kUnknownVertex, fmt::format("vertex {} is not labeled", v));
  }
  return rank_[static_cast<std::size_t>(v)];
}

void Labeling::insert_at(VertexId v, std::size_t slot) {
  if (v < 0) throw CrsError(ErrorCode::kInvalidVertex, fmt::format("invalid vertex {}", v));
  if (contains(v)) {
    throw CrsError(ErrorCode::kDuplicateVertex, fmt::format("vertex {} already labeled", v));
  }
  if (slot > order_.size()) {
    throw CrsError(ErrorCode::kInvalidArgument, "labeling slot out of range");
  }
  if (static_cast<std::size_t>(v) >= rank_.size()) rank_.resize(static_cast<std::size_t>(v) + 1, -1);
  order_.insert(order_.begin() + static_cast<std::ptrdiff_t>(slot), v);
  for (std::size_t i = slot; i < order_.size(); ++i) {
    rank_[static_cast<std::size_t>(order_[i])] = static_cast<std::int32_t>(i);
  }
}

void Labeling::clear() {
  for (VertexId v : order_) rank_[static_cast<std::size_t>(v)] = -1;
  order_.clear();
}

Labeling labeling_insert(Labeling labeling, VertexId v, Rng& rng) {
  labeling.insert_random(v, rng);
  return labeling;
}

void Ordering::unknown_vertex(VertexId v) {
  throw CrsError(ErrorCode::kUnknownVertex, fmt::format("vertex {} is not ordered", v));
}

Ordering Ordering::from_parts(std::span<const VertexId> unseen, std::span<const VertexId> core) {
  Ordering o;
  o.order_.reserve(unseen.size() + core.size());
  o.order_.insert(o.order_.end(), unseen.begin(), unseen.end());
  o.order_.insert(o.order_.end(), core.begin(), core.end());
  o.core_begin_ = unseen.size();
  VertexId max_id = -1;
  for (VertexId v : o.order_) max_id = std::max(max_id, v);
  o.pos_.assign(static_cast<std::size_t>(max_id + 1), -1);
  for (std::size_t i = 0; i < o.order_.size(); ++i) {
    auto& slot = o.pos_[static_cast<std::size_t>(o.order_[i])];
    if (slot >= 0) {
      throw CrsError(ErrorCode::kDuplicateVertex,
                     fmt::format("vertex {} ordered twice", o.order_[i]));
    }
    slot = static_cast<std::int32_t>(i);
  }
  return o;
}

void TopologicalOrderer::order(std::span<const WeightedEdge> edges,
                               std::span<const VertexId> vertices, const Labeling& tiebreak,
                               std::vector<VertexId>& out) {
  out.clear();
  pool_.assign(vertices.begin(), vertices.end());
  VertexId max_id = -1;
  for (VertexId v : pool_) max_id = std::max(max_id, v);
  if (static_cast<std::size_t>(max_id + 1) > load_.size()) {
    load_.resize(static_cast<std::size_t>(max_id + 1), 0);
    remaining_.resize(static_cast<std::size_t>(max_id + 1), 0);
  }
  for (VertexId v : pool_) {
    load_[static_cast<std::size_t>(v)] = 0;
    remaining_[static_cast<std::size_t>(v)] = 1;
  }
  for (const WeightedEdge& e : edges) {
    load_[static_cast<std::size_t>(e.u)] += e.x.units();
    load_[static_cast<std::size_t>(e.v)] += e.x.units();
  }
  while (!pool_.empty()) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < pool_.size(); ++i) {
      const auto li = load_[static_cast<std::size_t>(pool_[i])];
      const auto lb = load_[static_cast<std::size_t>(pool_[best])];
      if (li < lb ||
          (li == lb && tiebreak.rank_unchecked(pool_[i]) < tiebreak.rank_unchecked(pool_[best]))) {
        best = i;
      }
    }
    const VertexId w = pool_[best];
    pool_[best] = pool_.back();
    pool_.pop_back();
    remaining_[static_cast<std::size_t>(w)] = 0;
    out.push_back(w);
    for (const WeightedEdge& e : edges) {
      if (e.u == w && remaining_[static_cast<std::size_t>(e.v)]) {
        load_[static_cast<std::size_t>(e.v)] -= e.x.units();
      } else if (e.v == w && remaining_[static_cast<std::size_t>(e.u)]) {
        load_[static_cast<std::size_t>(e.u)] -= e.x.units();
      }
    }
  }
}

namespace {

void require_labeled(const Labeling& labeling, VertexId v) {
  if (!labeling.contains(v)) {
    throw CrsError(ErrorCode::kIncompleteLabeling,
                   fmt::format("vertex {} is missing from the labeling", v));
  }
}

}  // namespace

Ordering offline_order(const Instance& instance, std::optional<std::span<const EdgeId>> restrict,
                       const Labeling& labeling) {
  std::vector<WeightedEdge> edges;
  auto take = [&](const EdgeRecord& e) {
    require_labeled(labeling, e.u);
    require_labeled(labeling, e.v);
    edges.push_back({e.u, e.v, e.x});
  };
  if (restrict) {
    for (EdgeId id : *restrict) take(instance.edge(id));
  } else {
    for (const EdgeRecord& e : instance.edges()) take(e);
  }
  TopologicalOrderer orderer;
  std::vector<VertexId> removal;
  orderer.order(edges, labeling.vertices(), labeling, removal);
  return Ordering::from_parts({}, removal);
}

Ordering sample_order(const Instance& instance, std::span<const EdgeId> sample,
                      const Labeling& labeling) {
  std::vector<WeightedEdge> edges;
  edges.reserve(sample.size());
  std::vector<std::uint8_t> in_core(static_cast<std::size_t>(instance.vertex_count()), 0);
  std::vector<VertexId> core;
  for (EdgeId id : sample) {
    const EdgeRecord& e = instance.edge(id);
    edges.push_back({e.u, e.v, e.x});
    for (VertexId w : {e.u, e.v}) {
      require_labeled(labeling, w);
      if (!in_core[static_cast<std::size_t>(w)]) {
        in_core[static_cast<std::size_t>(w)] = 1;
        core.push_back(w);
      }
    }
  }
  std::vector<VertexId> unseen;
  for (VertexId w : labeling.vertices()) {
    if (w >= instance.vertex_count() || !in_core[static_cast<std::size_t>(w)]) unseen.push_back(w);
  }
  TopologicalOrderer orderer;
  std::vector<VertexId> removal;
  orderer.order(edges, core, labeling, removal);
  return Ordering::from_parts(unseen, removal);
}

Ordering extend_with_unseen(const Ordering& ordering, const Labeling& labeling, VertexId v) {
  if (ordering.contains(v)) {
    throw CrsError(ErrorCode::kDuplicateVertex, fmt::format("vertex {} already ordered", v));
  }
  require_labeled(labeling, v);
  std::vector<VertexId> unseen(ordering.unseen().begin(), ordering.unseen().end());
  const int rank = labeling.rank(v);
  auto it = std::find_if(unseen.begin(), unseen.end(),
                         [&](VertexId w) { return labeling.rank(w) > rank; });
  unseen.insert(it, v);
  return Ordering::from_parts(unseen, ordering.core());
}

bool precedes(const Ordering& ordering, VertexId a, VertexId b) {
  return ordering.position(a) < ordering.position(b);
}

VertexId bucket_owner(const Ordering& ordering, const EdgeRecord& e) {
  return ordering.position(e.u) < ordering.position(e.v) ? e.u : e.v;
}

std::vector<EdgeId> bucket(const Ordering& ordering, const Instance& instance, VertexId v,
                           std::optional<std::span<const EdgeId>> restrict) {
  std::vector<std::uint8_t> allowed;
  if (restrict) {
    allowed.assign(static_cast<std::size_t>(instance.edge_count()), 0);
    for (EdgeId id : *restrict) {
      instance.edge(id);
      allowed[static_cast<std::size_t>(id)] = 1;
    }
  }
  std::vector<EdgeId> out;
  const int pv = ordering.position(v);
  for (EdgeId id : instance.incident(v)) {
    if (restrict && !allowed[static_cast<std::size_t>(id)]) continue;
    if (pv < ordering.position(instance.edge(id).other(v))) out.push_back(id);
  }
  return out;
}

VertexId witness_vertex(const Instance& instance, std::span<const EdgeId> sample,
                        const Ordering& sample_ordering, VertexId v) {
  std::vector<std::int64_t> toward(static_cast<std::size_t>(instance.vertex_count()), 0);
  std::int64_t residual = 0;
  for (EdgeId id : sample) {
    const EdgeRecord& e = instance.edge(id);
    if (!e.touches(v)) continue;
    toward[static_cast<std::size_t>(e.other(v))] += e.x.units();
    residual += e.x.units();
  }
  const std::int64_t threshold = Weight::whole(2).units();
  if (residual <= threshold) return sample_ordering.vertices().front();
  // With loads in the forest polytope v cannot be removed while its residual
  // exceeds 2; if it is anyway, v itself is the first qualifying vertex.
  for (VertexId w : sample_ordering.core()) {
    if (w == v) return v;
    residual -= toward[static_cast<std::size_t>(w)];
    if (residual <= threshold) return w;
  }
  return v;
}

VertexId witness_vertex(const Instance& instance, std::span<const EdgeId> sample,
                        const Labeling& labeling, VertexId v) {
  return witness_vertex(instance, sample, sample_order(instance, sample, labeling), v);
}

}  // namespace crs
