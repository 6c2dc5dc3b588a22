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

#ifndef CRS_ORDERING_H_
#define CRS_ORDERING_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "crs/instance.h"
#include "crs/rng.h"
#include "crs/weight.h"

namespace crs {

// Consistent tiebreak: a total order on the vertices seen so far. Position 0
// is the smallest label.
class Labeling {
 public:
  Labeling() = default;
  // Throws kDuplicateVertex or kInvalidVertex.
  explicit Labeling(std::vector<VertexId> order);

  static Labeling identity(int vertex_count);
  // Uniform over all orders of 0..vertex_count-1, built by random insertion.
  static Labeling uniform(int vertex_count, Rng& rng);

  std::size_t size() const { return order_.size(); }
  std::span<const VertexId> vertices() const { return order_; }
  bool contains(VertexId v) const {
    return v >= 0 && static_cast<std::size_t>(v) < rank_.size() &&
           rank_[static_cast<std::size_t>(v)] >= 0;
  }
  // Throws kUnknownVertex.
  int rank(VertexId v) const;
  int rank_unchecked(VertexId v) const { return rank_[static_cast<std::size_t>(v)]; }

  // Puts v in slot `slot` of size()+1 slots, shifting later labels.
  void insert_at(VertexId v, std::size_t slot);
  // Uniformly random slot. Relative order of existing vertices is preserved.
  void insert_random(VertexId v, Rng& rng) { insert_at(v, rng.below(order_.size() + 1)); }
  void clear();

  friend bool operator==(const Labeling& a, const Labeling& b) { return a.order_ == b.order_; }

 private:
  std::vector<VertexId> order_;
  std::vector<std::int32_t> rank_;  // by vertex id, -1 when absent
};

// Value-returning insertion. Throws kDuplicateVertex.
Labeling labeling_insert(Labeling labeling, VertexId v, Rng& rng);

// A vertex order under which earlier means smaller. For sample-based orders
// the vertices split into an unseen prefix (ordered by labeling) followed by
// the core T, the endpoints of sampled edges, in removal order.
class Ordering {
 public:
  Ordering() = default;

  std::span<const VertexId> vertices() const { return order_; }
  std::span<const VertexId> unseen() const {
    return std::span<const VertexId>(order_).first(core_begin_);
  }
  std::span<const VertexId> core() const {
    return std::span<const VertexId>(order_).subspan(core_begin_);
  }
  std::size_t size() const { return order_.size(); }
  bool contains(VertexId v) const {
    return v >= 0 && static_cast<std::size_t>(v) < pos_.size() &&
           pos_[static_cast<std::size_t>(v)] >= 0;
  }
  // Throws kUnknownVertex.
  int position(VertexId v) const {
    if (!contains(v)) unknown_vertex(v);
    return pos_[static_cast<std::size_t>(v)];
  }
  bool in_core(VertexId v) const {
    return position(v) >= static_cast<int>(core_begin_);
  }

  friend bool operator==(const Ordering& a, const Ordering& b) {
    return a.order_ == b.order_ && a.core_begin_ == b.core_begin_;
  }

  static Ordering from_parts(std::span<const VertexId> unseen, std::span<const VertexId> core);

 private:
  [[noreturn]] static void unknown_vertex(VertexId v);

  std::vector<VertexId> order_;
  std::vector<std::int32_t> pos_;
  std::size_t core_begin_ = 0;
};

struct WeightedEdge {
  VertexId u = 0;
  VertexId v = 0;
  Weight x;
};

// Iterative-minimum engine shared by every ordering construction: repeatedly
// removes the remaining vertex with the least x-load towards the remaining
// vertices, ties going to the smaller label. Buffers are reused across calls.
class TopologicalOrderer {
 public:
  // Every endpoint in `edges` must appear in `vertices`, and every vertex must
  // be labeled; unchecked.
  void order(std::span<const WeightedEdge> edges, std::span<const VertexId> vertices,
             const Labeling& tiebreak, std::vector<VertexId>& out);

 private:
  std::vector<std::int64_t> load_;
  std::vector<std::uint8_t> remaining_;
  std::vector<VertexId> pool_;
};

// x-topological order of every labeled vertex using only edges in `restrict`
// (all edges when absent). Vertices without restricted edges have load 0.
// Throws kIncompleteLabeling if an endpoint of a used edge is unlabeled.
Ordering offline_order(const Instance& instance,
                       std::optional<std::span<const EdgeId>> restrict,
                       const Labeling& labeling);

// The order ≺_S: labeled vertices outside T first (by labeling), then T in
// removal order on G[S]. Throws kIncompleteLabeling if T is not labeled.
Ordering sample_order(const Instance& instance, std::span<const EdgeId> sample,
                      const Labeling& labeling);

// Inserts a newly observed vertex ahead of T, placed among earlier unseen
// vertices by labeling. Throws kDuplicateVertex or kIncompleteLabeling.
Ordering extend_with_unseen(const Ordering& ordering, const Labeling& labeling, VertexId v);

// a ≺ b. Throws kUnknownVertex.
bool precedes(const Ordering& ordering, VertexId a, VertexId b);

// Edges at v whose other endpoint comes after v, optionally intersected with
// `restrict`; increasing id order.
std::vector<EdgeId> bucket(const Ordering& ordering, const Instance& instance, VertexId v,
                           std::optional<std::span<const EdgeId>> restrict = {});

// Endpoint of e that comes first under the ordering.
VertexId bucket_owner(const Ordering& ordering, const EdgeRecord& e);

// w_S(v): if x(δ(v) ∩ S) <= 2 the ≺_S-minimum vertex, otherwise the earliest
// removed vertex after whose removal v's residual sampled load is <= 2.
VertexId witness_vertex(const Instance& instance, std::span<const EdgeId> sample,
                        const Labeling& labeling, VertexId v);
// Same, reusing an already built ≺_S.
VertexId witness_vertex(const Instance& instance, std::span<const EdgeId> sample,
                        const Ordering& sample_ordering, VertexId v);

}  // namespace crs

#endif  // CRS_ORDERING_H_
