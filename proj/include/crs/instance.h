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

#ifndef CRS_INSTANCE_H_
#define CRS_INSTANCE_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "crs/weight.h"

namespace crs {

using VertexId = std::int32_t;
using EdgeId = std::int32_t;

// Per-edge boolean flags indexed by edge id (activity, exclusion, sample).
using EdgeFlags = std::vector<std::uint8_t>;

struct EdgeRecord {
  EdgeId id = 0;
  VertexId u = 0;
  VertexId v = 0;
  Weight x;

  VertexId other(VertexId w) const { return w == u ? v : u; }
  bool touches(VertexId w) const { return w == u || w == v; }
  friend bool operator==(const EdgeRecord&, const EdgeRecord&) = default;
};

struct EdgeInput {
  VertexId u = 0;
  VertexId v = 0;
  Weight x;
};

// A loopless multigraph with a marginal x_e in [0, 1] on every edge. Parallel
// edges are separate records; edges are identified only by their id, which is
// their position in the edge list. Immutable once built.
class Instance {
 public:
  Instance() = default;

  int vertex_count() const { return vertex_count_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  std::span<const EdgeRecord> edges() const { return edges_; }
  // Throws kInvalidEdgeId.
  const EdgeRecord& edge(EdgeId id) const {
    if (id < 0 || id >= edge_count()) bad_edge(id);
    return edges_[static_cast<std::size_t>(id)];
  }
  Weight x(EdgeId id) const { return edge(id).x; }

  // Edge ids incident to w, in increasing order.
  std::span<const EdgeId> incident(VertexId w) const {
    if (w < 0 || w >= vertex_count_) bad_vertex(w);
    return incident_[static_cast<std::size_t>(w)];
  }

  friend bool operator==(const Instance& a, const Instance& b) {
    return a.vertex_count_ == b.vertex_count_ && a.edges_ == b.edges_;
  }

 private:
  friend Instance build_instance(int, std::span<const EdgeInput>);
  [[noreturn]] static void bad_edge(EdgeId id);
  [[noreturn]] static void bad_vertex(VertexId w);

  int vertex_count_ = 0;
  std::vector<EdgeRecord> edges_;
  std::vector<std::vector<EdgeId>> incident_;
};

// Validates and assigns ids 0..m-1 in input order. Throws CrsError with
// kLoopEdge, kEndpointOutOfRange or kMarginalOutOfRange.
Instance build_instance(int vertex_count, std::span<const EdgeInput> edges);

// Convenience overload for literal marginals.
struct EdgeSpec {
  VertexId u = 0;
  VertexId v = 0;
  double x = 0.0;
};
Instance build_instance(int vertex_count, std::span<const EdgeSpec> edges);
Instance build_instance(int vertex_count, std::initializer_list<EdgeSpec> edges);

// Same graph, new marginals (one per edge).
Instance with_marginals(const Instance& skeleton, std::span<const Weight> x);

// Union-find over vertices. One per worker; reuse with reset().
class ForestChecker {
 public:
  explicit ForestChecker(int vertex_count = 0) { reset(vertex_count); }

  void reset(int vertex_count);
  // Adds {u, v}; returns false if that closes a cycle (parallel edges do).
  bool add(VertexId u, VertexId v);

 private:
  VertexId find(VertexId v);

  std::vector<VertexId> parent_;
  std::vector<std::uint8_t> rank_;
};

// True iff the edge subset is acyclic. Throws kInvalidEdgeId.
bool is_forest(const Instance& instance, std::span<const EdgeId> edge_ids);

inline constexpr int kPolytopeVertexCap = 20;

// x >= 0 and x(E[W]) <= |W| - 1 for every vertex subset W with |W| >= 2,
// checked by enumerating all subsets. Throws CapExceeded above `vertex_cap`.
bool in_forest_polytope(const Instance& instance,
                        int vertex_cap = kPolytopeVertexCap);

// Sum of x_e over edges {v, w} with w in `others` (and, if given, id in
// `restrict`). `others` is a vertex membership mask of size vertex_count.
Weight incident_load(const Instance& instance, VertexId v,
                     std::span<const std::uint8_t> others,
                     std::optional<std::span<const EdgeId>> restrict = {});
Weight incident_load(const Instance& instance, VertexId v,
                     std::span<const VertexId> others,
                     std::optional<std::span<const EdgeId>> restrict = {});

// x(E[W]) for a vertex membership mask.
Weight induced_load(const Instance& instance, std::span<const std::uint8_t> members);

// x_e = sum of weights of the forests containing e. Weights must be
// nonnegative and sum to 1 within 1e-12; they are snapped to exact fixed-point
// shares first so the result lies in the forest polytope exactly.
Instance marginals_from_forests(const Instance& skeleton,
                                std::span<const std::vector<EdgeId>> forests,
                                std::span<const double> weights);

// Integer-share variant: weight_units must sum to Weight::kScale.
Instance marginals_from_forests_exact(
    const Instance& skeleton, std::span<const std::vector<EdgeId>> forests,
    std::span<const std::int64_t> weight_units);

// Text format: "n <count>" then "e <u> <v> <x>" per edge; '#' starts a comment.
// Throws CrsError(kParseError) naming the offending line.
Instance read_instance(std::istream& in);
Instance read_instance_file(const std::string& path);
void write_instance(std::ostream& out, const Instance& instance);
std::string instance_to_string(const Instance& instance);

}  // namespace crs

#endif  // CRS_INSTANCE_H_
