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

#include <fmt/format.h>

#include <algorithm>
#include <numeric>

#include "crs/errors.h"
#include "crs/harness.h"
#include "crs/rng.h"

namespace crs {
namespace {

constexpr std::uint64_t kGeneratorStream = 0x67656e;

struct Skeleton {
  int n = 0;
  std::vector<EdgeInput> edges;

  Instance build() const { return build_instance(n, std::span<const EdgeInput>(edges)); }
};

// Random maximal forest of the skeleton restricted to a random subset.
std::vector<EdgeId> random_forest(const Instance& skeleton, Rng& rng, double keep) {
  std::vector<EdgeId> order = random_arrival(skeleton.edge_count(), rng);
  ForestChecker checker(skeleton.vertex_count());
  std::vector<EdgeId> forest;
  for (EdgeId id : order) {
    if (rng.uniform() >= keep) continue;
    const EdgeRecord& e = skeleton.edge(id);
    if (checker.add(e.u, e.v)) forest.push_back(id);
  }
  std::sort(forest.begin(), forest.end());
  return forest;
}

std::vector<std::int64_t> random_shares(int k, Rng& rng) {
  std::vector<std::int64_t> raw(static_cast<std::size_t>(k));
  for (auto& w : raw) w = 1 + static_cast<std::int64_t>(rng.below(1000));
  const std::int64_t total = std::accumulate(raw.begin(), raw.end(), std::int64_t{0});
  std::vector<std::int64_t> units(raw.size());
  std::int64_t assigned = 0;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    units[i] = raw[i] * (Weight::kScale / total);
    assigned += units[i];
  }
  units[0] += Weight::kScale - assigned;
  return units;
}

Instance forest_convex(const Instance& skeleton, int k, Rng& rng) {
  std::vector<std::vector<EdgeId>> forests;
  for (int i = 0; i < k; ++i) forests.push_back(random_forest(skeleton, rng, 0.75));
  const auto shares = random_shares(k, rng);
  return marginals_from_forests_exact(skeleton, forests, shares);
}

Instance explicit_marginals(const Skeleton& sk) {
  Instance inst = sk.build();
  if (inst.vertex_count() <= kPolytopeVertexCap && !in_forest_polytope(inst)) {
    throw CrsError(ErrorCode::kInfeasibleSpec, "explicit marginals leave the forest polytope");
  }
  return inst;
}

void require(bool ok, const char* what) {
  if (!ok) throw CrsError(ErrorCode::kInfeasibleSpec, what);
}

}  // namespace

Family parse_family(std::string_view name) {
  if (name == "path") return Family::kPath;
  if (name == "cycle-plus-chords") return Family::kCyclePlusChords;
  if (name == "forest-union") return Family::kForestUnion;
  if (name == "tie-flip") return Family::kTieFlip;
  if (name == "coupling-gap") return Family::kCouplingGap;
  if (name == "broom") return Family::kBroom;
  if (name == "random-multigraph") return Family::kRandomMultigraph;
  throw CrsError(ErrorCode::kUnknownFamily, fmt::format("unknown family '{}'", name));
}

std::string family_name(Family family) {
  switch (family) {
    case Family::kPath: return "path";
    case Family::kCyclePlusChords: return "cycle-plus-chords";
    case Family::kForestUnion: return "forest-union";
    case Family::kTieFlip: return "tie-flip";
    case Family::kCouplingGap: return "coupling-gap";
    case Family::kBroom: return "broom";
    case Family::kRandomMultigraph: return "random-multigraph";
  }
  return "unknown";
}

Instance tie_flip_instance() {
  return build_instance(5, {{0, 1, 1.0}, {1, 2, 0.1}, {2, 3, 0.5}, {3, 4, 0.4}});
}

Instance coupling_gap_instance() {
  return build_instance(5, {{0, 1, 1.0}, {1, 2, 0.1}, {2, 3, 0.5}, {3, 4, 0.2}, {3, 4, 0.2}});
}

ForestUnion generate_forest_union(int k, int n, std::uint64_t seed) {
  require(k >= 1, "forest-union needs k >= 1");
  require(n >= 2, "forest-union needs n >= 2");
  Rng rng(combine_seed(seed, kGeneratorStream + 3));
  std::vector<std::pair<VertexId, VertexId>> pairs;
  for (VertexId u = 0; u < n; ++u) {
    for (VertexId v = u + 1; v < n; ++v) pairs.emplace_back(u, v);
  }
  const Weight share = Weight::from_units(Weight::kScale / k);
  std::vector<EdgeInput> edges;
  ForestUnion out;
  for (int t = 0; t < k; ++t) {
    for (std::size_t i = pairs.size(); i > 1; --i) std::swap(pairs[i - 1], pairs[rng.below(i)]);
    ForestChecker checker(n);
    std::vector<EdgeId> tree;
    for (const auto& [u, v] : pairs) {
      if (!checker.add(u, v)) continue;
      tree.push_back(static_cast<EdgeId>(edges.size()));
      edges.push_back({u, v, share});
    }
    out.forests.push_back(std::move(tree));
  }
  out.instance = build_instance(n, std::span<const EdgeInput>(edges));
  return out;
}

Instance generate_instance(const GeneratorSpec& spec) {
  Rng rng(combine_seed(spec.seed, kGeneratorStream + static_cast<std::uint64_t>(spec.family)));
  const Weight x = Weight::from_double(spec.x);
  Skeleton sk;
  switch (spec.family) {
    case Family::kTieFlip:
      return tie_flip_instance();
    case Family::kCouplingGap:
      return coupling_gap_instance();
    case Family::kForestUnion:
      return generate_forest_union(spec.k, spec.n, spec.seed).instance;
    case Family::kPath:
      require(spec.n >= 1, "path needs n >= 1");
      sk.n = spec.n;
      for (VertexId v = 0; v + 1 < spec.n; ++v) sk.edges.push_back({v, v + 1, x});
      break;
    case Family::kCyclePlusChords:
      require(spec.n >= 3, "cycle needs n >= 3");
      require(spec.chords >= 0, "negative chord count");
      sk.n = spec.n;
      for (VertexId v = 0; v < spec.n; ++v) sk.edges.push_back({v, (v + 1) % spec.n, x});
      for (int c = 0; c < spec.chords; ++c) {
        const auto u = static_cast<VertexId>(rng.below(static_cast<std::size_t>(spec.n)));
        auto v = static_cast<VertexId>(rng.below(static_cast<std::size_t>(spec.n - 1)));
        if (v >= u) ++v;
        sk.edges.push_back({u, v, x});
      }
      break;
    case Family::kBroom: {
      require(spec.leaves >= 0 && spec.handle >= 0, "negative broom size");
      sk.n = spec.handle + 1 + spec.leaves;
      const Weight hx = Weight::from_double(spec.handle_x);
      const Weight lx = Weight::from_double(spec.leaf_x);
      for (VertexId v = 0; v < spec.handle; ++v) sk.edges.push_back({v, v + 1, hx});
      const VertexId center = spec.handle;
      for (int i = 0; i < spec.leaves; ++i) sk.edges.push_back({center, center + 1 + i, lx});
      // A tree: any x in [0, 1]^E is in the forest polytope.
      return sk.build();
    }
    case Family::kRandomMultigraph:
      require(spec.n >= 2, "random-multigraph needs n >= 2");
      require(spec.m >= 0, "negative edge count");
      sk.n = spec.n;
      for (int i = 0; i < spec.m; ++i) {
        const auto u = static_cast<VertexId>(rng.below(static_cast<std::size_t>(spec.n)));
        auto v = static_cast<VertexId>(rng.below(static_cast<std::size_t>(spec.n - 1)));
        if (v >= u) ++v;
        sk.edges.push_back({u, v, x});
      }
      break;
  }
  if (spec.mode == MarginalMode::kExplicit) return explicit_marginals(sk);
  require(spec.k >= 1, "forest-convex marginals need k >= 1");
  return forest_convex(sk.build(), spec.k, rng);
}

}  // namespace crs
