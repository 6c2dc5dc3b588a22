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

#include <doctest.h>

#include <sstream>
#include <vector>

#include "crs/errors.h"
#include "crs/harness.h"
#include "crs/instance.h"
#include "crs/rng.h"

namespace crs {
namespace {

// Independent membership test: for every vertex subset W, sum the edges with
// both endpoints inside W directly from the edge list.
bool naive_polytope(const Instance& g) {
  const int n = g.vertex_count();
  for (const EdgeRecord& e : g.edges()) {
    if (e.x < Weight()) return false;
  }
  for (std::uint32_t w = 0; w < (1U << n); ++w) {
    const int size = __builtin_popcount(w);
    if (size < 2) continue;
    Weight inside;
    for (const EdgeRecord& e : g.edges()) {
      if ((w >> e.u & 1U) && (w >> e.v & 1U)) inside += e.x;
    }
    if (inside > Weight::whole(size - 1)) return false;
  }
  return true;
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const CrsError& e) {
    return e.code();
  }
  FAIL("expected CrsError");
  return ErrorCode::kIoError;
}

TEST_CASE("build_instance validates each input error distinctly") {
  CHECK(code_of([] { build_instance(3, {{0, 0, 0.5}}); }) == ErrorCode::kLoopEdge);
  CHECK(code_of([] { build_instance(3, {{0, 3, 0.5}}); }) == ErrorCode::kEndpointOutOfRange);
  CHECK(code_of([] { build_instance(3, {{-1, 1, 0.5}}); }) == ErrorCode::kEndpointOutOfRange);
  CHECK(code_of([] { build_instance(3, {{0, 1, 1.5}}); }) == ErrorCode::kMarginalOutOfRange);
  CHECK(code_of([] { build_instance(3, {{0, 1, -0.1}}); }) == ErrorCode::kMarginalOutOfRange);
  const Instance g = build_instance(3, {{0, 1, 0.5}, {0, 1, 0.25}, {1, 2, 1.0}});
  CHECK(g.edge_count() == 3);
  CHECK(g.edge(1).x == *parse_weight("0.25"));
  CHECK(code_of([&] { g.edge(3); }) == ErrorCode::kInvalidEdgeId);
  CHECK(code_of([&] { g.incident(5); }) == ErrorCode::kInvalidVertex);
  CHECK(std::vector<EdgeId>(g.incident(1).begin(), g.incident(1).end()) ==
        std::vector<EdgeId>{0, 1, 2});
}

TEST_CASE("instance text round-trips byte for byte") {
  const Instance g = coupling_gap_instance();
  const std::string text = instance_to_string(g);
  CHECK(text == "n 5\ne 0 1 1.0\ne 1 2 0.1\ne 2 3 0.5\ne 3 4 0.2\ne 3 4 0.2\n");
  std::istringstream in(text);
  const Instance back = read_instance(in);
  CHECK(back == g);
  CHECK(instance_to_string(back) == text);
}

TEST_CASE("parser reports the offending line") {
  auto message = [](const std::string& text) {
    std::istringstream in(text);
    try {
      read_instance(in);
    } catch (const CrsError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  CHECK(message("n 2\n# ok\ne 0 1 abc\n").rfind("line 3:", 0) == 0);
  CHECK(message("e 0 1 0.5\n").rfind("line 1:", 0) == 0);
  CHECK(message("n 2\ne 0 1\n").rfind("line 2:", 0) == 0);
  CHECK(message("n 2\n\ne 0 1 0.5\ne 1 1 0.5\n").rfind("line 4:", 0) == 0);
  CHECK(message("n 2\nq 1\n").rfind("line 2:", 0) == 0);
  CHECK(message("# nothing\n").find("missing") != std::string::npos);
}

TEST_CASE("forest checker rejects cycles and parallel edges") {
  ForestChecker f(4);
  CHECK(f.add(0, 1));
  CHECK(f.add(1, 2));
  CHECK_FALSE(f.add(0, 2));
  CHECK_FALSE(f.add(0, 1));
  CHECK(f.add(2, 3));
  const Instance g = coupling_gap_instance();
  CHECK(is_forest(g, std::vector<EdgeId>{0, 1, 2, 3}));
  CHECK_FALSE(is_forest(g, std::vector<EdgeId>{3, 4}));
  CHECK(code_of([&] { is_forest(g, std::vector<EdgeId>{9}); }) == ErrorCode::kInvalidEdgeId);
}

TEST_CASE("polytope membership on small examples") {
  CHECK(in_forest_polytope(tie_flip_instance()));
  CHECK(in_forest_polytope(coupling_gap_instance()));
  CHECK_FALSE(in_forest_polytope(build_instance(3, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}})));
  CHECK(in_forest_polytope(build_instance(3, {{0, 1, 1.0}, {1, 2, 0.5}, {0, 2, 0.5}})));
  CHECK_FALSE(in_forest_polytope(build_instance(2, {{0, 1, 0.6}, {0, 1, 0.5}})));
  CHECK_THROWS_AS(in_forest_polytope(build_instance(21, {})), CapExceeded);
  CHECK(in_forest_polytope(build_instance(0, {})));
}

TEST_CASE("polytope membership agrees with the naive subset sum") {
  Rng rng(2024);
  int members = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(6));
    const int m = static_cast<int>(rng.below(10));
    std::vector<EdgeInput> edges;
    for (int i = 0; i < m; ++i) {
      const auto u = static_cast<VertexId>(rng.below(static_cast<std::size_t>(n)));
      auto v = static_cast<VertexId>(rng.below(static_cast<std::size_t>(n - 1)));
      if (v >= u) ++v;
      edges.push_back({u, v, Weight::from_units(static_cast<std::int64_t>(rng.below(11)) *
                                                Weight::kScale / 10)});
    }
    const Instance g = build_instance(n, std::span<const EdgeInput>(edges));
    const bool expected = naive_polytope(g);
    members += expected ? 1 : 0;
    CHECK(in_forest_polytope(g) == expected);
  }
  CHECK(members > 30);
  CHECK(members < 290);
}

TEST_CASE("convex combinations of forests stay in the polytope") {
  Rng rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(11));
    GeneratorSpec spec;
    spec.family = Family::kRandomMultigraph;
    spec.n = n;
    spec.m = static_cast<int>(rng.below(25));
    spec.k = 1 + static_cast<int>(rng.below(4));
    spec.seed = rng();
    const Instance g = generate_instance(spec);
    REQUIRE(g.vertex_count() <= 12);
    CHECK(in_forest_polytope(g));
    CHECK(naive_polytope(g));
  }
}

TEST_CASE("marginals_from_forests sums weights per edge") {
  const Instance skeleton = build_instance(3, {{0, 1, 0.0}, {1, 2, 0.0}, {0, 2, 0.0}});
  const std::vector<std::vector<EdgeId>> forests{{0, 1}, {1, 2}, {0, 2}};
  const std::vector<double> weights{0.5, 0.25, 0.25};
  const Instance g = marginals_from_forests(skeleton, forests, weights);
  CHECK(g.x(0) == *parse_weight("0.75"));
  CHECK(g.x(1) == *parse_weight("0.75"));
  CHECK(g.x(2) == *parse_weight("0.5"));
  CHECK(in_forest_polytope(g));
  const std::vector<std::vector<EdgeId>> cyclic{{0, 1, 2}};
  CHECK(code_of([&] { marginals_from_forests(skeleton, cyclic, std::vector<double>{1.0}); }) ==
        ErrorCode::kNotAForest);
  CHECK(code_of([&] { marginals_from_forests(skeleton, forests, std::vector<double>{0.5, 0.5, 0.5}); }) ==
        ErrorCode::kNotConvexCombination);
  const std::vector<double> thirds{1.0 / 3, 1.0 / 3, 1.0 / 3};
  const Instance t = marginals_from_forests(skeleton, forests, thirds);
  CHECK(in_forest_polytope(t));
}

TEST_CASE("incident and induced loads") {
  const Instance g = coupling_gap_instance();
  std::vector<std::uint8_t> all(5, 1);
  CHECK(incident_load(g, 3, all) == *parse_weight("0.9"));
  const std::vector<VertexId> only_c{4};
  CHECK(incident_load(g, 3, std::span<const VertexId>(only_c)) == *parse_weight("0.4"));
  const std::vector<EdgeId> restrict{3};
  CHECK(incident_load(g, 3, all, std::span<const EdgeId>(restrict)) == *parse_weight("0.2"));
  CHECK(induced_load(g, all) == *parse_weight("2.0"));
  std::vector<std::uint8_t> vu{0, 0, 1, 1, 0};
  CHECK(induced_load(g, vu) == *parse_weight("0.5"));
}

}  // namespace
}  // namespace crs
