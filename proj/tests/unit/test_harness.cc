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

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <vector>

#include "crs/errors.h"
#include "crs/harness.h"
#include "crs/oracle.h"

namespace crs {
namespace {

using Ids = std::vector<EdgeId>;

TEST_CASE("family names round-trip and unknown names are rejected") {
  for (Family f : {Family::kPath, Family::kCyclePlusChords, Family::kForestUnion, Family::kTieFlip,
                   Family::kCouplingGap, Family::kBroom, Family::kRandomMultigraph}) {
    CHECK(parse_family(family_name(f)) == f);
  }
  try {
    parse_family("petersen");
    FAIL("expected an error");
  } catch (const CrsError& e) {
    CHECK(e.code() == ErrorCode::kUnknownFamily);
  }
}

TEST_CASE("generators are deterministic per seed") {
  for (Family f : {Family::kPath, Family::kCyclePlusChords, Family::kForestUnion,
                   Family::kRandomMultigraph}) {
    GeneratorSpec spec;
    spec.family = f;
    spec.n = 7;
    spec.m = 12;
    spec.seed = 13;
    const Instance a = generate_instance(spec);
    CHECK(a == generate_instance(spec));
    CHECK(in_forest_polytope(a));
    spec.seed = 14;
    if (f != Family::kPath || a.edge_count() > 0) CHECK_FALSE(a == generate_instance(spec));
  }
}

TEST_CASE("explicit marginals outside the polytope are refused") {
  GeneratorSpec spec;
  spec.family = Family::kCyclePlusChords;
  spec.n = 4;
  spec.x = 1.0;
  spec.mode = MarginalMode::kExplicit;
  try {
    generate_instance(spec);
    FAIL("expected an error");
  } catch (const CrsError& e) {
    CHECK(e.code() == ErrorCode::kInfeasibleSpec);
  }
  spec.x = 0.4;
  spec.chords = 1;
  CHECK(generate_instance(spec).edge_count() == 5);
}

TEST_CASE("forest unions are k spanning trees covering the ground set") {
  for (int k : {1, 2, 3}) {
    const ForestUnion fu = generate_forest_union(k, 9, 100 + static_cast<std::uint64_t>(k));
    REQUIRE(fu.forests.size() == static_cast<std::size_t>(k));
    std::vector<int> cover(static_cast<std::size_t>(fu.instance.edge_count()), 0);
    for (const Ids& f : fu.forests) {
      CHECK(f.size() == 8);
      CHECK(is_forest(fu.instance, f));
      for (EdgeId e : f) ++cover[static_cast<std::size_t>(e)];
    }
    CHECK(std::all_of(cover.begin(), cover.end(), [](int c) { return c == 1; }));
    for (const EdgeRecord& e : fu.instance.edges()) {
      CHECK(e.x.units() == Weight::kScale / k);
    }
  }
}

TEST_CASE("broom shape") {
  GeneratorSpec spec;
  spec.family = Family::kBroom;
  spec.leaves = 3;
  spec.handle = 2;
  spec.mode = MarginalMode::kExplicit;
  const Instance g = generate_instance(spec);
  CHECK(g.vertex_count() == 6);
  CHECK(g.edge_count() == 5);
  CHECK(g.incident(2).size() == 4);
  CHECK(g.x(4) == *parse_weight("0.6"));
}

TEST_CASE("adversary names round-trip") {
  for (const AdversaryStrategy& s : standard_adversaries()) {
    const AdversaryStrategy back = parse_adversary(adversary_name(s));
    CHECK(back.kind == s.kind);
    CHECK(back.seed == s.seed);
  }
  CHECK(standard_adversaries().size() >= 6);
  CHECK(parse_adversary("target-last:4").target == 4);
  CHECK(parse_adversary("random-fixed").seed == 0);
  for (const char* bad : {"", "oracle", "target-last", "random-fixed:x", "reverse:1"}) {
    try {
      parse_adversary(bad);
      FAIL("expected an error for '" << bad << "'");
    } catch (const CrsError& e) {
      CHECK(e.code() == ErrorCode::kUnknownStrategy);
    }
  }
}

TEST_CASE("every adversary emits a permutation of the non-sampled edges") {
  std::vector<AdversaryStrategy> all = standard_adversaries();
  all.push_back(parse_adversary("target-last:0"));
  const Instance g = generate_forest_union(3, 8, 1).instance;
  Rng rng(4);
  for (int t = 0; t < 50; ++t) {
    Ids sample;
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
      if (rng.below(2)) sample.push_back(e);
    }
    const Labeling l = Labeling::uniform(g.vertex_count(), rng);
    for (const AdversaryStrategy& s : all) {
      Ids order = adversary_order(s, g, sample, l);
      Ids merged = sample;
      merged.insert(merged.end(), order.begin(), order.end());
      std::sort(merged.begin(), merged.end());
      REQUIRE(merged.size() == static_cast<std::size_t>(g.edge_count()));
      for (EdgeId e = 0; e < g.edge_count(); ++e) CHECK(merged[static_cast<std::size_t>(e)] == e);
      if (s.kind == AdversaryKind::kTargetLast && !order.empty() &&
          std::find(sample.begin(), sample.end(), 0) == sample.end()) {
        CHECK(order.back() == 0);
      }
    }
  }
}

TEST_CASE("labeling attack puts the lighter edge of a bucket last") {
  // With no sample every vertex is unseen and ordered by label, so both
  // edges fall in vertex 0's bucket.
  const Instance g = build_instance(3, {{0, 1, 0.2}, {0, 2, 0.7}});
  const Ids order =
      adversary_order(parse_adversary("labeling-attack"), g, Ids{}, Labeling::identity(3));
  CHECK(order == Ids{1, 0});
  const Ids light = adversary_order(parse_adversary("light-bucket-first"), g, Ids{},
                                    Labeling::identity(3));
  CHECK(light == Ids{0, 1});
}

TEST_CASE("confidence margin") {
  CHECK(confidence_margin(0.5, 100) == doctest::Approx(4.0 * std::sqrt(0.0125)));
  CHECK(confidence_margin(0.0, 10000, 4.0) == doctest::Approx(0.04));
}

TEST_CASE("reports do not depend on the worker count") {
  const Instance g = generate_forest_union(2, 6, 9).instance;
  for (SchemeId scheme : {SchemeId::kRocrs, SchemeId::kPriorKnowledge, SchemeId::kSampleOcrs}) {
    EstimateOptions opt;
    opt.trials = 3001;
    opt.seed = 77;
    opt.adversary = parse_adversary("labeling-attack");
    std::string first;
    for (int workers : {1, 2, 3, 7}) {
      opt.workers = workers;
      const std::string csv = report_to_csv(estimate_selectability(scheme, g, opt));
      if (first.empty()) first = csv;
      CHECK(csv == first);
    }
    opt.seed = 78;
    opt.workers = 1;
    CHECK(report_to_csv(estimate_selectability(scheme, g, opt)) != first);
  }
}

TEST_CASE("CSV layout") {
  EstimateOptions opt;
  opt.trials = 10;
  opt.seed = 3;
  const SelectabilityReport r =
      estimate_selectability(SchemeId::kRocrs, tie_flip_instance(), opt);
  std::istringstream in(report_to_csv(r));
  std::string line;
  std::getline(in, line);
  CHECK(line.rfind("# scheme=rocrs adversary=- seed=3 trials=10", 0) == 0);
  std::getline(in, line);
  CHECK(line == "edge_id,u,v,x,picks,trials,freq,lower,target,pass");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    CHECK(std::count(line.begin(), line.end(), ',') == 9);
  }
  CHECK(rows == 4);
  CHECK(report_summary(r).find("scheme=rocrs") != std::string::npos);
}

TEST_CASE("scheme names and targets") {
  CHECK(parse_scheme("prior") == SchemeId::kPriorKnowledge);
  CHECK(scheme_name(SchemeId::kSampleOcrs) == "sample-ocrs");
  CHECK_THROWS_AS(parse_scheme("greedy"), CrsError);
  const TargetConfig t;
  CHECK(t.for_scheme(SchemeId::kRocrs) == doctest::Approx(1.0 / 96));
  CHECK(t.for_scheme(SchemeId::kPriorKnowledge) == doctest::Approx(1.0 / 16));
}

TEST_CASE("estimation rejects bad input") {
  EstimateOptions opt;
  opt.trials = 0;
  CHECK_THROWS_AS(estimate_selectability(SchemeId::kRocrs, tie_flip_instance(), opt), CrsError);
  opt.trials = 10;
  const Instance tri = build_instance(3, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}});
  try {
    estimate_selectability(SchemeId::kPriorKnowledge, tri, opt);
    FAIL("expected an error");
  } catch (const CrsError& e) {
    CHECK(e.code() == ErrorCode::kPolytopeViolation);
  }
}

TEST_CASE("single edge laws") {
  // x = 1: prior picks with probability exactly 1/8, the random-order scheme
  // with (1/2)(1/24): the edge must miss the sample, then pass its coin.
  const Instance g = build_instance(2, {{0, 1, 1.0}});
  EstimateOptions opt;
  opt.trials = 200000;
  opt.seed = 1;
  for (auto [scheme, p] : {std::pair{SchemeId::kPriorKnowledge, 1.0 / 8},
                           std::pair{SchemeId::kRocrs, 1.0 / 48}}) {
    const SelectabilityReport r = estimate_selectability(scheme, g, opt);
    const double sigma = std::sqrt(p * (1 - p) / static_cast<double>(opt.trials));
    CHECK(std::abs(r.edges[0].freq - p) <= 4 * sigma);
    CHECK(r.violations.total() == 0);
  }
}

TEST_CASE("MOFS input validation and targets") {
  const ForestUnion fu = generate_forest_union(2, 6, 3);
  EstimateOptions opt;
  opt.trials = 2000;
  const SelectabilityReport r = mofs_run(fu.instance, fu.forests, opt);
  CHECK(r.scheme == "mofs");
  for (const EdgeEstimate& e : r.edges) CHECK(e.target == doctest::Approx(1.0 / 192));
  std::vector<Ids> partial{fu.forests[0]};
  CHECK_THROWS_AS(mofs_run(fu.instance, partial, opt), CrsError);
  std::vector<Ids> cyclic = fu.forests;
  cyclic[0].insert(cyclic[0].end(), fu.forests[1].begin(), fu.forests[1].end());
  try {
    mofs_run(fu.instance, cyclic, opt);
    FAIL("expected an error");
  } catch (const CrsError& e) {
    CHECK(e.code() == ErrorCode::kNotAForest);
  }
}

TEST_CASE("Monte Carlo off-sample load matches the exact value") {
  for (const Instance& g : {tie_flip_instance(), coupling_gap_instance()}) {
    const Labeling l = Labeling::identity(5);
    for (VertexId v = 0; v < 5; ++v) {
      const double exact = exact_offsample_expectation(g, l, v).value();
      const LoadEstimate est = estimate_offsample_load(g, l, v, 20000, 6);
      CHECK(std::abs(est.mean - exact) <= 4 * est.std_error + 1e-12);
    }
  }
}

}  // namespace
}  // namespace crs
