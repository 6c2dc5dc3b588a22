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
#include <vector>

#include "crs/errors.h"
#include "crs/harness.h"
#include "crs/schemes.h"

namespace crs {
namespace {

using Ids = std::vector<EdgeId>;

EdgeFlags ones(const Instance& g) { return EdgeFlags(static_cast<std::size_t>(g.edge_count()), 1); }
EdgeFlags zeros(const Instance& g) { return EdgeFlags(static_cast<std::size_t>(g.edge_count()), 0); }

TEST_CASE("edge stream reveals marginals only when observed") {
  const Instance g = tie_flip_instance();
  const Ids arrival{3, 1, 0, 2};
  EdgeStream stream(g, arrival, ones(g));
  const ArrivalEvent a = stream.next_observed();
  CHECK(a.edge == 3);
  REQUIRE(a.x.has_value());
  CHECK(*a.x == *parse_weight("0.4"));
  const ArrivalEvent b = stream.next_online();
  CHECK(b.edge == 1);
  CHECK_FALSE(b.x.has_value());
  CHECK(stream.marginal_reveals() == 1);
  CHECK(stream.remaining() == 2);
  stream.next_online();
  stream.next_online();
  CHECK_THROWS_AS(stream.next_online(), CrsError);
  CHECK_THROWS_AS(EdgeStream(g, arrival, EdgeFlags(2, 1)), CrsError);
}

TEST_CASE("coin helpers follow their probabilities") {
  const Instance g = build_instance(2, {{0, 1, 1.0}});
  int active = 0;
  int kept = 0;
  int sampled = 0;
  const int n = 48000;
  for (int t = 0; t < n; ++t) {
    const TrialCoins coins(trial_seed(5, static_cast<std::uint64_t>(t)));
    active += realize_activity(g, coins)[0];
    kept += draw_exclusions(1, coins, 1.0 / 24.0)[0] ? 0 : 1;
    sampled += static_cast<int>(draw_sample(1, coins, 0.5).size());
  }
  CHECK(active == n);
  CHECK(std::abs(kept - n / 24.0) < 4.0 * std::sqrt(n * (1.0 / 24) * (23.0 / 24)));
  CHECK(std::abs(sampled - n / 2.0) < 4.0 * std::sqrt(n * 0.25));
  Rng rng(3);
  Ids perm = random_arrival(10, rng);
  std::sort(perm.begin(), perm.end());
  for (EdgeId i = 0; i < 10; ++i) CHECK(perm[static_cast<std::size_t>(i)] == i);
}

TEST_CASE("prior-knowledge scheme picks the first good edge of each bucket") {
  const Instance g = tie_flip_instance();
  // Offline order c, u, v, a, b: the four edges land in four buckets.
  const Selection s = run_prior_knowledge(g, ones(g), Ids{0, 1, 2, 3}, zeros(g),
                                          Labeling::identity(5));
  CHECK(s.picked == Ids{0, 1, 2, 3});
  CHECK(s.knows_marginals);
  CHECK(check_selection(g, s).ok());
  const Instance tri = build_instance(3, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}});
  CHECK_THROWS_AS(run_prior_knowledge(tri, ones(tri), Ids{0, 1, 2}, zeros(tri),
                                      Labeling::identity(3)),
                  CrsError);
  CHECK_THROWS_AS(run_prior_knowledge(g, ones(g), Ids{0, 1, 2}, zeros(g), Labeling::identity(5)),
                  CrsError);
}

TEST_CASE("one pick per bucket under prior knowledge") {
  // Star: every edge lands in the center's bucket or a leaf's bucket.
  const Instance g = build_instance(4, {{0, 1, 0.5}, {0, 2, 0.5}, {0, 3, 0.5}, {0, 1, 0.5}});
  const Selection s = run_prior_knowledge(g, ones(g), Ids{0, 1, 2, 3}, zeros(g),
                                          Labeling::identity(4));
  const InvariantReport r = check_selection(g, s);
  CHECK(r.ok());
  CHECK(s.audit[3].blocked);
}

TEST_CASE("random-order scheme reads only sampled marginals") {
  const Instance g = coupling_gap_instance();
  for (std::uint64_t t = 0; t < 500; ++t) {
    const TrialCoins coins(trial_seed(8, t));
    Rng rng(coins.sequence_seed());
    const Ids arrival = random_arrival(g.edge_count(), rng);
    EdgeStream stream(g, arrival, realize_activity(g, coins));
    const Selection s = run_rocrs(stream, 5, draw_exclusions(5, coins, 0.5), rng, CoinConfig{});
    CHECK(static_cast<std::size_t>(s.marginal_reads) == s.sample_size);
    const InvariantReport r = check_selection(g, s);
    CHECK(r.ok());
    for (std::size_t i = 0; i < arrival.size(); ++i) {
      CHECK(s.audit[static_cast<std::size_t>(arrival[i])].sampled == (i < s.sample_size));
    }
  }
}

TEST_CASE("ordering ignores the arrival order of non-sampled edges") {
  const Instance g = coupling_gap_instance();
  const Labeling l(std::vector<VertexId>{3, 0, 4, 1, 2});
  const Ids arrival{1, 3, 0, 2, 4};
  auto run = [&](const Ids& a) {
    Rng rng(42);  // fixes the sample size
    EdgeStream stream(g, a, ones(g));
    return run_rocrs(stream, 5, zeros(g), rng, CoinConfig{}, &l);
  };
  const Selection base = run(arrival);
  const auto s = static_cast<std::ptrdiff_t>(base.sample_size);
  REQUIRE(s > 0);
  REQUIRE(s < 5);
  for (int perm = 0; perm < 20; ++perm) {
    Rng shuffle(static_cast<std::uint64_t>(perm));
    Ids a = arrival;
    std::shuffle(a.begin(), a.begin() + s, shuffle);
    std::shuffle(a.begin() + s, a.end(), shuffle);
    CHECK(run(a).order == base.order);
  }
}

TEST_CASE("random-order scheme equals the sample variant given the same split") {
  const Instance g = generate_forest_union(2, 7, 4).instance;
  const int m = g.edge_count();
  for (std::uint64_t t = 0; t < 300; ++t) {
    const TrialCoins coins(trial_seed(21, t));
    Rng rng(coins.sequence_seed());
    const Labeling l = Labeling::uniform(g.vertex_count(), rng);
    const Ids arrival = random_arrival(m, rng);
    const EdgeFlags active = realize_activity(g, coins);
    const EdgeFlags excluded = draw_exclusions(m, coins, 0.25);
    Rng split_rng(t);
    EdgeStream stream(g, arrival, active);
    const Selection a = run_rocrs(stream, static_cast<std::size_t>(m), excluded, split_rng,
                                  CoinConfig{}, &l);
    Ids sample(arrival.begin(), arrival.begin() + static_cast<std::ptrdiff_t>(a.sample_size));
    std::sort(sample.begin(), sample.end());
    const Ids rest(arrival.begin() + static_cast<std::ptrdiff_t>(a.sample_size), arrival.end());
    const Selection b = run_sample_ocrs(g, active, rest, sample, excluded, l);
    CHECK(a.picked == b.picked);
    CHECK(a.order == b.order);
  }
}

TEST_CASE("sample variant rejects malformed adversary orders") {
  const Instance g = tie_flip_instance();
  const Labeling l = Labeling::identity(5);
  CHECK_THROWS_AS(run_sample_ocrs(g, ones(g), Ids{2, 3}, Ids{0}, zeros(g), l), CrsError);
  CHECK_THROWS_AS(run_sample_ocrs(g, ones(g), Ids{1, 2, 3, 0}, Ids{0}, zeros(g), l), CrsError);
  CHECK_THROWS_AS(run_sample_ocrs(g, ones(g), Ids{1, 1, 3}, Ids{0}, zeros(g), l), CrsError);
  const Selection ok = run_sample_ocrs(g, ones(g), Ids{3, 1, 2}, Ids{0}, zeros(g), l);
  CHECK(check_selection(g, ok).ok());
  CHECK_FALSE(ok.audit[0].picked);
}

TEST_CASE("A and B and C imply a pick") {
  // Sampled a-b. Unseen v precedes u and b, so b-v and v-u share v's bucket;
  // b-v arrives first and wins it, u-c sits alone in u's bucket.
  const Instance g = tie_flip_instance();
  const Selection s =
      run_sample_ocrs(g, ones(g), Ids{1, 2, 3}, Ids{0}, zeros(g), Labeling::identity(5));
  CHECK(s.picked == Ids{1, 3});
  CHECK(s.audit[2].blocked);
  CHECK(s.audit[2].owner == 2);
}

TEST_CASE("check_selection flags broken selections") {
  const Instance g = build_instance(3, {{0, 1, 0.5}, {1, 2, 0.5}, {0, 2, 0.5}});
  Selection s = run_sample_ocrs(g, ones(g), Ids{0, 1, 2}, Ids{}, zeros(g), Labeling::identity(3));
  CHECK(check_selection(g, s).ok());
  Selection cyc = s;
  cyc.picked = {0, 1, 2};
  for (auto& a : cyc.audit) a.picked = true;
  const InvariantReport r = check_selection(g, cyc);
  CHECK_FALSE(r.forest);
  CHECK_FALSE(r.one_pick_per_bucket);
  Selection leak = s;
  leak.audit[1].marginal_seen = true;
  CHECK_FALSE(check_selection(g, leak).information_model);
  Selection sampled = s;
  sampled.audit[static_cast<std::size_t>(s.picked.front())].sampled = true;
  CHECK_FALSE(check_selection(g, sampled).sampled_never_picked);
  Selection dropped = s;
  dropped.picked.clear();
  for (auto& a : dropped.audit) a.picked = false;
  CHECK_FALSE(check_selection(g, dropped).abc_implies_pick);
}

TEST_CASE("coin configuration is validated") {
  CoinConfig bad;
  bad.sample_rate = 1.5;
  CHECK_THROWS_AS(bad.validate(), CrsError);
  CoinConfig{}.validate();
}

}  // namespace
}  // namespace crs
