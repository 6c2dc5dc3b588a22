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

#ifndef CRS_SCHEMES_H_
#define CRS_SCHEMES_H_

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "crs/instance.h"
#include "crs/ordering.h"
#include "crs/rng.h"
#include "crs/weight.h"

namespace crs {

struct CoinConfig {
  double pick_probability = 1.0 / 24.0;       // random-order scheme
  double sample_rate = 0.5;
  double prior_pick_probability = 1.0 / 8.0;  // prior-knowledge scheme

  // Throws kInvalidArgument unless every probability is in [0, 1].
  void validate() const;
};

// What a scheme learns when an edge arrives. `x` is present only when the
// scheme is entitled to the marginal: sampled edges, or every edge for the
// prior-knowledge scheme.
struct ArrivalEvent {
  EdgeId edge = 0;
  VertexId u = 0;
  VertexId v = 0;
  bool active = false;
  std::optional<Weight> x;
};

// Arrival-ordered edges of an instance. Marginals are handed out only through
// next_observed(), and every such reveal is counted.
class EdgeStream {
 public:
  EdgeStream(const Instance& instance, std::span<const EdgeId> arrival,
             std::span<const std::uint8_t> activity);

  // Reuses buffers for another trial on the same instance.
  void reset(std::span<const EdgeId> arrival, std::span<const std::uint8_t> activity);

  std::size_t size() const { return arrival_.size(); }
  std::size_t remaining() const { return arrival_.size() - cursor_; }

  // Endpoints, x and activity (sample phase).
  ArrivalEvent next_observed();
  // Endpoints and activity only.
  ArrivalEvent next_online();

  int marginal_reveals() const { return marginal_reveals_; }

 private:
  const EdgeRecord& advance();

  const Instance* instance_;
  std::vector<EdgeId> arrival_;
  std::vector<std::uint8_t> activity_;
  std::size_t cursor_ = 0;
  int marginal_reveals_ = 0;
};

struct EdgeAudit {
  bool sampled = false;
  bool active = false;
  bool excluded = false;
  bool blocked = false;  // active, but its bucket already had a pick
  bool picked = false;
  bool marginal_seen = false;
  VertexId owner = -1;  // ≺-smaller endpoint, i.e. the bucket holding the edge
};

struct Selection {
  std::vector<EdgeId> picked;  // pick order
  std::vector<EdgeAudit> audit;  // by edge id
  std::vector<VertexId> order;  // final ordering (unseen prefix, then core)
  std::size_t core_begin = 0;
  std::size_t sample_size = 0;
  int marginal_reads = 0;
  bool knows_marginals = false;  // prior-knowledge scheme

  Ordering ordering() const;
};

// Each edge active independently with probability x_e.
EdgeFlags realize_activity(const Instance& instance, const TrialCoins& coins);
// Pre-flipped exclusion marks: excluded with probability 1 - pick_probability.
EdgeFlags draw_exclusions(int edge_count, const TrialCoins& coins, double pick_probability);
// Independent inclusion with probability `rate`; increasing ids.
std::vector<EdgeId> draw_sample(int edge_count, const TrialCoins& coins, double rate);
// Uniformly random permutation of 0..m-1.
std::vector<EdgeId> random_arrival(int edge_count, Rng& rng);

// Prior knowledge: offline x-topological order over all edges, then the first
// active non-excluded edge of each bucket is picked. `excluded` should be
// drawn with prior_pick_probability. Throws kPolytopeViolation when
// check_polytope is set and x is outside the forest polytope.
Selection run_prior_knowledge(const Instance& instance, std::span<const std::uint8_t> activity,
                              std::span<const EdgeId> arrival,
                              std::span<const std::uint8_t> excluded, const Labeling& labeling,
                              bool check_polytope = true);

// Random-order scheme knowing only m: the first Binomial(m, sample_rate)
// arrivals form S and are never picked; later edges {v,u} with v ≺_S u are
// picked when active, not excluded and v's bucket is still empty. Without an
// injected labeling, vertices are labeled on the fly by uniform insertion.
// Throws kStreamTooShort.
void run_rocrs(EdgeStream& stream, std::size_t m, std::span<const std::uint8_t> excluded,
               Rng& rng, const CoinConfig& config, Selection& out,
               const Labeling* injected = nullptr);
Selection run_rocrs(EdgeStream& stream, std::size_t m, std::span<const std::uint8_t> excluded,
                    Rng& rng, const CoinConfig& config, const Labeling* injected = nullptr);

// Adversarial order with a sample: S is given, E \ S arrives in
// `adversary_order`. Same selection rule; x of E \ S is never revealed.
// Throws kNotAPermutation.
void run_sample_ocrs(const Instance& instance, std::span<const std::uint8_t> activity,
                     std::span<const EdgeId> adversary_order, std::span<const EdgeId> sample,
                     std::span<const std::uint8_t> excluded, const Labeling& labeling,
                     Selection& out);
Selection run_sample_ocrs(const Instance& instance, std::span<const std::uint8_t> activity,
                          std::span<const EdgeId> adversary_order, std::span<const EdgeId> sample,
                          std::span<const std::uint8_t> excluded, const Labeling& labeling);

// Per-trial structural checks.
struct InvariantReport {
  bool forest = true;
  bool one_pick_per_bucket = true;
  bool sampled_never_picked = true;
  bool information_model = true;  // no marginal read outside the sample
  bool abc_implies_pick = true;   // A ∧ B ∧ C ⇒ e picked

  bool ok() const {
    return forest && one_pick_per_bucket && sampled_never_picked && information_model &&
           abc_implies_pick;
  }
};

InvariantReport check_selection(const Instance& instance, const Selection& selection);

}  // namespace crs

#endif  // CRS_SCHEMES_H_
