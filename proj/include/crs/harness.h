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

#ifndef CRS_HARNESS_H_
#define CRS_HARNESS_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "crs/instance.h"
#include "crs/ordering.h"
#include "crs/schemes.h"

namespace crs {

// ---------------------------------------------------------------------------
// Instance generation.

enum class Family {
  kPath,
  kCyclePlusChords,
  kForestUnion,
  kTieFlip,
  kCouplingGap,
  kBroom,
  kRandomMultigraph,
};

enum class MarginalMode {
  kForestConvex,  // random convex combination of forests of the skeleton
  kExplicit,      // every edge gets `x` (broom: leaf_x / handle_x)
};

struct GeneratorSpec {
  Family family = Family::kTieFlip;
  int n = 6;          // vertices (path, cycle, forest-union, random-multigraph)
  int k = 2;          // forests in the union or in the convex combination
  int m = 8;          // edges (random-multigraph)
  int chords = 2;     // cycle-plus-chords
  int leaves = 5;     // broom
  int handle = 0;     // broom handle length in edges
  double x = 1.0;     // explicit mode
  double leaf_x = 0.6;
  double handle_x = 1.0;
  MarginalMode mode = MarginalMode::kForestConvex;
  std::uint64_t seed = 0;
};

Family parse_family(std::string_view name);  // throws kUnknownFamily
std::string family_name(Family family);

// Deterministic per spec. Forest-convex marginals lie in the forest polytope
// by construction; explicit ones are checked exactly (<= 20 vertices) and
// rejected with kInfeasibleSpec.
Instance generate_instance(const GeneratorSpec& spec);

Instance tie_flip_instance();
Instance coupling_gap_instance();

struct ForestUnion {
  Instance instance;  // x = 1/k on every edge
  std::vector<std::vector<EdgeId>> forests;
};
// Union of k random spanning trees on n vertices; coinciding pairs stay
// parallel edges.
ForestUnion generate_forest_union(int k, int n, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Adversaries for the adversarial-order-with-sample model. They see the
// instance, x, S and the tiebreak labeling, never activity or pick coins.

enum class AdversaryKind {
  kIdentity,
  kReverse,
  kHeavyBucketFirst,  // owners by descending x(δ(owner) ∩ S); heavy edges first
  kLightBucketFirst,  // the mirror image
  kRandomFixed,       // one seed-fixed permutation of E, restricted to E \ S
  kLabelingAttack,    // exact buckets; heaviest bucket first, light edges last
  kTargetLast,        // identity with `target` moved to the end
};

struct AdversaryStrategy {
  AdversaryKind kind = AdversaryKind::kIdentity;
  std::uint64_t seed = 0;
  EdgeId target = -1;
};

// "identity", "reverse", "heavy-bucket-first", "light-bucket-first",
// "random-fixed[:seed]", "labeling-attack", "target-last:<edge>".
AdversaryStrategy parse_adversary(std::string_view name);  // throws kUnknownStrategy
std::string adversary_name(const AdversaryStrategy& strategy);
std::vector<AdversaryStrategy> standard_adversaries();

// A permutation of E \ S.
std::vector<EdgeId> adversary_order(const AdversaryStrategy& strategy, const Instance& instance,
                                    std::span<const EdgeId> sample, const Labeling& labeling);

// ---------------------------------------------------------------------------
// Monte Carlo selectability estimation.

enum class SchemeId { kRocrs, kPriorKnowledge, kSampleOcrs };

SchemeId parse_scheme(std::string_view name);  // throws kUnknownScheme
std::string scheme_name(SchemeId scheme);

// Selectability constants each scheme is checked against.
struct TargetConfig {
  double rocrs = 1.0 / 96.0;
  double sample_ocrs = 1.0 / 96.0;
  double prior = 1.0 / 16.0;

  double for_scheme(SchemeId scheme) const;
};

struct EstimateOptions {
  std::uint64_t trials = 100000;
  std::uint64_t seed = 0;
  int workers = 1;
  std::optional<AdversaryStrategy> adversary;  // sample-ocrs only
  CoinConfig coins;
  TargetConfig targets;
  double z = 4.0;
  // Replaces c * x_e as the per-edge target when set (MOFS).
  std::optional<double> fixed_target;
};

struct EdgeEstimate {
  EdgeId id = 0;
  VertexId u = 0;
  VertexId v = 0;
  Weight x;
  std::uint64_t picks = 0;
  std::uint64_t trials = 0;
  double freq = 0.0;
  double margin = 0.0;
  double lower = 0.0;
  double target = 0.0;
  bool pass = false;
};

struct InvariantCounts {
  std::uint64_t forest = 0;
  std::uint64_t bucket = 0;
  std::uint64_t sampled = 0;
  std::uint64_t information = 0;
  std::uint64_t abc = 0;

  std::uint64_t total() const { return forest + bucket + sampled + information + abc; }
};

struct SelectabilityReport {
  std::string scheme;
  std::string adversary;  // empty unless sample-ocrs
  std::uint64_t seed = 0;
  std::uint64_t trials = 0;
  double constant = 0.0;
  std::vector<EdgeEstimate> edges;
  InvariantCounts violations;
  double wall_seconds = 0.0;

  bool all_pass() const;
};

// One-sided margin z * sqrt(f(1-f)/N + 1/N).
double confidence_margin(double freq, std::uint64_t trials, double z = 4.0);

// Runs independent trials, each with fresh order (or adversary order) and
// coins derived from (seed, trial index). Results do not depend on workers.
SelectabilityReport estimate_selectability(SchemeId scheme, const Instance& instance,
                                           const EstimateOptions& options);

// Runs the random-order scheme on x = 1/k over the union of k forests and
// checks every element against 1/(96k).
SelectabilityReport mofs_run(const Instance& skeleton,
                             std::span<const std::vector<EdgeId>> forests,
                             const EstimateOptions& options);

// CSV: comment header, then edge_id,u,v,x,picks,trials,freq,lower,target,pass.
void write_report_csv(std::ostream& out, const SelectabilityReport& report);
std::string report_to_csv(const SelectabilityReport& report);
// One line without timing, so reruns print identical text.
std::string report_summary(const SelectabilityReport& report);

// Monte Carlo estimate of E_S[x(E_v^S \ S)] for a fixed labeling, S drawn
// by independent coins with probability `rate`.
struct LoadEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t trials = 0;
};
LoadEstimate estimate_offsample_load(const Instance& instance, const Labeling& labeling,
                                     VertexId v, std::uint64_t trials, std::uint64_t seed,
                                     double rate = 0.5);

}  // namespace crs

#endif  // CRS_HARNESS_H_
