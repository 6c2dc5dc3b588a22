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

#ifndef CRS_ORACLE_H_
#define CRS_ORACLE_H_

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "crs/instance.h"
#include "crs/ordering.h"
#include "crs/weight.h"

namespace crs {

inline constexpr int kSampleEdgeCap = 16;
inline constexpr int kLabelingVertexCap = 8;

// All n! labelings in lexicographic order. Throws CapExceeded when n > cap.
std::vector<Labeling> all_labelings(int vertex_count, int cap = kLabelingVertexCap);

// Every S ⊆ E exactly once, as a bit mask over edge ids; each has weight 2^-m.
class SampleEnumeration {
 public:
  // Throws CapExceeded when m > cap.
  explicit SampleEnumeration(const Instance& instance, int cap = kSampleEdgeCap);

  int edge_count() const { return m_; }
  std::uint64_t size() const { return std::uint64_t{1} << m_; }
  static bool contains(std::uint64_t mask, EdgeId e) { return (mask >> e) & 1U; }
  std::vector<EdgeId> subset(std::uint64_t mask) const;

 private:
  int m_;
};

// ≺_S for every S under one labeling, computed independently of the
// streaming code with flat integer loads.
class SampleOrderTable {
 public:
  // Throws CapExceeded when m > cap, kIncompleteLabeling if a vertex is unlabeled.
  SampleOrderTable(const Instance& instance, const Labeling& labeling,
                   int cap = kSampleEdgeCap);

  std::uint64_t size() const { return count_; }
  int position(std::uint64_t mask, VertexId v) const {
    return pos_[mask * n_ + static_cast<std::size_t>(v)];
  }
  VertexId at(std::uint64_t mask, int position) const {
    return order_[mask * n_ + static_cast<std::size_t>(position)];
  }
  bool precedes(std::uint64_t mask, VertexId a, VertexId b) const {
    return position(mask, a) < position(mask, b);
  }
  int core_begin(std::uint64_t mask) const { return core_begin_[mask]; }
  // x(δ(v) ∩ S) in weight units.
  std::int64_t sampled_load(std::uint64_t mask, VertexId v) const;
  VertexId witness(std::uint64_t mask, VertexId v) const;
  Ordering ordering(std::uint64_t mask) const;

 private:
  const Instance* instance_;
  std::size_t n_;
  std::uint64_t count_;
  std::vector<std::int16_t> pos_;
  std::vector<VertexId> order_;
  std::vector<std::int16_t> core_begin_;
};

// Σ_S x(E_v^S \ S), kept as an integer over the denominator 2^m · kScale.
struct ExactExpectation {
  std::int64_t units_total = 0;
  int edge_count = 0;

  double value() const;
  bool equals(std::int64_t numerator, std::int64_t denominator) const;
  bool at_most(Weight bound) const;
};

// E_S[x(E_v^S \ S)] by full enumeration. Throws CapExceeded.
ExactExpectation exact_offsample_expectation(const Instance& instance, const Labeling& labeling,
                                             VertexId v, int cap = kSampleEdgeCap);
ExactExpectation exact_offsample_expectation(const SampleOrderTable& table,
                                             const Instance& instance, VertexId v);

struct EdgeCoupling {
  EdgeId edge = 0;
  VertexId other = 0;
  std::uint64_t off_sample_first = 0;   // #S: e ∉ S and v ≺_S u
  std::uint64_t in_sample_first = 0;    // #S: e ∈ S and v ≺_S u
  std::uint64_t in_sample_witness = 0;  // #S: e ∈ S and w_S(v) ⪯_S u

  bool holds() const { return off_sample_first <= in_sample_witness; }
  bool plain_holds() const { return off_sample_first <= in_sample_first; }
};

struct CouplingReport {
  VertexId v = 0;
  std::uint64_t realizations = 0;
  std::vector<EdgeCoupling> edges;
  Weight max_witness_load;
  std::uint64_t upper_violations = 0;  // witness-bucket load > 3
  std::uint64_t lower_violations = 0;  // sampled load > 2 but witness-bucket load <= 2

  bool holds() const;
};

// Throws CapExceeded.
CouplingReport check_coupling(const Instance& instance, const Labeling& labeling, VertexId v,
                              int cap = kSampleEdgeCap);
CouplingReport check_coupling(const SampleOrderTable& table, const Instance& instance,
                              VertexId v);

struct PrefixReport {
  std::uint64_t triples = 0;  // (S, e, t) checked
  std::uint64_t violations = 0;
  bool holds() const { return violations == 0; }
};

// Adding e = {v,u} ∉ S to S keeps every t that preceded both endpoints ahead
// of both. Throws CapExceeded.
PrefixReport check_prefix_stability(const Instance& instance, const Labeling& labeling,
                                    int cap = kSampleEdgeCap);
PrefixReport check_prefix_stability(const SampleOrderTable& table, const Instance& instance);

struct LoadBoundReport {
  Weight max_offline_bucket;  // over the full-edge-set ordering
  Weight max_sampled_bucket;  // over every S, sampled edges only
  bool holds() const;
};

// Largest x(E_v) of the offline order on all edges.
Weight max_offline_bucket_load(const Instance& instance, const Labeling& labeling);

// Offline bucket loads and sampled bucket loads under every S, all <= 2.
// Throws kPolytopeViolation when x leaves the forest polytope, CapExceeded.
LoadBoundReport verify_load_bounds(const Instance& instance, const Labeling& labeling,
                                   int cap = kSampleEdgeCap);

// The tie-flip instance: a-b 1.0, b-v 0.1, v-u 0.5, u-c 0.4 with
// (a, b, v, u, c) = (0, 1, 2, 3, 4) and e = v-u.
struct FlipReport {
  int labelings = 0;
  int without_e_v_first = 0;   // S = E \ {e} gives v ≺ u
  int full_u_first = 0;        // S = E gives u ≺ v
  int relaxed_v_first = 0;     // S = E \ {a-b} gives v ≺ u
  bool holds() const {
    return without_e_v_first == labelings && full_u_first == labelings;
  }
  bool relaxed_changes_verdict() const { return relaxed_v_first > 0; }
};
FlipReport verify_ordering_flip();

struct ClassCounts {
  std::uint64_t fixed_v_first = 0;
  std::uint64_t dependent = 0;
  std::uint64_t fixed_u_first = 0;

  std::uint64_t total() const { return fixed_v_first + dependent + fixed_u_first; }
  friend bool operator==(const ClassCounts&, const ClassCounts&) = default;
};

// The coupling-gap instance: the tie-flip instance with u-c split into two
// parallel 0.2 edges.
struct CouplingGapReport {
  ClassCounts off_sample;  // realizations with e ∉ S
  ClassCounts in_sample;
  int labelings = 0;
  int strict_labelings = 0;  // #(e∉S ∧ v≺u) > #(e∈S ∧ v≺u)

  static constexpr ClassCounts kPublishedOffSample{13, 2, 1};
  static constexpr ClassCounts kPublishedInSample{0, 11, 5};

  bool counts_match_published() const {
    return off_sample == kPublishedOffSample && in_sample == kPublishedInSample;
  }
  bool strict_for_every_labeling() const { return strict_labelings == labelings; }
};
CouplingGapReport verify_coupling_gap();

// ---------------------------------------------------------------------------
// CHECK-line suites.

struct NamedInstance {
  std::string name;
  Instance instance;
};

// tie-flip, coupling-gap, paths up to 6 edges, brooms, and 50 random
// forest-convex instances with m <= 10 and n <= 6.
std::vector<NamedInstance> fixture_battery();

struct SuiteResult {
  int checks = 0;
  int failures = 0;
  int spot_checks = 0;  // checks that fell back to random spot checks
  bool ok() const { return failures == 0; }
};

struct SuiteOptions {
  std::uint64_t seed = 0;
  int workers = 1;
  // load-bounds: also check offline bucket loads on this many random
  // polytope-valid instances (0 disables).
  int random_offline_instances = 1000;
};

// Suites: appendix, coupling, expectation, prefix, load-bounds, all. Prints
// "CHECK <name> <instance> PASS|FAIL <details>" lines in battery order for
// any worker count. Instances beyond the enumeration caps get seeded random
// spot checks flagged "mode=spot". Throws CrsError(kInvalidArgument) for an
// unknown suite.
SuiteResult run_verify_suite(std::string_view suite, std::span<const NamedInstance> battery,
                             std::ostream& out, const SuiteOptions& options = {});

bool is_verify_suite(std::string_view suite);

}  // namespace crs

#endif  // CRS_ORACLE_H_
