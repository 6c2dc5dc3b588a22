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

#include "crs/oracle.h"

#include <fmt/format.h>

#include <algorithm>
#include <exception>
#include <limits>
#include <numeric>
#include <optional>
#include <ostream>
#include <thread>

#include "crs/errors.h"
#include "crs/harness.h"
#include "crs/rng.h"

namespace crs {
namespace {

constexpr std::int64_t kTwo = 2 * Weight::kScale;
constexpr std::int64_t kThree = 3 * Weight::kScale;
// Labelings x realizations beyond which labelings are sampled instead.
constexpr std::uint64_t kExhaustiveBudget = std::uint64_t{1} << 26;
constexpr int kSpotLabelings = 32;
constexpr int kSpotSamples = 256;
constexpr std::uint64_t kSpotLoadTrials = 1024;

void require_cap(int m, int cap) {
  if (m > cap) {
    throw CapExceeded(fmt::format("{} edges exceed the enumeration cap of {}", m, cap));
  }
}

std::uint64_t factorial(int n) {
  std::uint64_t f = 1;
  for (int i = 2; i <= n; ++i) f *= static_cast<std::uint64_t>(i);
  return f;
}

}  // namespace

std::vector<Labeling> all_labelings(int vertex_count, int cap) {
  if (vertex_count > cap) {
    throw CapExceeded(
        fmt::format("{} vertices exceed the labeling cap of {}", vertex_count, cap));
  }
  std::vector<VertexId> perm(static_cast<std::size_t>(std::max(vertex_count, 0)));
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<Labeling> out;
  out.reserve(factorial(vertex_count));
  do {
    out.emplace_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

SampleEnumeration::SampleEnumeration(const Instance& instance, int cap)
    : m_(instance.edge_count()) {
  require_cap(m_, cap);
}

std::vector<EdgeId> SampleEnumeration::subset(std::uint64_t mask) const {
  std::vector<EdgeId> out;
  for (EdgeId e = 0; e < m_; ++e) {
    if (contains(mask, e)) out.push_back(e);
  }
  return out;
}

SampleOrderTable::SampleOrderTable(const Instance& instance, const Labeling& labeling, int cap)
    : instance_(&instance), n_(static_cast<std::size_t>(instance.vertex_count())) {
  const int m = instance.edge_count();
  require_cap(m, cap);
  if (n_ > static_cast<std::size_t>(std::numeric_limits<std::int16_t>::max())) {
    throw CapExceeded("too many vertices for an order table");
  }
  for (VertexId v = 0; v < static_cast<VertexId>(n_); ++v) {
    if (!labeling.contains(v)) {
      throw CrsError(ErrorCode::kIncompleteLabeling, fmt::format("vertex {} is unlabeled", v));
    }
  }
  count_ = std::uint64_t{1} << m;
  pos_.assign(count_ * n_, -1);
  order_.assign(count_ * n_, -1);
  core_begin_.assign(count_, 0);

  std::vector<VertexId> by_label;
  for (VertexId v : labeling.vertices()) {
    if (static_cast<std::size_t>(v) < n_) by_label.push_back(v);
  }
  std::vector<std::uint8_t> core(n_);
  std::vector<std::uint8_t> remaining(n_);
  std::vector<std::int64_t> load(n_);
  for (std::uint64_t mask = 0; mask < count_; ++mask) {
    std::fill(core.begin(), core.end(), 0);
    std::fill(load.begin(), load.end(), 0);
    for (const EdgeRecord& e : instance.edges()) {
      if (!SampleEnumeration::contains(mask, e.id)) continue;
      core[static_cast<std::size_t>(e.u)] = core[static_cast<std::size_t>(e.v)] = 1;
      load[static_cast<std::size_t>(e.u)] += e.x.units();
      load[static_cast<std::size_t>(e.v)] += e.x.units();
    }
    std::int16_t* pos = &pos_[mask * n_];
    VertexId* order = &order_[mask * n_];
    std::int16_t p = 0;
    for (VertexId v : by_label) {
      if (!core[static_cast<std::size_t>(v)]) {
        order[p] = v;
        pos[v] = p++;
      }
    }
    core_begin_[mask] = p;
    remaining = core;
    for (std::size_t left = n_ - static_cast<std::size_t>(p); left > 0; --left) {
      VertexId best = -1;
      for (VertexId v : by_label) {
        if (!remaining[static_cast<std::size_t>(v)]) continue;
        if (best < 0 || load[static_cast<std::size_t>(v)] < load[static_cast<std::size_t>(best)]) {
          best = v;
        }
      }
      remaining[static_cast<std::size_t>(best)] = 0;
      order[p] = best;
      pos[best] = p++;
      for (EdgeId id : instance.incident(best)) {
        if (!SampleEnumeration::contains(mask, id)) continue;
        const EdgeRecord& e = instance.edge(id);
        const VertexId o = e.other(best);
        if (remaining[static_cast<std::size_t>(o)]) load[static_cast<std::size_t>(o)] -= e.x.units();
      }
    }
  }
}

std::int64_t SampleOrderTable::sampled_load(std::uint64_t mask, VertexId v) const {
  std::int64_t total = 0;
  for (EdgeId id : instance_->incident(v)) {
    if (SampleEnumeration::contains(mask, id)) total += instance_->edge(id).x.units();
  }
  return total;
}

VertexId SampleOrderTable::witness(std::uint64_t mask, VertexId v) const {
  if (sampled_load(mask, v) <= kTwo) return at(mask, 0);
  for (int p = core_begin(mask); p < static_cast<int>(n_); ++p) {
    const VertexId c = at(mask, p);
    if (c == v) return v;
    std::int64_t residual = 0;
    for (EdgeId id : instance_->incident(v)) {
      if (!SampleEnumeration::contains(mask, id)) continue;
      const EdgeRecord& e = instance_->edge(id);
      if (position(mask, e.other(v)) > p) residual += e.x.units();
    }
    if (residual <= kTwo) return c;
  }
  return v;
}

Ordering SampleOrderTable::ordering(std::uint64_t mask) const {
  const std::span<const VertexId> all(&order_[mask * n_], n_);
  const auto split = static_cast<std::size_t>(core_begin(mask));
  return Ordering::from_parts(all.first(split), all.subspan(split));
}

double ExactExpectation::value() const {
  return static_cast<double>(units_total) / static_cast<double>(Weight::kScale) /
         static_cast<double>(std::uint64_t{1} << edge_count);
}

bool ExactExpectation::equals(std::int64_t numerator, std::int64_t denominator) const {
  // units_total / (2^m kScale) == numerator / denominator
  const auto lhs = static_cast<__int128>(units_total) * denominator;
  const auto rhs = static_cast<__int128>(numerator) * Weight::kScale *
                   static_cast<__int128>(std::uint64_t{1} << edge_count);
  return lhs == rhs;
}

bool ExactExpectation::at_most(Weight bound) const {
  return static_cast<__int128>(units_total) <=
         static_cast<__int128>(bound.units()) * static_cast<__int128>(std::uint64_t{1} << edge_count);
}

ExactExpectation exact_offsample_expectation(const SampleOrderTable& table,
                                             const Instance& instance, VertexId v) {
  ExactExpectation out;
  out.edge_count = instance.edge_count();
  for (std::uint64_t mask = 0; mask < table.size(); ++mask) {
    for (EdgeId id : instance.incident(v)) {
      if (SampleEnumeration::contains(mask, id)) continue;
      const EdgeRecord& e = instance.edge(id);
      if (table.precedes(mask, v, e.other(v))) out.units_total += e.x.units();
    }
  }
  return out;
}

ExactExpectation exact_offsample_expectation(const Instance& instance, const Labeling& labeling,
                                             VertexId v, int cap) {
  const SampleOrderTable table(instance, labeling, cap);
  return exact_offsample_expectation(table, instance, v);
}

bool CouplingReport::holds() const {
  return upper_violations == 0 && lower_violations == 0 &&
         std::all_of(edges.begin(), edges.end(), [](const EdgeCoupling& e) { return e.holds(); });
}

CouplingReport check_coupling(const SampleOrderTable& table, const Instance& instance,
                              VertexId v) {
  CouplingReport report;
  report.v = v;
  report.realizations = table.size();
  const std::span<const EdgeId> at_v = instance.incident(v);
  for (EdgeId id : at_v) report.edges.push_back({id, instance.edge(id).other(v), 0, 0, 0});
  for (std::uint64_t mask = 0; mask < table.size(); ++mask) {
    const VertexId w = table.witness(mask, v);
    std::int64_t witness_load = 0;
    for (EdgeCoupling& c : report.edges) {
      const bool v_first = table.precedes(mask, v, c.other);
      if (!SampleEnumeration::contains(mask, c.edge)) {
        c.off_sample_first += v_first ? 1 : 0;
        continue;
      }
      c.in_sample_first += v_first ? 1 : 0;
      if (table.position(mask, w) <= table.position(mask, c.other)) {
        ++c.in_sample_witness;
        witness_load += instance.edge(c.edge).x.units();
      }
    }
    report.max_witness_load = std::max(report.max_witness_load, Weight::from_units(witness_load));
    if (witness_load > kThree) ++report.upper_violations;
    if (table.sampled_load(mask, v) > kTwo && witness_load <= kTwo) ++report.lower_violations;
  }
  return report;
}

CouplingReport check_coupling(const Instance& instance, const Labeling& labeling, VertexId v,
                              int cap) {
  const SampleOrderTable table(instance, labeling, cap);
  return check_coupling(table, instance, v);
}

PrefixReport check_prefix_stability(const SampleOrderTable& table, const Instance& instance) {
  PrefixReport report;
  const int n = instance.vertex_count();
  for (std::uint64_t mask = 0; mask < table.size(); ++mask) {
    for (const EdgeRecord& e : instance.edges()) {
      if (SampleEnumeration::contains(mask, e.id)) continue;
      const std::uint64_t grown = mask | (std::uint64_t{1} << e.id);
      const int bound = std::min(table.position(mask, e.u), table.position(mask, e.v));
      for (int p = 0; p < bound && p < n; ++p) {
        const VertexId t = table.at(mask, p);
        ++report.triples;
        if (!table.precedes(grown, t, e.u) || !table.precedes(grown, t, e.v)) ++report.violations;
      }
    }
  }
  return report;
}

PrefixReport check_prefix_stability(const Instance& instance, const Labeling& labeling, int cap) {
  const SampleOrderTable table(instance, labeling, cap);
  return check_prefix_stability(table, instance);
}

bool LoadBoundReport::holds() const {
  return max_offline_bucket <= Weight::whole(2) && max_sampled_bucket <= Weight::whole(2);
}

Weight max_offline_bucket_load(const Instance& instance, const Labeling& labeling) {
  const Ordering order = offline_order(instance, std::nullopt, labeling);
  Weight worst;
  for (VertexId v = 0; v < instance.vertex_count(); ++v) {
    Weight load;
    for (EdgeId id : bucket(order, instance, v)) load += instance.x(id);
    worst = std::max(worst, load);
  }
  return worst;
}

namespace {

Weight max_sampled_bucket(const SampleOrderTable& table, const Instance& instance) {
  std::int64_t worst = 0;
  for (std::uint64_t mask = 0; mask < table.size(); ++mask) {
    for (VertexId v = 0; v < instance.vertex_count(); ++v) {
      std::int64_t load = 0;
      for (EdgeId id : instance.incident(v)) {
        if (!SampleEnumeration::contains(mask, id)) continue;
        const EdgeRecord& e = instance.edge(id);
        if (table.precedes(mask, v, e.other(v))) load += e.x.units();
      }
      worst = std::max(worst, load);
    }
  }
  return Weight::from_units(worst);
}

void require_polytope(const Instance& instance) {
  if (!in_forest_polytope(instance)) {
    throw CrsError(ErrorCode::kPolytopeViolation,
                   "load bounds are claimed only for x in the forest polytope");
  }
}

}  // namespace

LoadBoundReport verify_load_bounds(const Instance& instance, const Labeling& labeling, int cap) {
  require_cap(instance.edge_count(), cap);
  require_polytope(instance);
  const SampleOrderTable table(instance, labeling, cap);
  return {max_offline_bucket_load(instance, labeling), max_sampled_bucket(table, instance)};
}

namespace {

constexpr VertexId kV = 2;
constexpr VertexId kU = 3;
constexpr EdgeId kE = 2;
constexpr EdgeId kAB = 0;

}  // namespace

FlipReport verify_ordering_flip() {
  const Instance instance = tie_flip_instance();
  const std::uint64_t full = (std::uint64_t{1} << instance.edge_count()) - 1;
  const std::uint64_t without_e = full & ~(std::uint64_t{1} << kE);
  const std::uint64_t relaxed = full & ~(std::uint64_t{1} << kAB);
  FlipReport report;
  for (const Labeling& labeling : all_labelings(instance.vertex_count())) {
    const SampleOrderTable table(instance, labeling);
    ++report.labelings;
    report.without_e_v_first += table.precedes(without_e, kV, kU) ? 1 : 0;
    report.full_u_first += table.precedes(full, kU, kV) ? 1 : 0;
    report.relaxed_v_first += table.precedes(relaxed, kV, kU) ? 1 : 0;
  }
  return report;
}

CouplingGapReport verify_coupling_gap() {
  const Instance instance = coupling_gap_instance();
  const std::uint64_t count = std::uint64_t{1} << instance.edge_count();
  std::vector<int> v_first(count, 0);
  CouplingGapReport report;
  for (const Labeling& labeling : all_labelings(instance.vertex_count())) {
    const SampleOrderTable table(instance, labeling);
    ++report.labelings;
    int off = 0;
    int in = 0;
    for (std::uint64_t mask = 0; mask < count; ++mask) {
      if (!table.precedes(mask, kV, kU)) continue;
      ++v_first[mask];
      (SampleEnumeration::contains(mask, kE) ? in : off) += 1;
    }
    report.strict_labelings += off > in ? 1 : 0;
  }
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    ClassCounts& side =
        SampleEnumeration::contains(mask, kE) ? report.in_sample : report.off_sample;
    if (v_first[mask] == report.labelings) {
      ++side.fixed_v_first;
    } else if (v_first[mask] == 0) {
      ++side.fixed_u_first;
    } else {
      ++side.dependent;
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Suites.

std::vector<NamedInstance> fixture_battery() {
  std::vector<NamedInstance> out;
  out.push_back({"tie-flip", tie_flip_instance()});
  out.push_back({"coupling-gap", coupling_gap_instance()});
  for (int edges = 1; edges <= 6; ++edges) {
    GeneratorSpec spec;
    spec.family = Family::kPath;
    spec.n = edges + 1;
    spec.k = 2;
    spec.seed = static_cast<std::uint64_t>(edges);
    out.push_back({fmt::format("path-{}", edges), generate_instance(spec)});
  }
  const int brooms[][2] = {{5, 0}, {4, 1}, {3, 2}};
  for (const auto& [leaves, handle] : brooms) {
    GeneratorSpec spec;
    spec.family = Family::kBroom;
    spec.leaves = leaves;
    spec.handle = handle;
    spec.mode = MarginalMode::kExplicit;
    out.push_back({fmt::format("broom-{}-{}", leaves, handle), generate_instance(spec)});
  }
  Rng rng(combine_seed(0x5eed, 50));
  for (int i = 0; i < 50; ++i) {
    GeneratorSpec spec;
    spec.family = Family::kRandomMultigraph;
    spec.n = 3 + static_cast<int>(rng.below(4));
    spec.m = spec.n - 1 + static_cast<int>(rng.below(static_cast<std::size_t>(12 - spec.n)));
    spec.k = 1 + static_cast<int>(rng.below(3));
    spec.seed = static_cast<std::uint64_t>(i);
    out.push_back({fmt::format("random-{}", i), generate_instance(spec)});
  }
  return out;
}

namespace {

enum SuiteBits : unsigned {
  kAppendix = 1U,
  kExpectation = 2U,
  kCoupling = 4U,
  kPrefix = 8U,
  kLoadBounds = 16U,
  kAll = 31U,
};

std::optional<unsigned> suite_bits(std::string_view suite) {
  if (suite == "appendix") return kAppendix;
  if (suite == "expectation") return kExpectation;
  if (suite == "coupling") return kCoupling;
  if (suite == "prefix") return kPrefix;
  if (suite == "load-bounds") return kLoadBounds;
  if (suite == "all") return kAll;
  return std::nullopt;
}

struct Outcome {
  std::string text;
  int checks = 0;
  int failures = 0;
  int spot_checks = 0;

  void check(std::string_view name, std::string_view instance, bool pass, std::string details,
             bool spot = false) {
    ++checks;
    failures += pass ? 0 : 1;
    spot_checks += spot ? 1 : 0;
    text += fmt::format("CHECK {} {} {} {}{}\n", name, instance, pass ? "PASS" : "FAIL", details,
                        spot ? " mode=spot" : "");
  }
};

std::string counts(const ClassCounts& c) {
  return fmt::format("({},{},{})", c.fixed_v_first, c.dependent, c.fixed_u_first);
}

void appendix_checks(Outcome& out) {
  const FlipReport flip = verify_ordering_flip();
  out.check("ordering-flip", "tie-flip", flip.holds(),
            fmt::format("labelings={} without_e_v_first={} full_u_first={}", flip.labelings,
                        flip.without_e_v_first, flip.full_u_first));
  out.check("flip-sensitivity", "tie-flip", flip.relaxed_changes_verdict(),
            fmt::format("labelings_v_first_without_ab={}", flip.relaxed_v_first));
  const CouplingGapReport gap = verify_coupling_gap();
  out.check("gap-counts", "coupling-gap", gap.counts_match_published(),
            fmt::format("off_sample={} in_sample={} expected_off_sample={} expected_in_sample={} "
                        "as=(fixed_v_first,dependent,fixed_u_first)",
                        counts(gap.off_sample), counts(gap.in_sample),
                        counts(CouplingGapReport::kPublishedOffSample),
                        counts(CouplingGapReport::kPublishedInSample)));
  out.check("gap-strict", "coupling-gap", gap.strict_for_every_labeling(),
            fmt::format("labelings={} strict={}", gap.labelings, gap.strict_labelings));
}

// Aggregates over every (labeling, vertex) of one instance.
struct Tally {
  std::uint64_t cases = 0;
  std::uint64_t violations = 0;
  double max_value = 0.0;
  std::uint64_t plain_failures = 0;
  std::uint64_t lower_violations = 0;
  std::uint64_t upper_violations = 0;
};

struct LabelingPlan {
  std::vector<Labeling> labelings;
  bool spot = false;
};

LabelingPlan plan_labelings(const Instance& instance, Rng& rng) {
  const int n = instance.vertex_count();
  const int m = instance.edge_count();
  LabelingPlan plan;
  const bool samples_enumerable = m <= kSampleEdgeCap;
  if (n <= kLabelingVertexCap &&
      (!samples_enumerable || factorial(n) << m <= kExhaustiveBudget)) {
    plan.labelings = all_labelings(n);
    return plan;
  }
  plan.spot = true;
  for (int i = 0; i < kSpotLabelings; ++i) plan.labelings.push_back(Labeling::uniform(n, rng));
  return plan;
}

std::string labeling_note(const LabelingPlan& plan) {
  return fmt::format("labelings={}{}", plan.labelings.size(), plan.spot ? "(random)" : "");
}

void exhaustive_checks(unsigned bits, const NamedInstance& item, const LabelingPlan& plan,
                       Outcome& out) {
  const Instance& g = item.instance;
  const int n = g.vertex_count();
  Tally expectation;
  Tally coupling;
  PrefixReport prefix;
  Weight offline_max;
  Weight sampled_max;
  bool polytope = true;
  if (bits & kLoadBounds) polytope = n > kPolytopeVertexCap || in_forest_polytope(g);
  for (const Labeling& labeling : plan.labelings) {
    const SampleOrderTable table(g, labeling);
    for (VertexId v = 0; v < n; ++v) {
      if (bits & kExpectation) {
        const ExactExpectation e = exact_offsample_expectation(table, g, v);
        ++expectation.cases;
        expectation.violations += e.at_most(Weight::whole(3)) ? 0 : 1;
        expectation.max_value = std::max(expectation.max_value, e.value());
      }
      if (bits & kCoupling) {
        const CouplingReport r = check_coupling(table, g, v);
        for (const EdgeCoupling& c : r.edges) {
          ++coupling.cases;
          coupling.violations += c.holds() ? 0 : 1;
          coupling.plain_failures += c.plain_holds() ? 0 : 1;
        }
        coupling.upper_violations += r.upper_violations;
        coupling.lower_violations += r.lower_violations;
        coupling.max_value = std::max(coupling.max_value, r.max_witness_load.value());
      }
    }
    if (bits & kPrefix) {
      const PrefixReport r = check_prefix_stability(table, g);
      prefix.triples += r.triples;
      prefix.violations += r.violations;
    }
    if ((bits & kLoadBounds) && polytope) {
      offline_max = std::max(offline_max, max_offline_bucket_load(g, labeling));
      sampled_max = std::max(sampled_max, max_sampled_bucket(table, g));
    }
  }
  const std::string lab = labeling_note(plan);
  if (bits & kExpectation) {
    out.check("expectation", item.name, expectation.violations == 0,
              fmt::format("{} cases={} max={:.6g} bound=3 violations={}", lab, expectation.cases,
                          expectation.max_value, expectation.violations),
              plan.spot);
  }
  if (bits & kCoupling) {
    const bool pass = coupling.violations == 0 && coupling.upper_violations == 0 &&
                      coupling.lower_violations == 0;
    out.check("coupling", item.name, pass,
              fmt::format("{} edge_cases={} violations={} max_witness_load={:.6g} "
                          "upper_violations={} lower_violations={} plain_coupling_failures={}",
                          lab, coupling.cases, coupling.violations, coupling.max_value,
                          coupling.upper_violations, coupling.lower_violations,
                          coupling.plain_failures),
              plan.spot);
  }
  if (bits & kPrefix) {
    out.check("prefix", item.name, prefix.holds(),
              fmt::format("{} triples={} violations={}", lab, prefix.triples, prefix.violations),
              plan.spot);
  }
  if (bits & kLoadBounds) {
    if (!polytope) {
      out.check("load-bounds", item.name, false, "precondition: x is outside the forest polytope");
    } else {
      const bool unchecked = n > kPolytopeVertexCap;
      out.check("load-bounds", item.name,
                offline_max <= Weight::whole(2) && sampled_max <= Weight::whole(2),
                fmt::format("{} max_offline_bucket={} max_sampled_bucket={} bound=2{}", lab,
                            format_weight(offline_max), format_weight(sampled_max),
                            unchecked ? " polytope=unchecked" : ""),
                plan.spot || unchecked);
    }
  }
}

// For m above the enumeration cap: random realizations S instead of all 2^m.
void spot_checks(unsigned bits, const NamedInstance& item, const LabelingPlan& plan, Rng& rng,
                 std::uint64_t seed, Outcome& out) {
  const Instance& g = item.instance;
  const int n = g.vertex_count();
  const int m = g.edge_count();
  Tally expectation;
  Tally coupling;
  PrefixReport prefix;
  Weight sampled_max;
  Weight offline_max;
  bool polytope = true;
  if (bits & kLoadBounds) polytope = n > kPolytopeVertexCap || in_forest_polytope(g);
  auto draw = [&] {
    std::vector<EdgeId> s;
    for (EdgeId e = 0; e < m; ++e) {
      if (rng.uniform() < 0.5) s.push_back(e);
    }
    return s;
  };
  auto flags_of = [&](const std::vector<EdgeId>& s) {
    EdgeFlags f(static_cast<std::size_t>(m), 0);
    for (EdgeId e : s) f[static_cast<std::size_t>(e)] = 1;
    return f;
  };
  std::uint64_t label_index = 0;
  for (const Labeling& labeling : plan.labelings) {
    ++label_index;
    if (bits & kExpectation) {
      for (VertexId v = 0; v < n; ++v) {
        const LoadEstimate est = estimate_offsample_load(
            g, labeling, v, kSpotLoadTrials, combine_seed(seed, label_index * 4096 + v));
        ++expectation.cases;
        expectation.violations += est.mean - 4.0 * est.std_error <= 3.0 ? 0 : 1;
        expectation.max_value = std::max(expectation.max_value, est.mean);
      }
    }
    if ((bits & kLoadBounds) && polytope) {
      offline_max = std::max(offline_max, max_offline_bucket_load(g, labeling));
    }
    for (int i = 0; i < kSpotSamples; ++i) {
      const std::vector<EdgeId> s = draw();
      const EdgeFlags in_s = flags_of(s);
      const Ordering order = sample_order(g, s, labeling);
      for (VertexId v = 0; v < n; ++v) {
        Weight sampled_total;
        Weight forward;
        for (EdgeId id : g.incident(v)) {
          if (!in_s[static_cast<std::size_t>(id)]) continue;
          sampled_total += g.x(id);
          if (precedes(order, v, g.edge(id).other(v))) forward += g.x(id);
        }
        sampled_max = std::max(sampled_max, forward);
        if (bits & kCoupling) {
          const VertexId w = witness_vertex(g, s, order, v);
          Weight load;
          for (EdgeId id : g.incident(v)) {
            if (in_s[static_cast<std::size_t>(id)] &&
                order.position(w) <= order.position(g.edge(id).other(v))) {
              load += g.x(id);
            }
          }
          ++coupling.cases;
          coupling.upper_violations += load > Weight::whole(3) ? 1 : 0;
          coupling.lower_violations +=
              sampled_total > Weight::whole(2) && load <= Weight::whole(2) ? 1 : 0;
          coupling.max_value = std::max(coupling.max_value, load.value());
        }
      }
      if ((bits & kPrefix) && i < kSpotSamples / 4) {
        for (const EdgeRecord& e : g.edges()) {
          if (in_s[static_cast<std::size_t>(e.id)]) continue;
          std::vector<EdgeId> grown = s;
          grown.insert(std::upper_bound(grown.begin(), grown.end(), e.id), e.id);
          const Ordering after = sample_order(g, grown, labeling);
          const int bound = std::min(order.position(e.u), order.position(e.v));
          for (int p = 0; p < bound; ++p) {
            const VertexId t = order.vertices()[static_cast<std::size_t>(p)];
            ++prefix.triples;
            if (!precedes(after, t, e.u) || !precedes(after, t, e.v)) ++prefix.violations;
          }
        }
      }
    }
  }
  const std::string lab = fmt::format("{} samples_per_labeling={}", labeling_note(plan),
                                      kSpotSamples);
  if (bits & kExpectation) {
    out.check("expectation", item.name, expectation.violations == 0,
              fmt::format("{} cases={} max_estimate={:.6g} bound=3 violations={}", lab,
                          expectation.cases, expectation.max_value, expectation.violations),
              true);
  }
  if (bits & kCoupling) {
    out.check("coupling", item.name,
              coupling.upper_violations == 0 && coupling.lower_violations == 0,
              fmt::format("{} realization_cases={} max_witness_load={:.6g} upper_violations={} "
                          "lower_violations={} counts=unavailable",
                          lab, coupling.cases, coupling.max_value, coupling.upper_violations,
                          coupling.lower_violations),
              true);
  }
  if (bits & kPrefix) {
    out.check("prefix", item.name, prefix.holds(),
              fmt::format("{} triples={} violations={}", lab, prefix.triples, prefix.violations),
              true);
  }
  if (bits & kLoadBounds) {
    if (!polytope) {
      out.check("load-bounds", item.name, false, "precondition: x is outside the forest polytope");
    } else {
      out.check("load-bounds", item.name,
                offline_max <= Weight::whole(2) && sampled_max <= Weight::whole(2),
                fmt::format("{} max_offline_bucket={} max_sampled_bucket={} bound=2", lab,
                            format_weight(offline_max), format_weight(sampled_max)),
                true);
    }
  }
}

Outcome instance_checks(unsigned bits, const NamedInstance& item, std::uint64_t seed) {
  Outcome out;
  Rng rng(seed);
  const LabelingPlan plan = plan_labelings(item.instance, rng);
  if (item.instance.edge_count() <= kSampleEdgeCap) {
    exhaustive_checks(bits, item, plan, out);
  } else {
    spot_checks(bits, item, plan, rng, seed, out);
  }
  return out;
}

void random_offline_check(int count, std::uint64_t seed, Outcome& out) {
  Weight worst;
  int violations = 0;
  for (int i = 0; i < count; ++i) {
    Rng rng(combine_seed(seed, static_cast<std::uint64_t>(i)));
    GeneratorSpec spec;
    spec.family = Family::kRandomMultigraph;
    spec.n = 2 + static_cast<int>(rng.below(11));
    spec.m = 1 + static_cast<int>(rng.below(20));
    spec.k = 1 + static_cast<int>(rng.below(4));
    spec.seed = rng();
    const Instance g = generate_instance(spec);
    const Weight load = max_offline_bucket_load(g, Labeling::uniform(g.vertex_count(), rng));
    worst = std::max(worst, load);
    violations += load <= Weight::whole(2) ? 0 : 1;
  }
  out.check("offline-bucket-load", fmt::format("random-{}", count), violations == 0,
            fmt::format("instances={} max_offline_bucket={} bound=2 violations={}", count,
                        format_weight(worst), violations));
}

}  // namespace

bool is_verify_suite(std::string_view suite) { return suite_bits(suite).has_value(); }

SuiteResult run_verify_suite(std::string_view suite, std::span<const NamedInstance> battery,
                             std::ostream& out, const SuiteOptions& options) {
  const std::optional<unsigned> bits = suite_bits(suite);
  if (!bits) {
    throw CrsError(ErrorCode::kInvalidArgument, fmt::format("unknown verify suite '{}'", suite));
  }
  std::vector<Outcome> outcomes(battery.size() + 2);
  if (*bits & kAppendix) appendix_checks(outcomes.front());
  if ((*bits & kLoadBounds) && options.random_offline_instances > 0) {
    random_offline_check(options.random_offline_instances, combine_seed(options.seed, 0x10ad),
                         outcomes.back());
  }
  const unsigned per_instance = *bits & ~static_cast<unsigned>(kAppendix);
  if (per_instance != 0) {
    const std::size_t workers = std::clamp<std::size_t>(
        static_cast<std::size_t>(std::max(options.workers, 1)), 1,
        std::max<std::size_t>(battery.size(), 1));
    std::vector<std::exception_ptr> errors(workers);
    auto body = [&](std::size_t w) {
      try {
        for (std::size_t i = w; i < battery.size(); i += workers) {
          outcomes[i + 1] =
              instance_checks(per_instance, battery[i], combine_seed(options.seed, i));
        }
      } catch (...) {
        errors[w] = std::current_exception();
      }
    };
    if (workers == 1) {
      body(0);
    } else {
      std::vector<std::thread> threads;
      for (std::size_t w = 0; w < workers; ++w) threads.emplace_back(body, w);
      for (auto& t : threads) t.join();
    }
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }
  SuiteResult result;
  for (const Outcome& o : outcomes) {
    out << o.text;
    result.checks += o.checks;
    result.failures += o.failures;
    result.spot_checks += o.spot_checks;
  }
  out.flush();
  return result;
}

}  // namespace crs
