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


// End-to-end acceptance run. Prints one "ACCEPT <n> <name> PASS|FAIL ..."
// line per criterion and exits nonzero if any criterion fails.
//
// CRS_ACCEPTANCE_TRIALS overrides the large trial count (default 10^7) for
// quick local runs; the count actually used is printed on each line.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <fmt/core.h>

#include "crs/harness.h"
#include "crs/instance.h"
#include "crs/oracle.h"
#include "crs/ordering.h"
#include "crs/rng.h"

namespace {

using crs::EstimateOptions;
using crs::Instance;
using crs::SelectabilityReport;

constexpr std::uint64_t kSeed = 20260101;
constexpr double kZ = 4.0;
constexpr int kForestUnionN = 10;

struct Tally {
  int failed = 0;
  std::uint64_t invariant_violations = 0;  // summed over every Monte Carlo run

  void line(int id, const std::string& name, bool pass, const std::string& details) {
    if (!pass) ++failed;
    std::cout << fmt::format("ACCEPT {:>2} {} {} {}\n", id, name, pass ? "PASS" : "FAIL", details)
              << std::flush;
  }
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::uint64_t large_trials() {
  if (const char* env = std::getenv("CRS_ACCEPTANCE_TRIALS")) {
    const std::uint64_t n = std::strtoull(env, nullptr, 10);
    if (n > 0) return n;
  }
  return 10'000'000;
}

int default_workers() {
  return static_cast<int>(std::max(1U, std::thread::hardware_concurrency()));
}

struct Target {
  std::string name;
  Instance instance;
};

std::vector<Target> selectability_targets() {
  return {{"tie-flip", crs::tie_flip_instance()},
          {"coupling-gap", crs::coupling_gap_instance()},
          {fmt::format("forest-union-k2-n{}", kForestUnionN),
           crs::generate_forest_union(2, kForestUnionN, kSeed).instance}};
}

// Smallest freq / target over all edges; the per-edge pass flag already
// folds in the one-sided margin.
double min_ratio(const SelectabilityReport& r) {
  double best = INFINITY;
  for (const crs::EdgeEstimate& e : r.edges) best = std::min(best, e.freq / e.target);
  return best;
}

int failing_edges(const SelectabilityReport& r) {
  return static_cast<int>(
      std::count_if(r.edges.begin(), r.edges.end(), [](const auto& e) { return !e.pass; }));
}

std::string suite_details(const crs::SuiteResult& r) {
  return fmt::format("checks={} failed={} spot={}", r.checks, r.failures, r.spot_checks);
}

// Criteria 3-6 share one shape: a verify suite over the battery that must run
// fully enumerated with zero failures.
void suite_criterion(Tally& t, int id, const std::string& name, const std::string& suite,
                     const std::vector<crs::NamedInstance>& battery, int random_offline) {
  const auto start = std::chrono::steady_clock::now();
  std::ostringstream sink;
  crs::SuiteOptions options;
  options.seed = kSeed;
  options.workers = default_workers();
  options.random_offline_instances = random_offline;
  const crs::SuiteResult r = crs::run_verify_suite(suite, battery, sink, options);
  t.line(id, name, r.ok() && r.spot_checks == 0,
         fmt::format("{} instances={} time={:.2f}s", suite_details(r), battery.size(),
                     seconds_since(start)));
}

void selectability_criterion(Tally& t, int id, const std::string& name, crs::SchemeId scheme,
                             const std::vector<crs::AdversaryStrategy>& adversaries) {
  const std::uint64_t trials = large_trials();
  const auto start = std::chrono::steady_clock::now();
  bool pass = true;
  std::string worst;
  double worst_ratio = INFINITY;
  int runs = 0;
  int bad_edges = 0;
  for (const Target& target : selectability_targets()) {
    std::vector<std::optional<crs::AdversaryStrategy>> variants;
    if (adversaries.empty()) variants.emplace_back();
    for (const auto& a : adversaries) variants.emplace_back(a);
    for (const auto& adversary : variants) {
      EstimateOptions options;
      options.trials = trials;
      options.seed = kSeed;
      options.workers = default_workers();
      options.adversary = adversary;
      options.z = kZ;
      const SelectabilityReport r = crs::estimate_selectability(scheme, target.instance, options);
      t.invariant_violations += r.violations.total();
      ++runs;
      bad_edges += failing_edges(r);
      pass = pass && r.all_pass() && r.violations.total() == 0;
      const double ratio = min_ratio(r);
      if (ratio < worst_ratio) {
        worst_ratio = ratio;
        worst = adversary ? fmt::format("{}/{}", target.name, crs::adversary_name(*adversary))
                          : target.name;
      }
    }
  }
  t.line(id, name, pass,
         fmt::format("N={} runs={} failing_edges={} min_freq_over_target={:.3f} at {} "
                     "time={:.0f}s",
                     trials, runs, bad_edges, worst_ratio, worst, seconds_since(start)));
}

void appendix_counts(Tally& t) {
  const auto start = std::chrono::steady_clock::now();
  const crs::CouplingGapReport r = crs::verify_coupling_gap();
  const auto fmt_counts = [](const crs::ClassCounts& c) {
    return fmt::format("({},{},{})", c.fixed_v_first, c.dependent, c.fixed_u_first);
  };
  const double time = seconds_since(start);
  t.line(1, "coupling-gap-exact-counts",
         r.counts_match_published() && r.strict_for_every_labeling() && time < 1.0,
         fmt::format("off_sample={} expected={} in_sample={} expected={} strict={}/{} "
                     "time={:.3f}s",
                     fmt_counts(r.off_sample), fmt_counts(crs::CouplingGapReport::kPublishedOffSample),
                     fmt_counts(r.in_sample), fmt_counts(crs::CouplingGapReport::kPublishedInSample),
                     r.strict_labelings, r.labelings, time));
}

void ordering_flip(Tally& t) {
  const auto start = std::chrono::steady_clock::now();
  const crs::FlipReport r = crs::verify_ordering_flip();
  const double time = seconds_since(start);
  t.line(2, "tie-flip-ordering-flip", r.holds() && r.labelings == 120 && time < 1.0,
         fmt::format("without_e_v_first={}/{} full_u_first={}/{} time={:.3f}s",
                     r.without_e_v_first, r.labelings, r.full_u_first, r.labelings, time));
}

// Single edge with x = 1: the prior scheme picks with probability 1/8 and the
// random-order scheme with 1/2 * 1/24 (the edge must land off-sample).
void single_edge_laws(Tally& t) {
  const auto start = std::chrono::steady_clock::now();
  const Instance edge = crs::build_instance(2, {{0, 1, 1.0}});
  constexpr std::uint64_t kTrials = 2'000'000;
  bool pass = true;
  std::string details;
  for (const auto& [scheme, exact] :
       {std::pair{crs::SchemeId::kPriorKnowledge, 1.0 / 8.0},
        std::pair{crs::SchemeId::kRocrs, 1.0 / 48.0}}) {
    EstimateOptions options;
    options.trials = kTrials;
    options.seed = kSeed;
    options.workers = default_workers();
    const SelectabilityReport r = crs::estimate_selectability(scheme, edge, options);
    t.invariant_violations += r.violations.total();
    const double f = r.edges.at(0).freq;
    const double sigma = std::sqrt(exact * (1 - exact) / static_cast<double>(kTrials));
    const double dev = std::abs(f - exact) / sigma;
    pass = pass && dev <= kZ && r.violations.total() == 0;
    details += fmt::format("{}: freq={:.6f} exact={:.6f} dev={:.2f}sigma ",
                           crs::scheme_name(scheme), f, exact, dev);
  }
  t.line(9, "single-edge-exact-laws", pass,
         fmt::format("{}N={} time={:.1f}s", details, kTrials, seconds_since(start)));
}

void mofs(Tally& t) {
  const std::uint64_t trials = large_trials();
  const auto start = std::chrono::steady_clock::now();
  bool pass = true;
  std::string details;
  for (int k : {2, 3}) {
    const crs::ForestUnion fu = crs::generate_forest_union(k, kForestUnionN, kSeed + k);
    EstimateOptions options;
    options.trials = trials;
    options.seed = kSeed;
    options.workers = default_workers();
    options.z = kZ;
    const SelectabilityReport r = crs::mofs_run(fu.instance, fu.forests, options);
    t.invariant_violations += r.violations.total();
    pass = pass && r.all_pass() && r.violations.total() == 0;
    details += fmt::format("k={}: edges={} failing={} min_freq_over_target={:.3f} ", k,
                           r.edges.size(), failing_edges(r), min_ratio(r));
  }
  t.line(10, "mofs-forest-unions", pass,
         fmt::format("{}N={} time={:.0f}s", details, trials, seconds_since(start)));
}

// Monte Carlo E[x(E_v^S \ S)] against the exact enumeration, every vertex,
// a handful of seeded labelings.
void cross_validation(Tally& t) {
  const auto start = std::chrono::steady_clock::now();
  constexpr std::uint64_t kTrials = 200'000;
  constexpr int kLabelings = 4;
  int comparisons = 0;
  int outside = 0;
  double worst = 0.0;
  crs::Rng rng(kSeed);
  for (const Instance& g : {crs::tie_flip_instance(), crs::coupling_gap_instance()}) {
    for (int l = 0; l < kLabelings; ++l) {
      const crs::Labeling labeling = l == 0 ? crs::Labeling::identity(g.vertex_count())
                                            : crs::Labeling::uniform(g.vertex_count(), rng);
      for (crs::VertexId v = 0; v < g.vertex_count(); ++v) {
        const double exact = crs::exact_offsample_expectation(g, labeling, v).value();
        const crs::LoadEstimate est = crs::estimate_offsample_load(
            g, labeling, v, kTrials, crs::combine_seed(kSeed, static_cast<std::uint64_t>(comparisons)));
        const double dev = est.std_error > 0 ? std::abs(est.mean - exact) / est.std_error
                                             : (est.mean == exact ? 0.0 : INFINITY);
        worst = std::max(worst, dev);
        if (dev > kZ) ++outside;
        ++comparisons;
      }
    }
  }
  t.line(12, "monte-carlo-vs-exact-offsample-load", outside == 0,
         fmt::format("comparisons={} outside_4sigma={} max_dev={:.2f}sigma N={} time={:.1f}s",
                     comparisons, outside, worst, kTrials, seconds_since(start)));
}

// Reruns with the same seed under 1, 2 and 5 workers must print the same bytes.
void determinism(Tally& t, const std::vector<crs::NamedInstance>& battery) {
  const auto start = std::chrono::steady_clock::now();
  int compared = 0;
  int mismatched = 0;
  const auto compare = [&](const std::vector<std::string>& outputs) {
    ++compared;
    for (const std::string& o : outputs) {
      if (o != outputs.front()) {
        ++mismatched;
        return;
      }
    }
  };
  const std::vector<int> worker_counts{1, 2, 5, 1};

  const Instance gap = crs::coupling_gap_instance();
  std::vector<std::optional<crs::AdversaryStrategy>> variants{std::nullopt};
  for (const auto& a : crs::standard_adversaries()) variants.emplace_back(a);
  for (const auto& scheme :
       {crs::SchemeId::kRocrs, crs::SchemeId::kPriorKnowledge, crs::SchemeId::kSampleOcrs}) {
    for (const auto& adversary : variants) {
      if ((scheme == crs::SchemeId::kSampleOcrs) != adversary.has_value()) continue;
      std::vector<std::string> outputs;
      for (int w : worker_counts) {
        EstimateOptions options;
        options.trials = 50'000;
        options.seed = kSeed;
        options.workers = w;
        options.adversary = adversary;
        const SelectabilityReport r = crs::estimate_selectability(scheme, gap, options);
        outputs.push_back(crs::report_to_csv(r) + crs::report_summary(r));
      }
      compare(outputs);
    }
  }
  {
    const crs::ForestUnion fu = crs::generate_forest_union(2, 8, kSeed);
    std::vector<std::string> outputs;
    for (int w : worker_counts) {
      EstimateOptions options;
      options.trials = 50'000;
      options.seed = kSeed;
      options.workers = w;
      const SelectabilityReport r = crs::mofs_run(fu.instance, fu.forests, options);
      outputs.push_back(crs::report_to_csv(r) + crs::report_summary(r));
    }
    compare(outputs);
  }
  {
    std::vector<std::string> outputs;
    for (int w : worker_counts) {
      std::ostringstream out;
      crs::SuiteOptions options;
      options.seed = kSeed;
      options.workers = w;
      options.random_offline_instances = 200;
      crs::run_verify_suite("all", battery, out, options);
      outputs.push_back(out.str());
    }
    compare(outputs);
  }
  t.line(13, "byte-identical-reruns", mismatched == 0,
         fmt::format("compared={} mismatched={} workers=1,2,5,1 time={:.1f}s", compared,
                     mismatched, seconds_since(start)));
}

}  // namespace

int main() {
  Tally t;
  const auto start = std::chrono::steady_clock::now();
  const std::vector<crs::NamedInstance> battery = crs::fixture_battery();

  appendix_counts(t);
  ordering_flip(t);
  suite_criterion(t, 3, "offsample-expectation-at-most-3", "expectation", battery, 0);
  suite_criterion(t, 4, "witness-coupling", "coupling", battery, 0);
  suite_criterion(t, 5, "prefix-stability", "prefix", battery, 0);
  suite_criterion(t, 6, "bucket-load-bounds", "load-bounds", battery, 1000);
  selectability_criterion(t, 7, "rocrs-selectability", crs::SchemeId::kRocrs, {});
  selectability_criterion(t, 8, "sample-ocrs-selectability", crs::SchemeId::kSampleOcrs,
                          crs::standard_adversaries());
  single_edge_laws(t);
  mofs(t);
  t.line(11, "structural-invariants", t.invariant_violations == 0,
         fmt::format("violations={} over every Monte Carlo trial above",
                     t.invariant_violations));
  cross_validation(t);
  determinism(t, battery);

  std::cout << fmt::format("ACCEPT summary {} of 13 failed, total time {:.0f}s\n", t.failed,
                           seconds_since(start));
  return t.failed == 0 ? 0 : 1;
}
