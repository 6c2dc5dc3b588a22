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
#include <chrono>
#include <cmath>
#include <exception>
#include <ostream>
#include <sstream>
#include <thread>

#include "crs/errors.h"
#include "crs/harness.h"
#include "crs/rng.h"

namespace crs {
namespace {

struct Counters {
  std::vector<std::uint64_t> picks;
  InvariantCounts violations;
};

void tally(const InvariantReport& r, InvariantCounts& c) {
  c.forest += !r.forest;
  c.bucket += !r.one_pick_per_bucket;
  c.sampled += !r.sampled_never_picked;
  c.information += !r.information_model;
  c.abc += !r.abc_implies_pick;
}

void run_trials(SchemeId scheme, const Instance& instance, const EstimateOptions& opt,
                std::uint64_t begin, std::uint64_t end, Counters& counters) {
  const int m = instance.edge_count();
  const int n = instance.vertex_count();
  const AdversaryStrategy adversary = opt.adversary.value_or(AdversaryStrategy{});
  counters.picks.assign(static_cast<std::size_t>(m), 0);
  Selection sel;
  EdgeStream stream(instance, {}, EdgeFlags(static_cast<std::size_t>(m)));

  for (std::uint64_t t = begin; t < end; ++t) {
    const TrialCoins coins(trial_seed(opt.seed, t));
    Rng rng(coins.sequence_seed());
    const EdgeFlags activity = realize_activity(instance, coins);
    switch (scheme) {
      case SchemeId::kRocrs: {
        const std::vector<EdgeId> arrival = random_arrival(m, rng);
        const EdgeFlags excluded = draw_exclusions(m, coins, opt.coins.pick_probability);
        stream.reset(arrival, activity);
        run_rocrs(stream, static_cast<std::size_t>(m), excluded, rng, opt.coins, sel);
        break;
      }
      case SchemeId::kPriorKnowledge: {
        const Labeling labeling = Labeling::uniform(n, rng);
        const std::vector<EdgeId> arrival = random_arrival(m, rng);
        const EdgeFlags excluded = draw_exclusions(m, coins, opt.coins.prior_pick_probability);
        sel = run_prior_knowledge(instance, activity, arrival, excluded, labeling, false);
        break;
      }
      case SchemeId::kSampleOcrs: {
        const std::vector<EdgeId> sample = draw_sample(m, coins, opt.coins.sample_rate);
        const Labeling labeling = Labeling::uniform(n, rng);
        const std::vector<EdgeId> order = adversary_order(adversary, instance, sample, labeling);
        const EdgeFlags excluded = draw_exclusions(m, coins, opt.coins.pick_probability);
        run_sample_ocrs(instance, activity, order, sample, excluded, labeling, sel);
        break;
      }
    }
    tally(check_selection(instance, sel), counters.violations);
    for (EdgeId id : sel.picked) ++counters.picks[static_cast<std::size_t>(id)];
  }
}

}  // namespace

SchemeId parse_scheme(std::string_view name) {
  if (name == "rocrs") return SchemeId::kRocrs;
  if (name == "prior") return SchemeId::kPriorKnowledge;
  if (name == "sample-ocrs") return SchemeId::kSampleOcrs;
  throw CrsError(ErrorCode::kUnknownScheme, fmt::format("unknown scheme '{}'", name));
}

std::string scheme_name(SchemeId scheme) {
  switch (scheme) {
    case SchemeId::kRocrs: return "rocrs";
    case SchemeId::kPriorKnowledge: return "prior";
    case SchemeId::kSampleOcrs: return "sample-ocrs";
  }
  return "unknown";
}

double TargetConfig::for_scheme(SchemeId scheme) const {
  switch (scheme) {
    case SchemeId::kRocrs: return rocrs;
    case SchemeId::kPriorKnowledge: return prior;
    case SchemeId::kSampleOcrs: return sample_ocrs;
  }
  return 0.0;
}

double confidence_margin(double freq, std::uint64_t trials, double z) {
  const auto n = static_cast<double>(trials);
  return z * std::sqrt(freq * (1.0 - freq) / n + 1.0 / n);
}

bool SelectabilityReport::all_pass() const {
  return violations.total() == 0 &&
         std::all_of(edges.begin(), edges.end(), [](const EdgeEstimate& e) { return e.pass; });
}

SelectabilityReport estimate_selectability(SchemeId scheme, const Instance& instance,
                                           const EstimateOptions& options) {
  if (options.trials < 1) throw CrsError(ErrorCode::kInvalidArgument, "trials must be >= 1");
  options.coins.validate();
  if (scheme == SchemeId::kPriorKnowledge && instance.vertex_count() <= kPolytopeVertexCap &&
      !in_forest_polytope(instance)) {
    throw CrsError(ErrorCode::kPolytopeViolation, "x is not in the forest polytope");
  }
  const auto start = std::chrono::steady_clock::now();
  const auto workers = static_cast<std::uint64_t>(
      std::clamp<std::uint64_t>(static_cast<std::uint64_t>(std::max(options.workers, 1)), 1,
                                options.trials));
  std::vector<Counters> partial(workers);
  std::vector<std::exception_ptr> errors(workers);
  auto body = [&](std::uint64_t w) {
    try {
      const std::uint64_t begin = options.trials * w / workers;
      const std::uint64_t end = options.trials * (w + 1) / workers;
      run_trials(scheme, instance, options, begin, end, partial[w]);
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  if (workers == 1) {
    body(0);
  } else {
    std::vector<std::thread> threads;
    for (std::uint64_t w = 0; w < workers; ++w) threads.emplace_back(body, w);
    for (auto& t : threads) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  SelectabilityReport report;
  report.scheme = scheme_name(scheme);
  if (scheme == SchemeId::kSampleOcrs) {
    report.adversary = adversary_name(options.adversary.value_or(AdversaryStrategy{}));
  }
  report.seed = options.seed;
  report.trials = options.trials;
  report.constant = options.targets.for_scheme(scheme);
  for (const Counters& c : partial) {
    report.violations.forest += c.violations.forest;
    report.violations.bucket += c.violations.bucket;
    report.violations.sampled += c.violations.sampled;
    report.violations.information += c.violations.information;
    report.violations.abc += c.violations.abc;
  }
  for (const EdgeRecord& e : instance.edges()) {
    EdgeEstimate est;
    est.id = e.id;
    est.u = e.u;
    est.v = e.v;
    est.x = e.x;
    for (const Counters& c : partial) est.picks += c.picks[static_cast<std::size_t>(e.id)];
    est.trials = options.trials;
    est.freq = static_cast<double>(est.picks) / static_cast<double>(est.trials);
    est.margin = confidence_margin(est.freq, est.trials, options.z);
    est.lower = est.freq - est.margin;
    est.target = options.fixed_target.value_or(report.constant * e.x.value());
    est.pass = est.freq + est.margin >= est.target;
    report.edges.push_back(est);
  }
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

SelectabilityReport mofs_run(const Instance& skeleton,
                             std::span<const std::vector<EdgeId>> forests,
                             const EstimateOptions& options) {
  if (forests.empty()) throw CrsError(ErrorCode::kInvalidArgument, "MOFS needs at least one forest");
  std::vector<std::uint8_t> covered(static_cast<std::size_t>(skeleton.edge_count()), 0);
  for (std::size_t f = 0; f < forests.size(); ++f) {
    if (!is_forest(skeleton, forests[f])) {
      throw CrsError(ErrorCode::kNotAForest, fmt::format("MOFS input set {} contains a cycle", f));
    }
    for (EdgeId id : forests[f]) covered[static_cast<std::size_t>(id)] = 1;
  }
  if (std::find(covered.begin(), covered.end(), 0) != covered.end()) {
    throw CrsError(ErrorCode::kInvalidArgument, "the forests do not cover the ground set");
  }
  const auto k = static_cast<std::int64_t>(forests.size());
  const std::vector<Weight> x(static_cast<std::size_t>(skeleton.edge_count()),
                              Weight::from_units(Weight::kScale / k));
  const Instance instance = with_marginals(skeleton, x);
  EstimateOptions opt = options;
  opt.fixed_target = options.targets.rocrs / static_cast<double>(k);
  SelectabilityReport report = estimate_selectability(SchemeId::kRocrs, instance, opt);
  report.scheme = "mofs";
  report.constant = *opt.fixed_target;
  return report;
}

void write_report_csv(std::ostream& out, const SelectabilityReport& report) {
  out << fmt::format("# scheme={} adversary={} seed={} trials={} constant={:.12g}\n",
                     report.scheme, report.adversary.empty() ? "-" : report.adversary,
                     report.seed, report.trials, report.constant);
  out << "edge_id,u,v,x,picks,trials,freq,lower,target,pass\n";
  for (const EdgeEstimate& e : report.edges) {
    out << fmt::format("{},{},{},{},{},{},{:.9g},{:.9g},{:.9g},{}\n", e.id, e.u, e.v,
                       format_weight(e.x), e.picks, e.trials, e.freq, e.lower, e.target,
                       e.pass ? "true" : "false");
  }
}

std::string report_to_csv(const SelectabilityReport& report) {
  std::ostringstream out;
  write_report_csv(out, report);
  return out.str();
}

std::string report_summary(const SelectabilityReport& report) {
  std::size_t passed = 0;
  double worst = std::numeric_limits<double>::infinity();
  for (const EdgeEstimate& e : report.edges) {
    passed += e.pass ? 1 : 0;
    if (e.target > 0.0) worst = std::min(worst, e.freq / e.target);
  }
  return fmt::format(
      "{} scheme={} adversary={} trials={} edges_pass={}/{} min_freq_over_target={:.4g} "
      "invariant_violations={}",
      report.all_pass() ? "PASS" : "FAIL", report.scheme,
      report.adversary.empty() ? "-" : report.adversary, report.trials, passed,
      report.edges.size(), worst, report.violations.total());
}

LoadEstimate estimate_offsample_load(const Instance& instance, const Labeling& labeling,
                                     VertexId v, std::uint64_t trials, std::uint64_t seed,
                                     double rate) {
  if (trials < 2) throw CrsError(ErrorCode::kInvalidArgument, "need at least 2 trials");
  double sum = 0.0;
  double sum_sq = 0.0;
  std::vector<std::uint8_t> in_sample(static_cast<std::size_t>(instance.edge_count()));
  for (std::uint64_t t = 0; t < trials; ++t) {
    const TrialCoins coins(trial_seed(seed, t));
    const std::vector<EdgeId> sample = draw_sample(instance.edge_count(), coins, rate);
    std::fill(in_sample.begin(), in_sample.end(), 0);
    for (EdgeId id : sample) in_sample[static_cast<std::size_t>(id)] = 1;
    const Ordering order = sample_order(instance, sample, labeling);
    Weight load;
    for (EdgeId id : bucket(order, instance, v)) {
      if (!in_sample[static_cast<std::size_t>(id)]) load += instance.x(id);
    }
    sum += load.value();
    sum_sq += load.value() * load.value();
  }
  const auto n = static_cast<double>(trials);
  const double mean = sum / n;
  const double var = std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0));
  return {mean, std::sqrt(var / n), trials};
}

}  // namespace crs
