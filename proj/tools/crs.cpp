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

// crs: instance generation, selectability simulation, exact verification
// suites and MOFS runs.
//
// Exit codes: 0 all pass, 1 a bound or claim failed, 2 usage or parse
// error, 3 enumeration cap exceeded.

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "crs/errors.h"
#include "crs/harness.h"
#include "crs/instance.h"
#include "crs/oracle.h"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitCap = 3;

struct Common {
  std::uint64_t seed = 0;
  int workers = 1;
  std::string out;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--seed", c.seed, "Master seed (falls back to CRS_SEED, then 0)")
      ->envname("CRS_SEED");
  cmd->add_option("--workers", c.workers, "Worker threads; results do not depend on it")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--out", c.out, "Output path (stdout when omitted)");
}

// Writes through `fn` to --out, or stdout when it is empty.
template <typename Fn>
void emit(const std::string& path, Fn&& fn) {
  if (path.empty()) {
    fn(std::cout);
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw crs::CrsError(crs::ErrorCode::kIoError, "cannot write " + path);
  fn(file);
  if (!file) throw crs::CrsError(crs::ErrorCode::kIoError, "failed writing " + path);
}

// The summary goes to stdout when the CSV went to a file, else to stderr so
// the CSV stream stays clean. Timing always goes to stderr.
void print_summary(const crs::SelectabilityReport& report, bool to_stdout) {
  (to_stdout ? std::cout : std::cerr) << crs::report_summary(report) << "\n";
  std::cerr << fmt::format("wall={:.2f}s\n", report.wall_seconds);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Contention resolution for graphic matroids: simulation and exact checks"};
  app.require_subcommand(1);

  // gen
  Common gen_common;
  std::string family_name;
  crs::GeneratorSpec spec;
  bool explicit_x = false;
  auto* gen = app.add_subcommand("gen", "Write a generated instance");
  gen->add_option("family", family_name,
                  "path, cycle-plus-chords, forest-union, tie-flip, coupling-gap, broom, "
                  "random-multigraph")
      ->required();
  gen->add_option("--n", spec.n, "Vertices");
  gen->add_option("--k", spec.k, "Forests in the union or convex combination");
  gen->add_option("--m", spec.m, "Edges (random-multigraph)");
  gen->add_option("--chords", spec.chords, "Chords (cycle-plus-chords)");
  gen->add_option("--leaves", spec.leaves, "Leaves (broom)");
  gen->add_option("--handle", spec.handle, "Handle length (broom)");
  gen->add_option("--x", spec.x, "Marginal on every edge with --explicit");
  gen->add_option("--leaf-x", spec.leaf_x, "Broom leaf marginal");
  gen->add_option("--handle-x", spec.handle_x, "Broom handle marginal");
  gen->add_flag("--explicit", explicit_x, "Use explicit marginals instead of forest-convex");
  add_common(gen, gen_common);

  // simulate
  Common sim_common;
  std::string instance_path;
  std::string scheme = "rocrs";
  std::string adversary = "identity";
  std::uint64_t trials = 100000;
  auto* sim = app.add_subcommand("simulate", "Estimate per-edge selection frequencies");
  sim->add_option("--instance", instance_path, "Instance file")->required();
  sim->add_option("--scheme", scheme, "rocrs, prior or sample-ocrs");
  sim->add_option("--trials", trials, "Independent trials")->check(CLI::PositiveNumber);
  sim->add_option("--adversary", adversary, "Arrival strategy for sample-ocrs");
  add_common(sim, sim_common);

  // verify
  Common ver_common;
  std::string suite;
  std::string verify_instance;
  auto* ver = app.add_subcommand("verify", "Run exact verification suites");
  ver->add_option("suite", suite, "appendix, coupling, expectation, prefix, load-bounds, all")
      ->required();
  ver->add_option("--instance", verify_instance, "Check this instance instead of the battery");
  add_common(ver, ver_common);

  // mofs
  Common mofs_common;
  int mofs_k = 2;
  int mofs_n = 8;
  std::uint64_t mofs_trials = 100000;
  auto* mofs = app.add_subcommand("mofs", "Fair selection on a union of k random spanning trees");
  mofs->add_option("--k", mofs_k, "Number of forests")->check(CLI::PositiveNumber);
  mofs->add_option("--n", mofs_n, "Vertices")->check(CLI::Range(2, 1 << 20));
  mofs->add_option("--trials", mofs_trials, "Independent trials")->check(CLI::PositiveNumber);
  add_common(mofs, mofs_common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  }

  try {
    if (gen->parsed()) {
      spec.family = crs::parse_family(family_name);
      spec.seed = gen_common.seed;
      spec.mode = explicit_x ? crs::MarginalMode::kExplicit : crs::MarginalMode::kForestConvex;
      const crs::Instance instance = crs::generate_instance(spec);
      emit(gen_common.out, [&](std::ostream& os) { crs::write_instance(os, instance); });
      return kExitPass;
    }

    if (sim->parsed()) {
      const crs::Instance instance = crs::read_instance_file(instance_path);
      const crs::SchemeId id = crs::parse_scheme(scheme);
      crs::EstimateOptions options;
      options.trials = trials;
      options.seed = sim_common.seed;
      options.workers = sim_common.workers;
      if (id == crs::SchemeId::kSampleOcrs) options.adversary = crs::parse_adversary(adversary);
      const crs::SelectabilityReport report = crs::estimate_selectability(id, instance, options);
      emit(sim_common.out, [&](std::ostream& os) { crs::write_report_csv(os, report); });
      print_summary(report, !sim_common.out.empty());
      return report.all_pass() ? kExitPass : kExitFail;
    }

    if (ver->parsed()) {
      if (!crs::is_verify_suite(suite)) {
        std::cerr << "error: unknown suite '" << suite << "'\n";
        return kExitUsage;
      }
      std::vector<crs::NamedInstance> battery;
      crs::SuiteOptions options;
      options.seed = ver_common.seed;
      options.workers = ver_common.workers;
      if (verify_instance.empty()) {
        battery = crs::fixture_battery();
      } else {
        battery.push_back({verify_instance, crs::read_instance_file(verify_instance)});
        options.random_offline_instances = 0;
      }
      crs::SuiteResult result;
      emit(ver_common.out, [&](std::ostream& os) {
        result = crs::run_verify_suite(suite, battery, os, options);
      });
      std::cerr << fmt::format("{} checks, {} failed, {} spot-checked\n", result.checks,
                               result.failures, result.spot_checks);
      if (!result.ok()) return kExitFail;
      if (result.spot_checks > 0) {
        std::cerr << "enumeration cap exceeded: some checks ran as random spot checks\n";
        return kExitCap;
      }
      return kExitPass;
    }

    if (mofs->parsed()) {
      const crs::ForestUnion fu = crs::generate_forest_union(mofs_k, mofs_n, mofs_common.seed);
      crs::EstimateOptions options;
      options.trials = mofs_trials;
      options.seed = mofs_common.seed;
      options.workers = mofs_common.workers;
      const crs::SelectabilityReport report =
          crs::mofs_run(fu.instance, fu.forests, options);
      emit(mofs_common.out, [&](std::ostream& os) { crs::write_report_csv(os, report); });
      print_summary(report, !mofs_common.out.empty());
      return report.all_pass() ? kExitPass : kExitFail;
    }
  } catch (const crs::CapExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCap;
  } catch (const crs::CrsError& e) {
    std::cerr << "error: " << crs::error_code_name(e.code()) << ": " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
