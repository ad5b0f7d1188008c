/*
 Copyright 2026 The viaes Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#include <utility>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <string>

#include "CLI11.hpp"

#include "viaes/config.hpp"
#include "viaes/harness.hpp"

namespace {

struct Args {
  std::string config;
  std::uint64_t seed = 0;
  bool has_seed = false;
  std::string out = "out";
  int jobs = 1;
  bool print_config = false;
};

void summarise(const viaes::harness::RunReport& rep) {
  std::printf("baseline E_in %.6g J  J_e %.6g  J_p %.6g\n", rep.baseline.e_in, rep.baseline.j_energy,
              rep.baseline.j_perf);
  for (const auto& s : rep.seeds) {
    std::printf("seed %llu: final E_in %.6g J  J_p %.6g (bound %.6g)  reduction %.1f%%  [%.1f s]\n",
                static_cast<unsigned long long>(s.seed), s.final.e_in, s.final.j_perf, s.history.j_perf_bound,
                100.0 * s.reduction, s.seconds);
  }
  std::printf("mean reduction %.1f%%\n", 100.0 * rep.mean_reduction);
}

int dispatch(viaes::ExperimentKind kind, const Args& a) {
  using namespace viaes;
  ExperimentSpec spec = a.config.empty() ? default_spec(kind) : load_spec_file(kind, a.config);
  validate(spec);
  if (a.print_config) {
    std::printf("%s\n", to_json(spec).dump(2).c_str());
    return 0;
  }
  harness::RunOptions opts;
  opts.out = a.out;
  opts.jobs = a.jobs;
  if (a.has_seed) opts.seed = a.seed;

  switch (kind) {
    case ExperimentKind::kFrontier: {
      const auto rep = harness::run_frontier(spec, opts);
      std::size_t failed = 0;
      for (const auto& r : rep.rows) failed += r.failed ? 1 : 0;
      std::printf("%zu frontier rows (%zu failed) in %.1f s -> %s/frontier.csv\n", rep.rows.size(), failed,
                  rep.seconds, a.out.c_str());
      return 0;
    }
    case ExperimentKind::kTask1IlqrEs:
      summarise(harness::run_task1_ilqr_es(spec, opts));
      return 0;
    case ExperimentKind::kTask1Pi2Seq:
      summarise(harness::run_task1_pi2seq(spec, opts));
      return 0;
    case ExperimentKind::kTask2TidcEs: {
      const auto rep = harness::run_task2_tidc_es(spec, opts);
      summarise(rep);
      for (const auto& s : rep.seeds) {
        std::printf("seed %llu durations:", static_cast<unsigned long long>(s.seed));
        for (double d : s.durations) std::printf(" %.4f", d);
        std::printf("\n");
      }
      return 0;
    }
    case ExperimentKind::kValidate: {
      const auto rep = harness::validate(spec, opts);
      for (const auto& c : rep.checks)
        std::printf("%-26s %-4s value %.3g (threshold %.3g)\n", c.name.c_str(), c.pass ? "ok" : "FAIL", c.value,
                    c.threshold);
      return rep.all_passed() ? 0 : 2;
    }
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Energy-efficient movement sequences on a variable impedance actuator"};
  app.require_subcommand(1, 1);
  Args args;
  const std::pair<const char*, const char*> commands[] = {
      {"frontier", "Sweep effort weight x stiffness preset with the OC solver"},
      {"task1-ilqr-es", "Via-point reaching: ES over iLQR effort weights and presets"},
      {"task1-pi2seq", "Via-point reaching: PI2SEQ over a DMP policy"},
      {"task2-tidc-es", "Timed tracking: ES over segment durations and nullspace gains"},
      {"validate", "Oracle, derivative, energy, min-jerk and TIDC self-checks"}};
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", args.config, "JSON config (sections physical, task, es, solver)")
        ->check(CLI::ExistingFile);
    sub->add_option_function<std::uint64_t>(
        "--seed",
        [&](const std::uint64_t& s) {
          args.seed = s;
          args.has_seed = true;
        },
        "Run a single seed instead of the configured list");
    sub->add_option("--out", args.out, "Output directory")->capture_default_str();
    sub->add_option("--jobs", args.jobs, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_flag("--print-config", args.print_config, "Print the resolved config and exit");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  try {
    const auto kind = viaes::kind_from_string(app.get_subcommands().front()->get_name());
    return dispatch(kind, args);
  } catch (const viaes::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
