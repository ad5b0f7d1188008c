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

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "viaes/config.hpp"
#include "viaes/frontier.hpp"
#include "viaes/oces.hpp"

namespace viaes::harness {

struct RunOptions {
  std::filesystem::path out;  // empty: nothing is written
  int jobs = 1;
  std::optional<std::uint64_t> seed;  // overrides the config's seed list
};

struct EpisodeMetrics {
  double e_in = 0.0;
  double e_elec = 0.0;
  double j_perf = 0.0;
  double j_energy = 0.0;  // the minimised objective (E_in or E_elec)
  std::uint64_t hash = 0;  // FNV-1a of the episode's trajectory CSV
};

struct SeedRun {
  std::uint64_t seed = 0;
  oces::LearningHistory history;
  EpisodeMetrics final;             // episode of history.best_xi
  double reduction = 0.0;           // 1 - J_e(final) / J_e(baseline)
  double reduction_vs_initial = 0.0;  // against the ES start policy
  std::vector<double> durations;    // tracking only: all segment durations of the final episode
  double seconds = 0.0;             // wall clock; never written to disk
};

struct RunReport {
  ExperimentKind kind = ExperimentKind::kValidate;
  EpisodeMetrics baseline;  // ILQR-0 or TIDC-0
  EpisodeMetrics initial;   // ES start policy (differs from baseline for PI2SEQ)
  std::vector<SeedRun> seeds;
  bool baseline_verified = false;  // stored baseline re-hashed before comparing
  double mean_reduction = 0.0;
  // Tracking only: timing audit over every evaluated rollout.
  std::size_t audited_rollouts = 0;
  double max_total_time_error = 0.0;
  std::size_t wrong_length_rollouts = 0;
};

RunReport run_task1_ilqr_es(const ExperimentSpec& spec, const RunOptions& opts);
RunReport run_task1_pi2seq(const ExperimentSpec& spec, const RunOptions& opts);
RunReport run_task2_tidc_es(const ExperimentSpec& spec, const RunOptions& opts);

struct FrontierReport {
  std::vector<FrontierRow> rows;
  double seconds = 0.0;
};

FrontierReport run_frontier(const ExperimentSpec& spec, const RunOptions& opts);

struct Check {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

struct ValidationReport {
  std::vector<Check> checks;
  bool all_passed() const;
};

/// Jacobian, Riccati, energy-grid, min-jerk, null-space and kernel checks.
ValidationReport validate(const ExperimentSpec& spec, const RunOptions& opts);

/// Dispatches on spec.kind. Returns the process exit code (0 ok, 2 failed validation).
int run(const ExperimentSpec& spec, const RunOptions& opts);

}  // namespace viaes::harness
