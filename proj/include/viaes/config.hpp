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
#include <string>
#include <vector>

#include "json.hpp"

#include "viaes/frontier.hpp"
#include "viaes/oces.hpp"
#include "viaes/params.hpp"
#include "viaes/tasks.hpp"
#include "viaes/tidc.hpp"

namespace viaes {

enum class ExperimentKind { kFrontier, kTask1IlqrEs, kTask1Pi2Seq, kTask2TidcEs, kValidate };

std::string to_string(ExperimentKind kind);
/// Throws ConfigError on an unknown name.
ExperimentKind kind_from_string(const std::string& name);

/// Everything one experiment needs. Sections mirror the config file:
/// `physical`, `task`, `es`, `solver`.
struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::kValidate;
  PhysicalParams physical;

  // task
  ReachSequence reach;         // both Task 1 variants; solver options live here
  FrontierSpec frontier;
  TrackingTask tracking;
  DmpSequenceEncoding dmp;
  double dmp_start_duty = 0.5;
  Eigen::VectorXd xi0, xi_min, xi_max;

  // es
  oces::EsConfig es;
  std::vector<std::uint64_t> seeds{1};
};

/// Reference settings for each experiment on the default physical parameters.
ExperimentSpec default_spec(ExperimentKind kind);

/// Applies a config document on top of default_spec(kind). Unknown keys,
/// wrong types and inconsistent values raise ConfigError.
ExperimentSpec load_spec(ExperimentKind kind, const nlohmann::json& doc);
ExperimentSpec load_spec_file(ExperimentKind kind, const std::filesystem::path& path);

/// Resolved spec as a config document (round-trips through load_spec).
nlohmann::json to_json(const ExperimentSpec& spec);

/// Throws ConfigError describing the first problem found.
void validate(const ExperimentSpec& spec);

}  // namespace viaes
