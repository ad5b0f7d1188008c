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

#include <vector>

#include "viaes/energy.hpp"
#include "viaes/ilqr.hpp"
#include "viaes/params.hpp"

namespace viaes {

struct FrontierSpec {
  std::vector<double> effort_weights{0.1, 0.3, 1.0, 3.0, 10.0, 30.0};
  std::vector<double> presets{0.1, 0.3, 0.5, 0.7, 0.9, 1.1, 1.3, 1.5};
  double target = 0.7;
  double duration = 1.0;
  double q0 = 0.0;
  double dt = 0.02;
  double dt_fine = 0.001;
  /// Warm-start each w_e from the next larger one (same p_s).
  bool continuation = true;
  ilqr::Options solver;
};

struct FrontierRow {
  double effort_weight = 0.0;
  double preset = 0.0;
  double j_perf = 0.0;
  double e_in = 0.0;
  double e_elec = 0.0;
  bool converged = false;
  bool failed = false;  // solver threw; numeric fields are NaN
};

/// One reach OCP per (p_s, w_e) pair starting from rest at q0 with
/// theta2(0) = p_s, each followed by a fine-grid energy report.
/// Rows come out p_s-major in grid order; p_s curves run in parallel.
std::vector<FrontierRow> frontier_sweep(const FrontierSpec& spec, const PhysicalParams& p, int jobs = 1);

}  // namespace viaes
