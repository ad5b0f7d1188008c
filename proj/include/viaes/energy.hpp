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

#include <span>
#include <vector>

#include "viaes/params.hpp"
#include "viaes/types.hpp"

namespace viaes {

/// Which energy measure the outer loop minimises.
enum class EnergyObjective { kInputWork, kElectricalWork };

/// Task-performance reference on a fine trajectory.
///
/// The running part is integrated per interval with the trapezoid rule,
/// using `left[k]` / `right[k]` as the reference at the two ends of
/// interval k (this lets the target jump exactly at segment boundaries).
struct PerformanceReference {
  struct Terminal {
    std::size_t index = 0;  // state index
    double target = 0.0;
  };
  std::vector<double> left;
  std::vector<double> right;
  std::vector<Terminal> terminals;
  bool terminal_velocity = false;  // add weight * qd^2 at each terminal
  double weight = 1000.0;
};

/// Piecewise-constant targets: segment i spans `segment_steps[i]` fine intervals.
PerformanceReference reach_reference(std::span<const std::size_t> segment_steps, std::span<const double> targets,
                                     bool terminal_velocity = false);

struct EnergyReport {
  double e_in = 0.0;
  double e_elec = 0.0;
  double e_in1 = 0.0;
  double e_in2 = 0.0;
  double e_elec1 = 0.0;
  double e_elec2 = 0.0;
  double j_perf = 0.0;
  double j_energy = 0.0;  // e_in or e_elec, per objective
};

/// Integrates [P]^+ for both motors over a fine trajectory.
EnergyReport energy_report(const Trajectory& fine, const PhysicalParams& p, const PerformanceReference& ref,
                           EnergyObjective objective = EnergyObjective::kInputWork);

/// J_p = w sum_terminal (q - q*)^2 + w int (q - q_ref)^2 dt.
double performance_cost(const Trajectory& traj, const PerformanceReference& ref);

/// Zero-order-hold resampling of a coarse control signal onto a fine grid
/// followed by an RK4 resimulation from x0. Throws InvalidInput if dt_fine <= 0.
Trajectory resimulate(const State& x0, std::span<const Control> coarse, double dt_coarse, double dt_fine,
                      const PhysicalParams& p);

}  // namespace viaes
