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

#include "viaes/types.hpp"

namespace viaes {

enum class CostVariant {
  /// l = 1000 (q - q*)^2 + w_e ((u1 - q*)^2 + u2^2 + 1e-3 (u3 - 0.5)),  H = 1000 (q - q*)^2
  kFastReach,
  /// l = 1000 (q - q*)^2 + 100 (u1 - q*)^2 + 100 u2^2 + 1e-3 u3,  H = 1000 ((q - q*)^2 + qd^2)
  /// The actuator terms act on the commanded trajectories.
  kCompositeSequence,
};

struct CostSpec {
  double target = 0.0;
  double effort_weight = 1.0;  // w_e
  double task_weight = 1000.0;
  double damping_offset = 0.5;
  double damping_weight = 1e-3;
  CostVariant variant = CostVariant::kFastReach;
  /// Use (u3 - 0.5)^2 instead of the linear damping term (sensitivity studies only).
  bool squared_damping_term = false;
};

struct CostExpansion {
  Eigen::Matrix<double, 6, 1> lx = Eigen::Matrix<double, 6, 1>::Zero();
  Eigen::Matrix<double, 3, 1> lu = Eigen::Matrix<double, 3, 1>::Zero();
  Eigen::Matrix<double, 6, 6> lxx = Eigen::Matrix<double, 6, 6>::Zero();
  Eigen::Matrix<double, 3, 3> luu = Eigen::Matrix<double, 3, 3>::Zero();
  Eigen::Matrix<double, 3, 6> lux = Eigen::Matrix<double, 3, 6>::Zero();
};

double running_cost(const State& x, const Control& u, const CostSpec& cost, double t = 0.0);
double terminal_cost(const State& x, const CostSpec& cost);

/// Exact first and second derivatives of running_cost (it is at most quadratic).
CostExpansion running_cost_expansion(const State& x, const Control& u, const CostSpec& cost);
/// Only lx and lxx are populated.
CostExpansion terminal_cost_expansion(const State& x, const CostSpec& cost);

}  // namespace viaes
