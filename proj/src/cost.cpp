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

#include "viaes/cost.hpp"

namespace viaes {

namespace {

constexpr double kCompositeActuatorWeight = 100.0;

}  // namespace

double running_cost(const State& x, const Control& u, const CostSpec& c, double /*t*/) {
  const double eq = x[ix::q] - c.target;
  const double task = c.task_weight * eq * eq;
  if (c.variant == CostVariant::kCompositeSequence) {
    const double e1 = u[0] - c.target;
    return task + kCompositeActuatorWeight * (e1 * e1 + u[1] * u[1]) + c.damping_weight * u[2];
  }
  const double e1 = u[0] - c.target;
  const double d = u[2] - c.damping_offset;
  const double damping = c.squared_damping_term ? d * d : d;
  return task + c.effort_weight * (e1 * e1 + u[1] * u[1] + c.damping_weight * damping);
}

double terminal_cost(const State& x, const CostSpec& c) {
  const double eq = x[ix::q] - c.target;
  double h = eq * eq;
  if (c.variant == CostVariant::kCompositeSequence) h += x[ix::qd] * x[ix::qd];
  return c.task_weight * h;
}

CostExpansion running_cost_expansion(const State& x, const Control& u, const CostSpec& c) {
  CostExpansion e;
  e.lx[ix::q] = 2.0 * c.task_weight * (x[ix::q] - c.target);
  e.lxx(ix::q, ix::q) = 2.0 * c.task_weight;
  if (c.variant == CostVariant::kCompositeSequence) {
    e.lu[0] = 2.0 * kCompositeActuatorWeight * (u[0] - c.target);
    e.lu[1] = 2.0 * kCompositeActuatorWeight * u[1];
    e.lu[2] = c.damping_weight;
    e.luu(0, 0) = 2.0 * kCompositeActuatorWeight;
    e.luu(1, 1) = 2.0 * kCompositeActuatorWeight;
    return e;
  }
  const double w = c.effort_weight;
  e.lu[0] = 2.0 * w * (u[0] - c.target);
  e.lu[1] = 2.0 * w * u[1];
  e.luu(0, 0) = 2.0 * w;
  e.luu(1, 1) = 2.0 * w;
  if (c.squared_damping_term) {
    e.lu[2] = 2.0 * w * c.damping_weight * (u[2] - c.damping_offset);
    e.luu(2, 2) = 2.0 * w * c.damping_weight;
  } else {
    e.lu[2] = w * c.damping_weight;
  }
  return e;
}

CostExpansion terminal_cost_expansion(const State& x, const CostSpec& c) {
  CostExpansion e;
  e.lx[ix::q] = 2.0 * c.task_weight * (x[ix::q] - c.target);
  e.lxx(ix::q, ix::q) = 2.0 * c.task_weight;
  if (c.variant == CostVariant::kCompositeSequence) {
    e.lx[ix::qd] = 2.0 * c.task_weight * x[ix::qd];
    e.lxx(ix::qd, ix::qd) = 2.0 * c.task_weight;
  }
  return e;
}

}  // namespace viaes
