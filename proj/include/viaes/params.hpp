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

#include "json.hpp"

#include "viaes/types.hpp"

namespace viaes {

/// Physical constants of the single-joint MACCEPA-VD actuator.
///
/// The defaults describe a desk-scale prototype (centimetre levers, small
/// hobby servos). They are the reference point for every threshold in the
/// test suite; experiments read them from the `physical` config section.
struct PhysicalParams {
  // link
  double inertia = 3.0e-5;         // [kg m^2]
  double joint_friction = 2.0e-4;  // b [N m s/rad]
  double external_torque = 0.0;    // [N m], kept at zero
  // spring / lever geometry
  double spring_const = 3.0;       // kappa [N/m]
  double lever_b = 0.04;           // B [m]
  double lever_c = 0.08;           // C [m]
  double drum_radius = 0.04;       // r [m]
  // servos
  double servo_bandwidth = 40.0;   // beta [1/s]
  // variable damping
  double max_damping = 1.5e-3;     // d_bar [N m s/rad]
  double damping_power = 0.0;      // [W] drawn by the damping circuit at u3 = 1
  // servo motor electrical model
  double motor_resistance = 8.4;   // R_m [ohm]
  double torque_const = 0.0107;    // k [N m/A]
  double gear_ratio = 193.0;       // n_g
  double rotor_inertia = 0.0012;   // J_m, reflected to the output [kg m^2]
  double motor_friction = 0.0007;  // b_f [N m s/rad]
  // limits
  Control u_min{-1.5707963267948966, 0.0, 0.0};
  Control u_max{1.5707963267948966, 1.5707963267948966, 1.0};
  double theta2_min = 0.0;
  double theta2_max = 1.5707963267948966;

  /// |C - B|, the spring pretension offset at zero deflection.
  double pretension_offset() const;

  /// Throws InvalidInput when an invariant is violated.
  void validate() const;
};

void to_json(nlohmann::json& j, const PhysicalParams& p);
void from_json(const nlohmann::json& j, PhysicalParams& p);

}  // namespace viaes
