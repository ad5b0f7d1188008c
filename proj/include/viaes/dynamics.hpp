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

#include "viaes/params.hpp"
#include "viaes/types.hpp"

namespace viaes {

struct SpringTorques {
  double joint = 0.0;  // tau_s
  double load1 = 0.0;  // tau_l1 on the EP servo
  double load2 = 0.0;  // tau_l2 on the stiffness servo
};

/// Partial derivatives of the spring torques w.r.t. q, theta1 and theta2.
struct SpringTorqueJacobian {
  double joint_dq = 0.0;
  double joint_dth1 = 0.0;
  double joint_dth2 = 0.0;
  double load2_dq = 0.0;
  double load2_dth1 = 0.0;
  double load2_dth2 = 0.0;
};

/// Lever extension A(q, theta1) = sqrt(B^2 + C^2 - 2BC cos(theta1 - q)).
double lever_extension(double q, double theta1, const PhysicalParams& p);

/// Throws SingularGeometry when A(q, theta1) vanishes.
SpringTorques spring_torques(const State& x, const PhysicalParams& p);
SpringTorqueJacobian spring_torque_jacobian(const State& x, const PhysicalParams& p);

/// Servo acceleration of the critically damped position servo.
inline double servo_acceleration(double command, double angle, double velocity, double beta) {
  return beta * beta * (command - angle) - 2.0 * beta * velocity;
}

/// Continuous-time state derivative. Throws InvalidInput on non-finite input.
State dynamics(const State& x, const Control& u, const PhysicalParams& p);

/// Analytic Jacobians of dynamics() w.r.t. state and control.
void dynamics_jacobians(const State& x, const Control& u, const PhysicalParams& p, StateMatrix& fx,
                        InputMatrix& fu);

/// One explicit RK4 step with the control held constant.
State step(const State& x, const Control& u, double dt, const PhysicalParams& p);

/// RK4 step together with its exact derivatives w.r.t. x and u.
State step_with_jacobians(const State& x, const Control& u, double dt, const PhysicalParams& p, StateMatrix& ax,
                          InputMatrix& bu);

/// Zero-order-hold rollout. Requires dt > 0.
Trajectory rollout(const State& x0, std::span<const Control> controls, double dt, const PhysicalParams& p,
                   double t0 = 0.0);

Control clamp_control(const Control& u, const Control& lo, const Control& hi);

struct MotorPowers {
  double in1 = 0.0;
  double in2 = 0.0;
  double elec1 = 0.0;
  double elec2 = 0.0;
};

/// Mechanical and electrical power of both servo motors at (x, u).
MotorPowers motor_powers(const State& x, const Control& u, const PhysicalParams& p);

}  // namespace viaes
