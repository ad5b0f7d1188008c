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

#include "viaes/dynamics.hpp"

#include <algorithm>
#include <cmath>

namespace viaes {

namespace {

constexpr double kMinExtension = 1e-12;

void require_finite(const State& x, const Control& u) {
  if (!x.allFinite() || !u.allFinite()) throw InvalidInput("non-finite state or control");
}

}  // namespace

double lever_extension(double q, double theta1, const PhysicalParams& p) {
  const double b = p.lever_b;
  const double c = p.lever_c;
  const double a2 = b * b + c * c - 2.0 * b * c * std::cos(theta1 - q);
  return std::sqrt(std::max(a2, 0.0));
}

SpringTorques spring_torques(const State& x, const PhysicalParams& p) {
  const double delta = x[ix::th1] - x[ix::q];
  const double a = lever_extension(x[ix::q], x[ix::th1], p);
  if (a < kMinExtension) throw SingularGeometry("lever extension A(q, theta1) is zero");
  const double stretch = p.drum_radius * x[ix::th2] - p.pretension_offset();
  SpringTorques t;
  t.joint = p.spring_const * p.lever_b * p.lever_c * std::sin(delta) * (1.0 + stretch / a);
  t.load1 = t.joint;
  t.load2 = p.spring_const * (stretch + a);
  return t;
}

SpringTorqueJacobian spring_torque_jacobian(const State& x, const PhysicalParams& p) {
  const double delta = x[ix::th1] - x[ix::q];
  const double a = lever_extension(x[ix::q], x[ix::th1], p);
  if (a < kMinExtension) throw SingularGeometry("lever extension A(q, theta1) is zero");
  const double bc = p.lever_b * p.lever_c;
  const double kbc = p.spring_const * bc;
  const double s = std::sin(delta);
  const double c = std::cos(delta);
  const double stretch = p.drum_radius * x[ix::th2] - p.pretension_offset();
  const double da = bc * s / a;  // dA/d(delta)
  const double factor = 1.0 + stretch / a;
  const double dfactor = -stretch / (a * a) * da;
  const double djoint = kbc * (c * factor + s * dfactor);

  SpringTorqueJacobian j;
  j.joint_dth1 = djoint;
  j.joint_dq = -djoint;
  j.joint_dth2 = kbc * s * p.drum_radius / a;
  j.load2_dth1 = p.spring_const * da;
  j.load2_dq = -p.spring_const * da;
  j.load2_dth2 = p.spring_const * p.drum_radius;
  return j;
}

State dynamics(const State& x, const Control& u, const PhysicalParams& p) {
  require_finite(x, u);
  const double tau = spring_torques(x, p).joint;
  const double damping = p.max_damping * u[2] + p.joint_friction;
  State dx;
  dx[ix::q] = x[ix::qd];
  dx[ix::qd] = (tau - damping * x[ix::qd] - p.external_torque) / p.inertia;
  dx[ix::th1] = x[ix::th1d];
  dx[ix::th2] = x[ix::th2d];
  dx[ix::th1d] = servo_acceleration(u[0], x[ix::th1], x[ix::th1d], p.servo_bandwidth);
  dx[ix::th2d] = servo_acceleration(u[1], x[ix::th2], x[ix::th2d], p.servo_bandwidth);
  return dx;
}

void dynamics_jacobians(const State& x, const Control& u, const PhysicalParams& p, StateMatrix& fx,
                        InputMatrix& fu) {
  require_finite(x, u);
  const auto jac = spring_torque_jacobian(x, p);
  const double beta = p.servo_bandwidth;
  const double inv_i = 1.0 / p.inertia;
  fx.setZero();
  fu.setZero();
  fx(ix::q, ix::qd) = 1.0;
  fx(ix::qd, ix::q) = jac.joint_dq * inv_i;
  fx(ix::qd, ix::qd) = -(p.max_damping * u[2] + p.joint_friction) * inv_i;
  fx(ix::qd, ix::th1) = jac.joint_dth1 * inv_i;
  fx(ix::qd, ix::th2) = jac.joint_dth2 * inv_i;
  fx(ix::th1, ix::th1d) = 1.0;
  fx(ix::th2, ix::th2d) = 1.0;
  fx(ix::th1d, ix::th1) = -beta * beta;
  fx(ix::th1d, ix::th1d) = -2.0 * beta;
  fx(ix::th2d, ix::th2) = -beta * beta;
  fx(ix::th2d, ix::th2d) = -2.0 * beta;
  fu(ix::qd, 2) = -p.max_damping * x[ix::qd] * inv_i;
  fu(ix::th1d, 0) = beta * beta;
  fu(ix::th2d, 1) = beta * beta;
}

State step(const State& x, const Control& u, double dt, const PhysicalParams& p) {
  const State k1 = dynamics(x, u, p);
  const State k2 = dynamics(x + 0.5 * dt * k1, u, p);
  const State k3 = dynamics(x + 0.5 * dt * k2, u, p);
  const State k4 = dynamics(x + dt * k3, u, p);
  return x + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

State step_with_jacobians(const State& x, const Control& u, double dt, const PhysicalParams& p, StateMatrix& ax,
                          InputMatrix& bu) {
  StateMatrix fx;
  InputMatrix fu;
  const StateMatrix eye = StateMatrix::Identity();

  // Chain rule through the four RK4 stages.
  const State k1 = dynamics(x, u, p);
  dynamics_jacobians(x, u, p, fx, fu);
  const StateMatrix k1x = fx;
  const InputMatrix k1u = fu;

  const State x2 = x + 0.5 * dt * k1;
  const State k2 = dynamics(x2, u, p);
  dynamics_jacobians(x2, u, p, fx, fu);
  const StateMatrix k2x = fx * (eye + 0.5 * dt * k1x);
  const InputMatrix k2u = fx * (0.5 * dt * k1u) + fu;

  const State x3 = x + 0.5 * dt * k2;
  const State k3 = dynamics(x3, u, p);
  dynamics_jacobians(x3, u, p, fx, fu);
  const StateMatrix k3x = fx * (eye + 0.5 * dt * k2x);
  const InputMatrix k3u = fx * (0.5 * dt * k2u) + fu;

  const State x4 = x + dt * k3;
  const State k4 = dynamics(x4, u, p);
  dynamics_jacobians(x4, u, p, fx, fu);
  const StateMatrix k4x = fx * (eye + dt * k3x);
  const InputMatrix k4u = fx * (dt * k3u) + fu;

  ax = eye + dt / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
  bu = dt / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
  return x + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

Trajectory rollout(const State& x0, std::span<const Control> controls, double dt, const PhysicalParams& p,
                   double t0) {
  if (!(dt > 0.0)) throw InvalidInput("rollout requires dt > 0");
  Trajectory traj;
  traj.dt = dt;
  traj.t0 = t0;
  traj.states.reserve(controls.size() + 1);
  traj.controls.assign(controls.begin(), controls.end());
  traj.states.push_back(x0);
  for (const auto& u : controls) traj.states.push_back(step(traj.states.back(), u, dt, p));
  return traj;
}

Control clamp_control(const Control& u, const Control& lo, const Control& hi) {
  return u.cwiseMax(lo).cwiseMin(hi);
}

MotorPowers motor_powers(const State& x, const Control& u, const PhysicalParams& p) {
  const auto t = spring_torques(x, p);
  const double beta = p.servo_bandwidth;
  const double acc1 = servo_acceleration(u[0], x[ix::th1], x[ix::th1d], beta);
  const double acc2 = servo_acceleration(u[1], x[ix::th2], x[ix::th2d], beta);
  const double kt = p.gear_ratio * p.torque_const;

  auto electrical = [&](double load, double vel, double acc) {
    const double motor_torque = load + p.rotor_inertia * acc + p.motor_friction * vel;
    const double current = motor_torque / kt;
    return current * current * p.motor_resistance + std::max(0.0, p.rotor_inertia * acc * vel) +
           p.motor_friction * vel * vel + std::max(0.0, load * vel);
  };

  MotorPowers out;
  out.in1 = t.load1 * x[ix::th1d];
  out.in2 = t.load2 * x[ix::th2d];
  out.elec1 = electrical(t.load1, x[ix::th1d], acc1);
  out.elec2 = electrical(t.load2, x[ix::th2d], acc2);
  return out;
}

}  // namespace viaes
