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

#include "viaes/energy.hpp"

#include <cmath>

#include "viaes/dynamics.hpp"
#include "viaes/simd/kernels.hpp"

namespace viaes {

PerformanceReference reach_reference(std::span<const std::size_t> segment_steps, std::span<const double> targets,
                                     bool terminal_velocity) {
  if (segment_steps.size() != targets.size()) throw InvalidInput("one target per segment required");
  PerformanceReference ref;
  ref.terminal_velocity = terminal_velocity;
  std::size_t index = 0;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    ref.left.insert(ref.left.end(), segment_steps[i], targets[i]);
    ref.right.insert(ref.right.end(), segment_steps[i], targets[i]);
    index += segment_steps[i];
    ref.terminals.push_back({index, targets[i]});
  }
  return ref;
}

double performance_cost(const Trajectory& traj, const PerformanceReference& ref) {
  const std::size_t n = traj.steps();
  if (ref.left.size() != n || ref.right.size() != n) throw InvalidInput("reference length does not match trajectory");
  std::vector<double> q_left(n);
  std::vector<double> q_right(n);
  for (std::size_t k = 0; k < n; ++k) {
    q_left[k] = traj.states[k][ix::q];
    q_right[k] = traj.states[k + 1][ix::q];
  }
  double running = simd::squared_error_trapezoid(q_left, ref.left, q_right, ref.right) * traj.dt;
  double terminal = 0.0;
  for (const auto& t : ref.terminals) {
    if (t.index >= traj.states.size()) throw InvalidInput("terminal index outside trajectory");
    const auto& x = traj.states[t.index];
    const double e = x[ix::q] - t.target;
    terminal += e * e;
    if (ref.terminal_velocity) terminal += x[ix::qd] * x[ix::qd];
  }
  return ref.weight * (terminal + running);
}

EnergyReport energy_report(const Trajectory& fine, const PhysicalParams& p, const PerformanceReference& ref,
                           EnergyObjective objective) {
  if (!(fine.dt > 0.0)) throw InvalidInput("energy_report requires dt > 0");
  const std::size_t n = fine.steps();
  EnergyReport report;
  report.j_perf = performance_cost(fine, ref);
  if (n == 0) return report;

  // Samples [0, n) are interval left ends, [n, 2n) right ends; both use the
  // interval's held control.
  const std::size_t m = 2 * n;
  std::vector<double> load1(m), load2(m), vel1(m), vel2(m), acc1(m), acc2(m);
  const double beta = p.servo_bandwidth;
  for (std::size_t k = 0; k < n; ++k) {
    const Control& u = fine.controls[k];
    for (std::size_t side = 0; side < 2; ++side) {
      const State& x = fine.states[k + side];
      const std::size_t i = k + side * n;
      const auto t = spring_torques(x, p);
      load1[i] = t.load1;
      load2[i] = t.load2;
      vel1[i] = x[ix::th1d];
      vel2[i] = x[ix::th2d];
      acc1[i] = servo_acceleration(u[0], x[ix::th1], x[ix::th1d], beta);
      acc2[i] = servo_acceleration(u[1], x[ix::th2], x[ix::th2d], beta);
    }
  }

  const double kt = p.gear_ratio * p.torque_const;
  const simd::MotorConstants consts{p.motor_resistance / (kt * kt), p.rotor_inertia, p.motor_friction};
  std::vector<double> in1(m), in2(m), elec1(m), elec2(m);
  simd::motor_power(load1, vel1, acc1, consts, in1, elec1);
  simd::motor_power(load2, vel2, acc2, consts, in2, elec2);

  auto integrate = [&](const std::vector<double>& v) {
    const std::span<const double> s(v);
    return simd::positive_trapezoid(s.first(n), s.subspan(n)) * fine.dt;
  };
  report.e_in1 = integrate(in1);
  report.e_in2 = integrate(in2);
  report.e_elec1 = integrate(elec1);
  report.e_elec2 = integrate(elec2);
  report.e_in = report.e_in1 + report.e_in2;
  report.e_elec = report.e_elec1 + report.e_elec2;
  if (p.damping_power > 0.0) {
    double duty = 0.0;
    for (const auto& u : fine.controls) duty += u[2];
    report.e_elec += p.damping_power * duty * fine.dt;
  }
  report.j_energy = objective == EnergyObjective::kInputWork ? report.e_in : report.e_elec;
  return report;
}

Trajectory resimulate(const State& x0, std::span<const Control> coarse, double dt_coarse, double dt_fine,
                      const PhysicalParams& p) {
  if (!(dt_fine > 0.0)) throw InvalidInput("dt_fine must be positive");
  if (!(dt_coarse > 0.0)) throw InvalidInput("dt_coarse must be positive");
  const double horizon = static_cast<double>(coarse.size()) * dt_coarse;
  const auto n_fine = static_cast<std::size_t>(std::llround(horizon / dt_fine));
  std::vector<Control> fine;
  fine.reserve(n_fine);
  for (std::size_t j = 0; j < n_fine; ++j) {
    // Small slack so grid points that coincide with a switch pick the new sample.
    auto idx = static_cast<std::size_t>(std::floor((static_cast<double>(j) * dt_fine) / dt_coarse + 1e-9));
    if (idx >= coarse.size()) idx = coarse.size() - 1;
    fine.push_back(coarse[idx]);
  }
  return rollout(x0, fine, dt_fine, p);
}

}  // namespace viaes
