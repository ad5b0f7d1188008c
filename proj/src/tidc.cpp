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

#include "viaes/tidc.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numeric>
#include <string>

#include "viaes/dynamics.hpp"

namespace viaes {

MinJerkSample min_jerk(const MinJerkSegment& seg, double t) {
  if (!(seg.duration > 0.0)) throw InvalidInput("min-jerk duration must be positive");
  if (t < 0.0 || t > seg.duration) throw ExtrapolationError("min-jerk time " + std::to_string(t) + " outside [0, T]");
  const double T = seg.duration;
  const double d = seg.qf - seg.q0;
  const double s = t / T;
  const double s2 = s * s;
  const double s3 = s2 * s;
  MinJerkSample out;
  out.q = seg.q0 + d * s3 * (10.0 - 15.0 * s + 6.0 * s2);
  out.qd = d / T * s2 * (30.0 - 60.0 * s + 30.0 * s2);
  out.qdd = d / (T * T) * s * (60.0 - 180.0 * s + 120.0 * s2);
  out.qddd = d / (T * T * T) * (60.0 - 360.0 * s + 360.0 * s2);
  return out;
}

ActuatorJacobians actuator_torque_jacobians(const State& x, const PhysicalParams& p) {
  const auto j = spring_torque_jacobian(x, p);
  ActuatorJacobians out;
  out.j_theta << j.joint_dth1, j.joint_dth2;
  out.j_q = j.joint_dq;
  return out;
}

TidcGains TidcGains::triple_pole(double pole) {
  TidcGains g;
  g.k1 = pole * pole * pole;
  g.k2 = 3.0 * pole * pole;
  g.k3 = 3.0 * pole;
  return g;
}

void TidcGains::validate() const {
  // Routh-Hurwitz for a cubic.
  if (!(k1 > 0.0 && k2 > 0.0 && k3 > 0.0 && k2 * k3 > k1))
    throw InvalidInput("tracking gains do not give Hurwitz error dynamics");
  if (!metric.isApprox(metric.transpose())) throw InvalidInput("metric N must be symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(metric);
  if (!(es.eigenvalues().minCoeff() > 0.0)) throw InvalidInput("metric N must be positive definite");
}

TidcCommand tidc_control(const State& x, const MinJerkSample& ref, const TidcGains& gains, const Eigen::Vector2d& v_ns,
                         const PhysicalParams& p) {
  const auto jac = actuator_torque_jacobians(x, p);
  const double damping = p.max_damping * gains.damping_duty + p.joint_friction;
  const double tau = spring_torques(x, p).joint;
  const double qdd = (tau - damping * x[ix::qd] - p.external_torque) / p.inertia;

  // Error law e''' + K3 e'' + K2 e' + K1 e = 0 solved for the commanded jerk.
  const double jerk = ref.qddd - gains.k3 * (qdd - ref.qdd) - gains.k2 * (x[ix::qd] - ref.qd) -
                      gains.k1 * (x[ix::q] - ref.q);
  // Differentiated joint model I q''' + c q'' = J_theta theta' + J_q q' + J_qd q''.
  // dM/dt, dC/dt and dG/dt vanish for a constant-inertia, gravity-free joint.
  TidcCommand cmd;
  cmd.u3 = gains.damping_duty;
  cmd.rhs = p.inertia * jerk + damping * qdd - jac.j_q * x[ix::qd] - jac.j_qd * qdd;

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(gains.metric);
  const Eigen::Vector2d ev = es.eigenvalues();
  const Eigen::Matrix2d n_half = es.eigenvectors() * ev.cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();
  const Eigen::Matrix2d n_mhalf =
      es.eigenvectors() * ev.cwiseSqrt().cwiseInverse().asDiagonal() * es.eigenvectors().transpose();

  const Eigen::Vector2d ns = gains.nullspace_gain * v_ns;
  const Eigen::RowVector2d jt = jac.j_theta * n_mhalf;
  const double jj = jt.squaredNorm();
  if (jac.j_theta.norm() < gains.rank_threshold || jj <= 0.0) {
    cmd.fallback = true;
    cmd.v = ns;
    return cmd;
  }
  const Eigen::Vector2d pinv = jt.transpose() / jj;
  const Eigen::Matrix2d proj = Eigen::Matrix2d::Identity() - pinv * jt;
  cmd.v = n_mhalf * (pinv * cmd.rhs) + n_mhalf * proj * n_half * ns;
  return cmd;
}

Control velocity_to_position(const State& x, const TidcCommand& cmd, const PhysicalParams& p) {
  const double lead = 2.0 / p.servo_bandwidth;
  Control u{x[ix::th1] + lead * cmd.v[0], x[ix::th2] + lead * cmd.v[1], cmd.u3};
  return clamp_control(u, p.u_min, p.u_max);
}

TrackingEpisode track_sequence(const TrackingTask& task, const std::vector<double>& durations,
                               const std::vector<double>& presets, const PhysicalParams& p) {
  const std::size_t ns = task.targets.size();
  if (ns == 0) throw InvalidInput("tracking task needs at least one target");
  if (durations.size() + 1 != ns) throw InvalidInput("expected one free duration per segment but the last");
  if (presets.size() != ns) throw InvalidInput("expected one stiffness preset per segment");
  if (!(task.dt > 0.0)) throw InvalidInput("tracking step must be positive");
  task.gains.validate();

  TrackingEpisode ep;
  ep.durations = durations;
  const double used = std::accumulate(durations.begin(), durations.end(), 0.0);
  const double last = task.total_time - used;
  if (last < task.min_duration - 1e-12)
    throw InfeasibleTiming("derived last duration " + std::to_string(last) + " s is below " +
                           std::to_string(task.min_duration) + " s");
  ep.durations.push_back(last);

  // Segment ends on the fine grid from rounded cumulative times, so the
  // episode always spans exactly total_time.
  std::vector<std::size_t> ends(ns);
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < ns; ++i) {
    acc += ep.durations[i];
    ends[i] = static_cast<std::size_t>(std::llround(acc / task.dt));
  }
  ends[ns - 1] = static_cast<std::size_t>(std::llround(task.total_time / task.dt));
  ep.boundaries = ends;

  Trajectory& traj = ep.trajectory;
  traj.dt = task.dt;
  traj.states.reserve(ends.back() + 1);
  traj.controls.reserve(ends.back());
  traj.states.push_back(task.x0);
  ep.q_des.reserve(ends.back() + 1);
  ep.q_des.push_back(task.x0[ix::q]);

  std::size_t begin = 0;
  double q_start = task.x0[ix::q];
  for (std::size_t i = 0; i < ns; ++i) {
    const std::size_t n = ends[i] - begin;
    if (n == 0) throw InfeasibleTiming("segment shorter than one control step");
    const MinJerkSegment seg{q_start, task.targets[i], static_cast<double>(n) * task.dt};
    for (std::size_t k = 0; k < n; ++k) {
      const State& x = traj.states.back();
      const MinJerkSample ref = min_jerk(seg, std::min(static_cast<double>(k) * task.dt, seg.duration));
      const Eigen::Vector2d v_ns{task.targets[i] - x[ix::th1], presets[i] - x[ix::th2]};
      const TidcCommand cmd = tidc_control(x, ref, task.gains, v_ns, p);
      if (cmd.fallback) ++ep.fallback_steps;
      const Control u = velocity_to_position(x, cmd, p);
      traj.controls.push_back(u);
      traj.states.push_back(step(x, u, task.dt, p));
      ep.q_des.push_back(min_jerk(seg, std::min(static_cast<double>(k + 1) * task.dt, seg.duration)).q);
    }
    begin = ends[i];
    q_start = task.targets[i];
  }

  ep.report = energy_report(traj, p, tracking_reference(task, ep));
  begin = 0;
  for (std::size_t i = 0; i < ns; ++i) {
    Trajectory part;
    part.dt = task.dt;
    part.t0 = static_cast<double>(begin) * task.dt;
    part.states.assign(traj.states.begin() + static_cast<std::ptrdiff_t>(begin),
                       traj.states.begin() + static_cast<std::ptrdiff_t>(ends[i]) + 1);
    part.controls.assign(traj.controls.begin() + static_cast<std::ptrdiff_t>(begin),
                         traj.controls.begin() + static_cast<std::ptrdiff_t>(ends[i]));
    PerformanceReference none;
    none.left.assign(part.steps(), 0.0);
    none.right.assign(part.steps(), 0.0);
    ep.segment_e_in.push_back(energy_report(part, p, none).e_in);
    begin = ends[i];
  }
  return ep;
}

PerformanceReference tracking_reference(const TrackingTask& task, const TrackingEpisode& ep) {
  PerformanceReference ref;
  const std::size_t n = ep.trajectory.steps();
  ref.left.assign(ep.q_des.begin(), ep.q_des.begin() + static_cast<std::ptrdiff_t>(n));
  ref.right.assign(ep.q_des.begin() + 1, ep.q_des.end());
  for (std::size_t i = 0; i < ep.boundaries.size(); ++i) ref.terminals.push_back({ep.boundaries[i], task.targets[i]});
  return ref;
}

}  // namespace viaes
