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

#include <Eigen/Core>
#include <array>
#include <vector>

#include "viaes/energy.hpp"
#include "viaes/params.hpp"
#include "viaes/types.hpp"

namespace viaes {

/// Rest-to-rest quintic between q0 and qf over T seconds.
struct MinJerkSegment {
  double q0 = 0.0;
  double qf = 0.0;
  double duration = 1.0;
};

struct MinJerkSample {
  double q = 0.0;
  double qd = 0.0;
  double qdd = 0.0;
  double qddd = 0.0;
};

/// q(t) = q0 + (qf - q0)(10 s^3 - 15 s^4 + 6 s^5), s = t / T, with exact
/// derivatives. Throws ExtrapolationError for t outside [0, T].
MinJerkSample min_jerk(const MinJerkSegment& seg, double t);

/// Partials of the joint spring torque. The q-dot partial is identically
/// zero for this mechanism; damping lives in the plant term instead.
struct ActuatorJacobians {
  Eigen::RowVector2d j_theta = Eigen::RowVector2d::Zero();  // d tau / d(theta1, theta2)
  double j_q = 0.0;
  double j_qd = 0.0;
};

ActuatorJacobians actuator_torque_jacobians(const State& x, const PhysicalParams& p);

struct TidcGains {
  double k1 = 15.0 * 15.0 * 15.0;
  double k2 = 3.0 * 15.0 * 15.0;
  double k3 = 3.0 * 15.0;
  /// N. The stiffness servo works against the full spring force through
  /// its drum, roughly ten times the EP servo's lever load at rest on the
  /// default geometry, so its velocity is weighted accordingly.
  Eigen::Matrix2d metric = (Eigen::Matrix2d() << 1.0, 0.0, 0.0, 10.0).finished();
  double nullspace_gain = 1.0;
  double damping_duty = 0.0;  // u3 while tracking
  /// Below this |J_theta| the joint cannot be actuated through theta.
  double rank_threshold = 1e-9;

  /// (s + p)^3 pole placement.
  static TidcGains triple_pole(double pole);
  /// Throws InvalidInput unless s^3 + K3 s^2 + K2 s + K1 is Hurwitz and N is SPD.
  void validate() const;
};

struct TidcCommand {
  Eigen::Vector2d v = Eigen::Vector2d::Zero();  // servo velocity command
  double u3 = 0.0;
  double rhs = 0.0;  // b, the torque-rate demand J_theta v should meet
  bool fallback = false;  // J_theta rank deficient: null-space command only
};

/// Third-order inverse-dynamics tracking law with null-space shaping
///   v = N^-1/2 pinv(J N^-1/2) b + N^-1/2 (I - pinv(J N^-1/2) J N^-1/2) N^1/2 v_ns.
TidcCommand tidc_control(const State& x, const MinJerkSample& ref, const TidcGains& gains, const Eigen::Vector2d& v_ns,
                         const PhysicalParams& p);

/// Position commands realising the velocity demand on the critically damped
/// servos: u = theta + 2 v / beta makes v the servo's steady-state velocity.
Control velocity_to_position(const State& x, const TidcCommand& cmd, const PhysicalParams& p);

/// Consecutive minimal-jerk tracking task.
struct TrackingTask {
  std::vector<double> targets{0.6283185307179586, -0.2, 1.0, 0.3};
  State x0 = (State() << 0.0, 0.0, 0.0, 0.1308996938995747, 0.0, 0.0).finished();
  double total_time = 2.4;
  double min_duration = 0.3;
  double dt = 0.001;
  TidcGains gains;
};

struct TrackingEpisode {
  Trajectory trajectory;  // fine grid
  std::vector<double> q_des;  // reference at every state sample
  std::vector<double> durations;  // all segments, last one derived
  std::vector<std::size_t> boundaries;  // state index where each segment ends
  std::vector<double> segment_e_in;
  EnergyReport report;
  std::size_t fallback_steps = 0;
};

/// Tracks the whole sequence. `durations` holds all but the last segment,
/// `presets` one stiffness target per segment. The last duration is the
/// remainder of total_time; throws InfeasibleTiming when it is below
/// min_duration.
TrackingEpisode track_sequence(const TrackingTask& task, const std::vector<double>& durations,
                               const std::vector<double>& presets, const PhysicalParams& p);

/// J_p reference for tracking: terminal errors at every boundary plus the
/// integral of the squared deviation from the minimal-jerk reference.
PerformanceReference tracking_reference(const TrackingTask& task, const TrackingEpisode& ep);

}  // namespace viaes
