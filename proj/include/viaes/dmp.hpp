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

#include <array>
#include <span>
#include <vector>

#include "viaes/types.hpp"

namespace viaes {

/// Transformation-system constants shared by every primitive.
struct DmpGains {
  double alpha_z = 25.0;
  double beta_z = 25.0 / 4.0;  // critically damped
  double alpha_s = 8.0;
  int basis = 10;
};

/// Gaussian basis in phase space: centres exp(-alpha_s (i-1)/(N-1)),
/// neighbours crossing at half activation.
struct DmpBasis {
  std::vector<double> centers;
  std::vector<double> widths;  // sigma_i

  static DmpBasis make(const DmpGains& g);
  /// sum_i psi_i(s) w_i / sum_i psi_i(s)
  double forcing(double s, std::span<const double> weights) const;
  double activation_sum(double s) const;
};

/// Single-channel discrete primitive.
struct Dmp {
  double tau = 1.0;  // duration [s]
  double goal = 0.0;
  double start = 0.0;
  std::vector<double> weights;  // one per basis function
};

struct DmpRollout {
  std::vector<double> theta;   // n + 1 samples
  std::vector<double> thetad;  // n + 1 samples
  std::vector<double> phase;   // n + 1 samples
  double z_end = 0.0;          // scaled velocity at the last sample
};

/// RK4 integration of tau thd = z, tau zd = a_z (b_z (g - th) - z) + s A f(s)
/// with the phase taken in closed form s(t) = exp(-a_s t / tau) and
/// A = g - theta(0). `z0` lets a primitive continue a previous one.
DmpRollout dmp_rollout(const Dmp& dmp, const DmpGains& gains, const DmpBasis& basis, double dt, std::size_t steps,
                       double z0 = 0.0);

/// Sequence of sub-movements, each with an EP, stiffness and damping primitive.
///
/// Flat layout of the policy vector (size Ns (3N + 3)):
///   weights, segment-major then channel then basis index,
///   then goals, channel-major then segment.
struct DmpSequenceEncoding {
  std::size_t segments = 3;
  DmpGains gains;
  std::array<double, 3> goal_min{-1.0471975511965976, 0.1308996938995747, 0.0};
  std::array<double, 3> goal_max{1.0471975511965976, 1.5707963267948966, 1.0};

  std::size_t dim() const;
  std::size_t weight_index(std::size_t segment, int channel, int basis) const;
  std::size_t goal_index(std::size_t segment, int channel) const;

  /// Weights are unbounded (+-inf), goals use goal_min / goal_max.
  void bounds(Eigen::VectorXd& lo, Eigen::VectorXd& hi) const;
};

struct SubMovementDmps {
  std::array<std::vector<double>, 3> weights;
  std::array<double, 3> goals{};
};

/// xi -> per-segment primitives; goals are clamped to their boxes.
/// Throws InvalidEncoding on a dimension mismatch.
std::vector<SubMovementDmps> encode(const DmpSequenceEncoding& enc, const Eigen::VectorXd& xi);
Eigen::VectorXd decode(const DmpSequenceEncoding& enc, std::span<const SubMovementDmps> segments);

/// w = 0, g1 = q*_i, g2 = preset, g3 = duty.
Eigen::VectorXd initial_policy(const DmpSequenceEncoding& enc, std::span<const double> targets, double preset,
                               double duty);

/// Command signal of a whole sequence sampled every dt: each segment lasts
/// `durations[i]` and starts where the previous one ended (position and
/// velocity carried over). u3 is clamped to [0, 1].
std::vector<Control> sequence_commands(const DmpSequenceEncoding& enc, std::span<const SubMovementDmps> segments,
                                       std::span<const double> durations, const Control& start, double dt);

}  // namespace viaes
