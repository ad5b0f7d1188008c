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
#include <stdexcept>
#include <string>
#include <vector>

namespace viaes {

/// Joint/servo state (q, qd, theta1, theta2, theta1d, theta2d).
using State = Eigen::Matrix<double, 6, 1>;
/// Actuator command (u1 EP servo [rad], u2 stiffness servo [rad], u3 damping duty).
using Control = Eigen::Matrix<double, 3, 1>;
using StateMatrix = Eigen::Matrix<double, 6, 6>;
using InputMatrix = Eigen::Matrix<double, 6, 3>;

namespace ix {
inline constexpr int q = 0;
inline constexpr int qd = 1;
inline constexpr int th1 = 2;
inline constexpr int th2 = 3;
inline constexpr int th1d = 4;
inline constexpr int th2d = 5;
}  // namespace ix

class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class SingularGeometry : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class SolverDiverged : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidEncoding : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ExtrapolationError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

class InfeasibleTiming : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Fixed-step state/control sequence. states.size() == controls.size() + 1.
struct Trajectory {
  double dt = 0.0;
  double t0 = 0.0;
  std::vector<State> states;
  std::vector<Control> controls;

  std::size_t steps() const { return controls.size(); }
  double tf() const { return t0 + static_cast<double>(controls.size()) * dt; }
  double time(std::size_t k) const { return t0 + static_cast<double>(k) * dt; }
};

}  // namespace viaes
