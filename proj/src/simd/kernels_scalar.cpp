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

#include <algorithm>

#include "viaes/simd/kernels.hpp"

namespace viaes::simd {

namespace {

void motor_power_scalar(const double* load, const double* vel, const double* acc, std::size_t n,
                        const MotorConstants& c, double* p_in, double* p_elec) {
  for (std::size_t i = 0; i < n; ++i) {
    const double mech = load[i] * vel[i];
    const double inertial = c.rotor_inertia * acc[i];
    const double motor_torque = load[i] + inertial + c.motor_friction * vel[i];
    p_in[i] = mech;
    p_elec[i] = motor_torque * motor_torque * c.resistance_over_kt2 + std::max(0.0, inertial * vel[i]) +
                c.motor_friction * vel[i] * vel[i] + std::max(0.0, mech);
  }
}

double positive_trapezoid_scalar(const double* left, const double* right, std::size_t n) {
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += std::max(0.0, left[i]) + std::max(0.0, right[i]);
  return 0.5 * sum;
}

double squared_error_trapezoid_scalar(const double* a, const double* ra, const double* b, const double* rb,
                                      std::size_t n) {
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double ea = a[i] - ra[i];
    const double eb = b[i] - rb[i];
    sum += ea * ea + eb * eb;
  }
  return 0.5 * sum;
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{"scalar", &motor_power_scalar, &positive_trapezoid_scalar,
                                 &squared_error_trapezoid_scalar};
  return table;
}

}  // namespace viaes::simd
