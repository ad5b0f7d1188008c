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

// Data-parallel kernels used by the fine-grid energy accounting.
//
// Every kernel has a scalar reference implementation; ISA-specific variants
// are compiled into separate translation units and picked once at startup.
// Setting VIAES_SIMD=scalar in the environment forces the reference path.

#include <cstddef>
#include <span>
#include <string_view>

namespace viaes::simd {

struct MotorConstants {
  double resistance_over_kt2 = 0.0;  // R_m / (n_g k)^2
  double rotor_inertia = 0.0;
  double motor_friction = 0.0;
};

/// Elementwise motor power model:
///   p_in   = load * vel
///   p_elec = (load + Jm acc + bf vel)^2 R/(n k)^2 + [Jm acc vel]^+ + bf vel^2 + [load vel]^+
using MotorPowerFn = void (*)(const double* load, const double* vel, const double* acc, std::size_t n,
                              const MotorConstants& c, double* p_in, double* p_elec);

/// sum_i 0.5 * ([left_i]^+ + [right_i]^+)
using PositiveTrapezoidFn = double (*)(const double* left, const double* right, std::size_t n);

/// sum_i 0.5 * ((a_i - ra_i)^2 + (b_i - rb_i)^2)
using SquaredErrorTrapezoidFn = double (*)(const double* a, const double* ra, const double* b, const double* rb,
                                           std::size_t n);

struct KernelTable {
  std::string_view name;
  MotorPowerFn motor_power;
  PositiveTrapezoidFn positive_trapezoid;
  SquaredErrorTrapezoidFn squared_error_trapezoid;
};

const KernelTable& scalar_kernels();

/// AVX2+FMA variant, or nullptr when not compiled in or not supported by the CPU.
const KernelTable* avx2_kernels();

/// Kernel table selected for this process (cached after the first call).
const KernelTable& active_kernels();

// Convenience wrappers over active_kernels().
void motor_power(std::span<const double> load, std::span<const double> vel, std::span<const double> acc,
                 const MotorConstants& c, std::span<double> p_in, std::span<double> p_elec);
double positive_trapezoid(std::span<const double> left, std::span<const double> right);
double squared_error_trapezoid(std::span<const double> a, std::span<const double> ra, std::span<const double> b,
                               std::span<const double> rb);

}  // namespace viaes::simd
