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

#include <cstdlib>
#include <stdexcept>
#include <string_view>

#include "viaes/simd/kernels.hpp"

namespace viaes::simd {

#if defined(VIAES_HAVE_AVX2)
const KernelTable& avx2_kernel_table();
#endif

const KernelTable* avx2_kernels() {
#if defined(VIAES_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return supported ? &avx2_kernel_table() : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active_kernels() {
  static const KernelTable& table = []() -> const KernelTable& {
    const char* env = std::getenv("VIAES_SIMD");
    if (env != nullptr && std::string_view(env) == "scalar") return scalar_kernels();
    if (const auto* t = avx2_kernels()) return *t;
    return scalar_kernels();
  }();
  return table;
}

namespace {

void check_same(std::size_t a, std::size_t b) {
  if (a != b) throw std::invalid_argument("kernel inputs must have equal length");
}

}  // namespace

void motor_power(std::span<const double> load, std::span<const double> vel, std::span<const double> acc,
                 const MotorConstants& c, std::span<double> p_in, std::span<double> p_elec) {
  const std::size_t n = load.size();
  check_same(n, vel.size());
  check_same(n, acc.size());
  check_same(n, p_in.size());
  check_same(n, p_elec.size());
  active_kernels().motor_power(load.data(), vel.data(), acc.data(), n, c, p_in.data(), p_elec.data());
}

double positive_trapezoid(std::span<const double> left, std::span<const double> right) {
  check_same(left.size(), right.size());
  return active_kernels().positive_trapezoid(left.data(), right.data(), left.size());
}

double squared_error_trapezoid(std::span<const double> a, std::span<const double> ra, std::span<const double> b,
                               std::span<const double> rb) {
  const std::size_t n = a.size();
  check_same(n, ra.size());
  check_same(n, b.size());
  check_same(n, rb.size());
  return active_kernels().squared_error_trapezoid(a.data(), ra.data(), b.data(), rb.data(), n);
}

}  // namespace viaes::simd
