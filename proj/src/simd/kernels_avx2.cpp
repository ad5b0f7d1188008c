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

// Compiled with -mavx2 -mfma; only entered after a runtime CPU check.

#include <immintrin.h>

#include <algorithm>

#include "viaes/simd/kernels.hpp"

namespace viaes::simd {

namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

void motor_power_avx2(const double* load, const double* vel, const double* acc, std::size_t n,
                      const MotorConstants& c, double* p_in, double* p_elec) {
  const __m256d zero = _mm256_setzero_pd();
  const __m256d r = _mm256_set1_pd(c.resistance_over_kt2);
  const __m256d jm = _mm256_set1_pd(c.rotor_inertia);
  const __m256d bf = _mm256_set1_pd(c.motor_friction);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d l = _mm256_loadu_pd(load + i);
    const __m256d v = _mm256_loadu_pd(vel + i);
    const __m256d a = _mm256_loadu_pd(acc + i);
    const __m256d mech = _mm256_mul_pd(l, v);
    const __m256d inertial = _mm256_mul_pd(jm, a);
    const __m256d torque = _mm256_fmadd_pd(bf, v, _mm256_add_pd(l, inertial));
    __m256d elec = _mm256_mul_pd(_mm256_mul_pd(torque, torque), r);
    elec = _mm256_add_pd(elec, _mm256_max_pd(zero, _mm256_mul_pd(inertial, v)));
    elec = _mm256_fmadd_pd(_mm256_mul_pd(bf, v), v, elec);
    elec = _mm256_add_pd(elec, _mm256_max_pd(zero, mech));
    _mm256_storeu_pd(p_in + i, mech);
    _mm256_storeu_pd(p_elec + i, elec);
  }
  for (; i < n; ++i) {
    const double mech = load[i] * vel[i];
    const double inertial = c.rotor_inertia * acc[i];
    const double torque = load[i] + inertial + c.motor_friction * vel[i];
    p_in[i] = mech;
    p_elec[i] = torque * torque * c.resistance_over_kt2 + std::max(0.0, inertial * vel[i]) +
                c.motor_friction * vel[i] * vel[i] + std::max(0.0, mech);
  }
}

double positive_trapezoid_avx2(const double* left, const double* right, std::size_t n) {
  const __m256d zero = _mm256_setzero_pd();
  __m256d acc = zero;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_add_pd(acc, _mm256_max_pd(zero, _mm256_loadu_pd(left + i)));
    acc = _mm256_add_pd(acc, _mm256_max_pd(zero, _mm256_loadu_pd(right + i)));
  }
  double sum = hsum(acc);
  for (; i < n; ++i) sum += std::max(0.0, left[i]) + std::max(0.0, right[i]);
  return 0.5 * sum;
}

double squared_error_trapezoid_avx2(const double* a, const double* ra, const double* b, const double* rb,
                                    std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d ea = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(ra + i));
    const __m256d eb = _mm256_sub_pd(_mm256_loadu_pd(b + i), _mm256_loadu_pd(rb + i));
    acc = _mm256_fmadd_pd(ea, ea, acc);
    acc = _mm256_fmadd_pd(eb, eb, acc);
  }
  double sum = hsum(acc);
  for (; i < n; ++i) {
    const double ea = a[i] - ra[i];
    const double eb = b[i] - rb[i];
    sum += ea * ea + eb * eb;
  }
  return 0.5 * sum;
}

}  // namespace

const KernelTable& avx2_kernel_table() {
  static const KernelTable table{"avx2", &motor_power_avx2, &positive_trapezoid_avx2,
                                 &squared_error_trapezoid_avx2};
  return table;
}

}  // namespace viaes::simd
