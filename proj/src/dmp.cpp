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

#include "viaes/dmp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace viaes {

DmpBasis DmpBasis::make(const DmpGains& g) {
  if (g.basis < 1) throw InvalidInput("DMP needs at least one basis function");
  if (!(g.alpha_s > 0.0) || !(g.alpha_z > 0.0) || !(g.beta_z > 0.0)) throw InvalidInput("DMP gains must be positive");
  const auto n = static_cast<std::size_t>(g.basis);
  DmpBasis b;
  b.centers.resize(n);
  b.widths.resize(n);
  if (n == 1) {
    b.centers[0] = 1.0;
    b.widths[0] = 1.0;
    return b;
  }
  for (std::size_t i = 0; i < n; ++i)
    b.centers[i] = std::exp(-g.alpha_s * static_cast<double>(i) / static_cast<double>(n - 1));
  // psi_i and psi_{i+1} meet at the midpoint with value 1/2.
  const double k = 1.0 / std::sqrt(8.0 * std::log(2.0));
  for (std::size_t i = 0; i + 1 < n; ++i) b.widths[i] = (b.centers[i] - b.centers[i + 1]) * k;
  b.widths[n - 1] = b.widths[n - 2];
  return b;
}

double DmpBasis::activation_sum(double s) const {
  double sum = 0.0;
  for (std::size_t i = 0; i < centers.size(); ++i) {
    const double d = s - centers[i];
    sum += std::exp(-d * d / (2.0 * widths[i] * widths[i]));
  }
  return sum;
}

double DmpBasis::forcing(double s, std::span<const double> weights) const {
  if (weights.size() != centers.size()) throw InvalidInput("weight count does not match the basis");
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < centers.size(); ++i) {
    const double d = s - centers[i];
    const double psi = std::exp(-d * d / (2.0 * widths[i] * widths[i]));
    num += psi * weights[i];
    den += psi;
  }
  // Far below the last centre every activation underflows; the forcing
  // is multiplied by s there anyway.
  return den > 0.0 ? num / den : 0.0;
}

DmpRollout dmp_rollout(const Dmp& dmp, const DmpGains& g, const DmpBasis& basis, double dt, std::size_t steps,
                       double z0) {
  if (!(dt > 0.0)) throw InvalidInput("DMP rollout requires dt > 0");
  if (!(dmp.tau > 0.0)) throw InvalidInput("DMP duration must be positive");
  const double amp = dmp.goal - dmp.start;
  auto phase = [&](double t) { return std::exp(-g.alpha_s * t / dmp.tau); };
  auto deriv = [&](double t, double th, double z, double& dth, double& dz) {
    const double s = phase(t);
    dth = z / dmp.tau;
    dz = (g.alpha_z * (g.beta_z * (dmp.goal - th) - z) + s * amp * basis.forcing(s, dmp.weights)) / dmp.tau;
  };

  DmpRollout r;
  r.theta.reserve(steps + 1);
  r.thetad.reserve(steps + 1);
  r.phase.reserve(steps + 1);
  double th = dmp.start;
  double z = z0;
  for (std::size_t k = 0;; ++k) {
    const double t = static_cast<double>(k) * dt;
    r.theta.push_back(th);
    r.thetad.push_back(z / dmp.tau);
    r.phase.push_back(phase(t));
    if (k == steps) break;
    double a1, b1, a2, b2, a3, b3, a4, b4;
    deriv(t, th, z, a1, b1);
    deriv(t + 0.5 * dt, th + 0.5 * dt * a1, z + 0.5 * dt * b1, a2, b2);
    deriv(t + 0.5 * dt, th + 0.5 * dt * a2, z + 0.5 * dt * b2, a3, b3);
    deriv(t + dt, th + dt * a3, z + dt * b3, a4, b4);
    th += dt / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4);
    z += dt / 6.0 * (b1 + 2.0 * b2 + 2.0 * b3 + b4);
  }
  r.z_end = z;
  return r;
}

std::size_t DmpSequenceEncoding::dim() const {
  return segments * (3 * static_cast<std::size_t>(gains.basis) + 3);
}

std::size_t DmpSequenceEncoding::weight_index(std::size_t segment, int channel, int basis) const {
  const auto n = static_cast<std::size_t>(gains.basis);
  return (segment * 3 + static_cast<std::size_t>(channel)) * n + static_cast<std::size_t>(basis);
}

std::size_t DmpSequenceEncoding::goal_index(std::size_t segment, int channel) const {
  return segments * 3 * static_cast<std::size_t>(gains.basis) + static_cast<std::size_t>(channel) * segments + segment;
}

void DmpSequenceEncoding::bounds(Eigen::VectorXd& lo, Eigen::VectorXd& hi) const {
  constexpr double inf = std::numeric_limits<double>::infinity();
  lo = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(dim()), -inf);
  hi = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(dim()), inf);
  for (std::size_t s = 0; s < segments; ++s) {
    for (int c = 0; c < 3; ++c) {
      const auto i = static_cast<Eigen::Index>(goal_index(s, c));
      lo[i] = goal_min[static_cast<std::size_t>(c)];
      hi[i] = goal_max[static_cast<std::size_t>(c)];
    }
  }
}

std::vector<SubMovementDmps> encode(const DmpSequenceEncoding& enc, const Eigen::VectorXd& xi) {
  if (static_cast<std::size_t>(xi.size()) != enc.dim())
    throw InvalidEncoding("policy vector has " + std::to_string(xi.size()) + " entries, expected " +
                          std::to_string(enc.dim()));
  std::vector<SubMovementDmps> out(enc.segments);
  for (std::size_t s = 0; s < enc.segments; ++s) {
    for (int c = 0; c < 3; ++c) {
      const auto cu = static_cast<std::size_t>(c);
      auto& w = out[s].weights[cu];
      w.resize(static_cast<std::size_t>(enc.gains.basis));
      for (int i = 0; i < enc.gains.basis; ++i)
        w[static_cast<std::size_t>(i)] = xi[static_cast<Eigen::Index>(enc.weight_index(s, c, i))];
      const double g = xi[static_cast<Eigen::Index>(enc.goal_index(s, c))];
      out[s].goals[cu] = std::clamp(g, enc.goal_min[cu], enc.goal_max[cu]);
    }
  }
  return out;
}

Eigen::VectorXd decode(const DmpSequenceEncoding& enc, std::span<const SubMovementDmps> segments) {
  if (segments.size() != enc.segments) throw InvalidEncoding("segment count does not match the encoding");
  Eigen::VectorXd xi(static_cast<Eigen::Index>(enc.dim()));
  for (std::size_t s = 0; s < enc.segments; ++s) {
    for (int c = 0; c < 3; ++c) {
      const auto cu = static_cast<std::size_t>(c);
      const auto& w = segments[s].weights[cu];
      if (w.size() != static_cast<std::size_t>(enc.gains.basis)) throw InvalidEncoding("weight block size mismatch");
      for (int i = 0; i < enc.gains.basis; ++i)
        xi[static_cast<Eigen::Index>(enc.weight_index(s, c, i))] = w[static_cast<std::size_t>(i)];
      xi[static_cast<Eigen::Index>(enc.goal_index(s, c))] = segments[s].goals[cu];
    }
  }
  return xi;
}

Eigen::VectorXd initial_policy(const DmpSequenceEncoding& enc, std::span<const double> targets, double preset,
                               double duty) {
  if (targets.size() != enc.segments) throw InvalidEncoding("one target per segment required");
  Eigen::VectorXd xi = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(enc.dim()));
  for (std::size_t s = 0; s < enc.segments; ++s) {
    xi[static_cast<Eigen::Index>(enc.goal_index(s, 0))] = targets[s];
    xi[static_cast<Eigen::Index>(enc.goal_index(s, 1))] = preset;
    xi[static_cast<Eigen::Index>(enc.goal_index(s, 2))] = duty;
  }
  return xi;
}

std::vector<Control> sequence_commands(const DmpSequenceEncoding& enc, std::span<const SubMovementDmps> segments,
                                       std::span<const double> durations, const Control& start, double dt) {
  if (segments.size() != durations.size()) throw InvalidInput("one duration per segment required");
  const DmpBasis basis = DmpBasis::make(enc.gains);
  std::vector<Control> u;
  std::array<double, 3> pos{start[0], start[1], start[2]};
  std::array<double, 3> vel{0.0, 0.0, 0.0};
  for (std::size_t s = 0; s < segments.size(); ++s) {
    const auto steps = static_cast<std::size_t>(std::llround(durations[s] / dt));
    std::array<DmpRollout, 3> ch;
    for (int c = 0; c < 3; ++c) {
      const auto cu = static_cast<std::size_t>(c);
      const Dmp d{durations[s], segments[s].goals[cu], pos[cu], segments[s].weights[cu]};
      ch[cu] = dmp_rollout(d, enc.gains, basis, dt, steps, durations[s] * vel[cu]);
      pos[cu] = ch[cu].theta.back();
      vel[cu] = ch[cu].thetad.back();
    }
    for (std::size_t k = 0; k < steps; ++k)
      u.emplace_back(ch[0].theta[k], ch[1].theta[k], std::clamp(ch[2].theta[k], 0.0, 1.0));
  }
  return u;
}

}  // namespace viaes
