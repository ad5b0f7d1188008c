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

#include "viaes/csv.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace viaes::csv {

namespace {

void append_state_row(std::string& out, double t, const State& x, const Control& u) {
  out += number(t);
  for (int i : {ix::q, ix::qd, ix::th1, ix::th2, ix::th1d, ix::th2d}) out += ',' + number(x[i]);
  for (int i = 0; i < 3; ++i) out += ',' + number(u[i]);
}

const Control& held(const Trajectory& traj, std::size_t k) {
  static const Control zero = Control::Zero();
  if (traj.controls.empty()) return zero;
  return traj.controls[std::min(k, traj.controls.size() - 1)];
}

}  // namespace

std::string number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string trajectory(const Trajectory& traj) {
  std::string out = "t,q,qd,th1,th2,th1d,th2d,u1,u2,u3\n";
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    append_state_row(out, traj.time(k), traj.states[k], held(traj, k));
    out += '\n';
  }
  return out;
}

std::string tracking(const TrackingEpisode& ep) {
  const Trajectory& traj = ep.trajectory;
  if (ep.q_des.size() != traj.states.size()) throw std::invalid_argument("q_des does not match the trajectory");
  std::string out = "t,q,qd,th1,th2,th1d,th2d,u1,u2,u3,q_des\n";
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    append_state_row(out, traj.time(k), traj.states[k], held(traj, k));
    out += ',' + number(ep.q_des[k]) + '\n';
  }
  return out;
}

std::string frontier(std::span<const FrontierRow> rows) {
  std::string out = "w_e,p_s,J_perf,E_in,E_elec,converged\n";
  for (const auto& r : rows) {
    out += number(r.effort_weight) + ',' + number(r.preset) + ',' + number(r.j_perf) + ',' + number(r.e_in) + ',' +
           number(r.e_elec) + ',' + (r.converged ? "1" : "0") + '\n';
  }
  return out;
}

std::string history(const oces::LearningHistory& h) {
  std::string out = "iter,J,J_e,J_p,violation";
  const auto dim = h.rows.empty() ? 0 : h.rows.front().xi.size();
  for (Eigen::Index i = 0; i < dim; ++i) out += ",xi_" + std::to_string(i);
  out += '\n';
  for (const auto& r : h.rows) {
    out += std::to_string(r.iteration) + ',' + number(r.j) + ',' + number(r.j_energy) + ',' + number(r.j_perf) + ',' +
           number(r.violation);
    for (Eigen::Index i = 0; i < r.xi.size(); ++i) out += ',' + number(r.xi[i]);
    out += '\n';
  }
  return out;
}

std::string seed_summary(std::span<const oces::LearningHistory> runs) {
  std::string out = "iter,n,J_mean,J_std,J_e_mean,J_e_std,J_p_mean,J_p_std\n";
  std::size_t longest = 0;
  for (const auto& h : runs) longest = std::max(longest, h.rows.size());
  for (std::size_t it = 0; it < longest; ++it) {
    double sum[3] = {0, 0, 0}, sq[3] = {0, 0, 0};
    int n = 0;
    for (const auto& h : runs) {
      if (it >= h.rows.size()) continue;
      const auto& r = h.rows[it];
      const double v[3] = {r.j, r.j_energy, r.j_perf};
      for (int c = 0; c < 3; ++c) {
        sum[c] += v[c];
        sq[c] += v[c] * v[c];
      }
      ++n;
    }
    out += std::to_string(it) + ',' + std::to_string(n);
    for (int c = 0; c < 3; ++c) {
      const double mean = sum[c] / n;
      // Sample standard deviation; zero for a single run.
      const double var = n > 1 ? std::max(0.0, (sq[c] - n * mean * mean) / (n - 1)) : 0.0;
      out += ',' + number(mean) + ',' + number(std::sqrt(var));
    }
    out += '\n';
  }
  return out;
}

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace viaes::csv
