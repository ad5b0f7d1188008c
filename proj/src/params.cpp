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

#include "viaes/params.hpp"

#include <cmath>
#include <string>

namespace viaes {

double PhysicalParams::pretension_offset() const { return std::abs(lever_c - lever_b); }

void PhysicalParams::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) throw InvalidInput(std::string(name) + " must be positive");
  };
  auto non_negative = [](double v, const char* name) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw InvalidInput(std::string(name) + " must be non-negative");
  };
  positive(inertia, "inertia");
  positive(spring_const, "spring_const");
  positive(servo_bandwidth, "servo_bandwidth");
  positive(motor_resistance, "motor_resistance");
  positive(torque_const, "torque_const");
  positive(gear_ratio, "gear_ratio");
  positive(lever_b, "lever_b");
  positive(lever_c, "lever_c");
  positive(drum_radius, "drum_radius");
  non_negative(max_damping, "max_damping");
  non_negative(joint_friction, "joint_friction");
  non_negative(rotor_inertia, "rotor_inertia");
  non_negative(motor_friction, "motor_friction");
  non_negative(damping_power, "damping_power");
  for (int i = 0; i < 3; ++i) {
    if (!(u_min[i] < u_max[i])) throw InvalidInput("u_min must be strictly below u_max");
  }
  if (u_min[2] != 0.0 || u_max[2] != 1.0) throw InvalidInput("damping channel bounds must be [0, 1]");
  if (!(theta2_min < theta2_max)) throw InvalidInput("theta2_min must be below theta2_max");
}

namespace {

std::vector<double> to_vec(const Control& c) { return {c[0], c[1], c[2]}; }

Control control_from(const nlohmann::json& j, const char* key) {
  const auto v = j.at(key).get<std::vector<double>>();
  if (v.size() != 3) throw ConfigError(std::string(key) + " must have 3 entries");
  return Control{v[0], v[1], v[2]};
}

template <typename T>
void read_opt(const nlohmann::json& j, const char* key, T& out) {
  if (auto it = j.find(key); it != j.end()) out = it->get<T>();
}

}  // namespace

void to_json(nlohmann::json& j, const PhysicalParams& p) {
  j = nlohmann::json{
      {"link", {{"inertia", p.inertia}, {"joint_friction", p.joint_friction}, {"external_torque", p.external_torque}}},
      {"spring",
       {{"spring_const", p.spring_const},
        {"lever_b", p.lever_b},
        {"lever_c", p.lever_c},
        {"drum_radius", p.drum_radius}}},
      {"servo", {{"servo_bandwidth", p.servo_bandwidth}}},
      {"damping", {{"max_damping", p.max_damping}, {"damping_power", p.damping_power}}},
      {"motor",
       {{"motor_resistance", p.motor_resistance},
        {"torque_const", p.torque_const},
        {"gear_ratio", p.gear_ratio},
        {"rotor_inertia", p.rotor_inertia},
        {"motor_friction", p.motor_friction}}},
      {"limits",
       {{"u_min", to_vec(p.u_min)},
        {"u_max", to_vec(p.u_max)},
        {"theta2_min", p.theta2_min},
        {"theta2_max", p.theta2_max}}},
  };
}

void from_json(const nlohmann::json& j, PhysicalParams& p) {
  if (auto it = j.find("link"); it != j.end()) {
    read_opt(*it, "inertia", p.inertia);
    read_opt(*it, "joint_friction", p.joint_friction);
    read_opt(*it, "external_torque", p.external_torque);
  }
  if (auto it = j.find("spring"); it != j.end()) {
    read_opt(*it, "spring_const", p.spring_const);
    read_opt(*it, "lever_b", p.lever_b);
    read_opt(*it, "lever_c", p.lever_c);
    read_opt(*it, "drum_radius", p.drum_radius);
  }
  if (auto it = j.find("servo"); it != j.end()) read_opt(*it, "servo_bandwidth", p.servo_bandwidth);
  if (auto it = j.find("damping"); it != j.end()) {
    read_opt(*it, "max_damping", p.max_damping);
    read_opt(*it, "damping_power", p.damping_power);
  }
  if (auto it = j.find("motor"); it != j.end()) {
    read_opt(*it, "motor_resistance", p.motor_resistance);
    read_opt(*it, "torque_const", p.torque_const);
    read_opt(*it, "gear_ratio", p.gear_ratio);
    read_opt(*it, "rotor_inertia", p.rotor_inertia);
    read_opt(*it, "motor_friction", p.motor_friction);
  }
  if (auto it = j.find("limits"); it != j.end()) {
    if (it->contains("u_min")) p.u_min = control_from(*it, "u_min");
    if (it->contains("u_max")) p.u_max = control_from(*it, "u_max");
    read_opt(*it, "theta2_min", p.theta2_min);
    read_opt(*it, "theta2_max", p.theta2_max);
  }
  p.validate();
}

}  // namespace viaes
