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

#include "viaes/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <numbers>

namespace viaes {

using nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;

void check_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || key == a;
    if (!known) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

template <typename T>
void read(const json& j, const char* key, T& out, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) return;
  try {
    out = it->get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(where + "." + key + ": " + e.what());
  }
}

void read_vec(const json& j, const char* key, Eigen::VectorXd& out, const std::string& where) {
  std::vector<double> v;
  auto it = j.find(key);
  if (it == j.end()) return;
  read(j, key, v, where);
  out = Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

State state_from(const std::vector<double>& v, const std::string& where) {
  if (v.size() != 6) throw ConfigError(where + " must have 6 entries");
  State x;
  for (int i = 0; i < 6; ++i) x[i] = v[static_cast<std::size_t>(i)];
  return x;
}

Eigen::VectorXd diag(std::initializer_list<std::pair<std::size_t, double>> blocks) {
  std::size_t n = 0;
  for (const auto& b : blocks) n += b.first;
  Eigen::VectorXd v(static_cast<Eigen::Index>(n));
  Eigen::Index i = 0;
  for (const auto& b : blocks) {
    v.segment(i, static_cast<Eigen::Index>(b.first)).setConstant(b.second);
    i += static_cast<Eigen::Index>(b.first);
  }
  return v;
}

void read_physical(const json& j, PhysicalParams& p) {
  check_keys(j, {"link", "spring", "servo", "damping", "motor", "limits"}, "physical");
  if (j.contains("link")) check_keys(j["link"], {"inertia", "joint_friction", "external_torque"}, "physical.link");
  if (j.contains("spring"))
    check_keys(j["spring"], {"spring_const", "lever_b", "lever_c", "drum_radius"}, "physical.spring");
  if (j.contains("servo")) check_keys(j["servo"], {"servo_bandwidth"}, "physical.servo");
  if (j.contains("damping")) check_keys(j["damping"], {"max_damping", "damping_power"}, "physical.damping");
  if (j.contains("motor"))
    check_keys(j["motor"], {"motor_resistance", "torque_const", "gear_ratio", "rotor_inertia", "motor_friction"},
               "physical.motor");
  if (j.contains("limits"))
    check_keys(j["limits"], {"u_min", "u_max", "theta2_min", "theta2_max"}, "physical.limits");
  // Start from the current values so partial sections only override.
  json merged;
  to_json(merged, p);
  merged.merge_patch(j);
  try {
    from_json(merged, p);
  } catch (const InvalidInput& e) {
    throw ConfigError(std::string("physical: ") + e.what());
  } catch (const json::exception& e) {
    throw ConfigError(std::string("physical: ") + e.what());
  }
}

void read_ilqr(const json& j, ilqr::Options& o) {
  const std::string w = "solver.ilqr";
  check_keys(j,
             {"max_iterations", "relative_tolerance", "reg_init", "reg_min", "reg_max", "reg_increase", "reg_decrease",
              "line_search_steps", "armijo"},
             w);
  read(j, "max_iterations", o.max_iterations, w);
  read(j, "relative_tolerance", o.relative_tolerance, w);
  read(j, "reg_init", o.reg_init, w);
  read(j, "reg_min", o.reg_min, w);
  read(j, "reg_max", o.reg_max, w);
  read(j, "reg_increase", o.reg_increase, w);
  read(j, "reg_decrease", o.reg_decrease, w);
  read(j, "line_search_steps", o.line_search_steps, w);
  read(j, "armijo", o.armijo, w);
}

json ilqr_json(const ilqr::Options& o) {
  return {{"max_iterations", o.max_iterations}, {"relative_tolerance", o.relative_tolerance},
          {"reg_init", o.reg_init},             {"reg_min", o.reg_min},
          {"reg_max", o.reg_max},               {"reg_increase", o.reg_increase},
          {"reg_decrease", o.reg_decrease},     {"line_search_steps", o.line_search_steps},
          {"armijo", o.armijo}};
}

void read_tidc(const json& j, TidcGains& g) {
  const std::string w = "solver.tidc";
  check_keys(j, {"pole", "k1", "k2", "k3", "metric", "nullspace_gain", "damping_duty"}, w);
  if (j.contains("pole")) {
    double pole = 0.0;
    read(j, "pole", pole, w);
    const TidcGains placed = TidcGains::triple_pole(pole);
    g.k1 = placed.k1;
    g.k2 = placed.k2;
    g.k3 = placed.k3;
  }
  read(j, "k1", g.k1, w);
  read(j, "k2", g.k2, w);
  read(j, "k3", g.k3, w);
  if (j.contains("metric")) {
    std::vector<std::vector<double>> m;
    read(j, "metric", m, w);
    if (m.size() != 2 || m[0].size() != 2 || m[1].size() != 2) throw ConfigError(w + ".metric must be 2x2");
    g.metric << m[0][0], m[0][1], m[1][0], m[1][1];
  }
  read(j, "nullspace_gain", g.nullspace_gain, w);
  read(j, "damping_duty", g.damping_duty, w);
}

json tidc_json(const TidcGains& g) {
  return {{"k1", g.k1},
          {"k2", g.k2},
          {"k3", g.k3},
          {"metric", {{g.metric(0, 0), g.metric(0, 1)}, {g.metric(1, 0), g.metric(1, 1)}}},
          {"nullspace_gain", g.nullspace_gain},
          {"damping_duty", g.damping_duty}};
}

void read_task(const json& j, ExperimentSpec& s) {
  const std::string w = "task";
  check_keys(j,
             {"targets", "x0", "horizon", "dt", "dt_fine", "energy_objective", "squared_damping_term", "xi0", "xi_min",
              "xi_max", "effort_weights", "presets", "target", "duration", "q0", "continuation", "total_time",
              "min_duration", "dmp"},
             w);
  std::vector<double> x0;
  read(j, "targets", s.reach.targets, w);
  s.tracking.targets = s.kind == ExperimentKind::kTask2TidcEs && j.contains("targets") ? s.reach.targets
                                                                                        : s.tracking.targets;
  if (j.contains("x0")) {
    read(j, "x0", x0, w);
    s.reach.x0 = state_from(x0, "task.x0");
    s.tracking.x0 = s.reach.x0;
  }
  read(j, "horizon", s.reach.horizon, w);
  read(j, "dt", s.reach.dt, w);
  read(j, "dt_fine", s.reach.dt_fine, w);
  s.frontier.dt = s.reach.dt;
  s.frontier.dt_fine = s.reach.dt_fine;
  s.tracking.dt = s.reach.dt_fine;
  if (j.contains("energy_objective")) {
    std::string obj;
    read(j, "energy_objective", obj, w);
    if (obj == "input")
      s.reach.objective = EnergyObjective::kInputWork;
    else if (obj == "electrical")
      s.reach.objective = EnergyObjective::kElectricalWork;
    else
      throw ConfigError("task.energy_objective must be 'input' or 'electrical'");
  }
  read(j, "squared_damping_term", s.reach.squared_damping_term, w);
  read_vec(j, "xi0", s.xi0, w);
  read_vec(j, "xi_min", s.xi_min, w);
  read_vec(j, "xi_max", s.xi_max, w);
  read(j, "effort_weights", s.frontier.effort_weights, w);
  read(j, "presets", s.frontier.presets, w);
  read(j, "target", s.frontier.target, w);
  read(j, "duration", s.frontier.duration, w);
  read(j, "q0", s.frontier.q0, w);
  read(j, "continuation", s.frontier.continuation, w);
  read(j, "total_time", s.tracking.total_time, w);
  read(j, "min_duration", s.tracking.min_duration, w);
  if (j.contains("dmp")) {
    const json& d = j["dmp"];
    check_keys(d, {"alpha_z", "beta_z", "alpha_s", "basis", "start_duty"}, "task.dmp");
    read(d, "alpha_z", s.dmp.gains.alpha_z, "task.dmp");
    read(d, "beta_z", s.dmp.gains.beta_z, "task.dmp");
    read(d, "alpha_s", s.dmp.gains.alpha_s, "task.dmp");
    read(d, "basis", s.dmp.gains.basis, "task.dmp");
    read(d, "start_duty", s.dmp_start_duty, "task.dmp");
  }
}

void read_es(const json& j, ExperimentSpec& s) {
  const std::string w = "es";
  check_keys(j,
             {"rollouts", "elites", "decay", "exploration", "temperature", "tolerance", "penalty", "max_iterations",
              "convergence_tol", "patience", "seeds"},
             w);
  auto& e = s.es;
  read(j, "rollouts", e.rollouts, w);
  read(j, "elites", e.elites, w);
  read(j, "decay", e.decay, w);
  read_vec(j, "exploration", e.exploration, w);
  read(j, "temperature", e.temperature, w);
  read(j, "tolerance", e.tolerance, w);
  read(j, "penalty", e.penalty, w);
  read(j, "max_iterations", e.max_iterations, w);
  read(j, "convergence_tol", e.convergence_tol, w);
  read(j, "patience", e.patience, w);
  read(j, "seeds", s.seeds, w);
}

}  // namespace

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kFrontier:
      return "frontier";
    case ExperimentKind::kTask1IlqrEs:
      return "task1-ilqr-es";
    case ExperimentKind::kTask1Pi2Seq:
      return "task1-pi2seq";
    case ExperimentKind::kTask2TidcEs:
      return "task2-tidc-es";
    case ExperimentKind::kValidate:
      return "validate";
  }
  return "unknown";
}

ExperimentKind kind_from_string(const std::string& name) {
  for (auto k : {ExperimentKind::kFrontier, ExperimentKind::kTask1IlqrEs, ExperimentKind::kTask1Pi2Seq,
                 ExperimentKind::kTask2TidcEs, ExperimentKind::kValidate})
    if (to_string(k) == name) return k;
  throw ConfigError("unknown experiment kind '" + name + "'");
}

ExperimentSpec default_spec(ExperimentKind kind) {
  ExperimentSpec s;
  s.kind = kind;
  const double ps0 = kPi / 24.0;
  switch (kind) {
    case ExperimentKind::kFrontier:
    case ExperimentKind::kValidate:
      break;
    case ExperimentKind::kTask1IlqrEs: {
      s.xi0 = (Eigen::VectorXd(6) << 1.0, 1.0, 1.0, ps0, ps0, ps0).finished();
      s.xi_min = (Eigen::VectorXd(6) << 0.01, 0.01, 0.01, 0.0, 0.0, 0.0).finished();
      s.xi_max = (Eigen::VectorXd(6) << 20.0, 20.0, 20.0, kPi / 2, kPi / 2, kPi / 2).finished();
      s.es.rollouts = 4;
      s.es.elites = 3;
      s.es.decay = 0.95;
      s.es.exploration = Eigen::VectorXd::Constant(6, 0.5);
      s.es.tolerance = 0.1;
      s.es.max_iterations = 100;
      s.seeds = {1, 2, 3, 4};
      break;
    }
    case ExperimentKind::kTask1Pi2Seq: {
      s.dmp.segments = s.reach.targets.size();
      s.xi0 = initial_policy(s.dmp, s.reach.targets, ps0, s.dmp_start_duty);
      s.dmp.bounds(s.xi_min, s.xi_max);
      s.es.rollouts = 45;
      s.es.elites = 15;
      s.es.decay = 0.95;
      const std::size_t nw = s.dmp.segments * 3 * static_cast<std::size_t>(s.dmp.gains.basis);
      s.es.exploration = diag({{nw, 10.0}, {s.dmp.segments * 3, 0.5}});
      s.es.tolerance = 0.1;
      s.es.max_iterations = 100;
      s.seeds = {1, 2, 3, 4};
      break;
    }
    case ExperimentKind::kTask2TidcEs: {
      s.xi0 = (Eigen::VectorXd(7) << 0.6, 0.6, 0.6, 0.2, 0.2, 0.2, 0.2).finished();
      s.xi_min = (Eigen::VectorXd(7) << 0.3, 0.3, 0.3, 0.0, 0.0, 0.0, 0.0).finished();
      s.xi_max = (Eigen::VectorXd(7) << 1.2, 1.2, 1.2, kPi / 2, kPi / 2, kPi / 2, kPi / 2).finished();
      s.es.rollouts = 10;
      s.es.elites = 3;
      s.es.decay = 0.97;
      s.es.exploration = diag({{3, 0.3}, {4, 0.5}});
      s.es.tolerance = 0.01;
      s.es.max_iterations = 300;
      s.seeds = {1};
      break;
    }
  }
  return s;
}

ExperimentSpec load_spec(ExperimentKind kind, const json& doc) {
  ExperimentSpec s = default_spec(kind);
  check_keys(doc, {"kind", "physical", "task", "es", "solver"}, "config");
  if (doc.contains("kind")) {
    std::string k;
    read(doc, "kind", k, "config");
    if (kind_from_string(k) != kind) throw ConfigError("config is for '" + k + "', not '" + to_string(kind) + "'");
  }
  if (doc.contains("physical")) read_physical(doc["physical"], s.physical);
  if (doc.contains("solver")) {
    check_keys(doc["solver"], {"ilqr", "tidc"}, "solver");
    if (doc["solver"].contains("ilqr")) read_ilqr(doc["solver"]["ilqr"], s.reach.solver);
    if (doc["solver"].contains("tidc")) read_tidc(doc["solver"]["tidc"], s.tracking.gains);
  }
  s.frontier.solver = s.reach.solver;
  const bool had_xi0 = doc.contains("task") && doc["task"].contains("xi0");
  if (doc.contains("task")) read_task(doc["task"], s);
  if (doc.contains("es")) read_es(doc["es"], s);
  if (kind == ExperimentKind::kTask1Pi2Seq) {
    // The encoding follows the task and DMP settings.
    s.dmp.segments = s.reach.targets.size();
    Eigen::VectorXd lo, hi;
    s.dmp.bounds(lo, hi);
    if (!had_xi0) s.xi0 = initial_policy(s.dmp, s.reach.targets, kPi / 24.0, s.dmp_start_duty);
    if (!(doc.contains("task") && doc["task"].contains("xi_min"))) s.xi_min = lo;
    if (!(doc.contains("task") && doc["task"].contains("xi_max"))) s.xi_max = hi;
    if (!(doc.contains("es") && doc["es"].contains("exploration")))
      s.es.exploration = diag({{s.dmp.segments * 3 * static_cast<std::size_t>(s.dmp.gains.basis), 10.0},
                               {s.dmp.segments * 3, 0.5}});
  }
  validate(s);
  return s;
}

ExperimentSpec load_spec_file(ExperimentKind kind, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("config file " + path.string() + ": " + e.what());
  }
  return load_spec(kind, doc);
}

json to_json(const ExperimentSpec& s) {
  json phys;
  to_json(phys, s.physical);
  json task = {
      {"targets", s.kind == ExperimentKind::kTask2TidcEs ? s.tracking.targets : s.reach.targets},
      {"x0", std::vector<double>(s.reach.x0.data(), s.reach.x0.data() + 6)},
      {"horizon", s.reach.horizon},
      {"dt", s.reach.dt},
      {"dt_fine", s.reach.dt_fine},
      {"energy_objective", s.reach.objective == EnergyObjective::kInputWork ? "input" : "electrical"},
      {"squared_damping_term", s.reach.squared_damping_term},
  };
  if (s.kind == ExperimentKind::kTask2TidcEs)
    task["x0"] = std::vector<double>(s.tracking.x0.data(), s.tracking.x0.data() + 6);
  if (s.xi0.size() > 0) {
    task["xi0"] = to_std(s.xi0);
    task["xi_min"] = to_std(s.xi_min);
    task["xi_max"] = to_std(s.xi_max);
  }
  if (s.kind == ExperimentKind::kFrontier) {
    task["effort_weights"] = s.frontier.effort_weights;
    task["presets"] = s.frontier.presets;
    task["target"] = s.frontier.target;
    task["duration"] = s.frontier.duration;
    task["q0"] = s.frontier.q0;
    task["continuation"] = s.frontier.continuation;
  }
  if (s.kind == ExperimentKind::kTask2TidcEs) {
    task["total_time"] = s.tracking.total_time;
    task["min_duration"] = s.tracking.min_duration;
  }
  if (s.kind == ExperimentKind::kTask1Pi2Seq) {
    task["dmp"] = {{"alpha_z", s.dmp.gains.alpha_z},
                   {"beta_z", s.dmp.gains.beta_z},
                   {"alpha_s", s.dmp.gains.alpha_s},
                   {"basis", s.dmp.gains.basis},
                   {"start_duty", s.dmp_start_duty}};
  }
  json out = {{"kind", to_string(s.kind)},
              {"physical", phys},
              {"task", task},
              {"solver", {{"ilqr", ilqr_json(s.reach.solver)}, {"tidc", tidc_json(s.tracking.gains)}}}};
  if (s.es.exploration.size() > 0) {
    out["es"] = {{"rollouts", s.es.rollouts},
                 {"elites", s.es.elites},
                 {"decay", s.es.decay},
                 {"exploration", to_std(s.es.exploration)},
                 {"temperature", s.es.temperature},
                 {"tolerance", s.es.tolerance},
                 {"penalty", s.es.penalty},
                 {"max_iterations", s.es.max_iterations},
                 {"convergence_tol", s.es.convergence_tol},
                 {"patience", s.es.patience},
                 {"seeds", s.seeds}};
  }
  return out;
}

void validate(const ExperimentSpec& s) {
  try {
    s.physical.validate();
  } catch (const InvalidInput& e) {
    throw ConfigError(std::string("physical: ") + e.what());
  }
  const double q_lo = s.physical.u_min[0];
  const double q_hi = s.physical.u_max[0];
  auto in_range = [&](const std::vector<double>& targets, const char* what) {
    if (targets.empty()) throw ConfigError(std::string(what) + " must not be empty");
    for (double t : targets)
      if (!(t >= q_lo && t <= q_hi)) throw ConfigError(std::string(what) + " outside the joint range");
  };
  if (!(s.reach.dt > 0.0) || !(s.reach.dt_fine > 0.0) || !(s.reach.horizon > 0.0))
    throw ConfigError("task.dt, task.dt_fine and task.horizon must be positive");

  switch (s.kind) {
    case ExperimentKind::kValidate:
      return;
    case ExperimentKind::kFrontier:
      if (s.frontier.effort_weights.empty() || s.frontier.presets.empty())
        throw ConfigError("frontier grids must be non-empty");
      for (double w : s.frontier.effort_weights)
        if (!(w >= 0.0)) throw ConfigError("effort weights must be non-negative");
      for (double ps : s.frontier.presets)
        if (!(ps >= s.physical.theta2_min && ps <= s.physical.theta2_max))
          throw ConfigError("stiffness preset outside the servo travel");
      in_range({s.frontier.target}, "task.target");
      return;
    case ExperimentKind::kTask1IlqrEs:
    case ExperimentKind::kTask1Pi2Seq:
      in_range(s.reach.targets, "task.targets");
      break;
    case ExperimentKind::kTask2TidcEs:
      in_range(s.tracking.targets, "task.targets");
      try {
        s.tracking.gains.validate();
      } catch (const InvalidInput& e) {
        throw ConfigError(std::string("solver.tidc: ") + e.what());
      }
      break;
  }

  std::size_t dim = 0;
  if (s.kind == ExperimentKind::kTask1IlqrEs) dim = 2 * s.reach.targets.size();
  if (s.kind == ExperimentKind::kTask1Pi2Seq) dim = s.dmp.dim();
  if (s.kind == ExperimentKind::kTask2TidcEs) dim = 2 * s.tracking.targets.size() - 1;
  const auto n = static_cast<Eigen::Index>(dim);
  if (s.xi0.size() != n || s.xi_min.size() != n || s.xi_max.size() != n)
    throw ConfigError("task.xi0 / xi_min / xi_max must have " + std::to_string(dim) + " entries");
  if ((s.xi_min.array() > s.xi_max.array()).any()) throw ConfigError("task.xi_min must not exceed xi_max");
  if ((s.xi0.array() < s.xi_min.array()).any() || (s.xi0.array() > s.xi_max.array()).any())
    throw ConfigError("task.xi0 outside [xi_min, xi_max]");
  if (s.seeds.empty()) throw ConfigError("es.seeds must not be empty");
  try {
    s.es.validate(dim);
  } catch (const InvalidInput& e) {
    throw ConfigError(std::string("es: ") + e.what());
  }
}

}  // namespace viaes
