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

#include "viaes/ocp.hpp"

#include <cmath>

#include "viaes/dynamics.hpp"

namespace viaes {

std::size_t OcpSpec::steps() const { return static_cast<std::size_t>(std::llround((tf - t0) / dt)); }

State OcpSpec::initial_state() const {
  State x = x0;
  if (theta2_init) x[ix::th2] = *theta2_init;
  return x;
}

void OcpSpec::validate(const PhysicalParams& p) const {
  if (!(tf > t0)) throw InvalidInput("OCP horizon must satisfy tf > t0");
  if (!(dt > 0.0)) throw InvalidInput("OCP step must be positive");
  if (steps() == 0) throw InvalidInput("OCP horizon shorter than one step");
  if (!x0.allFinite()) throw InvalidInput("OCP initial state is not finite");
  for (int i = 0; i < 3; ++i) {
    if (!(u_min[i] <= u_max[i])) throw InvalidInput("OCP bounds must satisfy u_min <= u_max");
  }
  if (preset() < p.theta2_min - 1e-12 || preset() > p.theta2_max + 1e-12)
    throw InvalidInput("stiffness preset outside the servo travel");
  if (cost.effort_weight < 0.0) throw InvalidInput("effort weight must be non-negative");
}

OcpSpec make_reach_ocp(const PhysicalParams& p, const State& x0, double target, double duration,
                       double effort_weight, double preset, double dt) {
  OcpSpec ocp;
  ocp.x0 = x0;
  ocp.t0 = 0.0;
  ocp.tf = duration;
  ocp.dt = dt;
  ocp.cost.target = target;
  ocp.cost.effort_weight = effort_weight;
  ocp.u_min = p.u_min;
  ocp.u_max = p.u_max;
  ocp.u_min[1] = preset;
  return ocp;
}

std::vector<Control> initial_guess(const OcpSpec& ocp) {
  const State x = ocp.initial_state();
  const Control hold = clamp_control(Control{x[ix::q], ocp.preset(), 0.5}, ocp.u_min, ocp.u_max);
  return std::vector<Control>(ocp.steps(), hold);
}

double trajectory_cost(const Trajectory& traj, const CostSpec& cost) {
  double j = 0.0;
  for (std::size_t k = 0; k < traj.steps(); ++k)
    j += running_cost(traj.states[k], traj.controls[k], cost, traj.time(k)) * traj.dt;
  return j + terminal_cost(traj.states.back(), cost);
}

ReachProblem::ReachProblem(const OcpSpec& ocp, const PhysicalParams& p)
    : ocp_(ocp), params_(p), steps_(ocp.steps()), x0_(ocp.initial_state()) {}

ilqr::Vec ReachProblem::step(const ilqr::Vec& x, const ilqr::Vec& u, std::size_t) const {
  return viaes::step(State(x), Control(u), ocp_.dt, params_);
}

ilqr::Vec ReachProblem::step_linearized(const ilqr::Vec& x, const ilqr::Vec& u, std::size_t, ilqr::Mat& a,
                                        ilqr::Mat& b) const {
  StateMatrix ax;
  InputMatrix bu;
  const State next = step_with_jacobians(State(x), Control(u), ocp_.dt, params_, ax, bu);
  a = ax;
  b = bu;
  return next;
}

double ReachProblem::stage_cost(const ilqr::Vec& x, const ilqr::Vec& u, std::size_t k) const {
  return running_cost(State(x), Control(u), ocp_.cost, ocp_.t0 + static_cast<double>(k) * ocp_.dt) * ocp_.dt;
}

void ReachProblem::stage_expansion(const ilqr::Vec& x, const ilqr::Vec& u, std::size_t, ilqr::Expansion& e) const {
  const auto c = running_cost_expansion(State(x), Control(u), ocp_.cost);
  e.lx = c.lx * ocp_.dt;
  e.lu = c.lu * ocp_.dt;
  e.lxx = c.lxx * ocp_.dt;
  e.luu = c.luu * ocp_.dt;
  e.lux = c.lux * ocp_.dt;
}

double ReachProblem::final_cost(const ilqr::Vec& x) const { return terminal_cost(State(x), ocp_.cost); }

void ReachProblem::final_expansion(const ilqr::Vec& x, ilqr::Vec& lx, ilqr::Mat& lxx) const {
  const auto c = terminal_cost_expansion(State(x), ocp_.cost);
  lx = c.lx;
  lxx = c.lxx;
}

IlqrSolution solve(const OcpSpec& ocp, const PhysicalParams& p, const ilqr::Options& options) {
  const auto guess = initial_guess(ocp);
  return solve(ocp, p, guess, options);
}

IlqrSolution solve(const OcpSpec& ocp, const PhysicalParams& p, std::span<const Control> initial_controls,
                   const ilqr::Options& options) {
  ocp.validate(p);
  const ReachProblem problem(ocp, p);
  std::vector<ilqr::Vec> init(initial_controls.begin(), initial_controls.end());
  auto res = ilqr::solve(problem, std::move(init), options);

  IlqrSolution sol;
  sol.trajectory.dt = ocp.dt;
  sol.trajectory.t0 = ocp.t0;
  sol.trajectory.states.reserve(res.states.size());
  for (const auto& x : res.states) sol.trajectory.states.emplace_back(x);
  sol.trajectory.controls.reserve(res.controls.size());
  for (const auto& u : res.controls) sol.trajectory.controls.emplace_back(u);
  sol.gains.reserve(res.gains.size());
  for (const auto& g : res.gains) sol.gains.emplace_back(g);
  sol.cost_history = std::move(res.cost_history);
  sol.improvements = std::move(res.improvements);
  sol.cost = res.cost;
  sol.converged = res.converged;
  sol.iterations = res.iterations;
  return sol;
}

}  // namespace viaes
