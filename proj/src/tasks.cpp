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

#include "viaes/tasks.hpp"

#include <algorithm>
#include <cmath>

#include "viaes/dynamics.hpp"

namespace viaes {

namespace {

constexpr double kActuatorWeight = 100.0;
constexpr double kDutyWeight = 1e-3;

}  // namespace

PerformanceReference reach_sequence_reference(const ReachSequence& task, bool terminal_velocity) {
  const auto per = static_cast<std::size_t>(std::llround(task.horizon / task.dt_fine));
  const std::vector<std::size_t> steps(task.targets.size(), per);
  return reach_reference(steps, task.targets, terminal_velocity);
}

ReachEpisode reach_episode(const ReachSequence& task, const PhysicalParams& p, const Eigen::VectorXd& xi) {
  const std::size_t ns = task.targets.size();
  if (static_cast<std::size_t>(xi.size()) != 2 * ns) throw InvalidInput("reach policy must hold (w_e, p_s) per target");
  ReachEpisode ep;
  std::vector<Control> commands;
  State x = task.x0;
  for (std::size_t i = 0; i < ns; ++i) {
    OcpSpec ocp = make_reach_ocp(p, x, task.targets[i], task.horizon, xi[static_cast<Eigen::Index>(i)],
                                 xi[static_cast<Eigen::Index>(ns + i)], task.dt);
    ocp.t0 = static_cast<double>(i) * task.horizon;
    ocp.tf = ocp.t0 + task.horizon;
    ocp.cost.squared_damping_term = task.squared_damping_term;
    ep.parts.push_back(solve(ocp, p, task.solver));
    const auto& sol = ep.parts.back();
    ep.converged = ep.converged && sol.converged;
    // x_i(0) = x_{i-1}(t_f)
    x = sol.trajectory.states.back();
    commands.insert(commands.end(), sol.trajectory.controls.begin(), sol.trajectory.controls.end());
  }
  ep.fine = resimulate(task.x0, commands, task.dt, task.dt_fine, p);
  ep.report = energy_report(ep.fine, p, reach_sequence_reference(task), task.objective);
  return ep;
}

ReachAdapter::ReachAdapter(ReachSequence task, PhysicalParams p, Eigen::VectorXd lo, Eigen::VectorXd hi)
    : task_(std::move(task)), params_(std::move(p)), lo_(std::move(lo)), hi_(std::move(hi)) {
  if (static_cast<std::size_t>(lo_.size()) != dim() || static_cast<std::size_t>(hi_.size()) != dim())
    throw InvalidInput("reach policy bounds have the wrong size");
}

oces::Evaluation ReachAdapter::evaluate(const oces::Vec& xi) const {
  try {
    const ReachEpisode ep = reach_episode(task_, params_, xi);
    return {ep.report.j_energy, ep.report.j_perf, true};
  } catch (const SolverDiverged&) {
    return {0.0, 0.0, false};
  } catch (const SingularGeometry&) {
    return {0.0, 0.0, false};
  }
}

DmpEpisode dmp_episode(const DmpSequenceTask& task, const PhysicalParams& p, const Eigen::VectorXd& xi) {
  const auto& reach = task.reach;
  const auto segments = encode(task.encoding, xi);
  if (segments.size() != reach.targets.size()) throw InvalidEncoding("one DMP set per target required");
  const std::vector<double> durations(reach.targets.size(), reach.horizon);
  const Control start{reach.x0[ix::th1], reach.x0[ix::th2], task.start_duty};
  auto commands = sequence_commands(task.encoding, segments, durations, start, reach.dt_fine);
  for (auto& u : commands) u = clamp_control(u, p.u_min, p.u_max);

  DmpEpisode ep;
  ep.fine = rollout(reach.x0, commands, reach.dt_fine, p);
  const PerformanceReference ref = reach_sequence_reference(reach, true);
  ep.report = energy_report(ep.fine, p, ref, reach.objective);

  double actuator = 0.0;
  for (std::size_t k = 0; k < commands.size(); ++k) {
    const auto& u = commands[k];
    const double e1 = u[0] - ref.left[k];
    actuator += kActuatorWeight * (e1 * e1 + u[1] * u[1]) + kDutyWeight * u[2];
  }
  // Commands are held over each step, so the rectangle rule is exact.
  ep.composite_cost = ep.report.j_perf + actuator * reach.dt_fine;
  return ep;
}

DmpAdapter::DmpAdapter(DmpSequenceTask task, PhysicalParams p) : task_(std::move(task)), params_(std::move(p)) {
  if (task_.encoding.segments != task_.reach.targets.size())
    throw InvalidInput("DMP encoding and task disagree on the number of sub-movements");
}

oces::Vec DmpAdapter::lower() const {
  Eigen::VectorXd lo, hi;
  task_.encoding.bounds(lo, hi);
  return lo;
}

oces::Vec DmpAdapter::upper() const {
  Eigen::VectorXd lo, hi;
  task_.encoding.bounds(lo, hi);
  return hi;
}

oces::Evaluation DmpAdapter::evaluate(const oces::Vec& xi) const {
  try {
    const DmpEpisode ep = dmp_episode(task_, params_, xi);
    if (!std::isfinite(ep.composite_cost) || !std::isfinite(ep.report.j_energy)) return {0.0, 0.0, false};
    return {ep.report.j_energy, ep.composite_cost, true};
  } catch (const SingularGeometry&) {
    return {0.0, 0.0, false};
  } catch (const InvalidInput&) {
    return {0.0, 0.0, false};
  }
}

TrackingAdapter::TrackingAdapter(TrackingTask task, PhysicalParams p, Eigen::VectorXd lo, Eigen::VectorXd hi,
                                 EnergyObjective objective)
    : task_(std::move(task)), params_(std::move(p)), lo_(std::move(lo)), hi_(std::move(hi)), objective_(objective) {
  if (static_cast<std::size_t>(lo_.size()) != dim() || static_cast<std::size_t>(hi_.size()) != dim())
    throw InvalidInput("tracking policy bounds have the wrong size");
}

TrackingEpisode TrackingAdapter::episode(const oces::Vec& xi) const {
  const std::size_t ns = task_.targets.size();
  if (static_cast<std::size_t>(xi.size()) != dim()) throw InvalidInput("tracking policy has the wrong size");
  std::vector<double> durations(xi.data(), xi.data() + (ns - 1));
  std::vector<double> presets(xi.data() + (ns - 1), xi.data() + xi.size());
  return track_sequence(task_, durations, presets, params_);
}

oces::Evaluation TrackingAdapter::evaluate(const oces::Vec& xi) const {
  try {
    const TrackingEpisode ep = episode(xi);
    const double je = objective_ == EnergyObjective::kInputWork ? ep.report.e_in : ep.report.e_elec;
    return {je, ep.report.j_perf, true};
  } catch (const InfeasibleTiming&) {
    return {0.0, 0.0, false};
  } catch (const SingularGeometry&) {
    return {0.0, 0.0, false};
  }
}

}  // namespace viaes
