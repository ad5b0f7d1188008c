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

#include <vector>

#include "viaes/dmp.hpp"
#include "viaes/energy.hpp"
#include "viaes/ilqr.hpp"
#include "viaes/oces.hpp"
#include "viaes/ocp.hpp"
#include "viaes/params.hpp"
#include "viaes/tidc.hpp"

namespace viaes {

/// Consecutive fast reaching: one OCP per target, chained states.
struct ReachSequence {
  std::vector<double> targets{0.7, -0.35, 0.3};
  State x0 = (State() << 0.0, 0.0, 0.0, 0.1308996938995747, 0.0, 0.0).finished();
  double horizon = 1.0;  // per sub-movement
  double dt = 0.02;
  double dt_fine = 0.001;
  EnergyObjective objective = EnergyObjective::kInputWork;
  bool squared_damping_term = false;
  ilqr::Options solver;
};

struct ReachEpisode {
  std::vector<IlqrSolution> parts;
  Trajectory fine;
  EnergyReport report;
  bool converged = true;  // every sub-problem converged
};

/// Solves the sub-problems for xi = (w_e^(1..Ns), p_s^(1..Ns)), then
/// resimulates the concatenated commands on the fine grid.
ReachEpisode reach_episode(const ReachSequence& task, const PhysicalParams& p, const Eigen::VectorXd& xi);

/// Fine-grid performance reference of a reach sequence.
PerformanceReference reach_sequence_reference(const ReachSequence& task, bool terminal_velocity = false);

class ReachAdapter final : public oces::TaskAdapter {
 public:
  ReachAdapter(ReachSequence task, PhysicalParams p, Eigen::VectorXd lo, Eigen::VectorXd hi);
  std::size_t dim() const override { return 2 * task_.targets.size(); }
  oces::Vec lower() const override { return lo_; }
  oces::Vec upper() const override { return hi_; }
  oces::Evaluation evaluate(const oces::Vec& xi) const override;
  const ReachSequence& task() const { return task_; }

 private:
  ReachSequence task_;
  PhysicalParams params_;
  Eigen::VectorXd lo_, hi_;
};

/// Direct DMP command sequences for the same reaching task (no inner OC).
struct DmpSequenceTask {
  ReachSequence reach;
  DmpSequenceEncoding encoding;
  double start_duty = 0.5;
};

struct DmpEpisode {
  Trajectory fine;
  EnergyReport report;
  double composite_cost = 0.0;  // J_p for this baseline
};

/// Composite cost of the fine episode: per sub-movement terminal position and
/// velocity error, integrated squared target error, and the actuator terms
/// 100 (u1 - q*)^2 + 100 u2^2 + 1e-3 u3 on the commands.
DmpEpisode dmp_episode(const DmpSequenceTask& task, const PhysicalParams& p, const Eigen::VectorXd& xi);

class DmpAdapter final : public oces::TaskAdapter {
 public:
  DmpAdapter(DmpSequenceTask task, PhysicalParams p);
  std::size_t dim() const override { return task_.encoding.dim(); }
  oces::Vec lower() const override;
  oces::Vec upper() const override;
  oces::Evaluation evaluate(const oces::Vec& xi) const override;

 private:
  DmpSequenceTask task_;
  PhysicalParams params_;
};

/// Timing and stiffness tuning of minimal-jerk tracking:
/// xi = (t_d^(1..Ns-1), p_s^(1..Ns)).
class TrackingAdapter final : public oces::TaskAdapter {
 public:
  TrackingAdapter(TrackingTask task, PhysicalParams p, Eigen::VectorXd lo, Eigen::VectorXd hi,
                  EnergyObjective objective = EnergyObjective::kInputWork);
  std::size_t dim() const override { return 2 * task_.targets.size() - 1; }
  oces::Vec lower() const override { return lo_; }
  oces::Vec upper() const override { return hi_; }
  oces::Evaluation evaluate(const oces::Vec& xi) const override;
  TrackingEpisode episode(const oces::Vec& xi) const;

 private:
  TrackingTask task_;
  PhysicalParams params_;
  Eigen::VectorXd lo_, hi_;
  EnergyObjective objective_;
};

}  // namespace viaes
