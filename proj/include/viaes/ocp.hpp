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

#include <optional>
#include <span>
#include <vector>

#include "viaes/cost.hpp"
#include "viaes/ilqr.hpp"
#include "viaes/params.hpp"
#include "viaes/types.hpp"

namespace viaes {

/// One sub-movement optimal control problem on the MACCEPA-VD plant.
struct OcpSpec {
  State x0 = State::Zero();
  double t0 = 0.0;
  double tf = 1.0;
  double dt = 0.02;
  CostSpec cost;
  Control u_min = Control::Zero();
  Control u_max = Control::Ones();
  /// When set, theta2(0) is overwritten (frontier sweeps start pre-tensioned).
  std::optional<double> theta2_init;

  std::size_t steps() const;
  /// Stiffness preset p_s, i.e. the lower bound of u2.
  double preset() const { return u_min[1]; }
  State initial_state() const;
  void validate(const PhysicalParams& p) const;
};

/// Fast-reach OCP with the stiffness preset applied as u2's lower bound.
OcpSpec make_reach_ocp(const PhysicalParams& p, const State& x0, double target, double duration,
                       double effort_weight, double preset, double dt = 0.02);

struct IlqrSolution {
  Trajectory trajectory;
  std::vector<Eigen::Matrix<double, 3, 6>> gains;
  std::vector<double> cost_history;
  std::vector<double> improvements;
  double cost = 0.0;
  bool converged = false;
  int iterations = 0;
};

/// Hold-at-initial-command guess: u1 = q(0), u2 = p_s, u3 = 0.5.
std::vector<Control> initial_guess(const OcpSpec& ocp);

/// Total cost sum_k l(x_k, u_k) dt + H(x_N) of a coarse trajectory.
double trajectory_cost(const Trajectory& traj, const CostSpec& cost);

/// Solves the OCP with box-constrained iLQR. Deterministic.
IlqrSolution solve(const OcpSpec& ocp, const PhysicalParams& p, const ilqr::Options& options = {});

/// Same, warm-started from `initial_controls` (clamped to the OCP bounds).
IlqrSolution solve(const OcpSpec& ocp, const PhysicalParams& p, std::span<const Control> initial_controls,
                   const ilqr::Options& options = {});

/// Adapter exposing an OcpSpec to the generic solver.
class ReachProblem final : public ilqr::Problem {
 public:
  ReachProblem(const OcpSpec& ocp, const PhysicalParams& p);

  int state_dim() const override { return 6; }
  int control_dim() const override { return 3; }
  std::size_t horizon() const override { return steps_; }
  ilqr::Vec initial_state() const override { return x0_; }
  ilqr::Vec lower_bound() const override { return ocp_.u_min; }
  ilqr::Vec upper_bound() const override { return ocp_.u_max; }

  ilqr::Vec step(const ilqr::Vec& x, const ilqr::Vec& u, std::size_t k) const override;
  ilqr::Vec step_linearized(const ilqr::Vec& x, const ilqr::Vec& u, std::size_t k, ilqr::Mat& a,
                            ilqr::Mat& b) const override;
  double stage_cost(const ilqr::Vec& x, const ilqr::Vec& u, std::size_t k) const override;
  void stage_expansion(const ilqr::Vec& x, const ilqr::Vec& u, std::size_t k, ilqr::Expansion& e) const override;
  double final_cost(const ilqr::Vec& x) const override;
  void final_expansion(const ilqr::Vec& x, ilqr::Vec& lx, ilqr::Mat& lxx) const override;

 private:
  OcpSpec ocp_;
  PhysicalParams params_;
  std::size_t steps_;
  State x0_;
};

}  // namespace viaes
