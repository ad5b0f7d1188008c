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

#include <Eigen/Core>
#include <vector>

namespace viaes::ilqr {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Second-order expansion of a stage cost around (x, u).
struct Expansion {
  Vec lx, lu;
  Mat lxx, luu, lux;
};

/// Discrete-time, finite-horizon optimal control problem with box-bounded
/// controls: min sum_k l(x_k, u_k, k) + l_f(x_N) s.t. x_{k+1} = f(x_k, u_k, k).
class Problem {
 public:
  virtual ~Problem() = default;

  virtual int state_dim() const = 0;
  virtual int control_dim() const = 0;
  virtual std::size_t horizon() const = 0;
  virtual Vec initial_state() const = 0;
  virtual Vec lower_bound() const = 0;
  virtual Vec upper_bound() const = 0;

  virtual Vec step(const Vec& x, const Vec& u, std::size_t k) const = 0;
  /// Returns f(x, u) and writes df/dx, df/du.
  virtual Vec step_linearized(const Vec& x, const Vec& u, std::size_t k, Mat& a, Mat& b) const = 0;

  virtual double stage_cost(const Vec& x, const Vec& u, std::size_t k) const = 0;
  virtual void stage_expansion(const Vec& x, const Vec& u, std::size_t k, Expansion& e) const = 0;
  virtual double final_cost(const Vec& x) const = 0;
  virtual void final_expansion(const Vec& x, Vec& lx, Mat& lxx) const = 0;
};

struct Options {
  int max_iterations = 300;
  double relative_tolerance = 1e-6;
  double reg_init = 10.0;  // start close to gradient descent, relax on success
  double reg_min = 1e-9;
  double reg_max = 1e10;
  double reg_increase = 10.0;
  double reg_decrease = 0.3;
  int line_search_steps = 12;  // alpha = 1, 1/2, 1/4, ...
  double armijo = 1e-4;
};

struct Result {
  std::vector<Vec> states;    // N + 1
  std::vector<Vec> controls;  // N
  std::vector<Mat> gains;     // feedback K_k of the last backward pass
  std::vector<Vec> feedforward;
  std::vector<double> cost_history;  // initial rollout, then every accepted iterate
  std::vector<double> improvements;  // cost decrease of each accepted iterate
  double cost = 0.0;
  bool converged = false;
  int iterations = 0;
};

/// Box-constrained iLQR (projected Newton step on the free controls,
/// clamped forward pass, Levenberg regularisation, backtracking line search).
///
/// Returns the best iterate with converged=false when max_iterations is hit.
/// Throws SolverDiverged when the regularisation exceeds reg_max without
/// reaching a stationary point.
Result solve(const Problem& problem, std::vector<Vec> initial_controls, const Options& options = {});

/// Box-constrained minimisation of 0.5 d'H d + g'd subject to lo <= u + d <= hi
/// by active-set refinement on the free coordinates. Returns false when the
/// free block of H is not positive definite. `free` receives the final mask.
bool solve_box_step(const Mat& h, const Vec& g, const Vec& u, const Vec& lo, const Vec& hi, Vec& step,
                    std::vector<bool>& free);

}  // namespace viaes::ilqr
