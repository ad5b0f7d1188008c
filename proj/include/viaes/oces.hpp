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
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace viaes::oces {

using Vec = Eigen::VectorXd;

struct EsConfig {
  int rollouts = 4;          // K
  int elites = 3;            // mu
  double decay = 0.95;       // gamma
  Vec exploration;           // diagonal of Sigma_eps
  double temperature = 10.0; // c
  double tolerance = 0.1;    // sigma_tol
  double penalty = 1e4;      // the large constant in the episodic cost
  int max_iterations = 100;
  double convergence_tol = 1e-3;
  int patience = 10;
  std::uint64_t seed = 1;

  /// Throws InvalidInput on inconsistent settings for a policy of size `dim`.
  void validate(std::size_t dim) const;
};

/// What one episode of the task produced.
struct Evaluation {
  double j_energy = 0.0;
  double j_perf = 0.0;
  bool ok = true;  // false when the inner loop failed
};

/// Bridges a policy vector to the inner loop. evaluate() must be callable
/// from several threads at once.
class TaskAdapter {
 public:
  virtual ~TaskAdapter() = default;
  virtual std::size_t dim() const = 0;
  virtual Vec lower() const = 0;
  virtual Vec upper() const = 0;
  virtual Evaluation evaluate(const Vec& xi) const = 0;
};

struct RolloutRecord {
  Vec xi;  // perturbed policy; its perturbation is xi - current mean
  double j_energy = 0.0;
  double j_perf = 0.0;
  double j = 0.0;
  bool failed = false;
};

/// J = J_e + C max(0, J_p - J_bar).
double episodic_cost(double j_energy, double j_perf, double j_bar, double penalty);

/// Deterministic per-rollout generator derived from (seed, iteration, index).
std::mt19937_64 substream(std::uint64_t seed, std::uint64_t iteration, std::uint64_t index);

/// eps~ ~ N(0, gamma^(n-1) Sigma); eps = clamp(eps~ + xi, lo, hi) - xi.
/// Returns the perturbed policy xi + eps.
Vec perturb(const Vec& xi, const Vec& lo, const Vec& hi, const EsConfig& cfg, int iteration, std::mt19937_64& rng);

/// Min-max normalisation followed by softmax(-c J~). Equal costs give
/// uniform weights.
std::vector<double> softmax_weights(const std::vector<double>& costs, double temperature);

struct UpdateResult {
  Vec xi;
  std::vector<double> weights;        // one per pooled record
  std::vector<RolloutRecord> elites;  // carried into the next iteration
};

/// Reward-weighted average over the pooled records followed by clamping;
/// keeps the `mu` lowest-cost non-failed records.
UpdateResult update(const std::vector<RolloutRecord>& pooled, const Vec& xi, const Vec& lo, const Vec& hi,
                    double temperature, int mu);

struct HistoryRow {
  int iteration = 0;
  double j = 0.0;
  double j_energy = 0.0;
  double j_perf = 0.0;
  double violation = 0.0;  // max(0, J_p - J_bar)
  bool ok = true;
  int samples = 0;  // perturbed rollouts evaluated this iteration
  Vec xi;
};

struct LearningHistory {
  std::vector<HistoryRow> rows;  // row 0 is the initial policy
  double j_perf_bound = 0.0;     // J_bar
  Vec final_xi;
  Vec best_xi;                   // lowest J among the unperturbed evaluations
  int best_iteration = 0;
  std::vector<RolloutRecord> elites;  // carried out of the last update, for resuming
  bool converged = false;
};

/// Algorithm 1: exploration, evaluation, update and elite reuse until the
/// mean stops moving or max_iterations is reached. Rollouts of one iteration
/// run on up to `jobs` threads; results do not depend on `jobs`.
/// J_bar = (1 + sigma_tol) J_p of the initial policy.
LearningHistory run(const TaskAdapter& task, const EsConfig& cfg, const Vec& xi0, int jobs = 1);

}  // namespace viaes::oces
