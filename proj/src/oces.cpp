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

#include "viaes/oces.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "viaes/parallel.hpp"
#include "viaes/types.hpp"

namespace viaes::oces {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

Vec clamp(const Vec& v, const Vec& lo, const Vec& hi) { return v.cwiseMax(lo).cwiseMin(hi); }

}  // namespace

void EsConfig::validate(std::size_t dim) const {
  if (rollouts < 2) throw InvalidInput("ES needs at least two rollouts per iteration");
  if (elites < 0) throw InvalidInput("elite count must be non-negative");
  if (!(decay > 0.0 && decay < 1.0)) throw InvalidInput("decay factor must lie in (0, 1)");
  if (static_cast<std::size_t>(exploration.size()) != dim)
    throw InvalidInput("exploration covariance does not match the policy size");
  if (!(exploration.array() > 0.0).all()) throw InvalidInput("exploration variances must be positive");
  if (!(temperature > 0.0)) throw InvalidInput("softmax temperature must be positive");
  if (!(tolerance >= 0.0)) throw InvalidInput("performance tolerance must be non-negative");
  if (!(penalty > 0.0)) throw InvalidInput("penalty constant must be positive");
  if (max_iterations < 0) throw InvalidInput("max_iterations must be non-negative");
  if (patience < 1) throw InvalidInput("patience must be at least one iteration");
}

double episodic_cost(double j_energy, double j_perf, double j_bar, double penalty) {
  return j_energy + penalty * std::max(0.0, j_perf - j_bar);
}

std::mt19937_64 substream(std::uint64_t seed, std::uint64_t iteration, std::uint64_t index) {
  const std::uint64_t a = splitmix64(seed);
  const std::uint64_t b = splitmix64(a ^ splitmix64(iteration));
  return std::mt19937_64(splitmix64(b ^ splitmix64(index + 0x632BE59BD9B4E019ULL)));
}

Vec perturb(const Vec& xi, const Vec& lo, const Vec& hi, const EsConfig& cfg, int iteration, std::mt19937_64& rng) {
  const double scale = std::pow(cfg.decay, iteration - 1);
  std::normal_distribution<double> normal(0.0, 1.0);
  Vec raw(xi.size());
  for (Eigen::Index i = 0; i < xi.size(); ++i) raw[i] = std::sqrt(scale * cfg.exploration[i]) * normal(rng);
  return clamp(xi + raw, lo, hi);
}

std::vector<double> softmax_weights(const std::vector<double>& costs, double temperature) {
  const std::size_t n = costs.size();
  if (n == 0) return {};
  const auto [mn, mx] = std::minmax_element(costs.begin(), costs.end());
  const double lo = *mn;
  const double range = *mx - lo;
  std::vector<double> w(n, 1.0 / static_cast<double>(n));
  if (!(range > 0.0)) return w;
  double z = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    w[k] = std::exp(-temperature * (costs[k] - lo) / range);
    z += w[k];
  }
  for (auto& v : w) v /= z;
  return w;
}

UpdateResult update(const std::vector<RolloutRecord>& pooled, const Vec& xi, const Vec& lo, const Vec& hi,
                    double temperature, int mu) {
  if (pooled.empty()) throw InvalidInput("update needs at least one record");
  std::vector<double> costs;
  costs.reserve(pooled.size());
  for (const auto& r : pooled) costs.push_back(r.j);

  UpdateResult out;
  out.weights = softmax_weights(costs, temperature);
  Vec step = Vec::Zero(xi.size());
  for (std::size_t k = 0; k < pooled.size(); ++k) step += out.weights[k] * (pooled[k].xi - xi);
  out.xi = clamp(xi + step, lo, hi);

  std::vector<std::size_t> order;
  for (std::size_t k = 0; k < pooled.size(); ++k)
    if (!pooled[k].failed) order.push_back(k);
  // Ties resolved by pool position so the elite set is reproducible.
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return costs[a] < costs[b]; });
  const std::size_t keep = std::min(order.size(), static_cast<std::size_t>(std::max(mu, 0)));
  for (std::size_t i = 0; i < keep; ++i) out.elites.push_back(pooled[order[i]]);
  return out;
}

LearningHistory run(const TaskAdapter& task, const EsConfig& cfg, const Vec& xi0, int jobs) {
  const std::size_t dim = task.dim();
  cfg.validate(dim);
  const Vec lo = task.lower();
  const Vec hi = task.upper();
  if (static_cast<std::size_t>(xi0.size()) != dim) throw InvalidInput("initial policy has the wrong size");
  if ((xi0.array() < lo.array()).any() || (xi0.array() > hi.array()).any())
    throw InvalidInput("initial policy outside its bounds");

  LearningHistory hist;
  const Evaluation e0 = task.evaluate(xi0);
  if (!e0.ok) throw SolverDiverged("the initial policy cannot be evaluated");
  hist.j_perf_bound = (1.0 + cfg.tolerance) * e0.j_perf;

  auto make_row = [&](int iter, const Vec& xi, const Evaluation& e, int samples) {
    HistoryRow row;
    row.iteration = iter;
    row.xi = xi;
    row.ok = e.ok;
    row.samples = samples;
    if (e.ok) {
      row.j_energy = e.j_energy;
      row.j_perf = e.j_perf;
      row.violation = std::max(0.0, e.j_perf - hist.j_perf_bound);
      row.j = episodic_cost(e.j_energy, e.j_perf, hist.j_perf_bound, cfg.penalty);
    } else {
      row.j_energy = row.j_perf = row.violation = std::nan("");
      row.j = cfg.penalty;
    }
    return row;
  };

  hist.rows.push_back(make_row(0, xi0, e0, 0));
  Vec xi = xi0;
  std::vector<RolloutRecord> elites;
  int still = 0;
  const auto k_roll = static_cast<std::size_t>(cfg.rollouts);

  for (int n = 1; n <= cfg.max_iterations; ++n) {
    std::vector<RolloutRecord> batch(k_roll);
    parallel_for(k_roll, jobs, [&](std::size_t k) {
      auto rng = substream(cfg.seed, static_cast<std::uint64_t>(n), k);
      RolloutRecord& r = batch[k];
      r.xi = perturb(xi, lo, hi, cfg, n, rng);
      const Evaluation e = task.evaluate(r.xi);
      r.failed = !e.ok;
      if (e.ok) {
        r.j_energy = e.j_energy;
        r.j_perf = e.j_perf;
        r.j = episodic_cost(e.j_energy, e.j_perf, hist.j_perf_bound, cfg.penalty);
      } else {
        r.j = cfg.penalty;
      }
    });

    std::vector<RolloutRecord> pooled = std::move(batch);
    pooled.insert(pooled.end(), elites.begin(), elites.end());
    const UpdateResult up = update(pooled, xi, lo, hi, cfg.temperature, cfg.elites);
    const double moved = (up.xi - xi).lpNorm<Eigen::Infinity>();
    xi = up.xi;
    elites = up.elites;

    const Evaluation e = task.evaluate(xi);
    hist.rows.push_back(make_row(n, xi, e, cfg.rollouts));

    still = moved < cfg.convergence_tol ? still + 1 : 0;
    if (still >= cfg.patience) {
      hist.converged = true;
      break;
    }
  }

  hist.final_xi = xi;
  hist.elites = elites;
  std::size_t best = 0;
  for (std::size_t i = 1; i < hist.rows.size(); ++i)
    if (hist.rows[i].ok && hist.rows[i].j < hist.rows[best].j) best = i;
  hist.best_xi = hist.rows[best].xi;
  hist.best_iteration = hist.rows[best].iteration;
  return hist;
}

}  // namespace viaes::oces
