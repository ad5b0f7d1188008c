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

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <random>

#include "doctest.h"

#include "viaes/cost.hpp"
#include "viaes/dynamics.hpp"
#include "viaes/ilqr.hpp"
#include "viaes/ocp.hpp"

using namespace viaes;

namespace {

/// x+ = A x + B u with quadratic stage and final costs.
class Lqr final : public ilqr::Problem {
 public:
  Lqr(double umax = 1e6) : umax_(umax) {
    a << 1.0, dt, 0.0, 1.0;
    b << 0.5 * dt * dt, dt;
  }
  int state_dim() const override { return 2; }
  int control_dim() const override { return 1; }
  std::size_t horizon() const override { return n; }
  ilqr::Vec initial_state() const override { return Eigen::Vector2d(1.0, 0.5); }
  ilqr::Vec lower_bound() const override { return ilqr::Vec::Constant(1, -umax_); }
  ilqr::Vec upper_bound() const override { return ilqr::Vec::Constant(1, umax_); }
  ilqr::Vec step(const ilqr::Vec& x, const ilqr::Vec& u, std::size_t) const override { return a * x + b * u; }
  ilqr::Vec step_linearized(const ilqr::Vec& x, const ilqr::Vec& u, std::size_t, ilqr::Mat& fa,
                            ilqr::Mat& fb) const override {
    fa = a;
    fb = b;
    return a * x + b * u;
  }
  double stage_cost(const ilqr::Vec& x, const ilqr::Vec& u, std::size_t) const override {
    return 0.5 * (q * x.squaredNorm() + r * u.squaredNorm());
  }
  void stage_expansion(const ilqr::Vec& x, const ilqr::Vec& u, std::size_t, ilqr::Expansion& e) const override {
    e.lx = q * x;
    e.lu = r * u;
    e.lxx = q * ilqr::Mat::Identity(2, 2);
    e.luu = ilqr::Mat::Constant(1, 1, r);
    e.lux = ilqr::Mat::Zero(1, 2);
  }
  double final_cost(const ilqr::Vec& x) const override { return 0.5 * qf * x.squaredNorm(); }
  void final_expansion(const ilqr::Vec& x, ilqr::Vec& lx, ilqr::Mat& lxx) const override {
    lx = qf * x;
    lxx = qf * ilqr::Mat::Identity(2, 2);
  }

  Eigen::Matrix2d a;
  Eigen::Vector2d b;
  double dt = 0.05, q = 1.0, r = 0.05, qf = 20.0;
  std::size_t n = 60;

 private:
  double umax_;
};

struct RiccatiSolution {
  std::vector<double> u;
  double cost = 0.0;
};

RiccatiSolution riccati(const Lqr& pr) {
  std::vector<Eigen::RowVector2d> k(pr.n);
  Eigen::Matrix2d p = pr.qf * Eigen::Matrix2d::Identity();
  for (std::size_t i = pr.n; i-- > 0;) {
    k[i] = (pr.b.transpose() * p * pr.a) / (pr.r + pr.b.dot(p * pr.b));
    p = pr.q * Eigen::Matrix2d::Identity() + pr.a.transpose() * p * (pr.a - pr.b * k[i]);
  }
  RiccatiSolution s;
  Eigen::Vector2d x = pr.initial_state();
  for (std::size_t i = 0; i < pr.n; ++i) {
    const double u = -k[i] * x;
    s.u.push_back(u);
    s.cost += 0.5 * (pr.q * x.squaredNorm() + pr.r * u * u);
    x = pr.a * x + pr.b * u;
  }
  s.cost += 0.5 * pr.qf * x.squaredNorm();
  return s;
}

double qp_value(const Eigen::MatrixXd& h, const Eigen::VectorXd& g, const Eigen::VectorXd& d) {
  return 0.5 * d.dot(h * d) + g.dot(d);
}

/// Exhaustive active-set enumeration: each coordinate free, at its lower or at its upper bound.
Eigen::VectorXd brute_box_qp(const Eigen::MatrixXd& h, const Eigen::VectorXd& g, const Eigen::VectorXd& lo,
                             const Eigen::VectorXd& hi) {
  const int n = static_cast<int>(g.size());
  int combos = 1;
  for (int i = 0; i < n; ++i) combos *= 3;
  double best = std::numeric_limits<double>::infinity();
  Eigen::VectorXd best_d = Eigen::VectorXd::Zero(n);
  for (int c = 0; c < combos; ++c) {
    Eigen::VectorXd d = Eigen::VectorXd::Zero(n);
    std::vector<int> fr;
    int code = c;
    for (int i = 0; i < n; ++i, code /= 3) {
      if (code % 3 == 0) fr.push_back(i);
      if (code % 3 == 1) d[i] = lo[i];
      if (code % 3 == 2) d[i] = hi[i];
    }
    if (!fr.empty()) {
      const int m = static_cast<int>(fr.size());
      Eigen::MatrixXd hf(m, m);
      Eigen::VectorXd rhs(m);
      for (int i = 0; i < m; ++i) {
        rhs[i] = -g[fr[i]];
        for (int j = 0; j < n; ++j)
          if (std::find(fr.begin(), fr.end(), j) == fr.end()) rhs[i] -= h(fr[i], j) * d[j];
        for (int j = 0; j < m; ++j) hf(i, j) = h(fr[i], fr[j]);
      }
      const Eigen::VectorXd df = hf.ldlt().solve(rhs);
      for (int i = 0; i < m; ++i) d[fr[i]] = df[i];
    }
    if (((d - lo).array() < -1e-12).any() || ((d - hi).array() > 1e-12).any()) continue;
    const double v = qp_value(h, g, d);
    if (v < best) {
      best = v;
      best_d = d;
    }
  }
  return best_d;
}

}  // namespace

TEST_CASE("iLQR reproduces the Riccati solution of an unconstrained LQR") {
  const Lqr pr;
  ilqr::Options opt;
  opt.reg_init = opt.reg_min;
  const auto res = ilqr::solve(pr, std::vector<ilqr::Vec>(pr.n, ilqr::Vec::Zero(1)), opt);
  const auto ref = riccati(pr);
  CHECK(res.converged);
  CHECK(res.cost == doctest::Approx(ref.cost).epsilon(1e-9));
  for (std::size_t k = 0; k < pr.n; ++k) CHECK(std::abs(res.controls[k][0] - ref.u[k]) < 1e-6);
}

TEST_CASE("default damped start still reaches the LQR optimum closely") {
  const Lqr pr;
  const auto res = ilqr::solve(pr, std::vector<ilqr::Vec>(pr.n, ilqr::Vec::Zero(1)));
  CHECK(res.cost == doctest::Approx(riccati(pr).cost).epsilon(1e-5));
}

TEST_CASE("accepted iterates never increase the cost") {
  const Lqr pr(2.0);
  const auto res = ilqr::solve(pr, std::vector<ilqr::Vec>(pr.n, ilqr::Vec::Zero(1)));
  for (std::size_t i = 1; i < res.cost_history.size(); ++i) CHECK(res.cost_history[i] <= res.cost_history[i - 1]);
  for (const auto& u : res.controls) CHECK(std::abs(u[0]) <= 2.0 + 1e-12);
}

TEST_CASE("box-constrained Newton step matches exhaustive enumeration") {
  std::mt19937_64 rng(42);
  std::normal_distribution<double> g01;
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 1 + trial % 3;
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = g01(rng);
    const Eigen::MatrixXd h = m * m.transpose() + 0.1 * Eigen::MatrixXd::Identity(n, n);
    Eigen::VectorXd g(n), u(n), lo(n), hi(n);
    for (int i = 0; i < n; ++i) {
      g[i] = 3.0 * g01(rng);
      u[i] = 0.0;
      lo[i] = -std::abs(g01(rng));
      hi[i] = std::abs(g01(rng));
    }
    Eigen::VectorXd step;
    std::vector<bool> free;
    REQUIRE(ilqr::solve_box_step(h, g, u, lo, hi, step, free));
    const Eigen::VectorXd ref = brute_box_qp(h, g, lo, hi);
    CHECK(qp_value(h, g, step) == doctest::Approx(qp_value(h, g, ref)).epsilon(1e-9).scale(1.0));
    CHECK(((step - lo).array() >= -1e-12).all());
    CHECK(((hi - step).array() >= -1e-12).all());
  }
}

TEST_CASE("reach OCP respects the preset and the box") {
  PhysicalParams p;
  State x0 = State::Zero();
  x0[ix::th2] = 0.5;
  const OcpSpec ocp = make_reach_ocp(p, x0, 0.7, 1.0, 1.0, 0.5);
  CHECK(ocp.preset() == 0.5);
  CHECK(ocp.steps() == 50);
  const auto sol = solve(ocp, p);
  CHECK(sol.trajectory.controls.size() == 50);
  for (const auto& u : sol.trajectory.controls) {
    CHECK(((u - ocp.u_min).array() >= -1e-12).all());
    CHECK(((ocp.u_max - u).array() >= -1e-12).all());
  }
  // The solution improves on holding the start command.
  const auto guess = initial_guess(ocp);
  const Trajectory held = viaes::rollout(ocp.initial_state(), guess, ocp.dt, p);
  CHECK(sol.cost < trajectory_cost(held, ocp.cost));
  CHECK(sol.cost == doctest::Approx(trajectory_cost(sol.trajectory, ocp.cost)).epsilon(1e-9));
  // It actually moves towards the target.
  CHECK(std::abs(sol.trajectory.states.back()[ix::q] - 0.7) < 0.1);
}

TEST_CASE("warm start from the optimum converges immediately to the same cost") {
  PhysicalParams p;
  State x0 = State::Zero();
  x0[ix::th2] = 0.3;
  const OcpSpec ocp = make_reach_ocp(p, x0, -0.4, 1.0, 3.0, 0.3);
  const auto a = solve(ocp, p);
  const auto b = solve(ocp, p, a.trajectory.controls);
  CHECK(b.cost <= a.cost + 1e-9 * std::abs(a.cost));
}

TEST_CASE("solver is deterministic") {
  PhysicalParams p;
  State x0 = State::Zero();
  x0[ix::th2] = 0.3;
  const OcpSpec ocp = make_reach_ocp(p, x0, 0.5, 1.0, 1.0, 0.3);
  const auto a = solve(ocp, p);
  const auto b = solve(ocp, p);
  CHECK(a.cost == b.cost);
  for (std::size_t k = 0; k < a.trajectory.controls.size(); ++k)
    CHECK(a.trajectory.controls[k] == b.trajectory.controls[k]);
}

TEST_CASE("fast-reach running cost by hand") {
  CostSpec c;
  c.target = 0.5;
  c.effort_weight = 2.0;
  State x = State::Zero();
  x[ix::q] = 0.3;
  const Control u{0.1, 0.4, 0.8};
  const double expected = 1000 * 0.04 + 2.0 * (0.16 + 0.16 + 1e-3 * (0.8 - 0.5));
  CHECK(running_cost(x, u, c) == doctest::Approx(expected).epsilon(1e-14));
  CHECK(terminal_cost(x, c) == doctest::Approx(40.0));
}

TEST_CASE("OCP validation rejects a bad horizon") {
  PhysicalParams p;
  OcpSpec ocp = make_reach_ocp(p, State::Zero(), 0.3, 1.0, 1.0, 0.2);
  ocp.dt = -0.1;
  CHECK_THROWS_AS(ocp.validate(p), InvalidInput);
}
