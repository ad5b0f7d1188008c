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

#include <cmath>
#include <numbers>

#include "doctest.h"

#include "viaes/tasks.hpp"

using namespace viaes;

namespace {

Eigen::VectorXd ilqr0() {
  Eigen::VectorXd xi(6);
  const double ps = std::numbers::pi / 24;
  xi << 1, 1, 1, ps, ps, ps;
  return xi;
}

}  // namespace

TEST_CASE("reach sequence chains three sub-movements") {
  const ReachSequence task;
  const auto ep = reach_episode(task, PhysicalParams{}, ilqr0());
  REQUIRE(ep.parts.size() == 3);
  CHECK(ep.fine.steps() == 3000);
  for (std::size_t i = 1; i < 3; ++i) {
    CHECK(ep.parts[i].trajectory.states.front() == ep.parts[i - 1].trajectory.states.back());
    CHECK(ep.parts[i].trajectory.t0 == doctest::Approx(static_cast<double>(i)));
  }
  // Every sub-movement ends near its target on the fine grid.
  for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(ep.fine.states[1000 * (i + 1)][ix::q] - task.targets[i]) < 0.1);
  CHECK(ep.report.e_in > 0.0);
  CHECK(ep.report.e_elec >= ep.report.e_in);
}

TEST_CASE("reach policy dimension is checked") {
  CHECK_THROWS_AS(reach_episode(ReachSequence{}, PhysicalParams{}, Eigen::VectorXd::Ones(5)), InvalidInput);
}

TEST_CASE("reach adapter reports the episode") {
  const ReachSequence task;
  Eigen::VectorXd lo(6), hi(6);
  lo << 0.01, 0.01, 0.01, 0, 0, 0;
  hi << 20, 20, 20, 1.5, 1.5, 1.5;
  const ReachAdapter a(task, PhysicalParams{}, lo, hi);
  const auto e = a.evaluate(ilqr0());
  const auto ep = reach_episode(task, PhysicalParams{}, ilqr0());
  CHECK(e.ok);
  CHECK(e.j_energy == ep.report.e_in);
  CHECK(e.j_perf == ep.report.j_perf);
}

TEST_CASE("DMP episode of the initial policy settles on the targets") {
  DmpSequenceTask task;
  const auto xi = initial_policy(task.encoding, task.reach.targets, std::numbers::pi / 24, 0.5);
  const auto ep = dmp_episode(task, PhysicalParams{}, xi);
  CHECK(ep.fine.steps() == 3000);
  CHECK(ep.composite_cost > ep.report.j_perf);
  const DmpAdapter a(task, PhysicalParams{});
  CHECK(a.dim() == 99);
  const auto e = a.evaluate(xi);
  CHECK(e.ok);
  CHECK(e.j_perf == ep.composite_cost);
}

TEST_CASE("tracking adapter splits the policy and flags infeasible timing") {
  TrackingTask task;
  Eigen::VectorXd lo(7), hi(7);
  lo << 0.3, 0.3, 0.3, 0, 0, 0, 0;
  hi << 1.2, 1.2, 1.2, 1.5, 1.5, 1.5, 1.5;
  const TrackingAdapter a(task, PhysicalParams{}, lo, hi);
  Eigen::VectorXd xi(7);
  xi << 0.5, 0.7, 0.6, 0.1, 0.2, 0.3, 0.4;
  const auto ep = a.episode(xi);
  CHECK(ep.durations[0] == 0.5);
  CHECK(ep.durations[3] == doctest::Approx(0.6));
  CHECK(a.evaluate(xi).ok);
  xi << 1.2, 1.0, 0.3, 0.1, 0.2, 0.3, 0.4;  // leaves -0.1 s for the last segment
  CHECK_FALSE(a.evaluate(xi).ok);
}
