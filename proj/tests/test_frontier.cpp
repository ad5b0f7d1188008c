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

#include "doctest.h"

#include "viaes/frontier.hpp"

using namespace viaes;

namespace {

FrontierSpec small_grid() {
  FrontierSpec s;
  s.effort_weights = {0.3, 3.0, 30.0};
  s.presets = {0.3, 0.9};
  return s;
}

}  // namespace

TEST_CASE("one row per grid point in grid order") {
  const auto spec = small_grid();
  const auto rows = frontier_sweep(spec, PhysicalParams{}, 1);
  REQUIRE(rows.size() == 6);
  std::size_t i = 0;
  for (double ps : spec.presets)
    for (double w : spec.effort_weights) {
      CHECK(rows[i].preset == ps);
      CHECK(rows[i].effort_weight == w);
      CHECK_FALSE(rows[i].failed);
      CHECK(rows[i].e_elec >= rows[i].e_in);
      ++i;
    }
}

TEST_CASE("more effort weight trades performance for energy") {
  const auto rows = frontier_sweep(small_grid(), PhysicalParams{}, 1);
  for (std::size_t c = 0; c < 2; ++c) {
    const auto& lo = rows[3 * c];
    const auto& hi = rows[3 * c + 2];
    CHECK(hi.e_in < lo.e_in);
    CHECK(hi.j_perf > lo.j_perf);
  }
}

TEST_CASE("thread count does not change the rows") {
  const auto a = frontier_sweep(small_grid(), PhysicalParams{}, 1);
  const auto b = frontier_sweep(small_grid(), PhysicalParams{}, 3);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].e_in == b[i].e_in);
    CHECK(a[i].j_perf == b[i].j_perf);
  }
}
