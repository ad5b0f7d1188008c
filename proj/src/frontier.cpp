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

#include "viaes/frontier.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <optional>

#include "viaes/ocp.hpp"
#include "viaes/parallel.hpp"

namespace viaes {

namespace {

FrontierRow failed_row(double w, double ps) {
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  return FrontierRow{w, ps, nan, nan, nan, false, true};
}

}  // namespace

std::vector<FrontierRow> frontier_sweep(const FrontierSpec& spec, const PhysicalParams& p, int jobs) {
  if (spec.effort_weights.empty() || spec.presets.empty()) throw InvalidInput("frontier grids must be non-empty");
  const std::size_t nw = spec.effort_weights.size();
  std::vector<FrontierRow> rows(nw * spec.presets.size());

  // Largest weight first: heavily regularised problems are nearly convex and
  // their solutions are good seeds for the less regularised ones.
  std::vector<std::size_t> order(nw);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return spec.effort_weights[a] > spec.effort_weights[b]; });

  parallel_for(spec.presets.size(), jobs, [&](std::size_t ip) {
    const double ps = spec.presets[ip];
    State x0 = State::Zero();
    x0[ix::q] = spec.q0;
    x0[ix::th1] = spec.q0;
    x0[ix::th2] = ps;
    std::optional<std::vector<Control>> seed;
    for (std::size_t iw : order) {
      const double w = spec.effort_weights[iw];
      FrontierRow& row = rows[ip * nw + iw];
      try {
        const OcpSpec ocp = make_reach_ocp(p, x0, spec.target, spec.duration, w, ps, spec.dt);
        const IlqrSolution sol = (spec.continuation && seed) ? solve(ocp, p, *seed, spec.solver)
                                                              : solve(ocp, p, spec.solver);
        const Trajectory fine = resimulate(x0, sol.trajectory.controls, spec.dt, spec.dt_fine, p);
        const std::size_t steps[] = {fine.steps()};
        const double targets[] = {spec.target};
        const EnergyReport rep = energy_report(fine, p, reach_reference(steps, targets));
        row = FrontierRow{w, ps, rep.j_perf, rep.e_in, rep.e_elec, sol.converged, false};
        seed = sol.trajectory.controls;
      } catch (const std::exception&) {
        row = failed_row(w, ps);
        seed.reset();
      }
    }
  });
  return rows;
}

}  // namespace viaes
