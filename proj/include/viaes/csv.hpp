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

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "viaes/frontier.hpp"
#include "viaes/oces.hpp"
#include "viaes/tidc.hpp"
#include "viaes/types.hpp"

namespace viaes::csv {

/// Shortest round-trip text for a double ("%.17g"; "nan", "inf", "-inf").
std::string number(double v);

/// t,q,qd,th1,th2,th1d,th2d,u1,u2,u3. The last sample repeats the final
/// held command.
std::string trajectory(const Trajectory& traj);

/// Trajectory columns plus q_des (desired vs actual).
std::string tracking(const TrackingEpisode& ep);

/// w_e,p_s,J_perf,E_in,E_elec,converged
std::string frontier(std::span<const FrontierRow> rows);

/// iter,J,J_e,J_p,violation,xi_0..xi_{d-1}
std::string history(const oces::LearningHistory& h);

/// Per-iteration mean/std over several seeds:
/// iter,n,J_mean,J_std,J_e_mean,J_e_std,J_p_mean,J_p_std.
/// Runs that stopped early contribute only to the iterations they reached.
std::string seed_summary(std::span<const oces::LearningHistory> runs);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view bytes);
std::string hex(std::uint64_t v);

/// Writes bytes verbatim; throws std::runtime_error on failure.
void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace viaes::csv
