// Copyright 2026 The MBAPPE Planner Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Closed-loop scenarios: the world, the ego's initial state and vehicle, and
// the episode duration. Includes the synthetic scenario families.

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "mbappe/kinematics.hpp"
#include "mbappe/world_model.hpp"

namespace mbappe {

struct Scenario {
  World world;
  EgoState ego_init;
  VehicleParams vehicle;
  double duration = 10.0;
  double tick = kTrackStep;

  const std::string& id() const { return world.id; }
  /// ceil(duration / tick).
  int tick_count() const;
};

/// Throws Error(kScenarioInvalid) naming the violated invariant: positive
/// duration, 0.1 s tick, tracks covering the duration, ego start inside the
/// drivable area, non-empty route.
void validate_scenario(const Scenario& scenario);

nlohmann::json scenario_to_json(const Scenario& scenario);
/// Throws Error(kInputData) for missing or mistyped fields and
/// Error(kConfig) for unknown keys.
Scenario scenario_from_json(const nlohmann::json& doc);

Scenario read_scenario(const std::filesystem::path& path);
void write_scenario(const std::filesystem::path& path, const Scenario& scenario);

/// Pose on the concatenated route at arc length s (clamped).
Pose route_pose_at(const MapModel& map, double s);

/// Named numeric parameters of a scenario family. Unknown names are
/// rejected by generate_scenario.
using ScenarioParams = std::map<std::string, double>;

const std::vector<std::string>& scenario_families();

/// Deterministic synthetic scenario. `seed` jitters initial speed, gaps and
/// agent timing within small ranges. Throws Error(kConfig) for an unknown
/// family or parameter.
Scenario generate_scenario(const std::string& family, const ScenarioParams& params,
                           std::uint64_t seed);

/// Twenty scenarios: four parameter variants of each family.
std::vector<Scenario> builtin_suite(std::uint64_t seed);

/// Route-following expert: arc-length motion under an intelligent-driver
/// speed law against obstacles that enter the ego corridor, sampled at
/// 0.1 s over [0, duration].
std::vector<Pose> synthesize_expert(const World& world, const EgoState& start,
                                    const VehicleParams& vehicle, double duration);

}  // namespace mbappe
