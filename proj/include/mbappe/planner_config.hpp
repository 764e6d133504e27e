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

// Planner configuration file: search, reward, optional vehicle override,
// ablation flags, predictor and replan cadence.

#include <filesystem>
#include <optional>

#include <json.hpp>

#include "mbappe/episode.hpp"

namespace mbappe {

struct PlannerConfig {
  SearchConfig search;
  RewardConfig reward;
  std::optional<VehicleParams> vehicle;  // overrides the scenario's vehicle
  AblationSpec ablation;
  PredictorKind predictor = PredictorKind::constant_velocity();
  int replan_every = 5;

  EpisodeOptions episode_options() const;
  bool operator==(const PlannerConfig&) const = default;
};

/// Missing keys keep their defaults. Unknown keys and invalid values throw
/// Error(kConfig) naming the field; unreadable or unparsable files throw
/// Error(kInputData).
PlannerConfig planner_config_from_json(const nlohmann::json& doc);
nlohmann::json planner_config_to_json(const PlannerConfig& config);

PlannerConfig read_planner_config(const std::filesystem::path& path);

}  // namespace mbappe
