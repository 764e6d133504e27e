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

// Explicit per-node driving reward with its component breakdown.

#include <span>

#include "mbappe/kinematics.hpp"
#include "mbappe/predictor.hpp"
#include "mbappe/world_model.hpp"

namespace mbappe {

struct RewardConfig {
  double collision_vehicle_pedestrian = -5.0;
  double collision_object = -2.0;
  double off_route = -0.5;
  double off_drivable = -1.0;
  double heading_weight = 0.5;
  double lateral_weight = 0.5;
  double lateral_cap = 5.0;  // meters

  /// Throws Error(kConfig) for positive penalties or non-positive weights.
  void validate() const;
  bool operator==(const RewardConfig&) const = default;
};

struct RewardBreakdown {
  double progress = 0.0;        // [0, 1]
  double collision = 0.0;       // 0, or one of the collision penalties
  double route = 0.0;           // 0 or off_route
  double drivable = 0.0;        // 0 or off_drivable
  double heading_center = 0.0;  // -heading_weight * sin(theta)
  double lateral_center = 0.0;  // -lateral_weight * min(d, cap)

  double total() const {
    return progress + collision + route + drivable + heading_center + lateral_center;
  }
  bool operator==(const RewardBreakdown&) const = default;
};

struct StampedState {
  double time = 0.0;
  EgoState state;
};

/// Everything a node evaluation reads besides the states themselves.
struct RewardContext {
  const World& world;
  const PredictionSet& predictions;
  const RewardConfig& config;
  const VehicleParams& params;
};

/// Obstacles (predicted agents and statics) at an absolute time.
void obstacles_at(const RewardContext& ctx, double time, std::vector<Obstacle>& out);

/// Reward of the transition from `parent` through `substeps` (0.1 s apart,
/// ending at `node_time`). Collisions are checked at every substep and
/// penalized once with the most severe class; the map terms use the end
/// state. Throws Error(kMalformedInput) for empty or unevenly spaced
/// substeps.
RewardBreakdown evaluate_node(const EgoState& parent,
                              std::span<const StampedState> substeps,
                              double node_time, const RewardContext& ctx);

}  // namespace mbappe
