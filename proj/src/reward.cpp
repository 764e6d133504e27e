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

#include "mbappe/reward.hpp"

#include <algorithm>
#include <cmath>

#include "mbappe/errors.hpp"

namespace mbappe {

namespace {

constexpr double kSpacingTolerance = 1e-6;

}  // namespace

void RewardConfig::validate() const {
  if (collision_vehicle_pedestrian > 0.0 || collision_object > 0.0 ||
      off_route > 0.0 || off_drivable > 0.0) {
    throw Error(ErrorKind::kConfig, "reward: penalties must be <= 0");
  }
  if (!(heading_weight > 0.0) || !(lateral_weight > 0.0)) {
    throw Error(ErrorKind::kConfig, "reward: weights must be > 0");
  }
  if (!(lateral_cap > 0.0)) {
    throw Error(ErrorKind::kConfig, "reward: lateral_cap must be > 0");
  }
}

void obstacles_at(const RewardContext& ctx, double time, std::vector<Obstacle>& out) {
  out.clear();
  const auto& futures = ctx.predictions.agent_futures;
  for (std::size_t i = 0; i < futures.size(); ++i) {
    const AgentFuture& future = futures[i];
    out.push_back({box_at(ctx.predictions.agent_pose(i, time), future.length, future.width),
                   future.kind});
  }
  for (const OrientedBox& box : ctx.world.statics) {
    out.push_back({box, AgentKind::kObject});
  }
}

RewardBreakdown evaluate_node(const EgoState& parent,
                              std::span<const StampedState> substeps,
                              double node_time, const RewardContext& ctx) {
  if (substeps.empty()) {
    throw Error(ErrorKind::kMalformedInput, "evaluate_node: no substeps");
  }
  for (std::size_t k = 1; k < substeps.size(); ++k) {
    if (std::abs(substeps[k].time - substeps[k - 1].time - kTrackStep) > kSpacingTolerance) {
      throw Error(ErrorKind::kMalformedInput,
                  "evaluate_node: substeps must be 0.1 s apart");
    }
  }
  if (std::abs(substeps.back().time - node_time) > kSpacingTolerance) {
    throw Error(ErrorKind::kMalformedInput,
                "evaluate_node: last substep must end at the node time");
  }

  const RewardConfig& cfg = ctx.config;
  const MapModel& map = ctx.world.map;
  RewardBreakdown reward;

  const EgoState& end = substeps.back().state;
  const CenterlineProjection start_proj = project_to_centerline(parent.pose(), map, true);
  const CenterlineProjection end_proj = project_to_centerline(end.pose(), map, true);
  const double duration = kTrackStep * static_cast<double>(substeps.size());
  reward.progress = std::clamp(
      (end_proj.arc_length - start_proj.arc_length) / (start_proj.speed_limit() * duration),
      0.0, 1.0);

  std::vector<Obstacle> obstacles;
  obstacles.reserve(ctx.predictions.agent_futures.size() + ctx.world.statics.size());
  bool object_hit = false;
  for (const StampedState& sub : substeps) {
    obstacles_at(ctx, sub.time, obstacles);
    const std::optional<AgentKind> hit =
        check_collision(ego_footprint(sub.state, ctx.params), obstacles);
    if (!hit) continue;
    if (*hit != AgentKind::kObject) {
      reward.collision = cfg.collision_vehicle_pedestrian;
      break;
    }
    object_hit = true;
  }
  if (reward.collision == 0.0 && object_hit) reward.collision = cfg.collision_object;

  const bool in_corridor = !end_proj.centerline->blocked() &&
                           end_proj.distance <= 0.5 * end_proj.centerline->lane_width();
  if (!in_corridor) reward.route = cfg.off_route;
  if (!footprint_in_drivable(ego_footprint(end, ctx.params), map)) {
    reward.drivable = cfg.off_drivable;
  }
  reward.heading_center = -cfg.heading_weight * std::sin(end_proj.heading_error);
  reward.lateral_center = -cfg.lateral_weight * std::min(end_proj.distance, cfg.lateral_cap);
  return reward;
}

}  // namespace mbappe
