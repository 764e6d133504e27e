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

// Planar primitives used by the world model: oriented rectangles, simple
// polygons and the exact predicates the reward relies on.

#include <array>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "mbappe/kinematics.hpp"

namespace mbappe {

using Polygon = std::vector<Eigen::Vector2d>;

struct OrientedBox {
  Eigen::Vector2d center = Eigen::Vector2d::Zero();
  double heading = 0.0;
  double length = 0.0;
  double width = 0.0;

  /// Counter-clockwise: front-left, rear-left, rear-right, front-right.
  std::array<Eigen::Vector2d, 4> corners() const;
  double circumradius() const;
  bool operator==(const OrientedBox&) const = default;
};

/// Footprint of the ego at `state`. The state is the rear axle, so the box
/// center sits length/2 - rear_overhang ahead of it.
OrientedBox ego_footprint(const EgoState& state, const VehicleParams& params);

/// Box centered on a pose (used for agents, whose poses are box centers).
OrientedBox box_at(const Pose& pose, double length, double width);

/// Separating-axis overlap test on the four box axes. Zero-area contact is
/// reported as no overlap.
bool boxes_overlap(const OrientedBox& a, const OrientedBox& b);

/// Point-in-polygon by ray casting with points on the boundary counted
/// inside.
bool point_in_polygon(const Eigen::Vector2d& point, const Polygon& polygon);

/// True when no two non-adjacent edges intersect and no edge is degenerate.
bool is_simple_polygon(const Polygon& polygon);

/// Closest point on segment [a, b] to p, with the segment parameter in [0, 1].
struct SegmentProjection {
  Eigen::Vector2d point;
  double t = 0.0;
  double distance = 0.0;
};
SegmentProjection project_to_segment(const Eigen::Vector2d& p,
                                     const Eigen::Vector2d& a,
                                     const Eigen::Vector2d& b);

/// Polygon enclosing a polyline at a fixed half width (offset along the
/// averaged vertex normals). Used to build lane corridors.
Polygon corridor_polygon(std::span<const Eigen::Vector2d> polyline,
                         double half_width);

}  // namespace mbappe
