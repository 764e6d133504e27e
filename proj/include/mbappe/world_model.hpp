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

// Known world features the search simulates against: the map (centerlines,
// route, drivable area), static objects and timestamped agent tracks.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "mbappe/geometry.hpp"
#include "mbappe/kinematics.hpp"

namespace mbappe {

/// Sampling period of every track, prediction and episode tick.
inline constexpr double kTrackStep = 0.1;

enum class AgentKind { kVehicle, kPedestrian, kObject };

const char* to_string(AgentKind kind);
AgentKind agent_kind_from_string(const std::string& name);

class Centerline {
 public:
  /// Throws Error(kConfig) unless there are >= 2 distinct consecutive points
  /// and the speed limit and lane width are positive.
  Centerline(std::string id, std::vector<Eigen::Vector2d> points,
             double speed_limit, double lane_width, bool blocked = false);

  const std::string& id() const { return id_; }
  const std::vector<Eigen::Vector2d>& points() const { return points_; }
  double speed_limit() const { return speed_limit_; }
  double lane_width() const { return lane_width_; }
  bool blocked() const { return blocked_; }
  double length() const { return cumulative_.back(); }
  /// Arc length at each vertex, starting at 0.
  const std::vector<double>& cumulative_length() const { return cumulative_; }
  double segment_heading(std::size_t segment) const { return headings_[segment]; }

  /// Point and tangent heading at arc length s (clamped to the polyline).
  Pose pose_at(double s) const;

 private:
  std::string id_;
  std::vector<Eigen::Vector2d> points_;
  double speed_limit_;
  double lane_width_;
  bool blocked_;
  std::vector<double> cumulative_;
  std::vector<double> headings_;
};

class MapModel {
 public:
  MapModel() = default;
  /// Throws Error(kConfig) for route ids that do not exist, duplicate ids or
  /// drivable polygons that are not simple.
  MapModel(std::vector<Centerline> centerlines, std::vector<Polygon> drivable_area,
           std::vector<std::string> route);

  const std::vector<Centerline>& centerlines() const { return centerlines_; }
  const std::vector<Polygon>& drivable_area() const { return drivable_; }
  const std::vector<std::string>& route() const { return route_; }

  const Centerline* find(const std::string& id) const;
  /// Indices into centerlines() in route order.
  const std::vector<std::size_t>& route_indices() const { return route_indices_; }
  /// Arc length at which each route centerline starts, in route order.
  const std::vector<double>& route_offsets() const { return route_offsets_; }
  double route_length() const;

 private:
  std::vector<Centerline> centerlines_;
  std::vector<Polygon> drivable_;
  std::vector<std::string> route_;
  std::vector<std::size_t> route_indices_;
  std::vector<double> route_offsets_;
};

struct CenterlineProjection {
  double heading_error = 0.0;  // |wrap(ego heading - segment heading)|
  double distance = 0.0;       // unsigned lateral distance
  double arc_length = 0.0;     // route arc length when projecting on the route
  const Centerline* centerline = nullptr;

  const std::string& id() const { return centerline->id(); }
  double speed_limit() const { return centerline->speed_limit(); }
};

/// Closest polyline point over all centerlines, or over the route only.
/// Throws Error(kConfig) when the candidate set is empty.
CenterlineProjection project_to_centerline(const Pose& pose, const MapModel& map,
                                           bool route_only);

/// Corridor membership: within half a lane of the nearest route centerline,
/// which must not be blocked.
bool on_route(const Pose& pose, const MapModel& map);

/// All four corners inside the union of drivable polygons.
bool footprint_in_drivable(const OrientedBox& box, const MapModel& map);

struct Obstacle {
  OrientedBox box;
  AgentKind kind = AgentKind::kObject;
};

/// Kind of the most severe overlapping obstacle (vehicle or pedestrian before
/// object, then list order), or nullopt.
std::optional<AgentKind> check_collision(const OrientedBox& ego,
                                         std::span<const Obstacle> others);

struct AgentTrack {
  std::string id;
  AgentKind kind = AgentKind::kVehicle;
  double length = 4.5;
  double width = 2.0;
  std::vector<Pose> trajectory;  // box centers at kTrackStep from t = 0
};

/// Linear interpolation between 0.1 s samples, shortest-arc headings,
/// holding the last sample beyond the end.
Pose sample_track(std::span<const Pose> samples, double t);

inline Pose agent_pose_at(const AgentTrack& track, double t) {
  return sample_track(track.trajectory, t);
}

/// Immutable scene shared by every search of an episode.
struct World {
  std::string id;
  MapModel map;
  std::vector<AgentTrack> agents;
  std::vector<OrientedBox> statics;
  /// Logged expert ego trajectory (rear axle), when the scenario carries one.
  std::vector<Pose> ego_expert;
};

/// Root context of one search.
struct WorldSnapshot {
  double time = 0.0;
  EgoState ego;
  std::vector<Pose> agent_poses;  // aligned with world->agents
  const World* world = nullptr;
};

WorldSnapshot make_snapshot(const World& world, double time, const EgoState& ego);

}  // namespace mbappe
