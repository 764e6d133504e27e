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

#include "mbappe/world_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_set>

#include "mbappe/errors.hpp"

namespace mbappe {

const char* to_string(AgentKind kind) {
  switch (kind) {
    case AgentKind::kVehicle: return "vehicle";
    case AgentKind::kPedestrian: return "pedestrian";
    case AgentKind::kObject: return "object";
  }
  return "object";
}

AgentKind agent_kind_from_string(const std::string& name) {
  if (name == "vehicle") return AgentKind::kVehicle;
  if (name == "pedestrian") return AgentKind::kPedestrian;
  if (name == "object") return AgentKind::kObject;
  throw Error(ErrorKind::kConfig, "unknown agent kind '" + name + "'");
}

Centerline::Centerline(std::string id, std::vector<Eigen::Vector2d> points,
                       double speed_limit, double lane_width, bool blocked)
    : id_(std::move(id)),
      points_(std::move(points)),
      speed_limit_(speed_limit),
      lane_width_(lane_width),
      blocked_(blocked) {
  if (points_.size() < 2) {
    throw Error(ErrorKind::kConfig,
                "centerline '" + id_ + "': needs at least 2 points");
  }
  if (!(speed_limit_ > 0.0) || !(lane_width_ > 0.0)) {
    throw Error(ErrorKind::kConfig, "centerline '" + id_ +
                                        "': speed_limit and lane_width must "
                                        "be positive");
  }
  cumulative_.reserve(points_.size());
  headings_.reserve(points_.size() - 1);
  cumulative_.push_back(0.0);
  for (std::size_t k = 0; k + 1 < points_.size(); ++k) {
    const Eigen::Vector2d delta = points_[k + 1] - points_[k];
    const double length = delta.norm();
    if (!(length > 0.0)) {
      throw Error(ErrorKind::kConfig, "centerline '" + id_ +
                                          "': consecutive points must be "
                                          "distinct");
    }
    cumulative_.push_back(cumulative_.back() + length);
    headings_.push_back(std::atan2(delta.y(), delta.x()));
  }
}

Pose Centerline::pose_at(double s) const {
  s = std::clamp(s, 0.0, length());
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), s);
  std::size_t segment = static_cast<std::size_t>(
      std::max<std::ptrdiff_t>(0, (it - cumulative_.begin()) - 1));
  segment = std::min(segment, headings_.size() - 1);
  const double seg_len = cumulative_[segment + 1] - cumulative_[segment];
  const double t = (s - cumulative_[segment]) / seg_len;
  const Eigen::Vector2d p =
      points_[segment] + t * (points_[segment + 1] - points_[segment]);
  return {p.x(), p.y(), headings_[segment]};
}

MapModel::MapModel(std::vector<Centerline> centerlines,
                   std::vector<Polygon> drivable_area,
                   std::vector<std::string> route)
    : centerlines_(std::move(centerlines)),
      drivable_(std::move(drivable_area)),
      route_(std::move(route)) {
  std::unordered_set<std::string> ids;
  for (const Centerline& line : centerlines_) {
    if (!ids.insert(line.id()).second) {
      throw Error(ErrorKind::kConfig, "duplicate centerline id '" + line.id() + "'");
    }
  }
  double offset = 0.0;
  for (const std::string& id : route_) {
    auto it = std::find_if(centerlines_.begin(), centerlines_.end(),
                           [&](const Centerline& c) { return c.id() == id; });
    if (it == centerlines_.end()) {
      throw Error(ErrorKind::kConfig, "route references unknown centerline '" + id + "'");
    }
    route_indices_.push_back(static_cast<std::size_t>(it - centerlines_.begin()));
    route_offsets_.push_back(offset);
    offset += it->length();
  }
  for (std::size_t k = 0; k < drivable_.size(); ++k) {
    if (!is_simple_polygon(drivable_[k])) {
      throw Error(ErrorKind::kConfig,
                  "drivable_area[" + std::to_string(k) + "] is not a simple polygon");
    }
  }
}

const Centerline* MapModel::find(const std::string& id) const {
  for (const Centerline& line : centerlines_) {
    if (line.id() == id) return &line;
  }
  return nullptr;
}

double MapModel::route_length() const {
  if (route_indices_.empty()) return 0.0;
  return route_offsets_.back() + centerlines_[route_indices_.back()].length();
}

namespace {

void project_onto(const Pose& pose, const Centerline& line, double offset,
                  double& best_distance, CenterlineProjection& best) {
  const Eigen::Vector2d p = pose.position();
  const auto& points = line.points();
  const auto& cumulative = line.cumulative_length();
  for (std::size_t k = 0; k + 1 < points.size(); ++k) {
    const SegmentProjection proj = project_to_segment(p, points[k], points[k + 1]);
    if (proj.distance < best_distance) {
      best_distance = proj.distance;
      best.distance = proj.distance;
      best.arc_length =
          offset + cumulative[k] + proj.t * (cumulative[k + 1] - cumulative[k]);
      best.heading_error =
          std::abs(wrap_angle(pose.heading - line.segment_heading(k)));
      best.centerline = &line;
    }
  }
}

}  // namespace

CenterlineProjection project_to_centerline(const Pose& pose, const MapModel& map,
                                           bool route_only) {
  CenterlineProjection best;
  double best_distance = std::numeric_limits<double>::infinity();
  if (route_only) {
    const auto& indices = map.route_indices();
    for (std::size_t r = 0; r < indices.size(); ++r) {
      project_onto(pose, map.centerlines()[indices[r]], map.route_offsets()[r],
                   best_distance, best);
    }
  } else {
    for (const Centerline& line : map.centerlines()) {
      project_onto(pose, line, 0.0, best_distance, best);
    }
  }
  if (best.centerline == nullptr) {
    throw Error(ErrorKind::kConfig, route_only
                                        ? "project_to_centerline: map has no route"
                                        : "project_to_centerline: map has no centerlines");
  }
  return best;
}

bool on_route(const Pose& pose, const MapModel& map) {
  const CenterlineProjection proj = project_to_centerline(pose, map, true);
  return !proj.centerline->blocked() &&
         proj.distance <= 0.5 * proj.centerline->lane_width();
}

bool footprint_in_drivable(const OrientedBox& box, const MapModel& map) {
  for (const Eigen::Vector2d& corner : box.corners()) {
    const bool inside = std::any_of(
        map.drivable_area().begin(), map.drivable_area().end(),
        [&](const Polygon& polygon) { return point_in_polygon(corner, polygon); });
    if (!inside) return false;
  }
  return true;
}

std::optional<AgentKind> check_collision(const OrientedBox& ego,
                                         std::span<const Obstacle> others) {
  std::optional<AgentKind> hit;
  for (const Obstacle& other : others) {
    if (hit && other.kind == AgentKind::kObject) continue;
    if (!boxes_overlap(ego, other.box)) continue;
    if (other.kind != AgentKind::kObject) return other.kind;
    hit = other.kind;
  }
  return hit;
}

Pose sample_track(std::span<const Pose> samples, double t) {
  if (samples.empty()) return {};
  if (!(t > 0.0)) return samples.front();
  double position = t / kTrackStep;
  const double nearest = std::round(position);
  if (std::abs(position - nearest) < 1e-9) position = nearest;
  const double last = static_cast<double>(samples.size() - 1);
  if (position >= last) return samples.back();
  const auto index = static_cast<std::size_t>(position);
  const double frac = position - static_cast<double>(index);
  const Pose& a = samples[index];
  if (frac == 0.0) return a;
  const Pose& b = samples[index + 1];
  return {a.x + frac * (b.x - a.x), a.y + frac * (b.y - a.y),
          wrap_angle(a.heading + frac * wrap_angle(b.heading - a.heading))};
}

WorldSnapshot make_snapshot(const World& world, double time, const EgoState& ego) {
  WorldSnapshot snapshot;
  snapshot.time = time;
  snapshot.ego = ego;
  snapshot.world = &world;
  snapshot.agent_poses.reserve(world.agents.size());
  for (const AgentTrack& track : world.agents) {
    snapshot.agent_poses.push_back(agent_pose_at(track, time));
  }
  return snapshot;
}

}  // namespace mbappe
