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

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <set>

#include "mbappe/errors.hpp"
#include "mbappe/scenario.hpp"

namespace mbappe {

namespace {

constexpr double kShoulder = 1.5;
constexpr double kRouteStart = -10.0;

// Portable uniform draw; std distributions differ across standard libraries.
class Jitter {
 public:
  explicit Jitter(std::uint64_t seed)
      : engine_(seed * 0x9E3779B97F4A7C15ULL + 0x2545F4914F6CDD1DULL) {}
  double uniform(double lo, double hi) {
    const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  }

 private:
  std::mt19937_64 engine_;
};

class ParamReader {
 public:
  ParamReader(const std::string& family, const ScenarioParams& params,
              std::set<std::string> allowed)
      : params_(params) {
    for (const auto& [name, value] : params) {
      if (!allowed.contains(name)) {
        throw Error(ErrorKind::kConfig,
                    "unknown parameter '" + name + "' for scenario family '" + family + "'");
      }
    }
  }
  double get(const std::string& name, double fallback) const {
    auto it = params_.find(name);
    return it == params_.end() ? fallback : it->second;
  }

 private:
  const ScenarioParams& params_;
};

std::vector<Eigen::Vector2d> straight_points(const Eigen::Vector2d& from,
                                             const Eigen::Vector2d& to) {
  return {from, to};
}

std::size_t sample_count(double duration) {
  return static_cast<std::size_t>(std::ceil(duration / kTrackStep - 1e-9)) + 1;
}

template <typename PoseAt>
std::vector<Pose> sample_poses(double duration, PoseAt pose_at) {
  const std::size_t n = sample_count(duration);
  std::vector<Pose> poses(n);
  for (std::size_t k = 0; k < n; ++k) poses[k] = pose_at(kTrackStep * static_cast<double>(k));
  return poses;
}

Scenario finish(Scenario s, const EgoState& ego, double duration) {
  s.ego_init = ego;
  s.duration = duration;
  s.world.ego_expert = synthesize_expert(s.world, ego, s.vehicle, duration);
  validate_scenario(s);
  return s;
}

MapModel single_lane_map(const std::vector<Eigen::Vector2d>& points, double speed_limit,
                         double lane_width) {
  Polygon corridor = corridor_polygon(points, 0.5 * lane_width + kShoulder);
  return MapModel({Centerline("main", points, speed_limit, lane_width)}, {std::move(corridor)},
                  {"main"});
}

Scenario make_straight(const ScenarioParams& params) {
  const ParamReader p("straight", params,
                      {"length", "speed_limit", "initial_speed", "lane_width", "duration"});
  const double length = p.get("length", 120.0);
  const double limit = p.get("speed_limit", 5.0);
  const double duration = p.get("duration", 10.0);
  Scenario s;
  s.world.map = single_lane_map(straight_points({kRouteStart, 0.0}, {length, 0.0}), limit,
                                p.get("lane_width", 4.0));
  return finish(std::move(s), {0.0, 0.0, 0.0, p.get("initial_speed", limit)}, duration);
}

Scenario make_right_turn(const ScenarioParams& params, Jitter& jitter) {
  const ParamReader p("right_turn", params,
                      {"radius", "approach", "exit", "speed_limit", "initial_speed",
                       "lane_width", "duration"});
  const double radius = p.get("radius", 20.0) + jitter.uniform(-2.0, 2.0);
  const double approach = p.get("approach", 30.0);
  const double exit = p.get("exit", 50.0);
  const double limit = p.get("speed_limit", 5.0);
  const double duration = p.get("duration", 14.0);

  std::vector<Eigen::Vector2d> points;
  for (double x = kRouteStart; x < approach - 1e-9; x += 5.0) points.emplace_back(x, 0.0);
  const double arc = radius * std::numbers::pi / 2.0;
  const int arc_steps = static_cast<int>(std::ceil(arc));
  for (int k = 0; k <= arc_steps; ++k) {
    const double phi = (std::numbers::pi / 2.0) * k / arc_steps;
    points.emplace_back(approach + radius * std::sin(phi), -radius + radius * std::cos(phi));
  }
  for (double d = 5.0; d <= exit + 1e-9; d += 5.0) {
    points.emplace_back(approach + radius, -radius - d);
  }
  Scenario s;
  s.world.map = single_lane_map(points, limit, p.get("lane_width", 4.0));
  return finish(std::move(s), {0.0, 0.0, 0.0, p.get("initial_speed", limit)}, duration);
}

Scenario make_stopped_lead(const ScenarioParams& params, Jitter& jitter, const VehicleParams& ego) {
  const ParamReader p("stopped_lead_vehicle", params,
                      {"gap", "lead_speed", "stop_time", "speed_limit", "initial_speed",
                       "lane_width", "duration"});
  const double gap = p.get("gap", 30.0) + jitter.uniform(-3.0, 3.0);
  const double lead_speed = p.get("lead_speed", 5.0);
  const double stop_time = p.get("stop_time", 3.0);
  const double limit = p.get("speed_limit", 5.0);
  const double duration = p.get("duration", 15.0);

  Scenario s;
  s.world.map = single_lane_map(straight_points({kRouteStart, 0.0}, {160.0, 0.0}), limit,
                                p.get("lane_width", 4.0));
  AgentTrack lead;
  lead.id = "lead";
  lead.kind = AgentKind::kVehicle;
  lead.length = 4.5;
  lead.width = 2.0;
  // Bumper-to-bumper gap to the ego's start once the lead has stopped.
  const double stop_x = gap + (ego.length - ego.rear_overhang) + 0.5 * lead.length;
  lead.trajectory = sample_poses(duration, [&](double t) {
    const double remaining = std::max(0.0, stop_time - t);
    const double x = stop_x - lead_speed * remaining * remaining / (2.0 * stop_time);
    return Pose{x, 0.0, 0.0};
  });
  s.world.agents.push_back(std::move(lead));
  return finish(std::move(s), {0.0, 0.0, 0.0, p.get("initial_speed", limit)}, duration);
}

Scenario make_crossing_pedestrian(const ScenarioParams& params, Jitter& jitter,
                                  const VehicleParams& ego) {
  const ParamReader p("crossing_pedestrian", params,
                      {"crossing_x", "walk_speed", "conflict_offset", "speed_limit",
                       "initial_speed", "lane_width", "duration"});
  const double crossing_x = p.get("crossing_x", 30.0) + jitter.uniform(-3.0, 3.0);
  const double walk_speed = p.get("walk_speed", 1.4);
  const double limit = p.get("speed_limit", 5.0);
  const double duration = p.get("duration", 15.0);
  const double lane_width = p.get("lane_width", 4.0);
  const double v0 = p.get("initial_speed", limit);
  // The pedestrian reaches the lane center roughly when the ego front would.
  const double front = ego.length - ego.rear_overhang;
  const double t_center =
      (crossing_x - front) / std::max(v0, 0.5) + p.get("conflict_offset", 0.0) +
      jitter.uniform(-0.5, 0.5);
  const double half_span = 0.5 * lane_width + kShoulder + 3.0;

  Scenario s;
  s.world.map = single_lane_map(straight_points({kRouteStart, 0.0}, {160.0, 0.0}), limit,
                                lane_width);
  AgentTrack ped;
  ped.id = "pedestrian";
  ped.kind = AgentKind::kPedestrian;
  ped.length = 0.6;
  ped.width = 0.6;
  ped.trajectory = sample_poses(duration, [&](double t) {
    const double y = std::clamp((t - t_center) * walk_speed, -half_span, half_span);
    return Pose{crossing_x, y, std::numbers::pi / 2.0};
  });
  s.world.agents.push_back(std::move(ped));
  return finish(std::move(s), {0.0, 0.0, 0.0, v0}, duration);
}

Scenario make_intersection_pass(const ScenarioParams& params, Jitter& jitter,
                                const VehicleParams& ego) {
  const ParamReader p("intersection_pass", params,
                      {"cross_x", "cross_speed", "conflict_offset", "speed_limit", "initial_speed",
                       "lane_width", "duration"});
  const double cross_x = p.get("cross_x", 40.0);
  const double cross_speed = p.get("cross_speed", 8.0);
  const double limit = p.get("speed_limit", 5.0);
  const double duration = p.get("duration", 15.0);
  const double lane_width = p.get("lane_width", 4.0);
  const double v0 = p.get("initial_speed", limit);
  const double front = ego.length - ego.rear_overhang;
  const double t_pass =
      (cross_x - front) / std::max(v0, 0.5) + p.get("conflict_offset", 0.0) +
      jitter.uniform(-0.5, 0.5);
  const double cross_extent = cross_speed * (duration + 2.0) + 20.0;

  const auto main_points = straight_points({kRouteStart, 0.0}, {cross_x + 80.0, 0.0});
  const auto cross_points = straight_points({cross_x, -cross_extent}, {cross_x, cross_extent});
  const double half = 0.5 * lane_width + kShoulder;
  Scenario s;
  s.world.map = MapModel(
      {Centerline("main", main_points, limit, lane_width),
       Centerline("cross", cross_points, cross_speed, lane_width)},
      {corridor_polygon(main_points, half), corridor_polygon(cross_points, half)}, {"main"});
  AgentTrack car;
  car.id = "crossing_car";
  car.kind = AgentKind::kVehicle;
  car.length = 4.5;
  car.width = 2.0;
  car.trajectory = sample_poses(duration, [&](double t) {
    return Pose{cross_x, cross_speed * (t - t_pass), std::numbers::pi / 2.0};
  });
  s.world.agents.push_back(std::move(car));
  return finish(std::move(s), {0.0, 0.0, 0.0, v0}, duration);
}

}  // namespace

const std::vector<std::string>& scenario_families() {
  static const std::vector<std::string> families = {
      "straight", "right_turn", "stopped_lead_vehicle", "crossing_pedestrian",
      "intersection_pass"};
  return families;
}

Scenario generate_scenario(const std::string& family, const ScenarioParams& params,
                           std::uint64_t seed) {
  Jitter jitter(seed);
  const VehicleParams vehicle;
  Scenario s;
  if (family == "straight") {
    s = make_straight(params);
  } else if (family == "right_turn") {
    s = make_right_turn(params, jitter);
  } else if (family == "stopped_lead_vehicle") {
    s = make_stopped_lead(params, jitter, vehicle);
  } else if (family == "crossing_pedestrian") {
    s = make_crossing_pedestrian(params, jitter, vehicle);
  } else if (family == "intersection_pass") {
    s = make_intersection_pass(params, jitter, vehicle);
  } else {
    throw Error(ErrorKind::kConfig, "unknown scenario family '" + family + "'");
  }
  s.world.id = family + "_seed" + std::to_string(seed);
  return s;
}

std::vector<Scenario> builtin_suite(std::uint64_t seed) {
  struct Variant {
    const char* family;
    ScenarioParams params;
  };
  const std::vector<Variant> variants = {
      {"straight", {{"speed_limit", 5.0}}},
      {"straight", {{"speed_limit", 6.0}}},
      {"straight", {{"speed_limit", 7.0}}},
      {"straight", {{"speed_limit", 8.0}}},
      {"right_turn", {{"radius", 15.0}, {"speed_limit", 5.0}}},
      {"right_turn", {{"radius", 20.0}, {"speed_limit", 5.0}}},
      {"right_turn", {{"radius", 25.0}, {"speed_limit", 6.0}}},
      {"right_turn", {{"radius", 30.0}, {"speed_limit", 6.0}}},
      {"stopped_lead_vehicle", {{"gap", 20.0}, {"speed_limit", 5.0}}},
      {"stopped_lead_vehicle", {{"gap", 25.0}, {"speed_limit", 6.0}}},
      {"stopped_lead_vehicle", {{"gap", 30.0}, {"speed_limit", 5.0}}},
      {"stopped_lead_vehicle", {{"gap", 40.0}, {"speed_limit", 7.0}}},
      {"crossing_pedestrian", {{"crossing_x", 25.0}, {"speed_limit", 5.0}}},
      {"crossing_pedestrian", {{"crossing_x", 30.0}, {"speed_limit", 6.0}}},
      {"crossing_pedestrian", {{"crossing_x", 35.0}, {"speed_limit", 5.0}}},
      {"crossing_pedestrian", {{"crossing_x", 40.0}, {"speed_limit", 6.0}}},
      {"intersection_pass", {{"cross_x", 35.0}, {"speed_limit", 5.0}}},
      {"intersection_pass", {{"cross_x", 40.0}, {"speed_limit", 6.0}}},
      {"intersection_pass", {{"cross_x", 45.0}, {"speed_limit", 5.0}}},
      {"intersection_pass", {{"cross_x", 50.0}, {"speed_limit", 6.0}}},
  };
  std::vector<Scenario> suite;
  suite.reserve(variants.size());
  for (std::size_t k = 0; k < variants.size(); ++k) {
    // Distinct jitter per variant, reproducible from the suite seed.
    Scenario s = generate_scenario(variants[k].family, variants[k].params, seed * 1000 + k);
    s.world.id = std::string(variants[k].family) + "_v" + std::to_string(k % 4) + "_seed" +
                 std::to_string(seed);
    suite.push_back(std::move(s));
  }
  return suite;
}

std::vector<Pose> synthesize_expert(const World& world, const EgoState& start,
                                    const VehicleParams& vehicle, double duration) {
  constexpr double kMaxAccel = 1.5;
  constexpr double kComfortDecel = 2.0;
  constexpr double kMinGap = 3.0;
  constexpr double kHeadway = 1.2;
  constexpr double kLookahead = 3.0;

  const MapModel& map = world.map;
  const double front = vehicle.length - vehicle.rear_overhang;
  double s = project_to_centerline(start.pose(), map, true).arc_length;
  double v = start.velocity;

  auto obstacle_gap = [&](double t) {
    double gap = std::numeric_limits<double>::infinity();
    auto consider = [&](const Pose& pose, double half_extent) {
      const CenterlineProjection proj = project_to_centerline(pose, map, true);
      if (proj.distance - half_extent > 0.5 * proj.centerline->lane_width()) return;
      if (proj.arc_length + half_extent <= s) return;  // behind the rear axle
      gap = std::min(gap, std::max(0.01, proj.arc_length - half_extent - (s + front)));
    };
    for (const AgentTrack& track : world.agents) {
      const double half = 0.5 * std::max(track.length, track.width);
      for (double tau = 0.0; tau <= kLookahead + 1e-9; tau += 0.5) {
        consider(agent_pose_at(track, t + tau), half);
      }
    }
    for (const OrientedBox& box : world.statics) {
      consider({box.center.x(), box.center.y(), box.heading},
               0.5 * std::max(box.length, box.width));
    }
    return gap;
  };

  const std::size_t n = sample_count(duration);
  std::vector<Pose> poses;
  poses.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = kTrackStep * static_cast<double>(k);
    poses.push_back(route_pose_at(map, s));
    const double limit = project_to_centerline(poses.back(), map, true).speed_limit();
    double accel = kMaxAccel * (1.0 - std::pow(v / limit, 4));
    const double gap = obstacle_gap(t);
    if (std::isfinite(gap)) {
      const double desired =
          kMinGap + v * kHeadway + v * v / (2.0 * std::sqrt(kMaxAccel * kComfortDecel));
      accel -= kMaxAccel * (desired / gap) * (desired / gap);
    }
    accel = std::clamp(accel, -ActionGrid::kMaxAccel, kMaxAccel);
    s += v * kTrackStep;
    v = std::max(0.0, v + accel * kTrackStep);
  }
  return poses;
}

}  // namespace mbappe
