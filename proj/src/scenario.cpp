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

#include "mbappe/scenario.hpp"

#include <algorithm>
#include <cmath>

#include "mbappe/errors.hpp"
#include "mbappe/json_io.hpp"

namespace mbappe {

using json = nlohmann::json;

int Scenario::tick_count() const {
  return static_cast<int>(std::ceil(duration / tick - 1e-9));
}

void validate_scenario(const Scenario& scenario) {
  auto fail = [&](const std::string& what) {
    throw Error(ErrorKind::kScenarioInvalid, "scenario '" + scenario.id() + "': " + what);
  };
  if (!(scenario.duration > 0.0)) fail("duration must be > 0");
  if (std::abs(scenario.tick - kTrackStep) > 1e-12) fail("tick must be 0.1");
  try {
    scenario.vehicle.validate();
  } catch (const Error& e) {
    fail(e.what());
  }
  if (scenario.world.map.route().empty()) fail("route is empty");
  if (scenario.world.map.drivable_area().empty()) fail("drivable_area is empty");
  for (const AgentTrack& track : scenario.world.agents) {
    if (track.trajectory.empty()) fail("agent '" + track.id + "' has an empty trajectory");
    if (!(track.length > 0.0) || !(track.width > 0.0)) {
      fail("agent '" + track.id + "' has non-positive dimensions");
    }
    const double covered = kTrackStep * static_cast<double>(track.trajectory.size() - 1);
    if (covered < scenario.duration - 1e-9) {
      fail("agent '" + track.id + "' trajectory does not cover the duration");
    }
  }
  for (const OrientedBox& box : scenario.world.statics) {
    if (!(box.length > 0.0) || !(box.width > 0.0)) fail("static box with non-positive size");
  }
  if (!(scenario.ego_init.velocity >= 0.0)) fail("ego_init.velocity must be >= 0");
  if (!footprint_in_drivable(ego_footprint(scenario.ego_init, scenario.vehicle),
                             scenario.world.map)) {
    fail("ego_init footprint is outside the drivable area");
  }
}

json scenario_to_json(const Scenario& s) {
  json doc;
  doc["id"] = s.id();
  json centerlines = json::array();
  for (const Centerline& line : s.world.map.centerlines()) {
    centerlines.push_back({{"id", line.id()},
                           {"points", points_to_json(line.points())},
                           {"speed_limit", line.speed_limit()},
                           {"lane_width", line.lane_width()},
                           {"blocked", line.blocked()}});
  }
  json drivable = json::array();
  for (const Polygon& polygon : s.world.map.drivable_area()) {
    drivable.push_back(points_to_json(polygon));
  }
  doc["map"] = {{"centerlines", centerlines},
                {"drivable_area", drivable},
                {"route", s.world.map.route()}};
  doc["ego_init"] = {{"x", s.ego_init.x},
                     {"y", s.ego_init.y},
                     {"heading", s.ego_init.heading},
                     {"velocity", s.ego_init.velocity}};
  doc["vehicle"] = {{"wheelbase", s.vehicle.wheelbase},
                    {"length", s.vehicle.length},
                    {"width", s.vehicle.width},
                    {"rear_overhang", s.vehicle.rear_overhang}};
  json agents = json::array();
  for (const AgentTrack& track : s.world.agents) {
    agents.push_back({{"id", track.id},
                      {"kind", to_string(track.kind)},
                      {"length", track.length},
                      {"width", track.width},
                      {"trajectory", poses_to_json(track.trajectory)}});
  }
  doc["agents"] = agents;
  json statics = json::array();
  for (const OrientedBox& box : s.world.statics) {
    statics.push_back({{"x", box.center.x()},
                       {"y", box.center.y()},
                       {"heading", box.heading},
                       {"length", box.length},
                       {"width", box.width}});
  }
  doc["statics"] = statics;
  if (!s.world.ego_expert.empty()) doc["ego_expert"] = poses_to_json(s.world.ego_expert);
  doc["duration"] = s.duration;
  doc["tick"] = s.tick;
  return doc;
}

Scenario scenario_from_json(const json& doc) {
  reject_unknown_keys(doc, {"id", "map", "ego_init", "vehicle", "agents", "statics",
                            "ego_expert", "duration", "tick"},
                      "scenario");
  Scenario s;
  try {
    s.world.id = doc.at("id").get<std::string>();
    const json& map = doc.at("map");
    reject_unknown_keys(map, {"centerlines", "drivable_area", "route"}, "map");
    std::vector<Centerline> centerlines;
    for (const json& line : map.at("centerlines")) {
      reject_unknown_keys(line, {"id", "points", "speed_limit", "lane_width", "blocked"},
                          "map.centerlines");
      centerlines.emplace_back(line.at("id").get<std::string>(),
                               points_from_json(line.at("points")),
                               line.at("speed_limit").get<double>(),
                               line.at("lane_width").get<double>(),
                               line.value("blocked", false));
    }
    std::vector<Polygon> drivable;
    for (const json& polygon : map.at("drivable_area")) {
      drivable.push_back(points_from_json(polygon));
    }
    s.world.map = MapModel(std::move(centerlines), std::move(drivable),
                           map.at("route").get<std::vector<std::string>>());

    const json& ego = doc.at("ego_init");
    reject_unknown_keys(ego, {"x", "y", "heading", "velocity"}, "ego_init");
    s.ego_init = {ego.at("x").get<double>(), ego.at("y").get<double>(),
                  wrap_angle(ego.at("heading").get<double>()),
                  ego.at("velocity").get<double>()};
    if (doc.contains("vehicle")) {
      const json& v = doc.at("vehicle");
      reject_unknown_keys(v, {"wheelbase", "length", "width", "rear_overhang"}, "vehicle");
      s.vehicle.wheelbase = v.value("wheelbase", s.vehicle.wheelbase);
      s.vehicle.length = v.value("length", s.vehicle.length);
      s.vehicle.width = v.value("width", s.vehicle.width);
      s.vehicle.rear_overhang = v.value("rear_overhang", s.vehicle.rear_overhang);
    }
    for (const json& agent : doc.value("agents", json::array())) {
      reject_unknown_keys(agent, {"id", "kind", "length", "width", "trajectory"}, "agents");
      AgentTrack track;
      track.id = agent.at("id").get<std::string>();
      track.kind = agent_kind_from_string(agent.at("kind").get<std::string>());
      track.length = agent.at("length").get<double>();
      track.width = agent.at("width").get<double>();
      track.trajectory = poses_from_json(agent.at("trajectory"));
      s.world.agents.push_back(std::move(track));
    }
    for (const json& box : doc.value("statics", json::array())) {
      reject_unknown_keys(box, {"x", "y", "heading", "length", "width"}, "statics");
      s.world.statics.push_back({Eigen::Vector2d(box.at("x").get<double>(),
                                                 box.at("y").get<double>()),
                                 box.at("heading").get<double>(), box.at("length").get<double>(),
                                 box.at("width").get<double>()});
    }
    if (doc.contains("ego_expert")) s.world.ego_expert = poses_from_json(doc.at("ego_expert"));
    s.duration = doc.at("duration").get<double>();
    s.tick = doc.value("tick", kTrackStep);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kInputData, std::string("scenario: ") + e.what());
  }
  return s;
}

Scenario read_scenario(const std::filesystem::path& path) {
  try {
    return scenario_from_json(read_json_file(path));
  } catch (const Error& e) {
    // Map-level invariant failures surface as configuration errors from the
    // map types; in a scenario file they are data errors.
    const ErrorKind kind = e.kind() == ErrorKind::kConfig ? ErrorKind::kScenarioInvalid : e.kind();
    throw Error(kind, path.string() + ": " + e.what());
  }
}

void write_scenario(const std::filesystem::path& path, const Scenario& scenario) {
  write_text_file(path, scenario_to_json(scenario).dump(1) + "\n");
}

Pose route_pose_at(const MapModel& map, double s) {
  const auto& indices = map.route_indices();
  const auto& offsets = map.route_offsets();
  std::size_t r = 0;
  while (r + 1 < indices.size() && s >= offsets[r + 1]) ++r;
  return map.centerlines()[indices[r]].pose_at(s - offsets[r]);
}

}  // namespace mbappe
