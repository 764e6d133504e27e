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

#include "mbappe/json_io.hpp"

#include <fstream>
#include <sstream>

#include "mbappe/errors.hpp"

namespace mbappe {

using json = nlohmann::json;

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kInputData, "cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

json read_json_file(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::kInputData, path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::kInputData, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorKind::kInputData, "failed writing " + path.string());
}

json poses_to_json(const std::vector<Pose>& poses) {
  json out = json::array();
  for (const Pose& p : poses) out.push_back({p.x, p.y, p.heading});
  return out;
}

std::vector<Pose> poses_from_json(const json& value) {
  std::vector<Pose> poses;
  poses.reserve(value.size());
  for (const json& item : value) {
    if (!item.is_array() || item.size() != 3) {
      throw json::type_error::create(302, "pose must be [x, y, heading]", &item);
    }
    poses.push_back({item[0].get<double>(), item[1].get<double>(), item[2].get<double>()});
  }
  return poses;
}

json points_to_json(const std::vector<Eigen::Vector2d>& points) {
  json out = json::array();
  for (const Eigen::Vector2d& p : points) out.push_back({p.x(), p.y()});
  return out;
}

std::vector<Eigen::Vector2d> points_from_json(const json& value) {
  std::vector<Eigen::Vector2d> points;
  points.reserve(value.size());
  for (const json& item : value) {
    if (!item.is_array() || item.size() != 2) {
      throw json::type_error::create(302, "point must be [x, y]", &item);
    }
    points.emplace_back(item[0].get<double>(), item[1].get<double>());
  }
  return points;
}

void reject_unknown_keys(const json& object, const std::set<std::string>& allowed,
                         const std::string& context) {
  if (!object.is_object()) {
    throw Error(ErrorKind::kConfig, context + ": expected an object");
  }
  for (const auto& item : object.items()) {
    if (!allowed.contains(item.key())) {
      throw Error(ErrorKind::kConfig,
                  "unknown key '" + (context.empty() ? "" : context + ".") + item.key() + "'");
    }
  }
}

}  // namespace mbappe
