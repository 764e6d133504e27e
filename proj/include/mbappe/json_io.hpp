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

// Small helpers shared by the structured-text (JSON) readers and writers.

#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

#include "mbappe/kinematics.hpp"

namespace mbappe {

/// Throws Error(kInputData) when the file is missing or not valid JSON.
nlohmann::json read_json_file(const std::filesystem::path& path);
std::string read_text_file(const std::filesystem::path& path);
/// Throws Error(kInputData) when the file cannot be written.
void write_text_file(const std::filesystem::path& path, const std::string& text);

nlohmann::json poses_to_json(const std::vector<Pose>& poses);
std::vector<Pose> poses_from_json(const nlohmann::json& value);
nlohmann::json points_to_json(const std::vector<Eigen::Vector2d>& points);
std::vector<Eigen::Vector2d> points_from_json(const nlohmann::json& value);

/// Throws Error(kConfig) naming the first key of `object` outside `allowed`.
void reject_unknown_keys(const nlohmann::json& object,
                         const std::set<std::string>& allowed,
                         const std::string& context);

}  // namespace mbappe
