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

// Learned world features behind a pluggable interface: future poses of every
// agent plus an ego prior trajectory.

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <tuple>
#include <vector>

#include "mbappe/kinematics.hpp"
#include "mbappe/world_model.hpp"

namespace mbappe {

struct AgentFuture {
  std::string id;
  AgentKind kind = AgentKind::kVehicle;
  double length = 0.0;
  double width = 0.0;
  std::vector<Pose> poses;  // kTrackStep spacing, poses[0] at start_time
};

struct PredictionSet {
  double start_time = 0.0;
  double horizon = 0.0;
  std::vector<Pose> ego_prior;
  std::vector<AgentFuture> agent_futures;  // aligned with World::agents

  const AgentFuture* find(const std::string& id) const;
  Pose agent_pose(std::size_t agent, double time) const {
    return sample_track(agent_futures[agent].poses, time - start_time);
  }
};

/// Number of samples covering a horizon: ceil(horizon / 0.1).
std::size_t prediction_length(double horizon);

struct PredictorKind {
  enum class Type { kConstantVelocity, kScripted, kFromFile };
  Type type = Type::kConstantVelocity;
  std::filesystem::path path;  // kFromFile only

  static PredictorKind constant_velocity() { return {Type::kConstantVelocity, {}}; }
  static PredictorKind scripted() { return {Type::kScripted, {}}; }
  static PredictorKind from_file(std::filesystem::path p) {
    return {Type::kFromFile, std::move(p)};
  }
  /// "cv", "scripted" or "file".
  std::string name() const;
  bool operator==(const PredictorKind&) const = default;
};

class Predictor {
 public:
  virtual ~Predictor() = default;
  virtual PredictionSet predict(const WorldSnapshot& snapshot,
                                double horizon) const = 0;
};

/// Throws Error(kConfig) for a FromFile predictor whose file does not exist.
std::unique_ptr<Predictor> make_predictor(const PredictorKind& kind);

/// One-shot convenience over make_predictor.
PredictionSet predict(const WorldSnapshot& snapshot, double horizon,
                      const PredictorKind& kind);

/// Precomputed trajectory keyed by (scenario id, t0, agent id). The ego
/// prior uses the agent id "ego".
struct TrajectoryRecord {
  std::string scenario_id;
  double t0 = 0.0;
  std::string agent_id;
  std::vector<Pose> poses;
};

inline constexpr const char* kEgoRecordId = "ego";

std::vector<TrajectoryRecord> read_trajectory_records(const std::filesystem::path& path);
void write_trajectory_records(const std::filesystem::path& path,
                              const std::vector<TrajectoryRecord>& records);

/// Converts the ego prior into one grid action per tree depth: inverts the
/// 0.1 s samples, averages each node interval and snaps. A prior shorter
/// than one node interval yields no actions.
std::vector<GridIndex> ego_prior_actions(const PredictionSet& prediction,
                                         const VehicleParams& params,
                                         const ActionGrid& grid = {},
                                         double node_duration = 1.0);

}  // namespace mbappe
