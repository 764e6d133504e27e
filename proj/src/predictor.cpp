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

#include "mbappe/predictor.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mbappe/errors.hpp"
#include "mbappe/json_io.hpp"

namespace mbappe {

namespace {

using json = nlohmann::json;

std::vector<Pose> straight_extrapolation(const Pose& start, double speed,
                                         std::size_t count) {
  std::vector<Pose> poses(count);
  const double cos_h = std::cos(start.heading);
  const double sin_h = std::sin(start.heading);
  for (std::size_t k = 0; k < count; ++k) {
    const double travelled = speed * kTrackStep * static_cast<double>(k);
    poses[k] = {start.x + travelled * cos_h, start.y + travelled * sin_h,
                start.heading};
  }
  return poses;
}

AgentFuture future_header(const AgentTrack& track) {
  AgentFuture future;
  future.id = track.id;
  future.kind = track.kind;
  future.length = track.length;
  future.width = track.width;
  return future;
}

void check_horizon(double horizon) {
  if (!(horizon > 0.0)) {
    throw Error(ErrorKind::kMalformedInput, "predict: horizon must be positive");
  }
}

class ConstantVelocityPredictor final : public Predictor {
 public:
  PredictionSet predict(const WorldSnapshot& snapshot, double horizon) const override {
    check_horizon(horizon);
    const std::size_t count = prediction_length(horizon);
    PredictionSet out;
    out.start_time = snapshot.time;
    out.horizon = horizon;
    out.ego_prior = straight_extrapolation(snapshot.ego.pose(), snapshot.ego.velocity, count);
    for (const AgentTrack& track : snapshot.world->agents) {
      const Pose now = agent_pose_at(track, snapshot.time);
      double speed = 0.0;
      // Only samples up to the snapshot time are observable.
      if (track.trajectory.size() >= 2 && snapshot.time >= kTrackStep - 1e-9) {
        const Pose previous = agent_pose_at(track, snapshot.time - kTrackStep);
        speed = (now.position() - previous.position()).norm() / kTrackStep;
      }
      AgentFuture future = future_header(track);
      future.poses = straight_extrapolation(now, speed, count);
      out.agent_futures.push_back(std::move(future));
    }
    return out;
  }
};

class ScriptedPredictor final : public Predictor {
 public:
  PredictionSet predict(const WorldSnapshot& snapshot, double horizon) const override {
    check_horizon(horizon);
    const std::size_t count = prediction_length(horizon);
    const World& world = *snapshot.world;
    PredictionSet out;
    out.start_time = snapshot.time;
    out.horizon = horizon;
    auto replay = [&](std::span<const Pose> samples) {
      std::vector<Pose> poses(count);
      for (std::size_t k = 0; k < count; ++k) {
        poses[k] = sample_track(samples, snapshot.time + kTrackStep * static_cast<double>(k));
      }
      return poses;
    };
    out.ego_prior = world.ego_expert.empty()
                        ? straight_extrapolation(snapshot.ego.pose(), snapshot.ego.velocity, count)
                        : replay(world.ego_expert);
    for (const AgentTrack& track : world.agents) {
      AgentFuture future = future_header(track);
      future.poses = replay(track.trajectory);
      out.agent_futures.push_back(std::move(future));
    }
    return out;
  }
};

class FilePredictor final : public Predictor {
 public:
  explicit FilePredictor(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) {
      throw Error(ErrorKind::kConfig,
                  "predictor file does not exist: " + path.string());
    }
    for (TrajectoryRecord& record : read_trajectory_records(path)) {
      Key key{record.scenario_id, tick_of(record.t0), record.agent_id};
      records_[std::move(key)] = std::move(record.poses);
    }
  }

  PredictionSet predict(const WorldSnapshot& snapshot, double horizon) const override {
    check_horizon(horizon);
    const std::size_t count = prediction_length(horizon);
    const World& world = *snapshot.world;
    PredictionSet out;
    out.start_time = snapshot.time;
    out.horizon = horizon;
    out.ego_prior = lookup(world.id, snapshot.time, kEgoRecordId, count);
    for (const AgentTrack& track : world.agents) {
      AgentFuture future = future_header(track);
      future.poses = lookup(world.id, snapshot.time, track.id, count);
      out.agent_futures.push_back(std::move(future));
    }
    return out;
  }

 private:
  using Key = std::tuple<std::string, long long, std::string>;

  static long long tick_of(double t) { return std::llround(t / kTrackStep); }

  std::vector<Pose> lookup(const std::string& scenario, double t0,
                           const std::string& agent, std::size_t count) const {
    auto it = records_.find(Key{scenario, tick_of(t0), agent});
    if (it == records_.end() || it->second.empty()) {
      std::ostringstream key;
      key << "(scenario_id=" << scenario << ", t0=" << t0 << ", agent_id=" << agent << ")";
      throw Error(ErrorKind::kPredictionUnavailable,
                  "no precomputed trajectory for " + key.str());
    }
    // Short records hold their final pose.
    std::vector<Pose> poses(it->second.begin(),
                            it->second.begin() + static_cast<std::ptrdiff_t>(
                                                     std::min(count, it->second.size())));
    poses.resize(count, it->second.back());
    return poses;
  }

  std::map<Key, std::vector<Pose>> records_;
};

}  // namespace

const AgentFuture* PredictionSet::find(const std::string& id) const {
  for (const AgentFuture& future : agent_futures) {
    if (future.id == id) return &future;
  }
  return nullptr;
}

std::size_t prediction_length(double horizon) {
  return static_cast<std::size_t>(std::ceil(horizon / kTrackStep - 1e-9));
}

std::string PredictorKind::name() const {
  switch (type) {
    case Type::kConstantVelocity: return "cv";
    case Type::kScripted: return "scripted";
    case Type::kFromFile: return "file";
  }
  return "cv";
}

std::unique_ptr<Predictor> make_predictor(const PredictorKind& kind) {
  switch (kind.type) {
    case PredictorKind::Type::kConstantVelocity:
      return std::make_unique<ConstantVelocityPredictor>();
    case PredictorKind::Type::kScripted:
      return std::make_unique<ScriptedPredictor>();
    case PredictorKind::Type::kFromFile:
      return std::make_unique<FilePredictor>(kind.path);
  }
  throw Error(ErrorKind::kConfig, "unknown predictor kind");
}

PredictionSet predict(const WorldSnapshot& snapshot, double horizon,
                      const PredictorKind& kind) {
  return make_predictor(kind)->predict(snapshot, horizon);
}

std::vector<TrajectoryRecord> read_trajectory_records(const std::filesystem::path& path) {
  const json doc = read_json_file(path);
  std::vector<TrajectoryRecord> records;
  try {
    for (const json& item : doc.at("records")) {
      TrajectoryRecord record;
      record.scenario_id = item.at("scenario_id").get<std::string>();
      record.t0 = item.at("t0").get<double>();
      record.agent_id = item.at("agent_id").get<std::string>();
      record.poses = poses_from_json(item.at("poses"));
      records.push_back(std::move(record));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kInputData, path.string() + ": " + e.what());
  }
  return records;
}

void write_trajectory_records(const std::filesystem::path& path,
                              const std::vector<TrajectoryRecord>& records) {
  json doc;
  doc["records"] = json::array();
  for (const TrajectoryRecord& record : records) {
    doc["records"].push_back({{"scenario_id", record.scenario_id},
                              {"t0", record.t0},
                              {"agent_id", record.agent_id},
                              {"poses", poses_to_json(record.poses)}});
  }
  write_text_file(path, doc.dump(1) + "\n");
}

std::vector<GridIndex> ego_prior_actions(const PredictionSet& prediction,
                                         const VehicleParams& params,
                                         const ActionGrid& grid,
                                         double node_duration) {
  if (prediction.ego_prior.empty()) {
    throw Error(ErrorKind::kMalformedInput, "ego_prior_actions: empty ego prior");
  }
  const auto per_node = static_cast<std::size_t>(std::llround(node_duration / kTrackStep));
  if (prediction.ego_prior.size() < per_node + 2) return {};

  const std::vector<Action> actions =
      trajectory_to_actions(prediction.ego_prior, kTrackStep, params);
  const std::size_t depths = actions.size() / per_node;
  std::vector<GridIndex> out;
  out.reserve(depths);
  for (std::size_t d = 0; d < depths; ++d) {
    Action mean;
    for (std::size_t k = d * per_node; k < (d + 1) * per_node; ++k) {
      mean.accel += actions[k].accel;
      mean.steer += actions[k].steer;
    }
    mean.accel /= static_cast<double>(per_node);
    mean.steer /= static_cast<double>(per_node);
    out.push_back(snap_to_grid(mean, grid));
  }
  return out;
}

}  // namespace mbappe
