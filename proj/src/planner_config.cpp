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

#include "mbappe/planner_config.hpp"

#include "mbappe/errors.hpp"
#include "mbappe/json_io.hpp"

namespace mbappe {

using json = nlohmann::json;

namespace {

template <typename T>
void read_field(const json& section, const char* section_name, const char* key, T& out) {
  if (!section.contains(key)) return;
  try {
    out = section.at(key).get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorKind::kConfig,
                std::string("invalid value for '") + section_name + "." + key + "'");
  }
}

void require_object(const json& value, const char* name) {
  if (!value.is_object()) {
    throw Error(ErrorKind::kConfig, std::string("'") + name + "' must be an object");
  }
}

}  // namespace

EpisodeOptions PlannerConfig::episode_options() const {
  EpisodeOptions options;
  options.search = search;
  options.reward = reward;
  options.predictor = predictor;
  options.ablation = ablation;
  options.replan_every = replan_every;
  return options;
}

PlannerConfig planner_config_from_json(const json& doc) {
  require_object(doc, "config");
  reject_unknown_keys(doc, {"search", "reward", "vehicle", "ablation", "predictor",
                            "predictor_file", "replan_every"},
                      "config");
  PlannerConfig c;
  if (doc.contains("search")) {
    const json& s = doc.at("search");
    require_object(s, "search");
    reject_unknown_keys(s, {"n_simulations", "c_puct", "discount", "node_duration", "sub_dt",
                            "prior_horizon", "prior_variance", "accel_rate_limit",
                            "steer_rate_limit", "max_depth", "rng_seed", "backup"},
                        "search");
    SearchConfig& sc = c.search;
    read_field(s, "search", "n_simulations", sc.n_simulations);
    read_field(s, "search", "c_puct", sc.c_puct);
    read_field(s, "search", "discount", sc.discount);
    read_field(s, "search", "node_duration", sc.node_duration);
    read_field(s, "search", "sub_dt", sc.sub_dt);
    read_field(s, "search", "prior_horizon", sc.prior_horizon);
    read_field(s, "search", "prior_variance", sc.prior_variance);
    read_field(s, "search", "accel_rate_limit", sc.accel_rate_limit);
    read_field(s, "search", "steer_rate_limit", sc.steer_rate_limit);
    read_field(s, "search", "max_depth", sc.max_depth);
    read_field(s, "search", "rng_seed", sc.rng_seed);
    if (s.contains("backup")) {
      std::string mode;
      read_field(s, "search", "backup", mode);
      if (mode == "inclusive") {
        sc.backup = BackupMode::kInclusive;
      } else if (mode == "exclusive") {
        sc.backup = BackupMode::kExclusive;
      } else {
        throw Error(ErrorKind::kConfig, "invalid value for 'search.backup': '" + mode + "'");
      }
    }
  }
  if (doc.contains("reward")) {
    const json& r = doc.at("reward");
    require_object(r, "reward");
    reject_unknown_keys(r, {"collision_vehicle_pedestrian", "collision_object", "off_route",
                            "off_drivable", "heading_weight", "lateral_weight", "lateral_cap"},
                        "reward");
    RewardConfig& rc = c.reward;
    read_field(r, "reward", "collision_vehicle_pedestrian", rc.collision_vehicle_pedestrian);
    read_field(r, "reward", "collision_object", rc.collision_object);
    read_field(r, "reward", "off_route", rc.off_route);
    read_field(r, "reward", "off_drivable", rc.off_drivable);
    read_field(r, "reward", "heading_weight", rc.heading_weight);
    read_field(r, "reward", "lateral_weight", rc.lateral_weight);
    read_field(r, "reward", "lateral_cap", rc.lateral_cap);
  }
  if (doc.contains("vehicle")) {
    const json& v = doc.at("vehicle");
    require_object(v, "vehicle");
    reject_unknown_keys(v, {"wheelbase", "length", "width", "rear_overhang"}, "vehicle");
    VehicleParams vp;
    read_field(v, "vehicle", "wheelbase", vp.wheelbase);
    read_field(v, "vehicle", "length", vp.length);
    read_field(v, "vehicle", "width", vp.width);
    read_field(v, "vehicle", "rear_overhang", vp.rear_overhang);
    vp.validate();
    c.vehicle = vp;
  }
  if (doc.contains("ablation")) {
    const json& a = doc.at("ablation");
    require_object(a, "ablation");
    reject_unknown_keys(a, {"learned_prior", "handcrafted_prior", "tree_constraint",
                            "node_constraint"},
                        "ablation");
    read_field(a, "ablation", "learned_prior", c.ablation.use_learned_prior);
    read_field(a, "ablation", "handcrafted_prior", c.ablation.use_handcrafted_prior);
    read_field(a, "ablation", "tree_constraint", c.ablation.use_tree_constraint);
    read_field(a, "ablation", "node_constraint", c.ablation.use_node_constraint);
  }
  std::string predictor = "cv";
  read_field(doc, "config", "predictor", predictor);
  std::string predictor_file;
  read_field(doc, "config", "predictor_file", predictor_file);
  if (predictor == "cv") {
    c.predictor = PredictorKind::constant_velocity();
  } else if (predictor == "scripted") {
    c.predictor = PredictorKind::scripted();
  } else if (predictor == "file") {
    if (predictor_file.empty()) {
      throw Error(ErrorKind::kConfig, "'predictor_file' is required when predictor is 'file'");
    }
    c.predictor = PredictorKind::from_file(predictor_file);
  } else {
    throw Error(ErrorKind::kConfig, "invalid value for 'predictor': '" + predictor + "'");
  }
  if (predictor != "file" && !predictor_file.empty()) {
    throw Error(ErrorKind::kConfig, "'predictor_file' is only valid with predictor 'file'");
  }
  read_field(doc, "config", "replan_every", c.replan_every);
  if (c.replan_every < 1) throw Error(ErrorKind::kConfig, "'replan_every' must be >= 1");

  SearchConfig effective = c.search;
  c.ablation.apply(effective);
  effective.validate();
  c.reward.validate();
  return c;
}

json planner_config_to_json(const PlannerConfig& c) {
  const SearchConfig& s = c.search;
  json doc;
  doc["search"] = {{"n_simulations", s.n_simulations},
                   {"c_puct", s.c_puct},
                   {"discount", s.discount},
                   {"node_duration", s.node_duration},
                   {"sub_dt", s.sub_dt},
                   {"prior_horizon", s.prior_horizon},
                   {"prior_variance", s.prior_variance},
                   {"accel_rate_limit", s.accel_rate_limit},
                   {"steer_rate_limit", s.steer_rate_limit},
                   {"max_depth", s.max_depth},
                   {"rng_seed", s.rng_seed},
                   {"backup", s.backup == BackupMode::kInclusive ? "inclusive" : "exclusive"}};
  const RewardConfig& r = c.reward;
  doc["reward"] = {{"collision_vehicle_pedestrian", r.collision_vehicle_pedestrian},
                   {"collision_object", r.collision_object},
                   {"off_route", r.off_route},
                   {"off_drivable", r.off_drivable},
                   {"heading_weight", r.heading_weight},
                   {"lateral_weight", r.lateral_weight},
                   {"lateral_cap", r.lateral_cap}};
  if (c.vehicle) {
    doc["vehicle"] = {{"wheelbase", c.vehicle->wheelbase},
                      {"length", c.vehicle->length},
                      {"width", c.vehicle->width},
                      {"rear_overhang", c.vehicle->rear_overhang}};
  }
  doc["ablation"] = {{"learned_prior", c.ablation.use_learned_prior},
                     {"handcrafted_prior", c.ablation.use_handcrafted_prior},
                     {"tree_constraint", c.ablation.use_tree_constraint},
                     {"node_constraint", c.ablation.use_node_constraint}};
  doc["predictor"] = c.predictor.name();
  if (c.predictor.type == PredictorKind::Type::kFromFile) {
    doc["predictor_file"] = c.predictor.path.string();
  }
  doc["replan_every"] = c.replan_every;
  return doc;
}

PlannerConfig read_planner_config(const std::filesystem::path& path) {
  try {
    return planner_config_from_json(read_json_file(path));
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
}

}  // namespace mbappe
