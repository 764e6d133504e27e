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

// Closed-loop episodes against replayed agents, with per-tick logging and a
// per-replan search summary.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mbappe/mcts.hpp"
#include "mbappe/predictor.hpp"
#include "mbappe/reward.hpp"
#include "mbappe/scenario.hpp"

namespace mbappe {

struct AblationSpec {
  bool use_learned_prior = true;
  bool use_handcrafted_prior = true;
  bool use_tree_constraint = true;
  bool use_node_constraint = true;

  /// Short human label such as "both", "learned", "no-tree".
  std::string label() const;
  void apply(SearchConfig& cfg) const;
  bool operator==(const AblationSpec&) const = default;

  /// none, learned, handcrafted, both.
  static std::vector<AblationSpec> prior_specs();
  /// none, tree, node, both.
  static std::vector<AblationSpec> constraint_specs();
};

struct TickRecord {
  int tick = 0;
  double time = 0.0;  // end of the tick
  EgoState ego;       // state at `time`
  GridIndex action;
  RewardBreakdown reward;  // one 0.1 s transition against ground truth
  std::optional<AgentKind> collision;
  bool off_drivable = false;
  bool off_route = false;
  double route_s = 0.0;
};

struct ChildSummary {
  GridIndex action;
  EdgeStats edge;
};

struct SearchSummary {
  int step = 0;
  int tick = 0;
  double time = 0.0;
  EgoState root;
  std::optional<GridIndex> prev_action;
  std::vector<ChildSummary> children;
  std::vector<GridIndex> plan;
  int expansions = 0;
  double elapsed_ms = 0.0;         // not serialized
  std::optional<SearchTree> tree;  // kept on request
};

enum class EpisodeStatus { kCompleted, kCollision };

struct EpisodeLog {
  std::string scenario_id;
  std::vector<TickRecord> ticks;
  std::vector<SearchSummary> searches;
  EpisodeStatus status = EpisodeStatus::kCompleted;
  double route_s_start = 0.0;
  /// First tick carrying each infraction.
  std::optional<int> first_collision;
  std::optional<int> first_off_drivable;
  std::optional<int> first_off_route;

  bool collided() const { return first_collision.has_value(); }
  double progress() const;
};

struct EpisodeOptions {
  SearchConfig search;
  RewardConfig reward;
  PredictorKind predictor = PredictorKind::constant_velocity();
  AblationSpec ablation;
  int replan_every = 5;
  bool keep_trees = false;
};

/// Ground-truth predictions: the agents' own tracks from t = 0.
PredictionSet ground_truth(const World& world);

/// One search from `ego` at `time`, as the episode loop runs it.
SearchResult search_once(const Scenario& scenario, const EpisodeOptions& options, double time,
                         const EgoState& ego, std::optional<GridIndex> prev_executed = {});

/// Runs one closed-loop episode. Throws Error(kScenarioInvalid) before the
/// loop for an invalid scenario and Error(kConfig) for invalid options.
EpisodeLog run_episode(const Scenario& scenario, const EpisodeOptions& options);

const char* to_string(EpisodeStatus status);

nlohmann::json tick_to_json(const TickRecord& record);
nlohmann::json search_summary_to_json(const SearchSummary& summary,
                                      const std::string& scenario_id);
nlohmann::json episode_result_to_json(const EpisodeLog& log);

/// Writes episode.ndjson, search.ndjson and result.json into `dir`.
void write_episode_log(const std::filesystem::path& dir, const EpisodeLog& log);

/// Reads back the per-tick records and search summaries (without trees).
EpisodeLog read_episode_log(const std::filesystem::path& dir);

}  // namespace mbappe
