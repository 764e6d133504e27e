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

#include "mbappe/episode.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include "mbappe/errors.hpp"
#include "mbappe/json_io.hpp"

namespace mbappe {

using json = nlohmann::json;

std::string AblationSpec::label() const {
  const bool priors_default = use_learned_prior && use_handcrafted_prior;
  const bool constraints_default = use_tree_constraint && use_node_constraint;
  std::string prior;
  if (priors_default) {
    prior = "both";
  } else if (use_learned_prior) {
    prior = "learned";
  } else if (use_handcrafted_prior) {
    prior = "handcrafted";
  } else {
    prior = "none";
  }
  if (constraints_default) return prior;
  std::string constraints;
  if (use_tree_constraint) {
    constraints = "tree";
  } else if (use_node_constraint) {
    constraints = "node";
  } else {
    constraints = "none";
  }
  return prior + "/constraints-" + constraints;
}

void AblationSpec::apply(SearchConfig& cfg) const {
  cfg.use_learned_prior = use_learned_prior;
  cfg.use_handcrafted_prior = use_handcrafted_prior;
  cfg.use_tree_constraint = use_tree_constraint;
  cfg.use_node_constraint = use_node_constraint;
}

std::vector<AblationSpec> AblationSpec::prior_specs() {
  return {{false, false, true, true},
          {true, false, true, true},
          {false, true, true, true},
          {true, true, true, true}};
}

std::vector<AblationSpec> AblationSpec::constraint_specs() {
  return {{true, true, false, false},
          {true, true, true, false},
          {true, true, false, true},
          {true, true, true, true}};
}

double EpisodeLog::progress() const {
  return ticks.empty() ? 0.0 : ticks.back().route_s - route_s_start;
}

const char* to_string(EpisodeStatus status) {
  return status == EpisodeStatus::kCompleted ? "completed" : "collision";
}

PredictionSet ground_truth(const World& world) {
  PredictionSet truth;
  truth.start_time = 0.0;
  for (const AgentTrack& track : world.agents) {
    truth.agent_futures.push_back({track.id, track.kind, track.length, track.width,
                                   track.trajectory});
    truth.horizon = std::max(truth.horizon,
                             kTrackStep * static_cast<double>(track.trajectory.size()));
  }
  return truth;
}

namespace {

SearchResult search_with(const Predictor& predictor, const World& world,
                         const VehicleParams& vehicle, const RewardConfig& reward,
                         const SearchConfig& cfg, double time, const EgoState& ego,
                         std::optional<GridIndex> prev_executed) {
  const WorldSnapshot snapshot = make_snapshot(world, time, ego);
  const PredictionSet predictions = predictor.predict(snapshot, cfg.max_depth * cfg.node_duration);
  const std::vector<GridIndex> prior =
      ego_prior_actions(predictions, vehicle, ActionGrid{}, cfg.node_duration);
  const SearchProblem problem{snapshot, predictions, reward, vehicle, prior};
  return run_search(problem, prev_executed, cfg);
}

}  // namespace

SearchResult search_once(const Scenario& scenario, const EpisodeOptions& options, double time,
                         const EgoState& ego, std::optional<GridIndex> prev_executed) {
  validate_scenario(scenario);
  SearchConfig cfg = options.search;
  options.ablation.apply(cfg);
  cfg.validate();
  options.reward.validate();
  const auto predictor = make_predictor(options.predictor);
  return search_with(*predictor, scenario.world, scenario.vehicle, options.reward, cfg, time, ego,
                     prev_executed);
}

EpisodeLog run_episode(const Scenario& scenario, const EpisodeOptions& options) {
  validate_scenario(scenario);
  if (options.replan_every < 1) {
    throw Error(ErrorKind::kConfig, "replan_every must be >= 1");
  }
  SearchConfig cfg = options.search;
  options.ablation.apply(cfg);
  cfg.validate();
  options.reward.validate();

  const World& world = scenario.world;
  const VehicleParams& vehicle = scenario.vehicle;
  const ActionGrid grid;
  const auto predictor = make_predictor(options.predictor);
  const PredictionSet truth = ground_truth(world);
  const RewardContext truth_ctx{world, truth, options.reward, vehicle};
  const int per_node = cfg.substeps_per_node();

  EpisodeLog log;
  log.scenario_id = scenario.id();
  log.route_s_start = project_to_centerline(scenario.ego_init.pose(), world.map, true).arc_length;

  EgoState state = scenario.ego_init;
  std::optional<GridIndex> prev_executed;
  std::vector<GridIndex> plan;
  int plan_tick = 0;
  std::vector<Obstacle> obstacles;

  const int n_ticks = scenario.tick_count();
  for (int k = 0; k < n_ticks; ++k) {
    const double t = scenario.tick * k;
    const std::size_t slot = static_cast<std::size_t>((k - plan_tick) / per_node);
    if (plan.empty() || k - plan_tick >= options.replan_every || slot >= plan.size()) {
      SearchResult result = search_with(*predictor, world, vehicle, options.reward, cfg, t, state,
                                        prev_executed);
      plan = extract_plan(result.tree);
      plan_tick = k;

      SearchSummary summary;
      summary.step = static_cast<int>(log.searches.size());
      summary.tick = k;
      summary.time = t;
      summary.root = state;
      summary.prev_action = prev_executed;
      const SearchTree& tree = result.tree;
      const TreeNode& root = tree.node(SearchTree::kRoot);
      for (int c = 0; c < root.child_count; ++c) {
        const TreeNode& child = tree.node(tree.child_id(SearchTree::kRoot, c));
        summary.children.push_back({*child.action, child.edge});
      }
      summary.plan = plan;
      summary.expansions = result.expansions;
      summary.elapsed_ms = result.elapsed_ms;
      if (options.keep_trees) summary.tree = std::move(result.tree);
      log.searches.push_back(std::move(summary));
    }

    const GridIndex index = plan[static_cast<std::size_t>((k - plan_tick) / per_node)];
    const EgoState next = integrate(state, grid.action(index), scenario.tick, vehicle);
    const double t_next = scenario.tick * (k + 1);

    TickRecord record;
    record.tick = k;
    record.time = t_next;
    record.ego = next;
    record.action = index;
    const StampedState step{t_next, next};
    record.reward = evaluate_node(state, std::span<const StampedState>(&step, 1), t_next,
                                  truth_ctx);
    const OrientedBox footprint = ego_footprint(next, vehicle);
    obstacles_at(truth_ctx, t_next, obstacles);
    record.collision = check_collision(footprint, obstacles);
    record.off_drivable = !footprint_in_drivable(footprint, world.map);
    record.off_route = !on_route(next.pose(), world.map);
    record.route_s = project_to_centerline(next.pose(), world.map, true).arc_length;

    if (record.collision && !log.first_collision) log.first_collision = k;
    if (record.off_drivable && !log.first_off_drivable) log.first_off_drivable = k;
    if (record.off_route && !log.first_off_route) log.first_off_route = k;
    const bool crashed = record.collision && *record.collision != AgentKind::kObject;
    log.ticks.push_back(record);

    state = next;
    prev_executed = index;
    if (crashed) {
      log.status = EpisodeStatus::kCollision;
      break;
    }
  }
  return log;
}

namespace {

json state_to_json(const EgoState& s) {
  return {{"x", s.x}, {"y", s.y}, {"heading", s.heading}, {"velocity", s.velocity}};
}

EgoState state_from_json(const json& j) {
  return {j.at("x").get<double>(), j.at("y").get<double>(), j.at("heading").get<double>(),
          j.at("velocity").get<double>()};
}

json index_to_json(const GridIndex& g) { return json::array({g.accel, g.steer}); }

GridIndex index_from_json(const json& j) {
  GridIndex g{j.at(0).get<int>(), j.at(1).get<int>()};
  if (!ActionGrid::valid(g)) throw Error(ErrorKind::kMalformedInput, "action index out of range");
  return g;
}

json reward_to_json(const RewardBreakdown& r) {
  return {{"progress", r.progress},     {"collision", r.collision},
          {"route", r.route},           {"drivable", r.drivable},
          {"heading", r.heading_center}, {"lateral", r.lateral_center},
          {"total", r.total()}};
}

RewardBreakdown reward_from_json(const json& j) {
  RewardBreakdown r;
  r.progress = j.at("progress").get<double>();
  r.collision = j.at("collision").get<double>();
  r.route = j.at("route").get<double>();
  r.drivable = j.at("drivable").get<double>();
  r.heading_center = j.at("heading").get<double>();
  r.lateral_center = j.at("lateral").get<double>();
  return r;
}

json optional_tick(const std::optional<int>& v) { return v ? json(*v) : json(nullptr); }

std::vector<json> read_ndjson(const std::filesystem::path& path) {
  std::istringstream in(read_text_file(path));
  std::vector<json> lines;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    try {
      lines.push_back(json::parse(line));
    } catch (const json::exception& e) {
      throw Error(ErrorKind::kMalformedInput,
                  path.string() + ":" + std::to_string(number) + ": " + e.what());
    }
  }
  return lines;
}

}  // namespace

json tick_to_json(const TickRecord& r) {
  return {{"tick", r.tick},
          {"time", r.time},
          {"ego", state_to_json(r.ego)},
          {"action", index_to_json(r.action)},
          {"reward", reward_to_json(r.reward)},
          {"collision", r.collision ? json(to_string(*r.collision)) : json(nullptr)},
          {"off_drivable", r.off_drivable},
          {"off_route", r.off_route},
          {"route_s", r.route_s}};
}

json search_summary_to_json(const SearchSummary& s, const std::string& scenario_id) {
  json children = json::array();
  for (const ChildSummary& c : s.children) {
    children.push_back(
        {{"action", index_to_json(c.action)}, {"q", c.edge.q}, {"n", c.edge.n}, {"p", c.edge.p}});
  }
  json plan = json::array();
  for (const GridIndex& g : s.plan) plan.push_back(index_to_json(g));
  return {{"scenario_id", scenario_id},
          {"step", s.step},
          {"tick", s.tick},
          {"time", s.time},
          {"root", state_to_json(s.root)},
          {"prev_action", s.prev_action ? index_to_json(*s.prev_action) : json(nullptr)},
          {"children", children},
          {"plan", plan},
          {"expansions", s.expansions}};
}

json episode_result_to_json(const EpisodeLog& log) {
  return {{"scenario_id", log.scenario_id},
          {"status", to_string(log.status)},
          {"ticks", log.ticks.size()},
          {"searches", log.searches.size()},
          {"route_s_start", log.route_s_start},
          {"progress", log.progress()},
          {"first_collision", optional_tick(log.first_collision)},
          {"first_off_drivable", optional_tick(log.first_off_drivable)},
          {"first_off_route", optional_tick(log.first_off_route)}};
}

void write_episode_log(const std::filesystem::path& dir, const EpisodeLog& log) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::kInputData, "cannot create " + dir.string() + ": " + ec.message());
  std::string ticks;
  for (const TickRecord& r : log.ticks) ticks += tick_to_json(r).dump() + "\n";
  std::string searches;
  for (const SearchSummary& s : log.searches) {
    searches += search_summary_to_json(s, log.scenario_id).dump() + "\n";
  }
  write_text_file(dir / "episode.ndjson", ticks);
  write_text_file(dir / "search.ndjson", searches);
  write_text_file(dir / "result.json", episode_result_to_json(log).dump(1) + "\n");
}

EpisodeLog read_episode_log(const std::filesystem::path& dir) {
  EpisodeLog log;
  try {
    const json result = read_json_file(dir / "result.json");
    log.scenario_id = result.at("scenario_id").get<std::string>();
    log.status = result.at("status").get<std::string>() == "collision" ? EpisodeStatus::kCollision
                                                                       : EpisodeStatus::kCompleted;
    log.route_s_start = result.at("route_s_start").get<double>();
    auto opt = [&](const char* key) -> std::optional<int> {
      const json& v = result.at(key);
      return v.is_null() ? std::nullopt : std::optional<int>(v.get<int>());
    };
    log.first_collision = opt("first_collision");
    log.first_off_drivable = opt("first_off_drivable");
    log.first_off_route = opt("first_off_route");

    for (const json& j : read_ndjson(dir / "episode.ndjson")) {
      TickRecord r;
      r.tick = j.at("tick").get<int>();
      r.time = j.at("time").get<double>();
      r.ego = state_from_json(j.at("ego"));
      r.action = index_from_json(j.at("action"));
      r.reward = reward_from_json(j.at("reward"));
      if (!j.at("collision").is_null()) {
        r.collision = agent_kind_from_string(j.at("collision").get<std::string>());
      }
      r.off_drivable = j.at("off_drivable").get<bool>();
      r.off_route = j.at("off_route").get<bool>();
      r.route_s = j.at("route_s").get<double>();
      log.ticks.push_back(r);
    }
    for (const json& j : read_ndjson(dir / "search.ndjson")) {
      if (j.at("scenario_id").get<std::string>() != log.scenario_id) {
        throw Error(ErrorKind::kMalformedInput, "search summary belongs to scenario '" +
                                                    j.at("scenario_id").get<std::string>() + "'");
      }
      SearchSummary s;
      s.step = j.at("step").get<int>();
      s.tick = j.at("tick").get<int>();
      s.time = j.at("time").get<double>();
      s.root = state_from_json(j.at("root"));
      if (!j.at("prev_action").is_null()) s.prev_action = index_from_json(j.at("prev_action"));
      for (const json& c : j.at("children")) {
        s.children.push_back({index_from_json(c.at("action")),
                              {c.at("q").get<double>(), c.at("n").get<int>(),
                               c.at("p").get<double>()}});
      }
      for (const json& g : j.at("plan")) s.plan.push_back(index_from_json(g));
      s.expansions = j.at("expansions").get<int>();
      log.searches.push_back(std::move(s));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kMalformedInput, dir.string() + ": " + e.what());
  }
  return log;
}

}  // namespace mbappe
