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

#include <cstdlib>
#include <filesystem>
#include <numbers>

#include <gtest/gtest.h>

#include "mbappe/ablation.hpp"
#include "mbappe/errors.hpp"
#include "mbappe/episode.hpp"
#include "mbappe/metrics.hpp"

namespace mbappe {
namespace {

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::kInternalState;
}

Scenario straight() {
  return generate_scenario("straight", {{"length", 100.0}, {"speed_limit", 5.0}}, 0);
}

// An oncoming car in the ego lane that cannot be avoided within the corridor.
Scenario head_on() {
  Scenario s = straight();
  s.world.id = "head_on";
  AgentTrack car{"oncoming", AgentKind::kVehicle, 4.5, 2.0, {}};
  for (int k = 0; k <= 110; ++k) car.trajectory.push_back({30.0 - 2.0 * k, 0.0, std::numbers::pi});
  s.world.agents.push_back(car);
  return s;
}

EpisodeOptions fast_options() {
  EpisodeOptions o;
  o.search.n_simulations = 64;
  return o;
}

TEST(RunEpisode, StraightRoadAccountingAndProgress) {
  const Scenario s = straight();
  const EpisodeLog log = run_episode(s, EpisodeOptions{});
  ASSERT_EQ(log.ticks.size(), 100u);
  EXPECT_EQ(log.status, EpisodeStatus::kCompleted);
  EXPECT_FALSE(log.first_collision);
  EXPECT_FALSE(log.first_off_drivable);
  EXPECT_FALSE(log.first_off_route);
  EXPECT_GE(log.progress(), 45.0);
  EXPECT_EQ(log.searches.size(), 20u);
  EXPECT_NEAR(log.ticks.back().time, 10.0, 1e-9);
  for (std::size_t k = 0; k < log.ticks.size(); ++k) {
    EXPECT_EQ(log.ticks[k].tick, static_cast<int>(k));
  }
}

TEST(RunEpisode, ExecutesThePlanThroughTheBicycleModel) {
  const Scenario s = generate_scenario("right_turn", {}, 1);
  const EpisodeOptions options = fast_options();
  const EpisodeLog log = run_episode(s, options);
  const ActionGrid grid;
  EgoState state = s.ego_init;
  std::size_t search = 0;
  for (const TickRecord& r : log.ticks) {
    while (search + 1 < log.searches.size() && log.searches[search + 1].tick <= r.tick) ++search;
    const SearchSummary& sum = log.searches[search];
    const std::size_t slot = static_cast<std::size_t>((r.tick - sum.tick) / 10);
    ASSERT_LT(slot, sum.plan.size());
    EXPECT_EQ(r.action, sum.plan[slot]);
    state = integrate(state, grid.action(r.action), 0.1, s.vehicle);
    EXPECT_EQ(r.ego, state);
  }
  // Replans every five ticks, starting at tick 0.
  for (std::size_t k = 0; k < log.searches.size(); ++k) {
    EXPECT_EQ(log.searches[k].tick, static_cast<int>(5 * k));
    EXPECT_EQ(log.searches[k].step, static_cast<int>(k));
  }
  // The root window of each later search is centered on the last executed action.
  for (std::size_t k = 1; k < log.searches.size(); ++k) {
    const int tick = log.searches[k].tick;
    ASSERT_TRUE(log.searches[k].prev_action.has_value());
    EXPECT_EQ(*log.searches[k].prev_action, log.ticks[static_cast<std::size_t>(tick - 1)].action);
  }
}

TEST(RunEpisode, Deterministic) {
  const Scenario s = generate_scenario("crossing_pedestrian", {}, 2);
  const EpisodeLog a = run_episode(s, fast_options());
  const EpisodeLog b = run_episode(s, fast_options());
  ASSERT_EQ(a.ticks.size(), b.ticks.size());
  for (std::size_t k = 0; k < a.ticks.size(); ++k) {
    EXPECT_EQ(tick_to_json(a.ticks[k]).dump(), tick_to_json(b.ticks[k]).dump());
  }
  EXPECT_EQ(episode_result_to_json(a).dump(), episode_result_to_json(b).dump());
}

TEST(RunEpisode, CollisionEndsTheEpisode) {
  const Scenario s = head_on();
  const EpisodeLog log = run_episode(s, fast_options());
  EXPECT_EQ(log.status, EpisodeStatus::kCollision);
  ASSERT_TRUE(log.first_collision.has_value());
  EXPECT_EQ(static_cast<std::size_t>(*log.first_collision), log.ticks.size() - 1);
  EXPECT_LT(log.ticks.size(), 100u);
  EXPECT_EQ(log.ticks.back().collision, AgentKind::kVehicle);
  EXPECT_EQ(score_episode(log, s).composite, 0.0);
}

TEST(RunEpisode, RejectsInvalidInputBeforeTheLoop) {
  Scenario bad = straight();
  bad.duration = -1.0;
  EXPECT_EQ(kind_of([&] { run_episode(bad, EpisodeOptions{}); }), ErrorKind::kScenarioInvalid);
  EpisodeOptions options;
  options.replan_every = 0;
  EXPECT_EQ(kind_of([&] { run_episode(straight(), options); }), ErrorKind::kConfig);
  options = {};
  options.search.c_puct = -1.0;
  EXPECT_EQ(kind_of([&] { run_episode(straight(), options); }), ErrorKind::kConfig);
}

TEST(EpisodeLog, RoundTripsThroughFiles) {
  const Scenario s = generate_scenario("stopped_lead_vehicle", {}, 0);
  EpisodeOptions options = fast_options();
  const EpisodeLog log = run_episode(s, options);
  const auto dir = std::filesystem::temp_directory_path() / "mbappe_episode_roundtrip";
  std::filesystem::remove_all(dir);
  write_episode_log(dir, log);
  EXPECT_TRUE(std::filesystem::exists(dir / "episode.ndjson"));
  EXPECT_TRUE(std::filesystem::exists(dir / "search.ndjson"));
  EXPECT_TRUE(std::filesystem::exists(dir / "result.json"));
  const EpisodeLog back = read_episode_log(dir);
  std::filesystem::remove_all(dir);
  EXPECT_EQ(back.scenario_id, log.scenario_id);
  ASSERT_EQ(back.ticks.size(), log.ticks.size());
  for (std::size_t k = 0; k < log.ticks.size(); ++k) {
    EXPECT_EQ(tick_to_json(back.ticks[k]).dump(), tick_to_json(log.ticks[k]).dump());
  }
  ASSERT_EQ(back.searches.size(), log.searches.size());
  for (std::size_t k = 0; k < log.searches.size(); ++k) {
    EXPECT_EQ(search_summary_to_json(back.searches[k], back.scenario_id).dump(),
              search_summary_to_json(log.searches[k], log.scenario_id).dump());
  }
  EXPECT_EQ(episode_result_to_json(back).dump(), episode_result_to_json(log).dump());
}

EpisodeLog synthetic_log(const Scenario& s, double progress) {
  EpisodeLog log;
  log.scenario_id = s.id();
  log.route_s_start = 10.0;
  TickRecord r;
  r.route_s = 10.0 + progress;
  log.ticks.push_back(r);
  return log;
}

TEST(Metrics, WorkedExamples) {
  const Scenario s = straight();
  ASSERT_DOUBLE_EQ(progress_budget(s), 50.0);

  std::vector<Scenario> two = {s, s};
  std::vector<EpisodeLog> logs = {synthetic_log(s, 50.0), synthetic_log(s, 50.0)};
  logs[1].first_collision = 0;
  EXPECT_DOUBLE_EQ(compute_metrics(logs, two).cr, 0.5);

  std::vector<Scenario> one = {s};
  std::vector<EpisodeLog> ep08 = {synthetic_log(s, 40.0)};
  EXPECT_NEAR(compute_metrics(ep08, one).score, 80.0, 1e-9);

  std::vector<EpisodeLog> da = {synthetic_log(s, 50.0)};
  da[0].first_off_drivable = 3;
  const Metrics m = compute_metrics(da, one);
  EXPECT_NEAR(m.score, 50.0, 1e-9);
  EXPECT_DOUBLE_EQ(m.da, 1.0);

  std::vector<EpisodeLog> route = {synthetic_log(s, 50.0)};
  route[0].first_off_route = 3;
  EXPECT_NEAR(compute_metrics(route, one).score, 75.0, 1e-9);
}

TEST(Metrics, MismatchedInput) {
  const Scenario s = straight();
  std::vector<Scenario> one = {s};
  std::vector<EpisodeLog> none;
  EXPECT_EQ(kind_of([&] { compute_metrics(none, one); }), ErrorKind::kMalformedInput);
  std::vector<EpisodeLog> two = {synthetic_log(s, 1.0), synthetic_log(s, 1.0)};
  EXPECT_EQ(kind_of([&] { compute_metrics(two, one); }), ErrorKind::kMalformedInput);
  EpisodeLog other = synthetic_log(s, 1.0);
  other.scenario_id = "other";
  std::vector<EpisodeLog> wrong = {other};
  EXPECT_EQ(kind_of([&] { compute_metrics(wrong, one); }), ErrorKind::kMalformedInput);
}

TEST(Metrics, AverageAddsEpisodes) {
  const std::vector<Metrics> rows = {{0.0, 0.5, 1.0, 80.0, 4}, {1.0, 0.0, 0.5, 40.0, 4}};
  const Metrics m = average_metrics(rows);
  EXPECT_DOUBLE_EQ(m.cr, 0.5);
  EXPECT_DOUBLE_EQ(m.score, 60.0);
  EXPECT_EQ(m.episodes, 8);
}

TEST(AblationSpec, LabelsAndApply) {
  EXPECT_EQ(AblationSpec{}.label(), "both");
  EXPECT_EQ(AblationSpec::prior_specs().size(), 4u);
  EXPECT_EQ(AblationSpec::constraint_specs().size(), 4u);
  EXPECT_EQ(AblationSpec::prior_specs()[0].label().rfind("none", 0), 0u);
  SearchConfig cfg;
  AblationSpec off{false, true, false, true};
  off.apply(cfg);
  EXPECT_FALSE(cfg.use_learned_prior);
  EXPECT_TRUE(cfg.use_handcrafted_prior);
  EXPECT_FALSE(cfg.use_tree_constraint);
  EXPECT_TRUE(cfg.use_node_constraint);
}

TEST(Ablation, SingleCellMatchesDirectBatch) {
  const std::vector<Scenario> scenarios = {straight()};
  EpisodeOptions base = fast_options();
  const std::vector<AblationSpec> specs = {AblationSpec{}};
  const std::vector<std::uint64_t> seeds = {0};
  const AblationTable table = run_ablation_matrix(scenarios, base, specs, seeds, 1);
  ASSERT_EQ(table.rows.size(), 1u);
  EXPECT_TRUE(table.ok());
  const auto logs = run_batch(scenarios, base, 1);
  EXPECT_EQ(table.rows[0].metrics, compute_metrics(logs, scenarios));
}

TEST(Ablation, AccountingAndDeterministicCsv) {
  const std::vector<Scenario> scenarios = {
      straight(), generate_scenario("crossing_pedestrian", {}, 0)};
  EpisodeOptions base = fast_options();
  base.search.n_simulations = 16;
  const auto specs = AblationSpec::prior_specs();
  const std::vector<std::uint64_t> seeds = {0, 1, 2};
  const AblationTable a = run_ablation_matrix(scenarios, base, specs, seeds, 2);
  ASSERT_EQ(a.rows.size(), 4u);
  for (const AblationRow& row : a.rows) EXPECT_EQ(row.metrics.episodes, 6);
  const AblationTable b = run_ablation_matrix(scenarios, base, specs, seeds, 1);
  EXPECT_EQ(a.to_csv(false), b.to_csv(false));
  const std::string csv = a.to_csv(false);
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "learned_prior,handcrafted_prior,tree_constraint,node_constraint,CR,DA,EP,score,"
            "episodes,mean_search_ms,error");
  EXPECT_NE(csv.find(",NA,"), std::string::npos);
}

TEST(Ablation, FailingEpisodeAnnotatesRow) {
  Scenario bad = straight();
  bad.world.id = "broken";
  bad.duration = 0.0;
  const std::vector<Scenario> scenarios = {straight(), bad};
  const std::vector<AblationSpec> specs = {AblationSpec{}};
  const std::vector<std::uint64_t> seeds = {4};
  const AblationTable t = run_ablation_matrix(scenarios, fast_options(), specs, seeds, 1);
  EXPECT_FALSE(t.ok());
  EXPECT_NE(t.rows[0].error.find("broken"), std::string::npos);
  EXPECT_NE(t.rows[0].error.find("seed 4"), std::string::npos);
  EXPECT_EQ(t.rows[0].metrics.episodes, 1);
}

TEST(SearchOnce, UniformPriorWithoutConstraintsSeesWholeGrid) {
  const Scenario s = straight();
  EpisodeOptions options = fast_options();
  options.ablation = {false, false, false, false};
  const SearchResult r = search_once(s, options, 0.0, s.ego_init);
  const auto children = r.tree.children(SearchTree::kRoot);
  ASSERT_EQ(children.size(), 169u);
  for (const TreeNode& c : children) EXPECT_DOUBLE_EQ(c.edge.p, 1.0 / 169.0);
}

TEST(ParallelFor, RunsEveryIndexAndRethrowsFirstError) {
  std::vector<int> hits(50, 0);
  parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i] += 1; });
  for (int h : hits) EXPECT_EQ(h, 1);
  try {
    parallel_for(10, 3, [](std::size_t i) {
      if (i == 3 || i == 7) throw Error(ErrorKind::kEpisodeFailure, std::to_string(i));
    });
    FAIL();
  } catch (const Error& e) {
    EXPECT_STREQ(e.what(), "3");
  }
}

}  // namespace
}  // namespace mbappe
