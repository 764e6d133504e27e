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

#include <cmath>
#include <map>
#include <random>

#include <gtest/gtest.h>

#include "mbappe/errors.hpp"
#include "mbappe/mcts.hpp"
#include "mbappe/scenario.hpp"
#include "oracles.hpp"

namespace mbappe {
namespace {

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::kConfig;
}

// Owns everything a SearchProblem refers to.
struct Problem {
  Scenario scenario;
  WorldSnapshot snapshot;
  PredictionSet predictions;
  RewardConfig reward;
  std::vector<GridIndex> prior;

  explicit Problem(const std::string& family = "straight", double horizon = 8.0)
      : scenario(generate_scenario(family, {}, 0)) {
    snapshot = make_snapshot(scenario.world, 0.0, scenario.ego_init);
    predictions = predict(snapshot, horizon, PredictorKind::scripted());
    prior = ego_prior_actions(predictions, scenario.vehicle);
  }
  SearchProblem get() const { return {snapshot, predictions, reward, scenario.vehicle, prior}; }
};

TEST(SearchConfig, WindowsFromRateLimits) {
  const SearchConfig cfg;
  EXPECT_EQ(cfg.substeps_per_node(), 10);
  EXPECT_EQ(cfg.accel_window(), 3);
  EXPECT_EQ(cfg.steer_window(), 1);
}

TEST(SearchConfig, Validation) {
  SearchConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.node_duration = 0.25;
  EXPECT_EQ(kind_of([&] { cfg.validate(); }), ErrorKind::kConfig);
  cfg = {};
  cfg.discount = 0.0;
  EXPECT_EQ(kind_of([&] { cfg.validate(); }), ErrorKind::kConfig);
  cfg = {};
  cfg.sub_dt = 0.05;
  EXPECT_EQ(kind_of([&] { cfg.validate(); }), ErrorKind::kConfig);
  cfg = {};
  cfg.n_simulations = 0;
  EXPECT_EQ(kind_of([&] { cfg.validate(); }), ErrorKind::kConfig);
}

TEST(ConstrainedActions, WindowSizes) {
  SearchConfig cfg;
  EXPECT_EQ(constrained_actions(std::nullopt, cfg).size(), 21u);
  EXPECT_EQ(constrained_actions(GridIndex{0, 0}, cfg).size(), 8u);
  EXPECT_EQ(constrained_actions(GridIndex{12, 6}, cfg).size(), 12u);
  EXPECT_EQ(constrained_actions(GridIndex{3, 3}, cfg, false).size(), 169u);
  cfg.accel_rate_limit = 0.0;
  cfg.steer_rate_limit = 0.0;
  const auto one = constrained_actions(GridIndex{4, 9}, cfg);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0], (GridIndex{4, 9}));
}

TEST(ConstrainedActions, AccelMajorOrder) {
  const auto actions = constrained_actions(std::nullopt, SearchConfig{});
  EXPECT_EQ(actions.front(), (GridIndex{3, 5}));
  EXPECT_EQ(actions[1], (GridIndex{3, 6}));
  EXPECT_EQ(actions.back(), (GridIndex{9, 7}));
}

double ratio(const std::vector<double>& p) {
  return *std::max_element(p.begin(), p.end()) / *std::min_element(p.begin(), p.end());
}

TEST(ComputePrior, HandcraftedWindowRatio) {
  SearchConfig cfg;
  const auto c = constrained_actions(std::nullopt, cfg);
  const auto p = compute_prior(c, 0, std::nullopt, cfg);
  double sum = 0.0;
  for (double v : p) sum += v;
  EXPECT_NEAR(sum, 1.0, 1e-12);
  // Farthest cell (+-3, +-1) against the center: exp((9 + 1) / 200).
  EXPECT_NEAR(ratio(p), std::exp(10.0 / 200.0), 1e-9);
}

TEST(ComputePrior, FullGridRatio) {
  SearchConfig cfg;
  const auto c = constrained_actions(std::nullopt, cfg, false);
  const auto p = compute_prior(c, 0, std::nullopt, cfg);
  // Corner (+-6, +-6) against the center: exp((36 + 36) / 200).
  EXPECT_NEAR(ratio(p), std::exp(72.0 / 200.0), 1e-9);
}

TEST(ComputePrior, LearnedTermAndHorizon) {
  SearchConfig cfg;
  const auto c = constrained_actions(std::nullopt, cfg, false);
  const GridIndex learned{12, 12};
  const auto p0 = compute_prior(c, 0, learned, cfg);
  // Equal-weight mixture, closed form for two cells.
  auto mix = [](double d_h, double d_l) {
    return std::exp(-d_h / 200.0) + std::exp(-d_l / 200.0);
  };
  const double expected = mix(0.0, 72.0) / mix(72.0, 0.0);
  EXPECT_NEAR(p0[6 * 13 + 6] / p0[12 * 13 + 12], expected, 1e-12);
  // Depth 2 is beyond the 1 s prior horizon: handcrafted only.
  const auto p2 = compute_prior(c, 2, learned, cfg);
  const auto hand = compute_prior(c, 2, std::nullopt, cfg);
  for (std::size_t k = 0; k < c.size(); ++k) EXPECT_DOUBLE_EQ(p2[k], hand[k]);
}

TEST(ComputePrior, DisabledTermsFallBackToUniform) {
  SearchConfig cfg;
  cfg.use_handcrafted_prior = false;
  cfg.use_learned_prior = false;
  const auto c = constrained_actions(std::nullopt, cfg);
  for (double v : compute_prior(c, 0, GridIndex{}, cfg)) EXPECT_DOUBLE_EQ(v, 1.0 / 21.0);
  cfg.use_learned_prior = true;
  const auto learned_only = compute_prior(c, 0, GridIndex{9, 7}, cfg);
  EXPECT_EQ(std::max_element(learned_only.begin(), learned_only.end()) - learned_only.begin(),
            20);
  std::vector<GridIndex> empty;
  EXPECT_EQ(kind_of([&] { compute_prior(empty, 0, std::nullopt, cfg); }), ErrorKind::kConfig);
}

TEST(SelectPuct, WorkedExamples) {
  // All unvisited: the exploration term vanishes; higher prior wins the tie.
  std::vector<EdgeStats> fresh = {{0.0, 0, 0.2}, {0.0, 0, 0.5}, {0.0, 0, 0.3}};
  EXPECT_EQ(select_puct(fresh, 2.0), 1);
  // Q = 0.5 with one visit vs an unvisited edge: 0.5 + 2*0.5*1/2 = 1.0 vs 2*0.5*1 = 1.0,
  // equal scores and equal priors, so the lower index wins.
  std::vector<EdgeStats> tie = {{0.5, 1, 0.5}, {0.0, 0, 0.5}};
  EXPECT_EQ(select_puct(tie, 2.0), 0);
  std::vector<EdgeStats> negative = {{-4.9, 1, 0.6}, {0.0, 0, 0.4}};
  EXPECT_EQ(select_puct(negative, 2.0), 1);
  std::vector<EdgeStats> none;
  EXPECT_EQ(kind_of([&] { select_puct(none, 2.0); }), ErrorKind::kInternalState);
}

TEST(SelectPuct, AgreesWithBruteForce) {
  std::mt19937 gen(5);
  std::uniform_int_distribution<int> size(1, 25), visits(0, 4), qi(-2, 2);
  std::uniform_int_distribution<int> pi(1, 4);
  for (int trial = 0; trial < 2000; ++trial) {
    const int n = size(gen);
    std::vector<EdgeStats> edges;
    std::vector<oracle::Edge> mirror;
    for (int k = 0; k < n; ++k) {
      // Coarse values produce frequent exact ties.
      const EdgeStats e{0.5 * qi(gen), visits(gen), 0.125 * pi(gen)};
      edges.push_back(e);
      mirror.push_back({e.q, e.n, e.p});
    }
    EXPECT_EQ(select_puct(edges, 2.0), oracle::puct_argmax(mirror, 2.0));
  }
}

TEST(PathReturns, InclusiveAndExclusive) {
  const std::vector<double> r = {0.1, -5.0};
  const auto inc = path_returns(r, 1.0, BackupMode::kInclusive);
  EXPECT_DOUBLE_EQ(inc[0], -4.9);
  EXPECT_DOUBLE_EQ(inc[1], -5.0);
  const auto exc = path_returns(r, 1.0, BackupMode::kExclusive);
  EXPECT_DOUBLE_EQ(exc[0], -5.0);
  EXPECT_DOUBLE_EQ(exc[1], 0.0);
  const auto disc = path_returns(std::vector<double>{1.0, 1.0, 1.0}, 0.5, BackupMode::kInclusive);
  EXPECT_DOUBLE_EQ(disc[0], 1.75);
}

TEST(Backup, RunningMean) {
  SearchTree tree(EgoState{}, 0.0);
  std::vector<TreeNode> kids(2);
  tree.attach_children(SearchTree::kRoot, kids);
  std::vector<TreeNode> grandkids(1);
  tree.attach_children(1, grandkids);
  backup(tree, {{1, 3}, {0.1, -5.0}}, 1.0, BackupMode::kInclusive);
  EXPECT_DOUBLE_EQ(tree.node(1).edge.q, -4.9);
  EXPECT_DOUBLE_EQ(tree.node(3).edge.q, -5.0);
  backup(tree, {{1}, {1.1}}, 1.0, BackupMode::kInclusive);
  EXPECT_NEAR(tree.node(1).edge.q, -1.9, 1e-12);
  EXPECT_EQ(tree.node(1).edge.n, 2);
  EXPECT_EQ(tree.node(3).edge.n, 1);
}

TEST(Tree, ProtocolErrors) {
  const Problem pb;
  SearchTree tree(pb.snapshot.ego, 0.0);
  const SearchConfig cfg;
  EXPECT_EQ(kind_of([&] { select_child(tree, SearchTree::kRoot, cfg); }),
            ErrorKind::kInternalState);
  EXPECT_EQ(kind_of([&] { extract_plan(tree); }), ErrorKind::kInternalState);
  expand(tree, SearchTree::kRoot, pb.get(), cfg);
  EXPECT_EQ(tree.node(SearchTree::kRoot).child_count, 21);
  EXPECT_EQ(kind_of([&] { expand(tree, SearchTree::kRoot, pb.get(), cfg); }),
            ErrorKind::kInternalState);
  EXPECT_TRUE(extract_plan(tree).empty());
}

TEST(Expand, ChildrenCarryRolloutAndReward) {
  const Problem pb;
  SearchTree tree(pb.snapshot.ego, 0.0);
  const SearchConfig cfg;
  expand(tree, SearchTree::kRoot, pb.get(), cfg);
  double prior_sum = 0.0;
  for (const TreeNode& child : tree.children(SearchTree::kRoot)) {
    prior_sum += child.edge.p;
    EXPECT_EQ(child.depth, 1);
    EXPECT_DOUBLE_EQ(child.time, 1.0);
    const auto states = rollout(pb.snapshot.ego, ActionGrid{}.action(*child.action), 10, 0.1,
                                pb.scenario.vehicle);
    EXPECT_EQ(child.state, states.back());
  }
  EXPECT_NEAR(prior_sum, 1.0, 1e-12);
}

TEST(RunSearch, VisitConservationAndDeterminism) {
  const Problem pb;
  SearchConfig cfg;
  const SearchResult a = run_search(pb.get(), std::nullopt, cfg);
  int total = 0;
  for (const TreeNode& c : a.tree.children(SearchTree::kRoot)) total += c.edge.n;
  EXPECT_EQ(total, cfg.n_simulations);
  const SearchResult b = run_search(pb.get(), std::nullopt, cfg);
  ASSERT_EQ(a.tree.size(), b.tree.size());
  for (std::size_t k = 0; k < a.tree.size(); ++k) {
    EXPECT_EQ(a.tree.nodes()[k].edge, b.tree.nodes()[k].edge);
    EXPECT_EQ(a.tree.nodes()[k].state, b.tree.nodes()[k].state);
  }
  EXPECT_EQ(extract_plan(a.tree), extract_plan(b.tree));
}

TEST(RunSearch, StraightRoadPlanKeepsWheelsStraight) {
  const Problem pb;
  const SearchResult r = run_search(pb.get(), std::nullopt, SearchConfig{});
  const auto plan = extract_plan(r.tree);
  ASSERT_FALSE(plan.empty());
  for (const GridIndex& a : plan) EXPECT_EQ(a.steer, 6);
}

TEST(RunSearch, ZeroWindowGrowsAChain) {
  const Problem pb;
  SearchConfig cfg;
  cfg.accel_rate_limit = 0.0;
  cfg.steer_rate_limit = 0.0;
  cfg.n_simulations = 20;
  const SearchResult r = run_search(pb.get(), GridIndex{6, 6}, cfg);
  EXPECT_EQ(r.tree.size(), 9u);
  EXPECT_EQ(r.expansions, 8);  // depth-8 children are created terminal
  const auto plan = extract_plan(r.tree);
  EXPECT_EQ(plan, std::vector<GridIndex>(8, GridIndex{6, 6}));
}

TEST(RunSearch, ContinuityHoldsAlongEveryEdge) {
  const Problem pb("right_turn");
  const SearchConfig cfg;
  const GridIndex prev{8, 5};
  const SearchResult r = run_search(pb.get(), prev, cfg);
  for (std::size_t id = 1; id < r.tree.size(); ++id) {
    const TreeNode& n = r.tree.nodes()[id];
    const GridIndex center = n.parent == SearchTree::kRoot
                                 ? prev
                                 : *r.tree.node(n.parent).action;
    EXPECT_LE(std::abs(n.action->accel - center.accel), 3);
    EXPECT_LE(std::abs(n.action->steer - center.steer), 1);
  }
}

TEST(RunSearch, ObserverSeesEveryPath) {
  const Problem pb;
  SearchConfig cfg;
  cfg.n_simulations = 40;
  int calls = 0;
  run_search(pb.get(), std::nullopt, cfg,
             [&](const SearchTree&, const SimulationPath& path) {
               ++calls;
               EXPECT_EQ(path.nodes.size(), path.rewards.size());
               EXPECT_FALSE(path.nodes.empty());
             });
  EXPECT_EQ(calls, 40);
}

TEST(ExtractPlan, TiesGoToMoreVisitsThenLowerIndex) {
  SearchTree tree(EgoState{}, 0.0);
  std::vector<TreeNode> kids(3);
  for (int k = 0; k < 3; ++k) kids[static_cast<std::size_t>(k)].action = GridIndex{k, 6};
  tree.attach_children(SearchTree::kRoot, kids);
  tree.node(1).edge = {1.0, 2, 0.3};
  tree.node(2).edge = {1.0, 3, 0.3};
  tree.node(3).edge = {1.0, 3, 0.4};
  EXPECT_EQ(extract_plan(tree), std::vector<GridIndex>{(GridIndex{1, 6})});
  tree.node(1).edge = {1.5, 1, 0.3};
  EXPECT_EQ(extract_plan(tree), std::vector<GridIndex>{(GridIndex{0, 6})});
}

}  // namespace
}  // namespace mbappe
