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

// Monte-Carlo tree search over the discrete action grid: PUCT selection,
// expansion under a composite Gaussian prior and continuity windows,
// explicit reward evaluation and cumulative-return backup.

#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

#include "mbappe/kinematics.hpp"
#include "mbappe/predictor.hpp"
#include "mbappe/reward.hpp"
#include "mbappe/world_model.hpp"

namespace mbappe {

/// Which rewards an edge's return accumulates. Inclusive counts the reward of
/// the node the edge reaches; exclusive is the literal MuZero-style indexing
/// without a bootstrap value, which leaves the deepest edge with G = 0.
enum class BackupMode { kInclusive, kExclusive };

struct SearchConfig {
  int n_simulations = 256;
  double c_puct = 2.0;
  double discount = 1.0;
  double node_duration = 1.0;    // seconds per tree level
  double sub_dt = 0.1;           // integration step
  double prior_horizon = 1.0;    // learned prior applies while depth * node_duration <= this
  double prior_variance = 100.0; // grid-index units squared
  double accel_rate_limit = 0.15;                    // m/s^2 per sub_dt
  double steer_rate_limit = std::numbers::pi / 240;  // rad per sub_dt
  int max_depth = 8;
  std::uint64_t rng_seed = 0;
  BackupMode backup = BackupMode::kInclusive;

  bool use_learned_prior = true;
  bool use_handcrafted_prior = true;
  bool use_tree_constraint = true;  // root window around the last executed action
  bool use_node_constraint = true;  // child window around the parent action

  int substeps_per_node() const;
  /// Half-widths of the continuity window in grid indices.
  int accel_window() const;
  int steer_window() const;

  /// Throws Error(kConfig) on out-of-range values.
  void validate() const;
  bool operator==(const SearchConfig&) const = default;
};

struct EdgeStats {
  double q = 0.0;
  int n = 0;
  double p = 0.0;
  bool operator==(const EdgeStats&) const = default;
};

/// Tree nodes live in one arena; a node's children are contiguous and the
/// statistics of the edge into a node are stored on that node.
struct TreeNode {
  EgoState state;
  double time = 0.0;
  int depth = 0;
  std::optional<GridIndex> action;  // absent at the root
  RewardBreakdown reward;
  bool terminal = false;
  bool expanded = false;
  EdgeStats edge;
  int parent = -1;
  int first_child = -1;
  int child_count = 0;
};

class SearchTree {
 public:
  SearchTree() = default;
  SearchTree(const EgoState& root_state, double root_time);

  static constexpr int kRoot = 0;

  const TreeNode& node(int id) const { return nodes_[static_cast<std::size_t>(id)]; }
  TreeNode& node(int id) { return nodes_[static_cast<std::size_t>(id)]; }
  std::size_t size() const { return nodes_.size(); }
  const std::vector<TreeNode>& nodes() const { return nodes_; }

  std::span<const TreeNode> children(int id) const;
  std::span<TreeNode> children(int id);
  int child_id(int parent, int position) const { return node(parent).first_child + position; }

  /// Appends `children` under `parent` and marks it expanded. Depth, parent
  /// and edge visit counts are set here.
  void attach_children(int parent, std::vector<TreeNode> children);

  /// Window center used when expanding the root.
  std::optional<GridIndex> root_center;

  void reserve(std::size_t n) { nodes_.reserve(n); }

 private:
  std::vector<TreeNode> nodes_;
};

/// Root-to-leaf pass: the node reached by every edge, with that node's reward.
struct SimulationPath {
  std::vector<int> nodes;
  std::vector<double> rewards;
};

/// Grid actions inside the continuity window around `prev` ((0, 0) when
/// absent), clipped at the grid edges, accel-major order. An unconstrained
/// window is the full grid.
std::vector<GridIndex> constrained_actions(std::optional<GridIndex> prev,
                                           const SearchConfig& cfg,
                                           bool constrained = true);

/// Normalized prior over `candidates`: a handcrafted Gaussian centered on
/// (a = 0, delta = 0) plus, while depth * node_duration <= prior_horizon, a
/// learned Gaussian centered on `learned`. Disabled terms are dropped; with
/// no term left the prior is uniform. Throws Error(kConfig) for an empty
/// candidate list.
std::vector<double> compute_prior(std::span<const GridIndex> candidates, int depth,
                                  std::optional<GridIndex> learned,
                                  const SearchConfig& cfg);

/// argmax of Q + c * P * sqrt(sum N) / (1 + N); ties go to the higher P,
/// then the lower index. Throws Error(kInternalState) when empty.
int select_puct(std::span<const EdgeStats> edges, double c_puct);

/// Position of the child chosen by PUCT. Throws Error(kInternalState) for an
/// unexpanded, terminal or childless node.
int select_child(const SearchTree& tree, int node, const SearchConfig& cfg);

/// Returns G_k for every edge of a path.
std::vector<double> path_returns(std::span<const double> rewards, double discount,
                                 BackupMode mode);

/// Running-mean update of every edge on the path.
void backup(SearchTree& tree, const SimulationPath& path, double discount,
            BackupMode mode);

struct SearchProblem {
  const WorldSnapshot& snapshot;
  const PredictionSet& predictions;
  const RewardConfig& reward;
  const VehicleParams& vehicle;
  /// Learned prior action per depth (may be shorter than max_depth or empty).
  std::span<const GridIndex> prior_actions;
};

/// Creates, rolls out and scores every admissible child of `leaf`. At
/// max_depth the leaf is only marked terminal. Throws Error(kInternalState)
/// if the leaf is already expanded or terminal.
void expand(SearchTree& tree, int leaf, const SearchProblem& problem,
            const SearchConfig& cfg);

using BackupObserver = std::function<void(const SearchTree&, const SimulationPath&)>;

struct SearchResult {
  SearchTree tree;
  int expansions = 0;
  double elapsed_ms = 0.0;
};

/// Runs exactly cfg.n_simulations select/expand/evaluate/backup passes from
/// the snapshot. The observer, when set, sees every path before its backup.
SearchResult run_search(const SearchProblem& problem,
                        std::optional<GridIndex> prev_executed,
                        const SearchConfig& cfg,
                        const BackupObserver& observer = {});

/// Greedy descent over visited children by Q (ties: higher N, lower index).
/// Throws Error(kInternalState) when the root is not expanded.
std::vector<GridIndex> extract_plan(const SearchTree& tree);

/// Node ids along the extracted plan, root excluded.
std::vector<int> plan_nodes(const SearchTree& tree);

}  // namespace mbappe
