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

#include "mbappe/mcts.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "mbappe/errors.hpp"

namespace mbappe {

namespace {

constexpr double kWindowEpsilon = 1e-9;

double gaussian(const GridIndex& c, const GridIndex& center, double two_sigma2) {
  const double di = c.accel - center.accel;
  const double dj = c.steer - center.steer;
  return std::exp(-(di * di + dj * dj) / two_sigma2);
}

}  // namespace

int SearchConfig::substeps_per_node() const {
  return static_cast<int>(std::llround(node_duration / sub_dt));
}

int SearchConfig::accel_window() const {
  const double per_node = accel_rate_limit * substeps_per_node();
  return static_cast<int>(std::floor(per_node / ActionGrid::kAccelStep + kWindowEpsilon));
}

int SearchConfig::steer_window() const {
  const double per_node = steer_rate_limit * substeps_per_node();
  return static_cast<int>(std::floor(per_node / ActionGrid::kSteerStep + kWindowEpsilon));
}

void SearchConfig::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorKind::kConfig, "search: " + what); };
  if (n_simulations < 1) fail("n_simulations must be >= 1");
  if (!(c_puct >= 0.0)) fail("c_puct must be >= 0");
  if (!(discount > 0.0 && discount <= 1.0)) fail("discount must be in (0, 1]");
  if (std::abs(sub_dt - kTrackStep) > 1e-12) fail("sub_dt must equal the 0.1 s track step");
  if (!(node_duration > 0.0)) fail("node_duration must be > 0");
  const double ratio = node_duration / sub_dt;
  if (std::abs(ratio - std::round(ratio)) > 1e-9 || substeps_per_node() < 1) {
    fail("node_duration must be an integer multiple of sub_dt");
  }
  if (!(prior_horizon >= 0.0)) fail("prior_horizon must be >= 0");
  if (!(prior_variance > 0.0)) fail("prior_variance must be > 0");
  if (!(accel_rate_limit >= 0.0) || !(steer_rate_limit >= 0.0)) {
    fail("continuity limits must be >= 0");
  }
  if (max_depth < 1) fail("max_depth must be >= 1");
}

SearchTree::SearchTree(const EgoState& root_state, double root_time) {
  TreeNode root;
  root.state = root_state;
  root.time = root_time;
  nodes_.push_back(root);
}

std::span<const TreeNode> SearchTree::children(int id) const {
  const TreeNode& n = node(id);
  if (n.child_count == 0) return {};
  return {nodes_.data() + n.first_child, static_cast<std::size_t>(n.child_count)};
}

std::span<TreeNode> SearchTree::children(int id) {
  TreeNode& n = node(id);
  if (n.child_count == 0) return {};
  return {nodes_.data() + n.first_child, static_cast<std::size_t>(n.child_count)};
}

void SearchTree::attach_children(int parent, std::vector<TreeNode> children) {
  const int first = static_cast<int>(nodes_.size());
  const int depth = node(parent).depth + 1;
  for (TreeNode& child : children) {
    child.parent = parent;
    child.depth = depth;
    child.edge.n = 0;
    child.edge.q = 0.0;
    nodes_.push_back(std::move(child));
  }
  TreeNode& p = node(parent);
  p.first_child = first;
  p.child_count = static_cast<int>(children.size());
  p.expanded = true;
}

std::vector<GridIndex> constrained_actions(std::optional<GridIndex> prev,
                                           const SearchConfig& cfg, bool constrained) {
  const GridIndex center = prev.value_or(GridIndex{});
  int lo_i = 0, hi_i = ActionGrid::kSize - 1, lo_j = 0, hi_j = ActionGrid::kSize - 1;
  if (constrained) {
    const int wi = cfg.accel_window();
    const int wj = cfg.steer_window();
    lo_i = std::max(0, center.accel - wi);
    hi_i = std::min(ActionGrid::kSize - 1, center.accel + wi);
    lo_j = std::max(0, center.steer - wj);
    hi_j = std::min(ActionGrid::kSize - 1, center.steer + wj);
  }
  std::vector<GridIndex> out;
  out.reserve(static_cast<std::size_t>((hi_i - lo_i + 1) * (hi_j - lo_j + 1)));
  for (int i = lo_i; i <= hi_i; ++i) {
    for (int j = lo_j; j <= hi_j; ++j) out.push_back({i, j});
  }
  return out;
}

std::vector<double> compute_prior(std::span<const GridIndex> candidates, int depth,
                                  std::optional<GridIndex> learned,
                                  const SearchConfig& cfg) {
  if (candidates.empty()) {
    throw Error(ErrorKind::kConfig, "compute_prior: empty candidate list");
  }
  const double two_sigma2 = 2.0 * cfg.prior_variance;
  const bool learned_active = cfg.use_learned_prior && learned.has_value() &&
                              depth * cfg.node_duration <= cfg.prior_horizon + 1e-12;
  std::vector<double> weights(candidates.size(), 0.0);
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    if (cfg.use_handcrafted_prior) weights[k] += gaussian(candidates[k], GridIndex{}, two_sigma2);
    if (learned_active) weights[k] += gaussian(candidates[k], *learned, two_sigma2);
  }
  if (!cfg.use_handcrafted_prior && !learned_active) {
    std::fill(weights.begin(), weights.end(), 1.0);
  }
  double sum = 0.0;
  for (double w : weights) sum += w;
  for (double& w : weights) w /= sum;
  return weights;
}

int select_puct(std::span<const EdgeStats> edges, double c_puct) {
  if (edges.empty()) throw Error(ErrorKind::kInternalState, "select: no children");
  double total = 0.0;
  for (const EdgeStats& e : edges) total += e.n;
  const double sqrt_total = std::sqrt(total);

  int best = 0;
  double best_score = 0.0;
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const EdgeStats& e = edges[k];
    const double score = e.q + c_puct * e.p * sqrt_total / (1.0 + e.n);
    if (k == 0 || score > best_score ||
        (score == best_score && e.p > edges[static_cast<std::size_t>(best)].p)) {
      best = static_cast<int>(k);
      best_score = score;
    }
  }
  return best;
}

int select_child(const SearchTree& tree, int node, const SearchConfig& cfg) {
  const TreeNode& n = tree.node(node);
  if (!n.expanded || n.terminal || n.child_count == 0) {
    throw Error(ErrorKind::kInternalState,
                "select_child: node " + std::to_string(node) +
                    " is unexpanded, terminal or childless");
  }
  const auto children = tree.children(node);
  std::vector<EdgeStats> edges;
  edges.reserve(children.size());
  for (const TreeNode& child : children) edges.push_back(child.edge);
  return select_puct(edges, cfg.c_puct);
}

std::vector<double> path_returns(std::span<const double> rewards, double discount,
                                 BackupMode mode) {
  const std::size_t l = rewards.size();
  std::vector<double> returns(l, 0.0);
  // Suffix accumulation: inclusive G_k = r_k + discount * G_{k+1}.
  double suffix = 0.0;
  for (std::size_t k = l; k-- > 0;) {
    const double inclusive = rewards[k] + discount * suffix;
    returns[k] = mode == BackupMode::kInclusive ? inclusive : suffix;
    suffix = inclusive;
  }
  return returns;
}

void backup(SearchTree& tree, const SimulationPath& path, double discount,
            BackupMode mode) {
  const std::vector<double> returns = path_returns(path.rewards, discount, mode);
  for (std::size_t k = 0; k < path.nodes.size(); ++k) {
    EdgeStats& edge = tree.node(path.nodes[k]).edge;
    edge.q = (edge.n * edge.q + returns[k]) / (edge.n + 1);
    edge.n += 1;
  }
}

void expand(SearchTree& tree, int leaf, const SearchProblem& problem,
            const SearchConfig& cfg) {
  TreeNode& node = tree.node(leaf);
  if (node.expanded || node.terminal) {
    throw Error(ErrorKind::kInternalState,
                "expand: node " + std::to_string(leaf) + " is expanded or terminal");
  }
  if (node.depth >= cfg.max_depth) {
    node.terminal = true;
    return;
  }

  const bool is_root = leaf == SearchTree::kRoot;
  const std::optional<GridIndex> center = is_root ? tree.root_center : node.action;
  const bool constrained = is_root ? cfg.use_tree_constraint : cfg.use_node_constraint;
  const std::vector<GridIndex> candidates = constrained_actions(center, cfg, constrained);

  std::optional<GridIndex> learned;
  if (static_cast<std::size_t>(node.depth) < problem.prior_actions.size()) {
    learned = problem.prior_actions[static_cast<std::size_t>(node.depth)];
  }
  const std::vector<double> prior = compute_prior(candidates, node.depth, learned, cfg);

  static const ActionGrid grid;
  const int n_sub = cfg.substeps_per_node();
  const RewardContext ctx{*problem.snapshot.world, problem.predictions, problem.reward,
                          problem.vehicle};
  const EgoState parent_state = node.state;
  const int child_depth = node.depth + 1;
  const double root_time = tree.node(SearchTree::kRoot).time;
  const int first_tick = node.depth * n_sub;

  std::vector<TreeNode> children(candidates.size());
  std::vector<StampedState> substeps(static_cast<std::size_t>(n_sub));
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    const Action action = grid.action(candidates[c]);
    EgoState state = parent_state;
    for (int k = 0; k < n_sub; ++k) {
      state = integrate(state, action, cfg.sub_dt, problem.vehicle);
      substeps[static_cast<std::size_t>(k)] = {
          root_time + cfg.sub_dt * (first_tick + k + 1), state};
    }
    TreeNode& child = children[c];
    child.state = state;
    child.time = substeps.back().time;
    child.action = candidates[c];
    child.reward = evaluate_node(parent_state, substeps, child.time, ctx);
    child.edge.p = prior[c];
    const bool crashed = child.reward.collision < 0.0 &&
                         child.reward.collision == problem.reward.collision_vehicle_pedestrian;
    child.terminal = crashed || child_depth >= cfg.max_depth;
  }
  tree.attach_children(leaf, std::move(children));
}

SearchResult run_search(const SearchProblem& problem, std::optional<GridIndex> prev_executed,
                        const SearchConfig& cfg, const BackupObserver& observer) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();

  SearchResult result;
  SearchTree& tree = result.tree;
  tree = SearchTree(problem.snapshot.ego, problem.snapshot.time);
  tree.root_center = prev_executed;
  tree.reserve(static_cast<std::size_t>(cfg.n_simulations) * 25 + 1);

  SimulationPath path;
  for (int sim = 0; sim < cfg.n_simulations; ++sim) {
    path.nodes.clear();
    path.rewards.clear();
    int current = SearchTree::kRoot;
    while (tree.node(current).expanded && !tree.node(current).terminal &&
           tree.node(current).child_count > 0) {
      current = tree.child_id(current, select_child(tree, current, cfg));
      path.nodes.push_back(current);
    }
    if (!tree.node(current).terminal && !tree.node(current).expanded) {
      expand(tree, current, problem, cfg);
      ++result.expansions;
      const TreeNode& leaf = tree.node(current);
      if (leaf.expanded && leaf.child_count > 0) {
        current = tree.child_id(current, select_child(tree, current, cfg));
        path.nodes.push_back(current);
      }
    }
    if (path.nodes.empty()) break;  // root itself is terminal
    for (int id : path.nodes) path.rewards.push_back(tree.node(id).reward.total());
    if (observer) observer(tree, path);
    backup(tree, path, cfg.discount, cfg.backup);
  }

  result.elapsed_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return result;
}

std::vector<int> plan_nodes(const SearchTree& tree) {
  if (tree.size() == 0 || !tree.node(SearchTree::kRoot).expanded) {
    throw Error(ErrorKind::kInternalState, "extract_plan: root is not expanded");
  }
  std::vector<int> out;
  int current = SearchTree::kRoot;
  while (true) {
    const TreeNode& node = tree.node(current);
    if (node.terminal || node.child_count == 0) break;
    int best = -1;
    for (int k = 0; k < node.child_count; ++k) {
      const int id = node.first_child + k;
      const EdgeStats& e = tree.node(id).edge;
      if (e.n < 1) continue;
      if (best < 0) {
        best = id;
        continue;
      }
      const EdgeStats& b = tree.node(best).edge;
      if (e.q > b.q || (e.q == b.q && e.n > b.n)) best = id;
    }
    if (best < 0) break;
    out.push_back(best);
    current = best;
  }
  return out;
}

std::vector<GridIndex> extract_plan(const SearchTree& tree) {
  std::vector<GridIndex> plan;
  for (int id : plan_nodes(tree)) plan.push_back(*tree.node(id).action);
  return plan;
}

}  // namespace mbappe
