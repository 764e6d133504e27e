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

// Serializable snapshot of a search tree, with DOT rendering colored by Q.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mbappe/mcts.hpp"

namespace mbappe {

struct ExportNode {
  int id = 0;
  int parent = -1;
  int depth = 0;
  std::optional<GridIndex> action;
  double time = 0.0;
  EgoState state;
  /// Edge statistics into this node. The root carries the visit-weighted
  /// mean of its children and their total visit count, with P = 1.
  EdgeStats edge;
  RewardBreakdown reward;
  bool terminal = false;
  bool on_plan = false;
  std::vector<int> children;

  bool operator==(const ExportNode&) const = default;
};

struct TreeExport {
  std::string scenario_id;
  int step = 0;
  std::vector<ExportNode> nodes;  // nodes[i].id == i, root first

  bool operator==(const TreeExport&) const = default;
};

TreeExport export_tree(const SearchTree& tree, const std::string& scenario_id = {},
                       int step = 0);

nlohmann::json tree_to_json(const TreeExport& tree);
/// Throws Error(kMalformedInput) unless the records form one rooted,
/// acyclic tree with consistent parent and child references.
TreeExport tree_from_json(const nlohmann::json& doc);

TreeExport read_tree(const std::filesystem::path& path);
void write_tree(const std::filesystem::path& path, const TreeExport& tree);

/// "#RRGGBB" on a red-to-green ramp, t in [0, 1] (clamped).
std::string q_color(double t);

/// Maps q into [0, 1] over [lo, hi]; a degenerate range maps to 0.5.
double ramp_position(double q, double lo, double hi);

struct DotOptions {
  int min_visits = 0;  // nodes with fewer visits (and their subtrees) are dropped
};

/// Directed graph with one box per node labeled by action, Q and N, filled
/// on the Q ramp normalized over the exported nodes; plan edges are bold.
std::string to_dot(const TreeExport& tree, const DotOptions& options = {});

/// Indented outline, one node per line.
std::string to_text(const TreeExport& tree, const DotOptions& options = {});

}  // namespace mbappe
