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

#include "mbappe/tree_export.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>

#include "mbappe/errors.hpp"
#include "mbappe/json_io.hpp"

namespace mbappe {

using json = nlohmann::json;

TreeExport export_tree(const SearchTree& tree, const std::string& scenario_id, int step) {
  TreeExport out;
  out.scenario_id = scenario_id;
  out.step = step;
  out.nodes.resize(tree.size());
  for (std::size_t i = 0; i < tree.size(); ++i) {
    const TreeNode& n = tree.nodes()[i];
    ExportNode& e = out.nodes[i];
    e.id = static_cast<int>(i);
    e.parent = n.parent;
    e.depth = n.depth;
    e.action = n.action;
    e.time = n.time;
    e.state = n.state;
    e.edge = n.edge;
    e.reward = n.reward;
    e.terminal = n.terminal;
    for (int c = 0; c < n.child_count; ++c) e.children.push_back(n.first_child + c);
  }
  ExportNode& root = out.nodes[SearchTree::kRoot];
  double weighted = 0.0;
  int visits = 0;
  for (int c : root.children) {
    weighted += out.nodes[static_cast<std::size_t>(c)].edge.q *
                out.nodes[static_cast<std::size_t>(c)].edge.n;
    visits += out.nodes[static_cast<std::size_t>(c)].edge.n;
  }
  root.edge = {visits > 0 ? weighted / visits : 0.0, visits, 1.0};
  root.on_plan = true;
  if (tree.node(SearchTree::kRoot).expanded) {
    for (int id : plan_nodes(tree)) out.nodes[static_cast<std::size_t>(id)].on_plan = true;
  }
  return out;
}

namespace {

json state_json(const EgoState& s) { return json::array({s.x, s.y, s.heading, s.velocity}); }

EgoState state_from(const json& j) {
  if (!j.is_array() || j.size() != 4) throw Error(ErrorKind::kMalformedInput, "bad state");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>()};
}

[[noreturn]] void malformed(const std::string& what) {
  throw Error(ErrorKind::kMalformedInput, "tree: " + what);
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  std::string s = buf;
  // Avoid "-0.000".
  if (s[0] == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

// Nodes kept by the visit filter, in id order. A node survives when it and
// all its ancestors meet the threshold; the root is always kept.
std::vector<bool> kept_nodes(const TreeExport& tree, int min_visits) {
  std::vector<bool> keep(tree.nodes.size(), false);
  if (tree.nodes.empty()) return keep;
  keep[0] = true;
  for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
    if (!keep[i]) continue;
    for (int c : tree.nodes[i].children) {
      const std::size_t ci = static_cast<std::size_t>(c);
      keep[ci] = tree.nodes[ci].edge.n >= min_visits;
    }
  }
  return keep;
}

std::string node_label(const ExportNode& n) {
  std::string label;
  if (n.action) {
    const Action a = ActionGrid{}.action(*n.action);
    label = "a=" + fixed(a.accel, 2) + ", \xCE\xB4=" + fixed(a.steer, 3);
  } else {
    label = "a=root, \xCE\xB4=root";
  }
  return label + ", Q=" + fixed(n.edge.q, 3) + ", N=" + std::to_string(n.edge.n);
}

}  // namespace

json tree_to_json(const TreeExport& tree) {
  json nodes = json::array();
  for (const ExportNode& n : tree.nodes) {
    const RewardBreakdown& r = n.reward;
    nodes.push_back(
        {{"id", n.id},
         {"parent", n.parent},
         {"depth", n.depth},
         {"action", n.action ? json::array({n.action->accel, n.action->steer}) : json(nullptr)},
         {"time", n.time},
         {"state", state_json(n.state)},
         {"q", n.edge.q},
         {"n", n.edge.n},
         {"p", n.edge.p},
         {"reward",
          json::array({r.progress, r.collision, r.route, r.drivable, r.heading_center,
                       r.lateral_center})},
         {"terminal", n.terminal},
         {"on_plan", n.on_plan},
         {"children", n.children}});
  }
  return {{"scenario_id", tree.scenario_id}, {"step", tree.step}, {"nodes", nodes}};
}

TreeExport tree_from_json(const json& doc) {
  TreeExport tree;
  try {
    if (!doc.is_object()) malformed("document must be an object");
    tree.scenario_id = doc.at("scenario_id").get<std::string>();
    tree.step = doc.at("step").get<int>();
    for (const json& j : doc.at("nodes")) {
      ExportNode n;
      n.id = j.at("id").get<int>();
      n.parent = j.at("parent").get<int>();
      n.depth = j.at("depth").get<int>();
      if (!j.at("action").is_null()) {
        const json& a = j.at("action");
        n.action = GridIndex{a.at(0).get<int>(), a.at(1).get<int>()};
        if (!ActionGrid::valid(*n.action)) malformed("action index out of range");
      }
      n.time = j.at("time").get<double>();
      n.state = state_from(j.at("state"));
      n.edge = {j.at("q").get<double>(), j.at("n").get<int>(), j.at("p").get<double>()};
      const json& r = j.at("reward");
      if (!r.is_array() || r.size() != 6) malformed("reward must have 6 terms");
      n.reward = {r[0].get<double>(), r[1].get<double>(), r[2].get<double>(),
                  r[3].get<double>(), r[4].get<double>(), r[5].get<double>()};
      n.terminal = j.at("terminal").get<bool>();
      n.on_plan = j.at("on_plan").get<bool>();
      n.children = j.at("children").get<std::vector<int>>();
      tree.nodes.push_back(std::move(n));
    }
  } catch (const json::exception& e) {
    malformed(e.what());
  }

  const int count = static_cast<int>(tree.nodes.size());
  if (count == 0) malformed("no nodes");
  int roots = 0;
  for (int i = 0; i < count; ++i) {
    const ExportNode& n = tree.nodes[static_cast<std::size_t>(i)];
    if (n.id != i) malformed("node ids must be 0..n-1 in order");
    if (n.parent == -1) {
      ++roots;
      if (i != 0) malformed("the root must be node 0");
    } else if (n.parent < 0 || n.parent >= count || n.parent == i) {
      malformed("node " + std::to_string(i) + " has an invalid parent");
    }
    for (int c : n.children) {
      if (c < 0 || c >= count) malformed("node " + std::to_string(i) + " has an invalid child");
      if (tree.nodes[static_cast<std::size_t>(c)].parent != i) {
        malformed("child " + std::to_string(c) + " does not point back to " + std::to_string(i));
      }
    }
  }
  if (roots != 1) malformed("expected exactly one root, found " + std::to_string(roots));
  // Every node must be reached exactly once from the root.
  std::vector<int> seen(static_cast<std::size_t>(count), 0);
  std::vector<int> stack = {0};
  while (!stack.empty()) {
    const int id = stack.back();
    stack.pop_back();
    if (seen[static_cast<std::size_t>(id)]++) malformed("cycle through node " + std::to_string(id));
    for (int c : tree.nodes[static_cast<std::size_t>(id)].children) stack.push_back(c);
  }
  for (int i = 0; i < count; ++i) {
    if (!seen[static_cast<std::size_t>(i)]) {
      malformed("node " + std::to_string(i) + " is unreachable from the root");
    }
  }
  return tree;
}

TreeExport read_tree(const std::filesystem::path& path) {
  try {
    return tree_from_json(read_json_file(path));
  } catch (const Error& e) {
    const ErrorKind kind = e.kind() == ErrorKind::kInputData && std::filesystem::exists(path)
                               ? ErrorKind::kMalformedInput
                               : e.kind();
    throw Error(kind, path.string() + ": " + e.what());
  }
}

void write_tree(const std::filesystem::path& path, const TreeExport& tree) {
  write_text_file(path, tree_to_json(tree).dump() + "\n");
}

std::string q_color(double t) {
  t = std::clamp(t, 0.0, 1.0);
  const int r = static_cast<int>(std::lround(255.0 * (1.0 - t)));
  const int g = static_cast<int>(std::lround(255.0 * t));
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02X%02X00", r, g);
  return buf;
}

double ramp_position(double q, double lo, double hi) {
  if (!(hi > lo)) return 0.5;
  return std::clamp((q - lo) / (hi - lo), 0.0, 1.0);
}

std::string to_dot(const TreeExport& tree, const DotOptions& options) {
  const std::vector<bool> keep = kept_nodes(tree, options.min_visits);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
    if (!keep[i]) continue;
    lo = std::min(lo, tree.nodes[i].edge.q);
    hi = std::max(hi, tree.nodes[i].edge.q);
  }
  std::string out = "digraph mcts {\n";
  out += "  node [shape=box, style=filled, fontname=\"Helvetica\"];\n";
  for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
    if (!keep[i]) continue;
    const ExportNode& n = tree.nodes[i];
    out += "  n" + std::to_string(n.id) + " [label=\"" + node_label(n) + "\", fillcolor=\"" +
           q_color(ramp_position(n.edge.q, lo, hi)) + "\"];\n";
  }
  for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
    if (!keep[i]) continue;
    for (int c : tree.nodes[i].children) {
      const ExportNode& child = tree.nodes[static_cast<std::size_t>(c)];
      if (!keep[static_cast<std::size_t>(c)]) continue;
      out += "  n" + std::to_string(tree.nodes[i].id) + " -> n" + std::to_string(child.id);
      out += child.on_plan && tree.nodes[i].on_plan ? " [style=bold];\n" : ";\n";
    }
  }
  out += "}\n";
  return out;
}

std::string to_text(const TreeExport& tree, const DotOptions& options) {
  const std::vector<bool> keep = kept_nodes(tree, options.min_visits);
  std::string out;
  std::function<void(int)> visit = [&](int id) {
    const ExportNode& n = tree.nodes[static_cast<std::size_t>(id)];
    out += std::string(static_cast<std::size_t>(2 * n.depth), ' ') + node_label(n) + ", P=" +
           fixed(n.edge.p, 4) + ", r=" + fixed(n.reward.total(), 3) +
           (n.terminal ? ", terminal" : "") + (n.on_plan ? ", plan" : "") + "\n";
    for (int c : n.children) {
      if (keep[static_cast<std::size_t>(c)]) visit(c);
    }
  };
  if (!tree.nodes.empty()) visit(0);
  return out;
}

}  // namespace mbappe
