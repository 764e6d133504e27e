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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Cholesky>

#include "mbappe/ablation.hpp"
#include "mbappe/episode.hpp"
#include "mbappe/metrics.hpp"
#include "mbappe/svg_render.hpp"
#include "mbappe/tree_export.hpp"
#include "oracles.hpp"

namespace {

using namespace mbappe;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;

  void check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

int failures = 0;

void report(const std::string& id, const std::string& title, const Outcome& o,
            const std::string& summary) {
  std::printf("[%s] %s %s: %s%s%s\n", o.pass ? "PASS" : "FAIL", id.c_str(), title.c_str(),
              summary.c_str(), o.detail.empty() ? "" : " | ", o.detail.c_str());
  std::fflush(stdout);
  if (!o.pass) ++failures;
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

// 1. PUCT selection against a brute-force argmax.
void puct_oracle() {
  const auto start = Clock::now();
  std::mt19937_64 gen(1);
  std::uniform_int_distribution<int> size(1, 40), visits(0, 6), coarse(-4, 4), prior(1, 6);
  std::uniform_real_distribution<double> fine(-3.0, 3.0);
  SearchConfig cfg;
  Outcome o;
  int mismatches = 0;
  const int tables = 10000;
  for (int t = 0; t < tables; ++t) {
    const int n = size(gen);
    SearchTree tree(EgoState{}, 0.0);
    std::vector<TreeNode> children(static_cast<std::size_t>(n));
    std::vector<oracle::Edge> mirror;
    const bool tied = t % 2 == 0;  // half the tables use coarse values that tie often
    for (TreeNode& c : children) {
      const double q = tied ? 0.5 * coarse(gen) : fine(gen);
      const int nv = visits(gen);
      const double p = tied ? 0.05 * prior(gen) : 0.01 * prior(gen) + 1e-3 * fine(gen) + 0.05;
      c.edge = {q, nv, p};
      mirror.push_back({q, nv, p});
    }
    tree.attach_children(SearchTree::kRoot, children);
    // attach_children resets visit statistics; restore them.
    for (int k = 0; k < n; ++k) {
      tree.node(tree.child_id(SearchTree::kRoot, k)).edge = {mirror[static_cast<std::size_t>(k)].q,
                                                            mirror[static_cast<std::size_t>(k)].n,
                                                            mirror[static_cast<std::size_t>(k)].p};
    }
    if (select_child(tree, SearchTree::kRoot, cfg) != oracle::puct_argmax(mirror, cfg.c_puct)) {
      ++mismatches;
    }
  }
  const double elapsed = seconds_since(start);
  o.check(mismatches == 0, std::to_string(mismatches) + " mismatches");
  o.check(elapsed < 5.0, "runtime " + fmt("%.2f s", elapsed));
  report("1", "PUCT selection oracle", o,
         std::to_string(tables) + " tables, " + std::to_string(mismatches) + " mismatches, " +
             fmt("%.3f s", elapsed));
}

// Everything a SearchProblem refers to, for one scenario and time.
struct Bundle {
  Scenario scenario;
  WorldSnapshot snapshot;
  PredictionSet predictions;
  RewardConfig reward;
  std::vector<GridIndex> prior;

  Bundle(Scenario s, double time, double horizon) : scenario(std::move(s)) {
    const Pose p = route_pose_at(scenario.world.map, 10.0 + 5.0 * time);
    EgoState ego{p.x, p.y, p.heading, scenario.ego_init.velocity};
    if (time == 0.0) ego = scenario.ego_init;
    snapshot = make_snapshot(scenario.world, time, ego);
    predictions = predict(snapshot, horizon, PredictorKind::scripted());
    prior = ego_prior_actions(predictions, scenario.vehicle);
  }
  SearchProblem problem() const {
    return {snapshot, predictions, reward, scenario.vehicle, prior};
  }
};

// 2. Q is the mean of delivered returns; root visits are conserved.
void backup_invariant() {
  const auto start = Clock::now();
  std::vector<std::unique_ptr<Bundle>> bundles;
  for (const std::string& family : scenario_families()) {
    for (double t : {0.0, 2.0, 4.5}) {
      bundles.push_back(std::make_unique<Bundle>(generate_scenario(family, {}, 11), t, 8.0));
    }
  }
  std::mt19937_64 gen(2);
  std::uniform_int_distribution<int> sims(1, 80), depth(1, 8), pick(0, 1 << 20);
  std::uniform_real_distribution<double> c(0.0, 4.0);
  const double discounts[] = {1.0, 0.95, 0.5};
  Outcome o;
  int bad_mean = 0, bad_count = 0, bad_conservation = 0;
  double worst = 0.0;
  const int runs = 1000;
  for (int run = 0; run < runs; ++run) {
    const Bundle& b = *bundles[static_cast<std::size_t>(pick(gen)) % bundles.size()];
    SearchConfig cfg;
    cfg.n_simulations = sims(gen);
    cfg.max_depth = depth(gen);
    cfg.c_puct = c(gen);
    cfg.discount = discounts[pick(gen) % 3];
    cfg.backup = pick(gen) % 2 ? BackupMode::kInclusive : BackupMode::kExclusive;
    cfg.use_tree_constraint = pick(gen) % 3 != 0;
    cfg.use_node_constraint = pick(gen) % 3 != 0;
    cfg.use_learned_prior = pick(gen) % 2;
    cfg.use_handcrafted_prior = pick(gen) % 2;
    std::optional<GridIndex> prev;
    if (pick(gen) % 2) prev = GridIndex{pick(gen) % 13, pick(gen) % 13};

    std::map<int, std::pair<double, int>> delivered;  // node -> (sum, count)
    const auto observer = [&](const SearchTree&, const SimulationPath& path) {
      const std::size_t l = path.rewards.size();
      for (std::size_t k = 0; k < l; ++k) {
        // Independent return: discounted sum of the rewards after (and, when
        // inclusive, at) position k.
        double g = 0.0, w = 1.0;
        const std::size_t from = cfg.backup == BackupMode::kInclusive ? k : k + 1;
        for (std::size_t j = from; j < l; ++j) {
          g += w * path.rewards[j];
          w *= cfg.discount;
        }
        auto& [sum, count] = delivered[path.nodes[k]];
        sum += g;
        ++count;
      }
    };
    const SearchResult r = run_search(b.problem(), prev, cfg, observer);
    for (std::size_t id = 1; id < r.tree.size(); ++id) {
      const EdgeStats& e = r.tree.nodes()[id].edge;
      const auto it = delivered.find(static_cast<int>(id));
      const int count = it == delivered.end() ? 0 : it->second.second;
      const double mean = count == 0 ? 0.0 : it->second.first / count;
      if (e.n != count) ++bad_count;
      const double err = std::abs(e.q - mean);
      worst = std::max(worst, err);
      if (err > 1e-9) ++bad_mean;
    }
    int root_visits = 0;
    for (const TreeNode& child : r.tree.children(SearchTree::kRoot)) root_visits += child.edge.n;
    if (root_visits != cfg.n_simulations) ++bad_conservation;
  }
  o.check(bad_mean == 0, std::to_string(bad_mean) + " edges with Q off the mean");
  o.check(bad_count == 0, std::to_string(bad_count) + " edges with N off the count");
  o.check(bad_conservation == 0,
          std::to_string(bad_conservation) + " runs violating root visit conservation");
  report("2", "backup mean invariant", o,
         std::to_string(runs) + " runs, max |Q - mean| = " + fmt("%.2e", worst) + ", " +
             fmt("%.2f s", seconds_since(start)));
}

// 3. Kinematic rollout geometry and action recovery.
void kinematics() {
  Outcome o;
  VehicleParams params;
  params.wheelbase = 3.0;
  const double delta = 0.2, v = 5.0, dt = 0.1;
  const auto states = rollout({0.0, 0.0, 0.0, v}, {0.0, delta}, 100, dt, params);
  // Algebraic least-squares circle fit over the traced positions.
  Eigen::Matrix3d ata = Eigen::Matrix3d::Zero();
  Eigen::Vector3d atb = Eigen::Vector3d::Zero();
  for (const EgoState& s : states) {
    const Eigen::Vector3d row(s.x, s.y, 1.0);
    ata += row * row.transpose();
    atb += row * -(s.x * s.x + s.y * s.y);
  }
  const Eigen::Vector3d sol = ata.ldlt().solve(atb);
  const Eigen::Vector2d center(-0.5 * sol(0), -0.5 * sol(1));
  const double fitted = std::sqrt(center.squaredNorm() - sol(2));
  const double analytic = params.wheelbase / std::tan(delta);
  double spread = 0.0;
  for (const EgoState& s : states) {
    spread = std::max(spread, std::abs((s.position() - center).norm() - analytic) / analytic);
  }
  o.check(spread <= 0.01, "radial deviation " + fmt("%.4f", spread));

  double heading_err = 0.0;
  EgoState prev{0.0, 0.0, 0.0, v};
  for (const EgoState& s : states) {
    const double expected = v * std::tan(delta) / params.wheelbase * dt;
    heading_err = std::max(heading_err, std::abs(wrap_angle(s.heading - prev.heading) - expected));
    prev = s;
  }
  o.check(heading_err <= 1e-9, "heading increment error " + fmt("%.2e", heading_err));

  const ActionGrid grid;
  int recovered = 0;
  for (int i = 0; i < ActionGrid::kSize; ++i) {
    for (int j = 0; j < ActionGrid::kSize; ++j) {
      const GridIndex idx{i, j};
      const EgoState start{3.0, -2.0, 0.4, 5.0};
      std::vector<Pose> poses = {start.pose()};
      bool fast_enough = true;
      for (const EgoState& s : rollout(start, grid.action(idx), 12, dt)) {
        poses.push_back(s.pose());
        fast_enough &= s.velocity >= 1.0;
      }
      bool exact = fast_enough;
      for (const Action& a : trajectory_to_actions(poses, dt)) exact &= snap_to_grid(a) == idx;
      recovered += exact;
    }
  }
  o.check(recovered == 169, std::to_string(recovered) + "/169 actions recovered");
  report("3", "kinematic bicycle rollout", o,
         "fitted radius " + fmt("%.4f", fitted) + " vs L/tan(delta) " + fmt("%.4f", analytic) +
             ", max radial deviation " + fmt("%.3f%%", 100.0 * spread) +
             ", heading error " + fmt("%.1e", heading_err) + ", " + std::to_string(recovered) +
             "/169 round trips");
}

// 4. Prior shape on the default window and the full grid.
void prior_shape() {
  Outcome o;
  SearchConfig cfg;
  auto ratio = [](const std::vector<double>& p) {
    return *std::max_element(p.begin(), p.end()) / *std::min_element(p.begin(), p.end());
  };
  const auto window = constrained_actions(std::nullopt, cfg);
  const double r21 = ratio(compute_prior(window, 0, std::nullopt, cfg));
  o.check(window.size() == 21, "window has " + std::to_string(window.size()) + " candidates");
  o.check(std::abs(r21 - std::exp(10.0 / 200.0)) <= 1e-9,
          "window ratio " + fmt("%.12f", r21) + " != exp(10/200)");
  SearchConfig open = cfg;
  open.use_tree_constraint = false;
  open.use_node_constraint = false;
  const auto full = constrained_actions(std::nullopt, open, false);
  const double r169 = ratio(compute_prior(full, 0, std::nullopt, open));
  const double target = std::exp(144.0 / 200.0);
  o.check(full.size() == 169, "full grid has " + std::to_string(full.size()) + " candidates");
  o.check(std::abs(r169 - target) <= 1e-9,
          "full-grid ratio " + fmt("%.6f", r169) + " != exp(144/200) = " + fmt("%.6f", target));
  report("4", "prior shape", o,
         "21-window ratio " + fmt("%.12f", r21) + " (exp(10/200) = " +
             fmt("%.12f", std::exp(10.0 / 200.0)) + "), 169-grid ratio " + fmt("%.6f", r169));
}

// 5. Collision and projection geometry against sampling and enumeration.
void geometry() {
  Outcome o;
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> pos(-4.0, 4.0), ang(-3.2, 3.2), dim(0.5, 5.0);
  int pairs = 0, disagree = 0, skipped = 0;
  while (pairs < 1000) {
    const OrientedBox a{Eigen::Vector2d(pos(gen), pos(gen)), ang(gen), dim(gen), dim(gen)};
    const OrientedBox b{Eigen::Vector2d(pos(gen), pos(gen)), ang(gen), dim(gen), dim(gen)};
    const oracle::Rect ra{a.center, a.heading, a.length, a.width};
    const oracle::Rect rb{b.center, b.heading, b.length, b.width};
    if (std::abs(oracle::axis_margin(ra, rb)) < 1e-3) {
      ++skipped;
      continue;
    }
    ++pairs;
    disagree += boxes_overlap(a, b) != oracle::sampled_overlap(ra, rb);
  }
  o.check(disagree == 0, std::to_string(disagree) + " box pairs disagree");

  std::uniform_real_distribution<double> coord(-30.0, 30.0), step(2.0, 15.0);
  std::uniform_int_distribution<int> verts(2, 9);
  int suboptimal = 0;
  double worst = 0.0;
  for (int t = 0; t < 1000; ++t) {
    std::vector<Eigen::Vector2d> line = {{coord(gen), coord(gen)}};
    const int n = verts(gen);
    double heading = ang(gen);
    for (int k = 1; k < n; ++k) {
      heading += 0.8 * ang(gen);
      const double l = step(gen);
      line.push_back(line.back() + l * Eigen::Vector2d(std::cos(heading), std::sin(heading)));
    }
    const MapModel map({Centerline("c", line, 5.0, 4.0)}, {}, {"c"});
    const Pose p{coord(gen), coord(gen), ang(gen)};
    const double got = project_to_centerline(p, map, true).distance;
    const double best = oracle::polyline_distance(p.position(), line);
    worst = std::max(worst, std::abs(got - best));
    suboptimal += std::abs(got - best) > 1e-9;
  }
  o.check(suboptimal == 0, std::to_string(suboptimal) + " projections off the optimum");
  report("5", "geometry oracles", o,
         "1000 box pairs (" + std::to_string(skipped) + " near-tangent resampled), " +
             std::to_string(disagree) + " disagreements; 1000 polylines, max distance error " +
             fmt("%.1e", worst));
}

EpisodeOptions scripted_defaults() {
  EpisodeOptions o;
  o.predictor = PredictorKind::scripted();
  return o;
}

// 6. Closed-loop safety on the scenario families.
void safety() {
  const auto start = Clock::now();
  Outcome o;
  const EpisodeOptions options = scripted_defaults();
  int straight_bad = 0, lead_collisions = 0, lead_not_halted = 0, ped_collisions = 0,
      turn_da = 0;
  double min_ep = 1.0, min_gap = 1e9, max_final_speed = 0.0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    {
      const Scenario s = generate_scenario("straight", {}, seed);
      const EpisodeLog log = run_episode(s, options);
      const ScenarioScore sc = score_episode(log, s);
      min_ep = std::min(min_ep, sc.ep);
      straight_bad += sc.collision || sc.off_drivable || sc.off_route || sc.ep < 0.9;
    }
    {
      const Scenario s = generate_scenario("stopped_lead_vehicle", {}, seed);
      const EpisodeLog log = run_episode(s, options);
      lead_collisions += log.collided();
      const AgentTrack& lead = s.world.agents[0];
      const Pose lead_pose = agent_pose_at(lead, log.ticks.back().time);
      const EgoState& ego = log.ticks.back().ego;
      const Eigen::Vector2d front =
          ego.position() + (s.vehicle.length - s.vehicle.rear_overhang) *
                               Eigen::Vector2d(std::cos(ego.heading), std::sin(ego.heading));
      const double gap = (lead_pose.x - 0.5 * lead.length) - front.x();
      min_gap = std::min(min_gap, gap);
      max_final_speed = std::max(max_final_speed, ego.velocity);
      lead_not_halted += !(gap > 0.0 && ego.velocity < 0.1);
    }
    {
      const Scenario s = generate_scenario("crossing_pedestrian", {}, seed);
      ped_collisions += run_episode(s, options).collided();
    }
    {
      const Scenario s = generate_scenario("right_turn", {}, seed);
      turn_da += run_episode(s, options).first_off_drivable.has_value();
    }
  }
  const double elapsed = seconds_since(start);
  o.check(straight_bad == 0,
          std::to_string(straight_bad) + " straight episodes with infractions or EP < 0.9");
  o.check(lead_collisions == 0, std::to_string(lead_collisions) + " lead-vehicle collisions");
  o.check(lead_not_halted == 0, std::to_string(lead_not_halted) +
                                    " lead-vehicle episodes without a halt at a positive gap");
  o.check(ped_collisions == 0, std::to_string(ped_collisions) + " pedestrian collisions");
  o.check(turn_da == 0, std::to_string(turn_da) + " right-turn drivable-area violations");
  o.check(elapsed < 600.0, "runtime " + fmt("%.0f s", elapsed));
  report("6", "closed-loop safety suite", o,
         "straight min EP " + fmt("%.3f", min_ep) + ", lead min gap " + fmt("%.2f m", min_gap) +
             " (max final speed " + fmt("%.3f m/s", max_final_speed) + "), pedestrian collisions " +
             std::to_string(ped_collisions) + ", right-turn DA violations " +
             std::to_string(turn_da) + ", " + fmt("%.1f s", elapsed));
}

// 7. Prior ablation trend on the synthetic suite.
void ablation_trend() {
  const auto start = Clock::now();
  Outcome o;
  const auto specs = AblationSpec::prior_specs();
  const std::vector<std::uint64_t> seeds = {0, 1, 2};
  const AblationTable table = run_ablation_matrix(
      [](std::uint64_t seed) { return builtin_suite(seed); }, scripted_defaults(), specs, seeds,
      default_worker_count());
  std::map<std::string, double> score;
  for (const AblationRow& row : table.rows) {
    score[row.spec.label()] = row.metrics.score;
    o.check(row.error.empty(), row.spec.label() + ": " + row.error);
    o.check(row.metrics.episodes == 60, row.spec.label() + " ran " +
                                            std::to_string(row.metrics.episodes) + " episodes");
  }
  const double none = score["none"], learned = score["learned"],
               handcrafted = score["handcrafted"], both = score["both"];
  o.check(both - none >= 20.0, "both - none = " + fmt("%.2f", both - none) + " < 20");
  o.check(both >= learned, "both " + fmt("%.2f", both) + " < learned " + fmt("%.2f", learned));
  o.check(both >= handcrafted,
          "both " + fmt("%.2f", both) + " < handcrafted " + fmt("%.2f", handcrafted));
  report("7", "prior ablation trend", o,
         "score none " + fmt("%.2f", none) + ", learned " + fmt("%.2f", learned) +
             ", handcrafted " + fmt("%.2f", handcrafted) + ", both " + fmt("%.2f", both) +
             " (20 scenarios x 3 seeds), " + fmt("%.1f s", seconds_since(start)));
}

// 8. Search latency with 20 agents.
void performance() {
  Scenario s = generate_scenario("straight", {{"length", 200.0}, {"duration", 12.0}}, 0);
  s.world.id = "dense";
  std::mt19937_64 gen(8);
  std::uniform_real_distribution<double> x(5.0, 120.0), lateral(-3.0, 3.0), speed(0.0, 6.0);
  for (int k = 0; k < 20; ++k) {
    AgentTrack a;
    a.id = "agent" + std::to_string(k);
    a.kind = k % 5 == 0 ? AgentKind::kPedestrian : AgentKind::kVehicle;
    a.length = a.kind == AgentKind::kPedestrian ? 0.6 : 4.5;
    a.width = a.kind == AgentKind::kPedestrian ? 0.6 : 2.0;
    const double x0 = x(gen), y0 = lateral(gen), v = speed(gen);
    for (int t = 0; t <= 130; ++t) a.trajectory.push_back({x0 + v * 0.1 * t, y0, 0.0});
    s.world.agents.push_back(std::move(a));
  }
  EpisodeOptions options;  // constant-velocity predictor
  Outcome o;
  double worst = 0.0;
  int expansions = 0;
  for (int rep = 0; rep < 3; ++rep) {
    const auto start = Clock::now();
    const SearchResult r = search_once(s, options, 1.0, s.ego_init);
    worst = std::max(worst, seconds_since(start));
    expansions = r.expansions;
  }
  o.check(worst < 0.5, "slowest search " + fmt("%.3f s", worst));
  report("8", "search latency", o,
         "256 simulations, 20 agents, slowest of 3 = " + fmt("%.3f s", worst) + " (" +
             std::to_string(expansions) + " expansions)");
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// 9. Deterministic logs and exports; DOT grammar; lossless tree round trip.
void determinism_exports() {
  namespace fs = std::filesystem;
  Outcome o;
  const Scenario s = generate_scenario("crossing_pedestrian", {}, 9);
  EpisodeOptions options;
  options.search.rng_seed = 9;
  options.keep_trees = true;
  const fs::path root = fs::temp_directory_path() / "mbappe_acceptance_determinism";
  fs::remove_all(root);
  std::vector<std::string> dots, jsons, svgs;
  for (const char* run : {"a", "b"}) {
    const EpisodeLog log = run_episode(s, options);
    write_episode_log(root / run, log);
    std::string dot, json;
    for (const SearchSummary& summary : log.searches) {
      const TreeExport t = export_tree(*summary.tree, s.id(), summary.step);
      dot += to_dot(t);
      json += tree_to_json(t).dump();
    }
    dots.push_back(dot);
    jsons.push_back(json);
    svgs.push_back(render_episode_svg(s, log));
  }
  for (const char* f : {"episode.ndjson", "search.ndjson", "result.json"}) {
    o.check(slurp(root / "a" / f) == slurp(root / "b" / f), std::string(f) + " differs");
  }
  o.check(dots[0] == dots[1], "DOT exports differ");
  o.check(jsons[0] == jsons[1], "tree exports differ");
  o.check(svgs[0] == svgs[1], "SVG renders differ");

  const EpisodeLog log = run_episode(s, options);
  int parsed = 0, round_trips = 0;
  for (const SearchSummary& summary : log.searches) {
    const TreeExport t = export_tree(*summary.tree, s.id(), summary.step);
    oracle::DotChecker checker(to_dot(t));
    if (checker.parse() && checker.node_attrs().size() == t.nodes.size()) ++parsed;
    const fs::path file = root / ("tree_" + std::to_string(summary.step) + ".json");
    write_tree(file, t);
    round_trips += read_tree(file) == t;
  }
  const int n = static_cast<int>(log.searches.size());
  o.check(parsed == n, std::to_string(n - parsed) + " DOT exports failed the grammar check");
  o.check(round_trips == n, std::to_string(n - round_trips) + " tree round trips lost data");
  fs::remove_all(root);
  report("9", "determinism and exports", o,
         "2 identical runs, " + std::to_string(parsed) + "/" + std::to_string(n) +
             " DOT exports parsed, " + std::to_string(round_trips) + "/" + std::to_string(n) +
             " lossless tree round trips");
}

}  // namespace

int main() {
  const std::vector<std::function<void()>> criteria = {
      puct_oracle, backup_invariant, kinematics,  prior_shape,          geometry,
      safety,      ablation_trend,   performance, determinism_exports};
  int index = 1;
  for (const auto& criterion : criteria) {
    try {
      criterion();
    } catch (const std::exception& e) {
      std::printf("[FAIL] %d raised: %s\n", index, e.what());
      ++failures;
    }
    ++index;
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
