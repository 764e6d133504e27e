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

// Command-line driver: closed-loop runs, batches, ablations, scenario
// generation and the tree / trajectory exporters.

#include <glob.h>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mbappe/ablation.hpp"
#include "mbappe/episode.hpp"
#include "mbappe/errors.hpp"
#include "mbappe/json_io.hpp"
#include "mbappe/metrics.hpp"
#include "mbappe/planner_config.hpp"
#include "mbappe/scenario.hpp"
#include "mbappe/svg_render.hpp"
#include "mbappe/tree_export.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace mbappe;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitInput = 3;
constexpr int kExitRuntime = 4;

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kConfig:
      return kExitUsage;
    case ErrorKind::kMalformedInput:
    case ErrorKind::kInputData:
    case ErrorKind::kScenarioInvalid:
    case ErrorKind::kPredictionUnavailable:
      return kExitInput;
    case ErrorKind::kEpisodeFailure:
    case ErrorKind::kInternalState:
      return kExitRuntime;
  }
  return kExitRuntime;
}

std::vector<fs::path> expand_glob(const std::string& pattern) {
  glob_t result{};
  std::vector<fs::path> paths;
  if (::glob(pattern.c_str(), 0, nullptr, &result) == 0) {
    for (std::size_t i = 0; i < result.gl_pathc; ++i) paths.emplace_back(result.gl_pathv[i]);
  }
  ::globfree(&result);
  if (paths.empty()) throw Error(ErrorKind::kInputData, "no scenario matches '" + pattern + "'");
  return paths;
}

std::vector<Scenario> load_scenarios(const std::string& pattern) {
  std::vector<Scenario> scenarios;
  for (const fs::path& path : expand_glob(pattern)) scenarios.push_back(read_scenario(path));
  return scenarios;
}

struct CommonOptions {
  std::string config;
  std::uint64_t seed = 0;
  std::optional<int> replan_every;
  std::string predictor;
  std::string predictor_file;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--config", o.config, "Planner configuration file")->check(CLI::ExistingFile);
  cmd->add_option("--seed", o.seed, "Search seed");
  cmd->add_option("--replan-every", o.replan_every, "Ticks between replans")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--predictor", o.predictor, "Predictor kind")
      ->check(CLI::IsMember({"cv", "scripted", "file"}));
  cmd->add_option("--predictor-file", o.predictor_file, "Precomputed trajectory file");
}

PlannerConfig resolve_config(const CommonOptions& o) {
  json doc = o.config.empty() ? json::object() : read_json_file(o.config);
  if (!doc.is_object()) throw Error(ErrorKind::kConfig, o.config + ": config must be an object");
  if (!o.predictor.empty()) {
    doc["predictor"] = o.predictor;
    if (o.predictor != "file") doc.erase("predictor_file");
  }
  if (!o.predictor_file.empty()) doc["predictor_file"] = o.predictor_file;
  if (o.replan_every) doc["replan_every"] = *o.replan_every;
  PlannerConfig config;
  try {
    config = planner_config_from_json(doc);
  } catch (const Error& e) {
    throw Error(e.kind(), (o.config.empty() ? std::string("config") : o.config) + ": " + e.what());
  }
  config.search.rng_seed = o.seed;
  return config;
}

void apply_vehicle(const PlannerConfig& config, std::vector<Scenario>& scenarios) {
  if (!config.vehicle) return;
  for (Scenario& s : scenarios) s.vehicle = *config.vehicle;
}

void print_metrics(const std::string& label, const Metrics& m) {
  std::printf("%s CR=%.4f DA=%.4f EP=%.4f score=%.2f episodes=%d\n", label.c_str(), m.cr, m.da,
              m.ep, m.score, m.episodes);
}

void create_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::kInputData, "cannot create " + dir.string() + ": " + ec.message());
}

int cmd_run(const std::string& scenario_path, const CommonOptions& common, const fs::path& out,
            bool dump_trees) {
  std::vector<Scenario> scenarios = {read_scenario(scenario_path)};
  const PlannerConfig config = resolve_config(common);
  apply_vehicle(config, scenarios);
  EpisodeOptions options = config.episode_options();
  options.keep_trees = dump_trees;
  const EpisodeLog log = run_episode(scenarios[0], options);

  create_dir(out);
  write_episode_log(out, log);
  if (dump_trees) {
    create_dir(out / "trees");
    for (const SearchSummary& s : log.searches) {
      char name[32];
      std::snprintf(name, sizeof name, "step_%04d.json", s.step);
      write_tree(out / "trees" / name, export_tree(*s.tree, log.scenario_id, s.step));
    }
  }
  const Metrics m = compute_metrics(std::span<const EpisodeLog>(&log, 1), scenarios);
  write_text_file(out / "metrics.json", metrics_to_json(m).dump(1) + "\n");
  print_metrics(log.scenario_id, m);
  return 0;
}

int cmd_batch(const std::string& pattern, const CommonOptions& common, const fs::path& out) {
  std::vector<Scenario> scenarios = load_scenarios(pattern);
  const PlannerConfig config = resolve_config(common);
  apply_vehicle(config, scenarios);
  const std::vector<EpisodeLog> logs =
      run_batch(scenarios, config.episode_options(), default_worker_count());
  const Metrics m = compute_metrics(logs, scenarios);
  create_dir(out);
  json per_scenario = json::array();
  for (std::size_t i = 0; i < logs.size(); ++i) {
    create_dir(out / logs[i].scenario_id);
    write_episode_log(out / logs[i].scenario_id, logs[i]);
    const ScenarioScore s = score_episode(logs[i], scenarios[i]);
    per_scenario.push_back({{"scenario_id", logs[i].scenario_id},
                            {"collision", s.collision},
                            {"off_drivable", s.off_drivable},
                            {"off_route", s.off_route},
                            {"EP", s.ep},
                            {"score", s.composite}});
  }
  json doc = metrics_to_json(m);
  doc["scenarios"] = per_scenario;
  write_text_file(out / "metrics.json", doc.dump(1) + "\n");
  print_metrics("batch", m);
  return 0;
}

std::vector<AblationSpec> resolve_specs(const std::string& specs) {
  if (specs == "prior") return AblationSpec::prior_specs();
  if (specs == "constraints") return AblationSpec::constraint_specs();
  const json doc = read_json_file(specs);
  if (!doc.is_array() || doc.empty()) {
    throw Error(ErrorKind::kConfig, specs + ": expected a non-empty array of ablation specs");
  }
  std::vector<AblationSpec> out;
  for (const json& entry : doc) {
    try {
      out.push_back(planner_config_from_json({{"ablation", entry}}).ablation);
    } catch (const Error& e) {
      throw Error(e.kind(), specs + ": " + e.what());
    }
  }
  return out;
}

std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      const unsigned long long v = std::stoull(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      seeds.push_back(v);
    } catch (const std::exception&) {
      throw Error(ErrorKind::kConfig, "invalid seed '" + item + "' in --seeds");
    }
  }
  if (seeds.empty()) throw Error(ErrorKind::kConfig, "--seeds is empty");
  return seeds;
}

int cmd_ablate(const std::string& pattern, bool builtin, const CommonOptions& common,
               const std::string& specs_arg, const std::string& seeds_arg, const fs::path& out,
               bool timing) {
  if (pattern.empty() == !builtin) {
    throw Error(ErrorKind::kConfig, "exactly one of --scenario or --builtin is required");
  }
  const PlannerConfig config = resolve_config(common);
  const std::vector<AblationSpec> specs = resolve_specs(specs_arg);
  const std::vector<std::uint64_t> seeds = parse_seeds(seeds_arg);
  const EpisodeOptions base = config.episode_options();
  const int workers = default_worker_count();
  AblationTable table;
  if (builtin) {
    table = run_ablation_matrix(
        [&](std::uint64_t seed) {
          std::vector<Scenario> suite = builtin_suite(seed);
          apply_vehicle(config, suite);
          return suite;
        },
        base, specs, seeds, workers);
  } else {
    std::vector<Scenario> scenarios = load_scenarios(pattern);
    apply_vehicle(config, scenarios);
    table = run_ablation_matrix(scenarios, base, specs, seeds, workers);
  }
  if (out.has_parent_path()) create_dir(out.parent_path());
  write_text_file(out, table.to_csv(timing));
  for (const AblationRow& row : table.rows) {
    print_metrics(row.spec.label(), row.metrics);
    if (!row.error.empty()) std::fprintf(stderr, "error: %s\n", row.error.c_str());
  }
  return table.ok() ? 0 : kExitRuntime;
}

int cmd_gen(const fs::path& out, const std::string& family, const std::vector<std::string>& params,
            std::uint64_t seed) {
  std::vector<Scenario> scenarios;
  if (family.empty()) {
    if (!params.empty()) throw Error(ErrorKind::kConfig, "--param requires --family");
    scenarios = builtin_suite(seed);
  } else {
    ScenarioParams values;
    for (const std::string& p : params) {
      const auto eq = p.find('=');
      if (eq == std::string::npos || eq == 0) {
        throw Error(ErrorKind::kConfig, "--param expects key=value, got '" + p + "'");
      }
      try {
        std::size_t used = 0;
        const std::string value = p.substr(eq + 1);
        values[p.substr(0, eq)] = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
      } catch (const std::exception&) {
        throw Error(ErrorKind::kConfig, "--param '" + p + "' has a non-numeric value");
      }
    }
    scenarios.push_back(generate_scenario(family, values, seed));
  }
  create_dir(out);
  for (const Scenario& s : scenarios) {
    write_scenario(out / (s.id() + ".json"), s);
    std::printf("%s\n", (out / (s.id() + ".json")).string().c_str());
  }
  return 0;
}

int cmd_export_tree(const std::string& tree_path, const std::string& scenario_path,
                    const CommonOptions& common, const std::string& format, int min_visits,
                    const std::string& out) {
  TreeExport tree;
  if (!tree_path.empty() == !scenario_path.empty()) {
    throw Error(ErrorKind::kConfig, "exactly one of --tree or --scenario is required");
  }
  if (!tree_path.empty()) {
    tree = read_tree(tree_path);
  } else {
    std::vector<Scenario> scenarios = {read_scenario(scenario_path)};
    const PlannerConfig config = resolve_config(common);
    apply_vehicle(config, scenarios);
    const Scenario& s = scenarios[0];
    const SearchResult result = search_once(s, config.episode_options(), 0.0, s.ego_init);
    tree = export_tree(result.tree, s.id(), 0);
  }
  const DotOptions options{min_visits};
  std::string text;
  if (format == "dot") {
    text = to_dot(tree, options);
  } else if (format == "json") {
    text = tree_to_json(tree).dump() + "\n";
  } else {
    text = to_text(tree, options);
  }
  if (out.empty() || out == "-") {
    std::fwrite(text.data(), 1, text.size(), stdout);
  } else {
    write_text_file(out, text);
  }
  return 0;
}

int cmd_render(const fs::path& log_dir, const std::string& scenario_path, const fs::path& out) {
  const Scenario scenario = read_scenario(scenario_path);
  const EpisodeLog log = read_episode_log(log_dir);
  const std::string svg = render_episode_svg(scenario, log);
  write_text_file(out, svg);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MCTS motion planner: closed-loop runs, ablations and exports"};
  app.require_subcommand(1);

  CommonOptions common;
  std::string scenario;
  std::string out;
  bool dump_trees = false;
  CLI::App* run = app.add_subcommand("run", "Run one closed-loop episode");
  run->add_option("--scenario", scenario, "Scenario file")->required();
  run->add_option("--out", out, "Output directory")->required();
  run->add_flag("--dump-trees", dump_trees, "Write every search tree");
  add_common(run, common);

  CLI::App* batch = app.add_subcommand("batch", "Run every scenario matching a glob");
  batch->add_option("--scenario", scenario, "Scenario glob")->required();
  batch->add_option("--out", out, "Output directory")->required();
  add_common(batch, common);

  bool builtin = false;
  std::string specs = "prior";
  std::string seeds = "0";
  bool timing = false;
  CLI::App* ablate = app.add_subcommand("ablate", "Run the ablation matrix");
  ablate->add_option("--scenario", scenario, "Scenario glob");
  ablate->add_flag("--builtin", builtin, "Use the built-in synthetic suite (drawn per seed)");
  ablate->add_option("--specs", specs, "'prior', 'constraints' or a JSON spec list");
  ablate->add_option("--seeds", seeds, "Comma-separated seeds");
  ablate->add_option("--out", out, "Output table (CSV)")->required();
  ablate->add_flag("--timing", timing, "Fill the mean search latency column");
  add_common(ablate, common);

  std::string family;
  std::vector<std::string> params;
  CLI::App* gen = app.add_subcommand("gen-scenarios", "Write synthetic scenarios");
  gen->add_option("--out", out, "Output directory")->required();
  gen->add_option("--family", family, "Single family (default: the built-in suite)")
      ->check(CLI::IsMember(scenario_families()));
  gen->add_option("--param", params, "Family parameter key=value");
  gen->add_option("--seed", common.seed, "Jitter seed");

  std::string tree_path;
  std::string format = "dot";
  int min_visits = 0;
  CLI::App* export_cmd = app.add_subcommand("export-tree", "Export a search tree");
  export_cmd->add_option("--tree", tree_path, "Serialized tree (from run --dump-trees)");
  export_cmd->add_option("--scenario", scenario, "Scenario for a live search at t = 0");
  export_cmd->add_option("--format", format, "dot, json or text")
      ->check(CLI::IsMember({"dot", "json", "text"}));
  export_cmd->add_option("--min-visits", min_visits, "Drop nodes visited fewer times")
      ->check(CLI::NonNegativeNumber);
  export_cmd->add_option("--out", out, "Output file (default: stdout)");
  add_common(export_cmd, common);

  std::string log_dir;
  CLI::App* render = app.add_subcommand("render-trajectory", "Render an episode as SVG");
  render->add_option("--log", log_dir, "Episode log directory")->required();
  render->add_option("--scenario", scenario, "Scenario file")->required();
  render->add_option("--out", out, "Output SVG")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (run->parsed()) return cmd_run(scenario, common, out, dump_trees);
    if (batch->parsed()) return cmd_batch(scenario, common, out);
    if (ablate->parsed()) {
      return cmd_ablate(scenario, builtin, common, specs, seeds, out, timing);
    }
    if (gen->parsed()) return cmd_gen(out, family, params, common.seed);
    if (export_cmd->parsed()) {
      return cmd_export_tree(tree_path, scenario, common, format, min_visits, out);
    }
    if (render->parsed()) return cmd_render(log_dir, scenario, out);
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitRuntime;
  }
  return kExitUsage;
}
