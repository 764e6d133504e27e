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

#include "mbappe/ablation.hpp"

#include <atomic>
#include <cstdlib>
#include <exception>
#include <iomanip>
#include <sstream>
#include <thread>

#include "mbappe/errors.hpp"

namespace mbappe {

int default_worker_count() {
  if (const char* env = std::getenv("MBAPPE_NUM_WORKERS")) {
    char* end = nullptr;
    const long value = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && value > 0) return static_cast<int>(value);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn) {
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t threads =
      std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, workers)));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::vector<EpisodeLog> run_batch(std::span<const Scenario> scenarios,
                                  const EpisodeOptions& options, int workers) {
  std::vector<EpisodeLog> logs(scenarios.size());
  parallel_for(scenarios.size(), workers,
               [&](std::size_t i) { logs[i] = run_episode(scenarios[i], options); });
  return logs;
}

bool AblationTable::ok() const {
  for (const AblationRow& row : rows) {
    if (!row.error.empty()) return false;
  }
  return true;
}

std::string AblationTable::to_csv(bool timing) const {
  std::ostringstream out;
  out << "learned_prior,handcrafted_prior,tree_constraint,node_constraint,CR,DA,EP,score,"
         "episodes,mean_search_ms,error\n";
  out << std::fixed;
  for (const AblationRow& row : rows) {
    const AblationSpec& s = row.spec;
    out << s.use_learned_prior << ',' << s.use_handcrafted_prior << ','
        << s.use_tree_constraint << ',' << s.use_node_constraint << ','
        << std::setprecision(4) << row.metrics.cr << ',' << row.metrics.da << ','
        << row.metrics.ep << ',' << std::setprecision(2) << row.metrics.score << ','
        << row.metrics.episodes << ',';
    if (timing) {
      out << std::setprecision(3) << row.mean_search_ms;
    } else {
      out << "NA";
    }
    std::string error = row.error;
    for (char& c : error) {
      if (c == ',' || c == '\n' || c == '"') c = ' ';
    }
    out << ',' << error << '\n';
  }
  return out.str();
}

namespace {

struct CellResult {
  ScenarioScore score;
  double search_ms = 0.0;
  int searches = 0;
  std::string error;
};

AblationTable run_matrix(const std::vector<std::vector<Scenario>>& per_seed,
                         const EpisodeOptions& base, std::span<const AblationSpec> specs,
                         std::span<const std::uint64_t> seeds, int workers) {
  if (specs.empty()) throw Error(ErrorKind::kConfig, "no ablation specs");
  if (seeds.empty()) throw Error(ErrorKind::kConfig, "no seeds");
  for (const auto& set : per_seed) {
    if (set.empty()) throw Error(ErrorKind::kConfig, "no scenarios");
  }
  struct Job {
    std::size_t spec, seed, scenario;
  };
  std::vector<Job> jobs;
  for (std::size_t a = 0; a < specs.size(); ++a) {
    for (std::size_t b = 0; b < seeds.size(); ++b) {
      for (std::size_t c = 0; c < per_seed[b].size(); ++c) jobs.push_back({a, b, c});
    }
  }
  std::vector<CellResult> results(jobs.size());
  parallel_for(jobs.size(), workers, [&](std::size_t i) {
    const Job& job = jobs[i];
    const Scenario& scenario = per_seed[job.seed][job.scenario];
    EpisodeOptions options = base;
    options.ablation = specs[job.spec];
    options.search.rng_seed = seeds[job.seed];
    options.keep_trees = false;
    try {
      const EpisodeLog log = run_episode(scenario, options);
      results[i].score = score_episode(log, scenario);
      for (const SearchSummary& s : log.searches) results[i].search_ms += s.elapsed_ms;
      results[i].searches = static_cast<int>(log.searches.size());
    } catch (const std::exception& e) {
      results[i].error = "scenario " + scenario.id() + " seed " +
                         std::to_string(seeds[job.seed]) + ": " + e.what();
    }
  });

  AblationTable table;
  for (std::size_t a = 0; a < specs.size(); ++a) {
    AblationRow row;
    row.spec = specs[a];
    std::vector<Metrics> per_seed_metrics;
    double ms = 0.0;
    int searches = 0;
    for (std::size_t b = 0; b < seeds.size(); ++b) {
      Metrics m;
      for (std::size_t i = 0; i < jobs.size(); ++i) {
        if (jobs[i].spec != a || jobs[i].seed != b) continue;
        const CellResult& r = results[i];
        if (!r.error.empty()) {
          if (row.error.empty()) row.error = r.error;
          continue;
        }
        m.cr += r.score.collision ? 1.0 : 0.0;
        m.da += r.score.off_drivable ? 1.0 : 0.0;
        m.ep += r.score.ep;
        m.score += r.score.composite;
        ++m.episodes;
        ms += r.search_ms;
        searches += r.searches;
      }
      if (m.episodes > 0) {
        const double n = m.episodes;
        m.cr /= n;
        m.da /= n;
        m.ep /= n;
        m.score /= n;
        per_seed_metrics.push_back(m);
      }
    }
    row.metrics = average_metrics(per_seed_metrics);
    row.mean_search_ms = searches > 0 ? ms / searches : 0.0;
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace

AblationTable run_ablation_matrix(std::span<const Scenario> scenarios,
                                  const EpisodeOptions& base,
                                  std::span<const AblationSpec> specs,
                                  std::span<const std::uint64_t> seeds, int workers) {
  const std::vector<Scenario> shared(scenarios.begin(), scenarios.end());
  const std::vector<std::vector<Scenario>> per_seed(seeds.size(), shared);
  return run_matrix(per_seed, base, specs, seeds, workers);
}

AblationTable run_ablation_matrix(const ScenarioFactory& factory, const EpisodeOptions& base,
                                  std::span<const AblationSpec> specs,
                                  std::span<const std::uint64_t> seeds, int workers) {
  std::vector<std::vector<Scenario>> per_seed;
  for (std::uint64_t seed : seeds) per_seed.push_back(factory(seed));
  return run_matrix(per_seed, base, specs, seeds, workers);
}

}  // namespace mbappe
