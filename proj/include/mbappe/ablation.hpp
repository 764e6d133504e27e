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

// Batch execution of independent episodes and the ablation matrix.

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "mbappe/episode.hpp"
#include "mbappe/metrics.hpp"

namespace mbappe {

/// MBAPPE_NUM_WORKERS when set to a positive integer, else the hardware
/// concurrency (at least 1).
int default_worker_count();

/// Runs fn(0..n-1) on up to `workers` threads. Every index runs exactly once;
/// the first exception in index order is rethrown after all jobs finish.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn);

/// One episode per scenario, results in scenario order.
std::vector<EpisodeLog> run_batch(std::span<const Scenario> scenarios,
                                  const EpisodeOptions& options, int workers);

struct AblationRow {
  AblationSpec spec;
  Metrics metrics;  // averaged over seeds
  double mean_search_ms = 0.0;
  std::string error;  // first failing combination, empty when all succeeded
};

struct AblationTable {
  std::vector<AblationRow> rows;

  bool ok() const;
  /// Comma-separated table with a header line. The latency column reads
  /// "NA" unless `timing` is set, so untimed tables are reproducible bytes.
  std::string to_csv(bool timing) const;
};

using ScenarioFactory = std::function<std::vector<Scenario>(std::uint64_t seed)>;

/// Every (spec, scenario, seed) episode. The seed drives the search config's
/// rng_seed; the scenarios are shared across seeds.
AblationTable run_ablation_matrix(std::span<const Scenario> scenarios,
                                  const EpisodeOptions& base,
                                  std::span<const AblationSpec> specs,
                                  std::span<const std::uint64_t> seeds, int workers);

/// As above, with a scenario set drawn per seed.
AblationTable run_ablation_matrix(const ScenarioFactory& factory, const EpisodeOptions& base,
                                  std::span<const AblationSpec> specs,
                                  std::span<const std::uint64_t> seeds, int workers);

}  // namespace mbappe
