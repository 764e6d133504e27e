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

// Episode metrics: collision rate, drivable-area non-compliance, ego progress
// and the multiplicative composite score.

#include <span>
#include <vector>

#include <json.hpp>

#include "mbappe/episode.hpp"
#include "mbappe/scenario.hpp"

namespace mbappe {

struct ScenarioScore {
  bool collision = false;
  bool off_drivable = false;
  bool off_route = false;
  double ep = 0.0;         // clamped to [0, 1]
  double composite = 0.0;  // [0, 100]
};

struct Metrics {
  double cr = 0.0;
  double da = 0.0;
  double ep = 0.0;
  double score = 0.0;
  int episodes = 0;

  bool operator==(const Metrics&) const = default;
};

/// Route arc length reachable at the start speed limit within the duration,
/// capped by the route remaining ahead of the ego.
double progress_budget(const Scenario& scenario);

ScenarioScore score_episode(const EpisodeLog& log, const Scenario& scenario);

/// Logs and scenarios pair up by position. Throws Error(kMalformedInput) on
/// empty input, mismatched counts or mismatched ids.
Metrics compute_metrics(std::span<const EpisodeLog> logs, std::span<const Scenario> scenarios);

/// Averages rows (for example, one per seed) field by field; episode counts add up.
Metrics average_metrics(std::span<const Metrics> rows);

nlohmann::json metrics_to_json(const Metrics& metrics);

}  // namespace mbappe
