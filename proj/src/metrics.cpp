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

#include "mbappe/metrics.hpp"

#include <algorithm>

#include "mbappe/errors.hpp"

namespace mbappe {

double progress_budget(const Scenario& scenario) {
  const MapModel& map = scenario.world.map;
  const CenterlineProjection start = project_to_centerline(scenario.ego_init.pose(), map, true);
  return std::min(start.speed_limit() * scenario.duration, map.route_length() - start.arc_length);
}

ScenarioScore score_episode(const EpisodeLog& log, const Scenario& scenario) {
  if (log.scenario_id != scenario.id()) {
    throw Error(ErrorKind::kMalformedInput, "log for scenario '" + log.scenario_id +
                                                "' paired with scenario '" + scenario.id() + "'");
  }
  ScenarioScore s;
  s.collision = log.collided();
  s.off_drivable = log.first_off_drivable.has_value();
  s.off_route = log.first_off_route.has_value();
  const double budget = progress_budget(scenario);
  s.ep = budget > 0.0 ? std::clamp(log.progress() / budget, 0.0, 1.0) : 1.0;
  const double collision_mult = s.collision ? 0.0 : 1.0;
  const double da_mult = s.off_drivable ? 0.5 : 1.0;
  const double route_mult = s.off_route ? 0.75 : 1.0;
  s.composite = 100.0 * collision_mult * da_mult * route_mult * s.ep;
  return s;
}

Metrics compute_metrics(std::span<const EpisodeLog> logs, std::span<const Scenario> scenarios) {
  if (logs.empty()) throw Error(ErrorKind::kMalformedInput, "no episode logs");
  if (logs.size() != scenarios.size()) {
    throw Error(ErrorKind::kMalformedInput,
                std::to_string(logs.size()) + " logs for " + std::to_string(scenarios.size()) +
                    " scenarios");
  }
  Metrics m;
  for (std::size_t i = 0; i < logs.size(); ++i) {
    const ScenarioScore s = score_episode(logs[i], scenarios[i]);
    m.cr += s.collision ? 1.0 : 0.0;
    m.da += s.off_drivable ? 1.0 : 0.0;
    m.ep += s.ep;
    m.score += s.composite;
  }
  const double n = static_cast<double>(logs.size());
  m.cr /= n;
  m.da /= n;
  m.ep /= n;
  m.score /= n;
  m.episodes = static_cast<int>(logs.size());
  return m;
}

Metrics average_metrics(std::span<const Metrics> rows) {
  Metrics m;
  if (rows.empty()) return m;
  for (const Metrics& r : rows) {
    m.cr += r.cr;
    m.da += r.da;
    m.ep += r.ep;
    m.score += r.score;
    m.episodes += r.episodes;
  }
  const double n = static_cast<double>(rows.size());
  m.cr /= n;
  m.da /= n;
  m.ep /= n;
  m.score /= n;
  return m;
}

nlohmann::json metrics_to_json(const Metrics& m) {
  return {{"CR", m.cr}, {"DA", m.da}, {"EP", m.ep}, {"score", m.score}, {"episodes", m.episodes}};
}

}  // namespace mbappe
