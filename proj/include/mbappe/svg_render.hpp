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

// Bird's-eye SVG of an episode: map layers, agent tracks, the candidate
// rollouts explored at every replan colored by Q, and the executed path.

#include <string>

#include "mbappe/episode.hpp"
#include "mbappe/scenario.hpp"

namespace mbappe {

struct SvgOptions {
  double pixels_per_meter = 8.0;
  double margin = 5.0;  // meters
  bool candidates = true;
};

/// Throws Error(kMalformedInput) when the log belongs to another scenario.
std::string render_episode_svg(const Scenario& scenario, const EpisodeLog& log,
                               const SvgOptions& options = {});

}  // namespace mbappe
