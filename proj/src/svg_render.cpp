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

#include "mbappe/svg_render.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>

#include "mbappe/errors.hpp"
#include "mbappe/tree_export.hpp"

namespace mbappe {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  std::string s = buf;
  if (s == "-0.000") s = "0.000";
  return s;
}

// World y points up; SVG y points down.
template <typename Points>
std::string point_list(const Points& points) {
  std::string out;
  for (const auto& p : points) {
    if (!out.empty()) out += ' ';
    out += num(p.x()) + "," + num(-p.y());
  }
  return out;
}

std::vector<Eigen::Vector2d> positions(const std::vector<Pose>& poses) {
  std::vector<Eigen::Vector2d> out;
  out.reserve(poses.size());
  for (const Pose& p : poses) out.push_back(p.position());
  return out;
}

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string render_episode_svg(const Scenario& scenario, const EpisodeLog& log,
                               const SvgOptions& options) {
  if (log.scenario_id != scenario.id()) {
    throw Error(ErrorKind::kMalformedInput, "episode log is for scenario '" + log.scenario_id +
                                                "', not '" + scenario.id() + "'");
  }
  const MapModel& map = scenario.world.map;

  Eigen::Vector2d lo = Eigen::Vector2d::Constant(std::numeric_limits<double>::infinity());
  Eigen::Vector2d hi = -lo;
  auto extend = [&](const Eigen::Vector2d& p) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  };
  for (const Polygon& polygon : map.drivable_area()) {
    for (const Eigen::Vector2d& p : polygon) extend(p);
  }
  extend(scenario.ego_init.position());
  for (const TickRecord& r : log.ticks) extend(r.ego.position());
  lo -= Eigen::Vector2d::Constant(options.margin);
  hi += Eigen::Vector2d::Constant(options.margin);
  const Eigen::Vector2d size = hi - lo;

  std::string svg = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
         num(size.x() * options.pixels_per_meter) + "\" height=\"" +
         num(size.y() * options.pixels_per_meter) + "\" viewBox=\"" + num(lo.x()) + " " +
         num(-hi.y()) + " " + num(size.x()) + " " + num(size.y()) + "\">\n";
  svg += "<title>" + escape(scenario.id()) + "</title>\n";
  svg += "<rect x=\"" + num(lo.x()) + "\" y=\"" + num(-hi.y()) + "\" width=\"" + num(size.x()) +
         "\" height=\"" + num(size.y()) + "\" fill=\"#FFFFFF\"/>\n";

  svg += "<g id=\"drivable-area\" fill=\"#E6E6E6\" stroke=\"#A0A0A0\" stroke-width=\"0.1\">\n";
  for (const Polygon& polygon : map.drivable_area()) {
    svg += "<polygon points=\"" + point_list(polygon) + "\"/>\n";
  }
  svg += "</g>\n";

  svg += "<g id=\"centerlines\" fill=\"none\" stroke=\"#FFFFFF\" stroke-width=\"0.15\" "
         "stroke-dasharray=\"1 1\">\n";
  for (const Centerline& line : map.centerlines()) {
    svg += "<polyline data-id=\"" + escape(line.id()) + "\" points=\"" +
           point_list(line.points()) + "\"/>\n";
  }
  svg += "</g>\n";

  svg += "<g id=\"agents\" fill=\"none\" stroke=\"#3060C0\" stroke-width=\"0.2\">\n";
  for (const AgentTrack& track : scenario.world.agents) {
    svg += "<polyline data-id=\"" + escape(track.id) + "\" points=\"" +
           point_list(positions(track.trajectory)) + "\"/>\n";
  }
  for (const OrientedBox& box : scenario.world.statics) {
    svg += "<polygon fill=\"#3060C0\" points=\"" + point_list(box.corners()) + "\"/>\n";
  }
  svg += "</g>\n";

  if (options.candidates) {
    svg += "<g id=\"candidates\" fill=\"none\" stroke-width=\"0.08\" stroke-opacity=\"0.7\">\n";
    const ActionGrid grid;
    for (const SearchSummary& search : log.searches) {
      double q_lo = std::numeric_limits<double>::infinity();
      double q_hi = -q_lo;
      for (const ChildSummary& c : search.children) {
        if (c.edge.n == 0) continue;
        q_lo = std::min(q_lo, c.edge.q);
        q_hi = std::max(q_hi, c.edge.q);
      }
      for (const ChildSummary& c : search.children) {
        if (c.edge.n == 0) continue;
        std::vector<Eigen::Vector2d> points = {search.root.position()};
        for (const EgoState& s : rollout(search.root, grid.action(c.action), 10, kTrackStep,
                                         scenario.vehicle)) {
          points.push_back(s.position());
        }
        svg += "<polyline stroke=\"" + q_color(ramp_position(c.edge.q, q_lo, q_hi)) +
               "\" points=\"" + point_list(points) + "\"/>\n";
      }
    }
    svg += "</g>\n";
  }

  std::vector<Eigen::Vector2d> executed = {scenario.ego_init.position()};
  for (const TickRecord& r : log.ticks) executed.push_back(r.ego.position());
  svg += "<polyline id=\"executed-path\" fill=\"none\" stroke=\"#00B000\" stroke-width=\"0.3\" "
         "points=\"" + point_list(executed) + "\"/>\n";
  svg += "</svg>\n";
  return svg;
}

}  // namespace mbappe
