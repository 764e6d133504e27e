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

#include "mbappe/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace mbappe {

namespace {

constexpr double kBoundaryTolerance = 1e-9;

Eigen::Vector2d direction(double heading) {
  return {std::cos(heading), std::sin(heading)};
}

// Half-extent of a box projected onto a unit axis.
double projected_radius(const OrientedBox& box, const Eigen::Vector2d& axis) {
  const Eigen::Vector2d forward = direction(box.heading);
  const Eigen::Vector2d left(-forward.y(), forward.x());
  return 0.5 * box.length * std::abs(forward.dot(axis)) +
         0.5 * box.width * std::abs(left.dot(axis));
}

double cross(const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  return a.x() * b.y() - a.y() * b.x();
}

int orientation(const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                const Eigen::Vector2d& c) {
  const double value = cross(b - a, c - a);
  if (value > kBoundaryTolerance) return 1;
  if (value < -kBoundaryTolerance) return -1;
  return 0;
}

bool on_segment(const Eigen::Vector2d& p, const Eigen::Vector2d& a,
                const Eigen::Vector2d& b) {
  return project_to_segment(p, a, b).distance <= kBoundaryTolerance;
}

bool segments_intersect(const Eigen::Vector2d& p1, const Eigen::Vector2d& p2,
                        const Eigen::Vector2d& q1, const Eigen::Vector2d& q2) {
  const int o1 = orientation(p1, p2, q1);
  const int o2 = orientation(p1, p2, q2);
  const int o3 = orientation(q1, q2, p1);
  const int o4 = orientation(q1, q2, p2);
  if (o1 != o2 && o3 != o4) return true;
  return (o1 == 0 && on_segment(q1, p1, p2)) ||
         (o2 == 0 && on_segment(q2, p1, p2)) ||
         (o3 == 0 && on_segment(p1, q1, q2)) ||
         (o4 == 0 && on_segment(p2, q1, q2));
}

}  // namespace

std::array<Eigen::Vector2d, 4> OrientedBox::corners() const {
  const Eigen::Vector2d forward = direction(heading) * (0.5 * length);
  const Eigen::Vector2d left =
      Eigen::Vector2d(-std::sin(heading), std::cos(heading)) * (0.5 * width);
  return {center + forward + left, center - forward + left,
          center - forward - left, center + forward - left};
}

double OrientedBox::circumradius() const {
  return 0.5 * std::hypot(length, width);
}

OrientedBox ego_footprint(const EgoState& state, const VehicleParams& params) {
  const double offset = 0.5 * params.length - params.rear_overhang;
  OrientedBox box;
  box.center = state.position() + direction(state.heading) * offset;
  box.heading = state.heading;
  box.length = params.length;
  box.width = params.width;
  return box;
}

OrientedBox box_at(const Pose& pose, double length, double width) {
  return {pose.position(), pose.heading, length, width};
}

bool boxes_overlap(const OrientedBox& a, const OrientedBox& b) {
  const Eigen::Vector2d delta = b.center - a.center;
  const double reach = a.circumradius() + b.circumradius();
  if (delta.squaredNorm() >= reach * reach) return false;

  const Eigen::Vector2d fa = direction(a.heading);
  const Eigen::Vector2d fb = direction(b.heading);
  const std::array<Eigen::Vector2d, 4> axes = {
      fa, Eigen::Vector2d(-fa.y(), fa.x()), fb, Eigen::Vector2d(-fb.y(), fb.x())};
  for (const Eigen::Vector2d& axis : axes) {
    const double separation = std::abs(delta.dot(axis));
    if (separation >= projected_radius(a, axis) + projected_radius(b, axis)) {
      return false;
    }
  }
  return true;
}

SegmentProjection project_to_segment(const Eigen::Vector2d& p,
                                     const Eigen::Vector2d& a,
                                     const Eigen::Vector2d& b) {
  const Eigen::Vector2d ab = b - a;
  const double len2 = ab.squaredNorm();
  double t = len2 > 0.0 ? (p - a).dot(ab) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  SegmentProjection out;
  out.point = a + t * ab;
  out.t = t;
  out.distance = (p - out.point).norm();
  return out;
}

bool point_in_polygon(const Eigen::Vector2d& point, const Polygon& polygon) {
  const std::size_t n = polygon.size();
  if (n < 3) return false;
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Eigen::Vector2d& a = polygon[i];
    const Eigen::Vector2d& b = polygon[j];
    if (on_segment(point, a, b)) return true;
    if ((a.y() > point.y()) != (b.y() > point.y())) {
      const double x_cross =
          a.x() + (point.y() - a.y()) * (b.x() - a.x()) / (b.y() - a.y());
      if (point.x() < x_cross) inside = !inside;
    }
  }
  return inside;
}

bool is_simple_polygon(const Polygon& polygon) {
  const std::size_t n = polygon.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i) {
    if ((polygon[(i + 1) % n] - polygon[i]).norm() <= kBoundaryTolerance) {
      return false;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    const Eigen::Vector2d& a1 = polygon[i];
    const Eigen::Vector2d& a2 = polygon[(i + 1) % n];
    for (std::size_t j = i + 1; j < n; ++j) {
      // Adjacent edges share a vertex by construction.
      if (j == i + 1 || (i == 0 && j == n - 1)) continue;
      if (segments_intersect(a1, a2, polygon[j], polygon[(j + 1) % n])) {
        return false;
      }
    }
  }
  return true;
}

Polygon corridor_polygon(std::span<const Eigen::Vector2d> polyline,
                         double half_width) {
  const std::size_t n = polyline.size();
  Polygon left;
  Polygon right;
  left.reserve(n);
  right.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    Eigen::Vector2d tangent = Eigen::Vector2d::Zero();
    if (k > 0) tangent += (polyline[k] - polyline[k - 1]).normalized();
    if (k + 1 < n) tangent += (polyline[k + 1] - polyline[k]).normalized();
    tangent.normalize();
    const Eigen::Vector2d normal(-tangent.y(), tangent.x());
    // Miter scaling keeps the offset distance exact across gentle bends.
    double scale = half_width;
    if (k > 0 && k + 1 < n) {
      const Eigen::Vector2d seg = (polyline[k + 1] - polyline[k]).normalized();
      const double cos_half = normal.dot(Eigen::Vector2d(-seg.y(), seg.x()));
      if (cos_half > 0.5) scale = half_width / cos_half;
    }
    left.push_back(polyline[k] + normal * scale);
    right.push_back(polyline[k] - normal * scale);
  }
  Polygon polygon = std::move(right);
  polygon.insert(polygon.end(), left.rbegin(), left.rend());
  return polygon;
}

}  // namespace mbappe
