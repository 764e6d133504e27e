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

// Kinematic bicycle model, the discrete (acceleration, steering) action grid
// and the inverse mapping from sampled poses back to actions.

#include <array>
#include <numbers>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace mbappe {

/// Wraps an angle to (-pi, pi].
double wrap_angle(double angle);

/// Planar pose sample, heading in radians.
struct Pose {
  double x = 0.0;
  double y = 0.0;
  double heading = 0.0;

  Eigen::Vector2d position() const { return {x, y}; }
  bool operator==(const Pose&) const = default;
};

/// Ego state referenced at the rear axle.
struct EgoState {
  double x = 0.0;
  double y = 0.0;
  double heading = 0.0;   // (-pi, pi]
  double velocity = 0.0;  // m/s, never negative

  Eigen::Vector2d position() const { return {x, y}; }
  Pose pose() const { return {x, y, heading}; }
  bool operator==(const EgoState&) const = default;
};

struct Action {
  double accel = 0.0;  // m/s^2
  double steer = 0.0;  // rad
  bool operator==(const Action&) const = default;
};

/// Cell of the 13x13 action grid. Index 6 is zero on both axes.
struct GridIndex {
  int accel = 6;
  int steer = 6;
  bool operator==(const GridIndex&) const = default;
};

struct VehicleParams {
  double wheelbase = 3.089;
  double length = 5.0;
  double width = 2.0;
  double rear_overhang = 1.0;  // rear bumper to rear axle

  /// Throws Error(kConfig) when a dimension is non-positive or the
  /// wheelbase does not fit inside the body.
  void validate() const;
  bool operator==(const VehicleParams&) const = default;
};

/// Thirteen evenly spaced values per axis over [-3, 3] m/s^2 and
/// [-pi/4, pi/4] rad.
class ActionGrid {
 public:
  static constexpr int kSize = 13;
  static constexpr int kCenter = 6;
  static constexpr double kAccelStep = 0.5;
  static constexpr double kSteerStep = std::numbers::pi / 24.0;
  static constexpr double kMaxAccel = 3.0;
  static constexpr double kMaxSteer = std::numbers::pi / 4.0;

  ActionGrid();

  const std::array<double, kSize>& accel_values() const { return accel_; }
  const std::array<double, kSize>& steer_values() const { return steer_; }

  Action action(GridIndex index) const {
    return {accel_[static_cast<std::size_t>(index.accel)],
            steer_[static_cast<std::size_t>(index.steer)]};
  }

  static bool valid(GridIndex index) {
    return index.accel >= 0 && index.accel < kSize && index.steer >= 0 &&
           index.steer < kSize;
  }

 private:
  std::array<double, kSize> accel_{};
  std::array<double, kSize> steer_{};
};

/// One explicit Euler step. Position uses the pre-update heading and speed;
/// speed is floored at zero.
EgoState integrate(const EgoState& state, const Action& action, double dt,
                   const VehicleParams& params = {});

/// Holds `action` for `n_sub` steps and returns every intermediate state
/// (the input state is not included).
std::vector<EgoState> rollout(const EgoState& state, const Action& action,
                              int n_sub, double dt,
                              const VehicleParams& params = {});

/// Nearest grid cell, clamping out-of-range inputs; exact ties go toward
/// the zero index.
GridIndex snap_to_grid(const Action& action, const ActionGrid& grid = {});

/// Finite-difference inversion of a uniformly sampled pose sequence. Yields
/// one action per pose except the last two. Throws Error(kMalformedInput)
/// for fewer than three poses.
std::vector<Action> trajectory_to_actions(std::span<const Pose> poses,
                                          double dt,
                                          const VehicleParams& params = {});

}  // namespace mbappe
