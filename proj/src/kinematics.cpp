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

#include "mbappe/kinematics.hpp"

#include <algorithm>
#include <cmath>

#include "mbappe/errors.hpp"

namespace mbappe {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kMinInversionSpeed = 0.1;

int snap_axis(double value, double step) {
  const double offset =
      std::clamp(value / step, -double{ActionGrid::kCenter},
                 double{ActionGrid::kCenter});
  // Round half toward zero so exact ties land on the index nearer the center.
  const double magnitude = std::ceil(std::abs(offset) - 0.5);
  const int steps = static_cast<int>(magnitude);
  return ActionGrid::kCenter + (offset < 0.0 ? -steps : steps);
}

}  // namespace

double wrap_angle(double angle) {
  double wrapped = std::remainder(angle, kTwoPi);
  if (wrapped <= -std::numbers::pi) wrapped += kTwoPi;
  return wrapped;
}

void VehicleParams::validate() const {
  if (!(wheelbase > 0.0) || !(length > 0.0) || !(width > 0.0) ||
      !(rear_overhang >= 0.0)) {
    throw Error(ErrorKind::kConfig,
                "vehicle: wheelbase, length and width must be positive");
  }
  if (!(wheelbase < length)) {
    throw Error(ErrorKind::kConfig,
                "vehicle: wheelbase must be shorter than length");
  }
  if (rear_overhang + wheelbase > length) {
    throw Error(ErrorKind::kConfig,
                "vehicle: rear_overhang + wheelbase exceeds length");
  }
}

ActionGrid::ActionGrid() {
  for (int i = 0; i < kSize; ++i) {
    const int offset = i - kCenter;
    accel_[static_cast<std::size_t>(i)] = offset * kAccelStep;
    steer_[static_cast<std::size_t>(i)] = offset * kSteerStep;
  }
}

EgoState integrate(const EgoState& state, const Action& action, double dt,
                   const VehicleParams& params) {
  EgoState next;
  next.x = state.x + state.velocity * std::cos(state.heading) * dt;
  next.y = state.y + state.velocity * std::sin(state.heading) * dt;
  next.heading = wrap_angle(
      state.heading +
      state.velocity * std::tan(action.steer) / params.wheelbase * dt);
  next.velocity = std::max(0.0, state.velocity + action.accel * dt);
  return next;
}

std::vector<EgoState> rollout(const EgoState& state, const Action& action,
                              int n_sub, double dt,
                              const VehicleParams& params) {
  std::vector<EgoState> states;
  states.reserve(static_cast<std::size_t>(std::max(n_sub, 0)));
  EgoState current = state;
  for (int k = 0; k < n_sub; ++k) {
    current = integrate(current, action, dt, params);
    states.push_back(current);
  }
  return states;
}

GridIndex snap_to_grid(const Action& action, const ActionGrid& /*grid*/) {
  return {snap_axis(action.accel, ActionGrid::kAccelStep),
          snap_axis(action.steer, ActionGrid::kSteerStep)};
}

std::vector<Action> trajectory_to_actions(std::span<const Pose> poses,
                                          double dt,
                                          const VehicleParams& params) {
  if (poses.size() < 3) {
    throw Error(ErrorKind::kMalformedInput,
                "trajectory_to_actions: need at least 3 poses, got " +
                    std::to_string(poses.size()));
  }
  if (!(dt > 0.0)) {
    throw Error(ErrorKind::kMalformedInput,
                "trajectory_to_actions: sample spacing must be positive");
  }

  const std::size_t n = poses.size();
  std::vector<double> speed(n - 1);
  std::vector<double> yaw_rate(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const Eigen::Vector2d delta = poses[k + 1].position() - poses[k].position();
    speed[k] = delta.norm() / dt;
    yaw_rate[k] = wrap_angle(poses[k + 1].heading - poses[k].heading) / dt;
  }

  std::vector<Action> actions(n - 2);
  for (std::size_t k = 0; k + 2 < n; ++k) {
    Action& action = actions[k];
    action.accel = std::clamp((speed[k + 1] - speed[k]) / dt,
                              -ActionGrid::kMaxAccel, ActionGrid::kMaxAccel);
    action.steer =
        speed[k] < kMinInversionSpeed
            ? 0.0
            : std::clamp(std::atan(params.wheelbase * yaw_rate[k] / speed[k]),
                         -ActionGrid::kMaxSteer, ActionGrid::kMaxSteer);
  }
  return actions;
}

}  // namespace mbappe
