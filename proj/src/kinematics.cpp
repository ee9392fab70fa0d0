// Copyright 2026 The Dual-AEB Authors
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

#include "dual_aeb/kinematics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dual_aeb
{

Control clamp_control(Control u, const ControlLimits & limits)
{
  return {
    std::clamp(u.accel, limits.accel_min, limits.accel_max),
    std::clamp(u.steer, -limits.steer_max, limits.steer_max)};
}

double slip_angle(double steer, double lf, double lr)
{
  return std::atan(lr * std::tan(steer) / (lf + lr));
}

VehicleState bicycle_step(const VehicleState & s, const Control & u, double dt)
{
  const double beta = slip_angle(u.steer, s.lf, s.lr);
  const double v = s.speed;
  const double heading = s.pose.heading;

  VehicleState next = s;
  next.pose = Pose2D(
    s.pose.x + v * std::cos(heading + beta) * dt, s.pose.y + v * std::sin(heading + beta) * dt,
    heading + v * std::sin(beta) / s.lr * dt);
  next.speed = std::max(0.0, v + u.accel * dt);
  return next;
}

VehicleState integrate(const VehicleState & s, const Control & u, double duration, int substeps)
{
  if (substeps < 1) {
    throw std::invalid_argument("integrate: substeps must be >= 1");
  }
  const double h = duration / substeps;
  VehicleState state = s;
  for (int i = 0; i < substeps; ++i) {
    state = bicycle_step(state, u, h);
  }
  return state;
}

std::vector<VehicleState> rollout(const VehicleState & s, std::span<const Control> controls, double dt)
{
  if (controls.empty()) {
    throw std::invalid_argument("rollout: controls must be non-empty");
  }
  std::vector<VehicleState> states;
  states.reserve(controls.size());
  VehicleState state = s;
  for (const Control & u : controls) {
    state = bicycle_step(state, u, dt);
    states.push_back(state);
  }
  return states;
}

}  // namespace dual_aeb
