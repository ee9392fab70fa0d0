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

#ifndef DUAL_AEB__KINEMATICS_HPP_
#define DUAL_AEB__KINEMATICS_HPP_

#include "dual_aeb/geometry.hpp"

#include <span>
#include <vector>

namespace dual_aeb
{

inline constexpr double kDefaultAxleToCg = 1.437;  // m, half of a 2.874 m wheelbase

/// Kinematic bicycle state referenced at the center of gravity.
struct VehicleState
{
  Pose2D pose;
  double speed{0.0};  // m/s, never negative
  double lf{kDefaultAxleToCg};
  double lr{kDefaultAxleToCg};
};

struct Control
{
  double accel{0.0};  // m/s^2
  double steer{0.0};  // front wheel angle, rad
};

struct ControlLimits
{
  double steer_max{0.6};
  double accel_min{-8.0};
  double accel_max{3.0};
};

Control clamp_control(Control u, const ControlLimits & limits = {});

/// Slip angle at the CG for a front-steered bicycle.
double slip_angle(double steer, double lf, double lr);

/// One forward-Euler step of the CG-referenced kinematic bicycle model.
/// Speed is clamped at zero; the model never reverses.
VehicleState bicycle_step(const VehicleState & s, const Control & u, double dt);

/// Applies `u` for `duration` using `substeps` equal Euler steps.
VehicleState integrate(const VehicleState & s, const Control & u, double duration, int substeps);

/// Element k is the state after k + 1 steps.
std::vector<VehicleState> rollout(const VehicleState & s, std::span<const Control> controls, double dt);

}  // namespace dual_aeb

#endif  // DUAL_AEB__KINEMATICS_HPP_
