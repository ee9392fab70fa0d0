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

#ifndef DUAL_AEB__TESTS__SCENES_HPP_
#define DUAL_AEB__TESTS__SCENES_HPP_

#include "dual_aeb/rule_aeb.hpp"

#include <string>
#include <utility>
#include <vector>

namespace scenes
{

inline dual_aeb::AgentTrack track(
  const std::string & id, double x, double y, double heading, double length, double width, dual_aeb::Vec2 v = {},
  double rate = 0.0)
{
  using namespace dual_aeb;
  return AgentTrack{id, OrientedBox::from_dimensions(Pose2D(x, y, heading), length, width), v, rate, false, false, {}};
}

/// Ego 4x2 at the origin heading +x at `speed` with a straight plan.
inline dual_aeb::RuleInputs straight(double speed, std::vector<dual_aeb::AgentTrack> others, int horizon = 15)
{
  using namespace dual_aeb;
  RuleInputs in{
    OrientedBox::from_dimensions(Pose2D(0, 0, 0), 4, 2), VehicleState{}, std::move(others), Trajectory{},
    Polygon::rectangle(-50, -20, 200, 20), 0.2, horizon, 1.0};
  in.ego_state.speed = speed;
  for (int k = 1; k <= horizon; ++k) {
    in.plan.waypoints.emplace_back(speed * 0.2 * k, 0.0, 0.0);
  }
  return in;
}

}  // namespace scenes

#endif  // DUAL_AEB__TESTS__SCENES_HPP_
