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

#ifndef DUAL_AEB__WORLD_HPP_
#define DUAL_AEB__WORLD_HPP_

#include "dual_aeb/messages.hpp"
#include "dual_aeb/scenario.hpp"

#include <optional>
#include <vector>

namespace dual_aeb
{

struct AgentState
{
  Pose2D pose;
  Vec2 velocity;
  double heading_rate{0.0};
};

AgentState agent_state_at(const AgentSpec & agent, double t);
OrientedBox agent_box_at(const AgentSpec & agent, double t);

/// Hidden agents stay out of quick-path perception before their reveal time.
bool perceived_by_quick_path(const AgentSpec & agent, double t);

struct EgoState
{
  VehicleState vehicle;
  double route_s{0.0};

  friend bool operator==(const EgoState & a, const EgoState & b)
  {
    return a.vehicle.pose == b.vehicle.pose && a.vehicle.speed == b.vehicle.speed && a.route_s == b.route_s;
  }
};

EgoState initial_ego(const Scenario & sc);
OrientedBox ego_box(const Scenario & sc, const Pose2D & pose);

/// One step of plan following: speed relaxes towards the target at the
/// planner's acceleration, position advances along the route.
EgoState advance_planned(const Scenario & sc, const EgoState & ego, double dt);

/// Straight-line deceleration with heading held; stops exactly at zero speed.
EgoState advance_braking(const EgoState & ego, double decel, double dt);

Trajectory plan_from(const Scenario & sc, const EgoState & ego, int horizon_steps, double dt);

/// Quick-path view of the world at tick: ghosts included, hidden agents
/// excluded until revealed.
RuleInputs compose_rule_inputs(const Scenario & sc, const EgoState & ego, int tick, const RuleConfig & cfg);

std::string agent_descriptor(const AgentSpec & agent);

/// Pinhole projection of the agent's 3D box onto the front camera; empty if
/// out of view or range.
std::optional<ImageBox> project_to_camera(const Scenario & sc, const EgoState & ego, const OrientedBox & box, double height);

EgoSnapshot snapshot(const EgoState & ego);
EgoState from_snapshot(const Scenario & sc, const EgoSnapshot & snap);

/// Camera-visible agents (hidden ones excluded until revealed), nearest first.
SceneSummary scene_summary(const Scenario & sc, const EgoState & ego, int tick);

/// True collisions with real agents at tick; ghosts never collide.
std::vector<std::string> real_collisions(const Scenario & sc, const Pose2D & ego_pose, int tick);

struct CollisionForecast
{
  int steps{0};
  std::string agent_id;
};

/// Steps until the ego, following its plan without braking, first overlaps a
/// real agent; empty if none within `max_steps`.
std::optional<CollisionForecast> forecast_real_collision(const Scenario & sc, const EgoState & ego, int tick, int max_steps);

/// Forecast over the warning horizon of the ground-truth config.
std::optional<CollisionForecast> forecast_hazard(const Scenario & sc, const EgoState & ego, int tick);

MetaAction classify_forecast(const Scenario & sc, const std::optional<CollisionForecast> & forecast);

MetaAction required_action(const Scenario & sc, const EgoState & ego, int tick);

/// Ego states along the undisturbed plan-following run, one per tick.
std::vector<EgoState> nominal_ego_states(const Scenario & sc);

/// Required action per tick along the undisturbed run.
std::vector<MetaAction> label_ground_truth(const Scenario & sc);

}  // namespace dual_aeb

#endif  // DUAL_AEB__WORLD_HPP_
