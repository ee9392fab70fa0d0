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

#include "dual_aeb/generators.hpp"

#include <fmt/format.h>

#include <array>
#include <cmath>
#include <numbers>
#include <string>

namespace dual_aeb
{

using nlohmann::json;

RuleInputs random_scene(Rng & rng, int max_agents, const RuleConfig & cfg)
{
  RuleInputs in{
    OrientedBox::from_dimensions({}, 4.6, 2.0), VehicleState{}, {}, Trajectory{}, Polygon::rectangle(-40, -25, 140, 25),
    cfg.dt, cfg.horizon_steps, cfg.t_threshold};
  const double speed = rng.uniform(0.0, 20.0);
  in.ego_state.speed = speed;

  // Constant-speed arc from the origin.
  const double steer = rng.uniform(-0.05, 0.05);
  const std::vector<Control> controls(static_cast<std::size_t>(cfg.horizon_steps), Control{0.0, steer});
  for (const VehicleState & s : rollout(in.ego_state, controls, cfg.dt)) {
    in.plan.waypoints.push_back(s.pose);
  }
  in.plan.dt = cfg.dt;

  const int n = static_cast<int>(rng.index(static_cast<std::uint64_t>(max_agents) + 1));
  const Pose2D & plan_end = in.plan.waypoints.back();
  for (int i = 0; i < n; ++i) {
    AgentTrack a{fmt::format("agent_{}", i), OrientedBox({}, 1, 1), {}, 0.0, false, false, {}};
    const bool pedestrian = rng.unit() < 0.3;
    const double length = pedestrian ? 0.6 : rng.uniform(3.5, 5.5);
    const double width = pedestrian ? 0.6 : rng.uniform(1.6, 2.2);
    Pose2D c;
    if (rng.unit() < 0.35) {
      // Near the plan: pick a point along it, offset sideways.
      const double f = rng.unit();
      const double along = f * norm(plan_end.position()) + rng.uniform(0.0, 30.0);
      const double lateral = rng.uniform(-4.0, 4.0);
      c = Pose2D(along, lateral, rng.uniform(-std::numbers::pi, std::numbers::pi));
    } else {
      c = Pose2D(rng.uniform(-30.0, 130.0), rng.uniform(-30.0, 30.0), rng.uniform(-std::numbers::pi, std::numbers::pi));
    }
    a.box = OrientedBox::from_dimensions(c, length, width);
    const double v = pedestrian ? rng.uniform(0.0, 2.0) : rng.uniform(0.0, 15.0);
    a.velocity = {v * std::cos(c.heading), v * std::sin(c.heading)};
    a.heading_rate = rng.unit() < 0.3 ? rng.uniform(-0.3, 0.3) : 0.0;
    in.others.push_back(std::move(a));
  }
  return in;
}

std::vector<Control> random_controls(Rng & rng, int count)
{
  std::vector<Control> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    out.push_back({rng.uniform(-2.0, 2.0), rng.uniform(-0.3, 0.3)});
  }
  return out;
}

namespace
{

json base_document(std::uint64_t seed, double ego_speed)
{
  static const std::array<std::array<const char *, 4>, 3> kSettings = {{
    {"arterial roadway", "clear, sunny", "urban", "daylight"},
    {"two-lane highway", "overcast", "suburban", "dusk"},
    {"residential street", "light rain", "residential", "night"},
  }};
  Rng rng(seed ^ 0x5eedULL);
  const auto & s = kSettings.at(static_cast<std::size_t>(rng.index(kSettings.size())));
  return {
    {"schema_version", 1},
    {"name", fmt::format("generated_{:06}", seed)},
    {"seed", seed},
    {"dt", 0.2},
    {"duration", 12.0},
    {"metadata", {{"road", s[0]}, {"weather", s[1]}, {"environment", s[2]}, {"time_of_day", s[3]}}},
    {"map", json::array({{-30, -7}, {400, -7}, {400, 7}, {-30, 7}})},
    {"ego",
     {{"x", 0.0},
      {"y", 0.0},
      {"heading", 0.0},
      {"speed", ego_speed},
      {"route", {{"type", "polyline"}, {"points", json::array({{0.0, 0.0}, {400.0, 0.0}})}}}}},
    {"agents", json::array()},
  };
}

json longitudinal(double x, double y, double heading, double speed, json events)
{
  return {{"type", "longitudinal"}, {"x", x}, {"y", y}, {"heading", heading}, {"speed", speed}, {"events", std::move(events)}};
}

}  // namespace

json random_hazard_scenario(std::uint64_t seed)
{
  Rng rng(seed);
  const double v = rng.uniform(8.0, 15.0);
  json doc = base_document(seed, v);
  json & agents = doc["agents"];
  static const std::array<const char *, 4> kColors = {"black", "white", "red", "silver"};
  const std::string color = kColors.at(static_cast<std::size_t>(rng.index(kColors.size())));

  switch (rng.index(6)) {
    case 0:  // stalled car
      agents.push_back({
        {"id", "stalled_car_ahead"},
        {"color", color},
        {"signal", "hazard"},
        {"motion", longitudinal(rng.uniform(30.0, 90.0), rng.uniform(-0.5, 0.5), 0.0, 0.0, json::array())},
      });
      break;
    case 1:  // braking lead
      agents.push_back({
        {"id", "lead_car_ahead"},
        {"color", color},
        {"signal", "brake"},
        {"intention", "braking hard"},
        {"motion",
         longitudinal(rng.uniform(15.0, 35.0), 0.0, 0.0, v, json::array({{rng.uniform(0.5, 4.0), -rng.uniform(4.0, 8.0)}}))},
      });
      break;
    case 2: {  // crossing pedestrian
      const double x = rng.uniform(30.0, 100.0);
      const double t0 = rng.uniform(0.0, 4.0);
      const double walk = rng.uniform(1.0, 2.0);
      agents.push_back({
        {"id", "pedestrian_crossing"},
        {"category", "pedestrian"},
        {"length", 0.6},
        {"width", 0.6},
        {"intention", "crossing the road"},
        {"motion",
         {{"type", "waypoints"},
          {"knots", json::array({{0.0, x, -8.0, std::numbers::pi / 2}, {t0, x, -8.0, std::numbers::pi / 2},
                                 {t0 + 16.0 / walk, x, 8.0, std::numbers::pi / 2}})}}},
      });
      break;
    }
    case 3: {  // cut-in
      const double x0 = rng.uniform(5.0, 25.0);
      const double t_cut = rng.uniform(0.5, 3.0);
      const double vo = v * rng.uniform(0.5, 0.9);
      agents.push_back({
        {"id", fmt::format("{}_vehicle_left", color)},
        {"color", color},
        {"signal", "right_turn"},
        {"intention", "changing into the ego lane"},
        {"motion",
         {{"type", "waypoints"},
          {"knots", json::array({{0.0, x0, 3.5, 0.0}, {t_cut, x0 + vo * t_cut, 3.5, 0.0},
                                 {t_cut + 2.0, x0 + vo * (t_cut + 2.0), 0.0, 0.0},
                                 {30.0, x0 + vo * 30.0, 0.0, 0.0}})}}},
      });
      break;
    }
    case 4:  // ghost
      agents.push_back({
        {"id", "billboard_figure"},
        {"category", "pedestrian"},
        {"length", 0.6},
        {"width", 0.6},
        {"ghost", true},
        {"motion", longitudinal(rng.uniform(30.0, 90.0), rng.uniform(-1.0, 1.0), std::numbers::pi / 2, 0.0, json::array())},
      });
      break;
    default:  // empty road
      break;
  }
  return doc;
}

}  // namespace dual_aeb
