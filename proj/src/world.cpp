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

#include "dual_aeb/world.hpp"

#include "dual_aeb/arbiter.hpp"

#include <algorithm>
#include <cmath>

namespace dual_aeb
{

namespace
{

constexpr double kTimeEps = 1e-9;

Vec2 rotate(Vec2 v, double angle)
{
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return {c * v.x - s * v.y, s * v.x + c * v.y};
}

AgentState twist_state(const ConstantTwistMotion & m, double t)
{
  const double w = m.heading_rate;
  Vec2 offset;
  if (std::abs(w) < 1e-12) {
    offset = t * m.velocity;
  } else {
    // Integral of the velocity rotating at w.
    const double s = std::sin(w * t) / w;
    const double c = (1.0 - std::cos(w * t)) / w;
    offset = {s * m.velocity.x - c * m.velocity.y, c * m.velocity.x + s * m.velocity.y};
  }
  const Vec2 p = m.start.position() + offset;
  return {Pose2D(p.x, p.y, m.start.heading + w * t), rotate(m.velocity, w * t), w};
}

AgentState waypoint_state(const WaypointMotion & m, double t)
{
  const auto & k = m.knots;
  if (k.size() == 1 || t <= k.front().t) {
    return {k.front().pose, {}, 0.0};
  }
  if (t >= k.back().t) {
    return {k.back().pose, {}, 0.0};
  }
  const auto it = std::upper_bound(k.begin(), k.end(), t, [](double v, const WaypointMotion::Knot & n) { return v < n.t; });
  const auto & b = *it;
  const auto & a = *(it - 1);
  const double span = b.t - a.t;
  const double u = (t - a.t) / span;
  const Vec2 delta = b.pose.position() - a.pose.position();
  const Vec2 p = a.pose.position() + u * delta;
  const double dh = normalize_angle(b.pose.heading - a.pose.heading);
  return {Pose2D(p.x, p.y, a.pose.heading + u * dh), (1.0 / span) * delta, dh / span};
}

void advance_longitudinal(double & s, double & v, double a, double dt)
{
  if (dt <= 0.0) {
    return;
  }
  if (a < 0.0 && v + a * dt < 0.0) {
    s += v * v / (-2.0 * a);
    v = 0.0;
    return;
  }
  s += v * dt + 0.5 * a * dt * dt;
  v += a * dt;
}

AgentState longitudinal_state(const LongitudinalMotion & m, double t)
{
  double s = 0.0;
  double v = m.speed;
  double a = 0.0;
  double clock = 0.0;
  for (const auto & e : m.events) {
    if (e.t > t) {
      break;
    }
    advance_longitudinal(s, v, a, e.t - clock);
    clock = std::max(clock, e.t);
    a = e.accel;
  }
  advance_longitudinal(s, v, a, t - clock);
  const Vec2 dir{std::cos(m.start.heading), std::sin(m.start.heading)};
  const Vec2 p = m.start.position() + s * dir;
  return {Pose2D(p.x, p.y, m.start.heading), v * dir, 0.0};
}

}  // namespace

AgentState agent_state_at(const AgentSpec & agent, double t)
{
  return std::visit(
    [t](const auto & m) -> AgentState {
      using T = std::decay_t<decltype(m)>;
      if constexpr (std::is_same_v<T, ConstantTwistMotion>) {
        return twist_state(m, t);
      } else if constexpr (std::is_same_v<T, WaypointMotion>) {
        return waypoint_state(m, t);
      } else {
        return longitudinal_state(m, t);
      }
    },
    agent.motion);
}

OrientedBox agent_box_at(const AgentSpec & agent, double t)
{
  return OrientedBox::from_dimensions(agent_state_at(agent, t).pose, agent.length, agent.width);
}

bool perceived_by_quick_path(const AgentSpec & agent, double t)
{
  return !agent.hidden_until || t + kTimeEps >= *agent.hidden_until;
}

EgoState initial_ego(const Scenario & sc)
{
  return {sc.ego.initial, 0.0};
}

OrientedBox ego_box(const Scenario & sc, const Pose2D & pose)
{
  return OrientedBox::from_dimensions(pose, sc.ego.length, sc.ego.width);
}

EgoState advance_planned(const Scenario & sc, const EgoState & ego, double dt)
{
  const double v0 = ego.vehicle.speed;
  const double target = sc.ego.target_speed;
  const double step = sc.ego.plan_accel * dt;
  const double v1 = v0 < target ? std::min(target, v0 + step) : std::max(target, v0 - step);
  EgoState next = ego;
  next.route_s = ego.route_s + 0.5 * (v0 + v1) * dt;
  next.vehicle.pose = sc.ego.route.pose_at(next.route_s);
  next.vehicle.speed = v1;
  return next;
}

EgoState advance_braking(const EgoState & ego, double decel, double dt)
{
  double travelled = 0.0;
  double v = ego.vehicle.speed;
  advance_longitudinal(travelled, v, -decel, dt);
  EgoState next = ego;
  const Pose2D & p = ego.vehicle.pose;
  next.vehicle.pose = Pose2D(p.x + travelled * std::cos(p.heading), p.y + travelled * std::sin(p.heading), p.heading);
  next.vehicle.speed = v;
  next.route_s = ego.route_s + travelled;
  return next;
}

Trajectory plan_from(const Scenario & sc, const EgoState & ego, int horizon_steps, double dt)
{
  Trajectory plan;
  plan.dt = dt;
  plan.waypoints.reserve(static_cast<std::size_t>(horizon_steps));
  EgoState cur = ego;
  for (int k = 0; k < horizon_steps; ++k) {
    cur = advance_planned(sc, cur, dt);
    plan.waypoints.push_back(cur.vehicle.pose);
  }
  return plan;
}

std::string agent_descriptor(const AgentSpec & agent)
{
  if (!agent.descriptor.empty()) {
    return agent.descriptor;
  }
  AgentTrack probe{agent.id, OrientedBox({}, 1.0, 1.0), {}, 0.0, false, false, {}};
  return describe_agent(probe);
}

RuleInputs compose_rule_inputs(const Scenario & sc, const EgoState & ego, int tick, const RuleConfig & cfg)
{
  const double t = tick * sc.dt;
  std::vector<AgentTrack> others;
  others.reserve(sc.agents.size());
  for (const auto & a : sc.agents) {
    if (!perceived_by_quick_path(a, t)) {
      continue;
    }
    const AgentState st = agent_state_at(a, t);
    others.push_back({a.id, OrientedBox::from_dimensions(st.pose, a.length, a.width), st.velocity, st.heading_rate,
                      a.ghost, false, agent_descriptor(a)});
  }
  return RuleInputs{
    ego_box(sc, ego.vehicle.pose),
    ego.vehicle,
    std::move(others),
    plan_from(sc, ego, cfg.horizon_steps, cfg.dt),
    sc.map,
    cfg.dt,
    cfg.horizon_steps,
    cfg.t_threshold};
}

std::optional<ImageBox> project_to_camera(const Scenario & sc, const EgoState & ego, const OrientedBox & box, double height)
{
  const CameraSpec & cam = sc.camera;
  const Pose2D & eye = ego.vehicle.pose;
  const Vec2 rel = box.center().position() - eye.position();
  const Vec2 local_center = rotate(rel, -eye.heading);
  if (local_center.x < 1.0 || norm(rel) > cam.max_range) {
    return std::nullopt;
  }
  double u_min = std::numeric_limits<double>::infinity();
  double u_max = -u_min;
  double v_min = u_min;
  double v_max = -u_min;
  const double cu = 0.5 * cam.width_px;
  const double cv = 0.5 * cam.height_px;
  for (const Vec2 corner : box.corners()) {
    const Vec2 local = rotate(corner - eye.position(), -eye.heading);
    const double depth = std::max(local.x, 0.5);
    const double u = cu - cam.focal_px * local.y / depth;
    u_min = std::min(u_min, u);
    u_max = std::max(u_max, u);
    for (const double z : {0.0, height}) {
      const double v = cv + cam.focal_px * (cam.mount_height - z) / depth;
      v_min = std::min(v_min, v);
      v_max = std::max(v_max, v);
    }
  }
  ImageBox img{
    std::round(std::clamp(u_min, 0.0, cam.width_px)), std::round(std::clamp(v_min, 0.0, cam.height_px)),
    std::round(std::clamp(u_max, 0.0, cam.width_px)), std::round(std::clamp(v_max, 0.0, cam.height_px))};
  if (!(img.x_min < img.x_max) || !(img.y_min < img.y_max)) {
    return std::nullopt;
  }
  return img;
}

EgoSnapshot snapshot(const EgoState & ego)
{
  const Pose2D & p = ego.vehicle.pose;
  return {p.x, p.y, p.heading, ego.vehicle.speed, ego.route_s};
}

EgoState from_snapshot(const Scenario & sc, const EgoSnapshot & snap)
{
  EgoState ego{sc.ego.initial, snap.route_s};
  ego.vehicle.pose = Pose2D(snap.x, snap.y, snap.heading);
  ego.vehicle.speed = snap.speed;
  return ego;
}

SceneSummary scene_summary(const Scenario & sc, const EgoState & ego, int tick)
{
  const double t = tick * sc.dt;
  SceneSummary summary{snapshot(ego), {}};
  for (const auto & a : sc.agents) {
    if (!perceived_by_quick_path(a, t)) {
      continue;
    }
    const OrientedBox box = agent_box_at(a, t);
    const auto img = project_to_camera(sc, ego, box, a.height);
    if (!img) {
      continue;
    }
    const double distance = std::round(norm(box.center().position() - ego.vehicle.pose.position()) * 100.0) / 100.0;
    summary.agents.push_back({a.id, agent_descriptor(a), a.category, *img, distance, a.signal});
  }
  std::stable_sort(summary.agents.begin(), summary.agents.end(), [](const SceneAgent & l, const SceneAgent & r) {
    return l.distance < r.distance;
  });
  return summary;
}

std::vector<std::string> real_collisions(const Scenario & sc, const Pose2D & ego_pose, int tick)
{
  const double t = tick * sc.dt;
  const OrientedBox ego = ego_box(sc, ego_pose);
  std::vector<std::string> hits;
  for (const auto & a : sc.agents) {
    if (!a.ghost && obb_intersects(ego, agent_box_at(a, t))) {
      hits.push_back(a.id);
    }
  }
  return hits;
}

std::optional<CollisionForecast> forecast_real_collision(const Scenario & sc, const EgoState & ego, int tick, int max_steps)
{
  EgoState cur = ego;
  for (int k = 0; k <= max_steps; ++k) {
    if (k > 0) {
      cur = advance_planned(sc, cur, sc.dt);
    }
    const auto hits = real_collisions(sc, cur.vehicle.pose, tick + k);
    if (!hits.empty()) {
      return CollisionForecast{k, hits.front()};
    }
  }
  return std::nullopt;
}

std::optional<CollisionForecast> forecast_hazard(const Scenario & sc, const EgoState & ego, int tick)
{
  const int max_steps = static_cast<int>(std::floor(sc.ground_truth.t_warning / sc.dt + kTimeEps));
  return forecast_real_collision(sc, ego, tick, max_steps);
}

MetaAction classify_forecast(const Scenario & sc, const std::optional<CollisionForecast> & forecast)
{
  if (!forecast) {
    return MetaAction::Normal;
  }
  const double tc = forecast->steps * sc.dt;
  if (tc <= sc.ground_truth.t_emergency + kTimeEps) {
    return MetaAction::EmergencyBraking;
  }
  if (tc <= sc.ground_truth.t_warning + kTimeEps) {
    return MetaAction::EarlyWarning;
  }
  return MetaAction::Normal;
}

MetaAction required_action(const Scenario & sc, const EgoState & ego, int tick)
{
  return classify_forecast(sc, forecast_hazard(sc, ego, tick));
}

std::vector<EgoState> nominal_ego_states(const Scenario & sc)
{
  const int n = sc.tick_count();
  std::vector<EgoState> states;
  states.reserve(static_cast<std::size_t>(n));
  EgoState cur = initial_ego(sc);
  for (int i = 0; i < n; ++i) {
    states.push_back(cur);
    cur = advance_planned(sc, cur, sc.dt);
  }
  return states;
}

std::vector<MetaAction> label_ground_truth(const Scenario & sc)
{
  const auto states = nominal_ego_states(sc);
  std::vector<MetaAction> labels;
  labels.reserve(states.size());
  for (std::size_t i = 0; i < states.size(); ++i) {
    labels.push_back(required_action(sc, states[i], static_cast<int>(i)));
  }
  return labels;
}

}  // namespace dual_aeb
