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

#include "dual_aeb/rule_aeb.hpp"

#include <fmt/format.h>
#include <omp.h>

#include <algorithm>
#include <cmath>
#include <exception>

namespace dual_aeb
{

namespace
{

// Interval of tau over which two discs moving linearly overlap. A necessary
// condition for box overlap, used to skip samples that cannot hit.
bool disc_overlap_window(Vec2 d0, Vec2 dv, double radius, double & lo, double & hi)
{
  const double a = dot(dv, dv);
  const double b = 2.0 * dot(d0, dv);
  const double c = dot(d0, d0) - radius * radius;
  if (a < 1e-12) {
    if (c > 0.0) {
      return false;
    }
    lo = -kInfiniteTtc;
    hi = kInfiniteTtc;
    return true;
  }
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) {
    return false;
  }
  const double root = std::sqrt(disc);
  lo = (-b - root) / (2.0 * a);
  hi = (-b + root) / (2.0 * a);
  return true;
}

}  // namespace

Trajectory Trajectory::from_positions(std::span<const Vec2> positions, const Pose2D & current, double dt)
{
  Trajectory plan;
  plan.dt = dt;
  plan.waypoints.reserve(positions.size());
  Vec2 prev = current.position();
  double heading = current.heading;
  for (const Vec2 p : positions) {
    const Vec2 step = p - prev;
    if (norm(step) > 1e-9) {
      heading = std::atan2(step.y, step.x);
    }
    plan.waypoints.emplace_back(p.x, p.y, heading);
    prev = p;
  }
  return plan;
}

void Trajectory::validate_spacing(const Pose2D & start, double v_max) const
{
  Vec2 prev = start.position();
  for (std::size_t k = 0; k < waypoints.size(); ++k) {
    const double gap = norm(waypoints[k].position() - prev);
    if (gap > v_max * dt + 1e-9) {
      throw InputValidationError(
        fmt::format("plan waypoint {} is {:.3f} m from its predecessor (limit {:.3f} m)", k, gap, v_max * dt));
    }
    prev = waypoints[k].position();
  }
}

OrientedBox update_ego_bbox(const OrientedBox & prev, const Pose2D & waypoint)
{
  return prev.with_center(waypoint);
}

OrientedBox update_other_bbox(const OrientedBox & prev, const AgentTrack & track, double dt)
{
  const Pose2D & c = prev.center();
  return prev.with_center(
    Pose2D(c.x + track.velocity.x * dt, c.y + track.velocity.y * dt, c.heading + track.heading_rate * dt));
}

std::optional<std::size_t> find_collision(
  const OrientedBox & ego, std::span<const AgentTrack> others, const Polygon & area)
{
  for (std::size_t i = 0; i < others.size(); ++i) {
    if (box_within_area(others[i].box, area) && obb_intersects(ego, others[i].box)) {
      return i;
    }
  }
  return std::nullopt;
}

bool calculate_collision(const OrientedBox & ego, std::span<const AgentTrack> others, const Polygon & area)
{
  return find_collision(ego, others, area).has_value();
}

TtcHit time_to_collision(
  const OrientedBox & ego, const VehicleState & ego_state, std::span<const AgentTrack> others,
  const Polygon & area, double ttc_window, double fine_dt)
{
  TtcHit best;
  const auto max_index = static_cast<long>(std::floor(ttc_window / fine_dt + 1e-9));
  long best_index = max_index + 1;

  const double heading = ego.center().heading;
  const Vec2 ego_velocity{ego_state.speed * std::cos(heading), ego_state.speed * std::sin(heading)};
  const Vec2 ego_center = ego.center().position();

  for (std::size_t j = 0; j < others.size(); ++j) {
    const AgentTrack & other = others[j];
    if (!box_within_area(other.box, area)) {
      continue;
    }
    const Vec2 d0 = other.box.center().position() - ego_center;
    const Vec2 dv = other.velocity - ego_velocity;
    double lo = 0.0;
    double hi = 0.0;
    const double radius = ego.bounding_radius() + other.box.bounding_radius() + 1e-6;
    if (!disc_overlap_window(d0, dv, radius, lo, hi) || hi <= 0.0) {
      continue;
    }
    const long first = std::max(1L, static_cast<long>(std::ceil(std::max(lo, 0.0) / fine_dt - 1e-9)));
    const long last = std::min({max_index, best_index - 1, static_cast<long>(std::floor(std::min(hi, ttc_window + fine_dt) / fine_dt + 1e-9))});
    for (long i = first; i <= last; ++i) {
      const double tau = static_cast<double>(i) * fine_dt;
      const OrientedBox ego_at = ego.with_center(
        Pose2D(ego_center.x + ego_velocity.x * tau, ego_center.y + ego_velocity.y * tau, heading));
      const Pose2D & oc = other.box.center();
      const OrientedBox other_at = other.box.with_center(
        Pose2D(oc.x + other.velocity.x * tau, oc.y + other.velocity.y * tau, oc.heading));
      if (obb_intersects(ego_at, other_at)) {
        best_index = i;
        best.ttc = tau;
        best.agent_index = j;
        break;
      }
    }
  }
  return best;
}

double calculate_ttc(
  const OrientedBox & ego, const VehicleState & ego_state, std::span<const AgentTrack> others,
  const Polygon & area, double ttc_window, double fine_dt)
{
  return time_to_collision(ego, ego_state, others, area, ttc_window, fine_dt).ttc;
}

TriggerResult evaluate(const RuleInputs & in, const RuleConfig & cfg)
{
  if (!(in.dt > 0.0)) {
    throw InputValidationError("dt must be positive");
  }
  if (in.horizon_steps < 1) {
    throw InputValidationError("horizon_steps must be >= 1");
  }
  if (!(in.t_threshold > 0.0)) {
    throw InputValidationError("t_threshold must be positive");
  }
  if (in.plan.waypoints.size() < static_cast<std::size_t>(in.horizon_steps)) {
    throw InputValidationError(fmt::format(
      "plan has {} waypoints but the horizon needs {}", in.plan.waypoints.size(), in.horizon_steps));
  }

  TriggerResult result;
  std::vector<AgentTrack> agents = in.others;
  OrientedBox ego_box = in.ego_box;
  Pose2D prev_pose = in.ego_state.pose;

  // Data of the step that sets min_ttc, used when nothing triggers.
  double min_step_time = 0.0;
  std::optional<std::size_t> min_agent;
  bool triggered = false;

  for (int k = 1; k <= in.horizon_steps; ++k) {
    const double t = static_cast<double>(k) * in.dt;
    const Pose2D & waypoint = in.plan.waypoints[static_cast<std::size_t>(k - 1)];
    ego_box = update_ego_bbox(ego_box, waypoint);
    for (AgentTrack & agent : agents) {
      agent.box = update_other_bbox(agent.box, agent, in.dt);
    }

    VehicleState step_state = in.ego_state;
    step_state.pose = waypoint;
    step_state.speed = norm(waypoint.position() - prev_pose.position()) / in.dt;
    prev_pose = waypoint;

    const TtcHit hit = time_to_collision(ego_box, step_state, agents, in.area, cfg.ttc_window, cfg.fine_dt);
    const std::optional<std::size_t> collided = find_collision(ego_box, agents, in.area);

    if (hit.ttc < result.min_ttc) {
      result.min_ttc = hit.ttc;
      min_step_time = t;
      min_agent = hit.agent_index;
    }
    if (collided && !result.first_collision_step) {
      result.first_collision_step = k;
    }

    if (hit.ttc < in.t_threshold || collided) {
      result.trigger_times.push_back(t);
      if (!triggered) {
        triggered = true;
        const std::size_t who = collided ? *collided : *hit.agent_index;
        result.nearest_agent = agents[who].id;
        result.predicted_collision_time = collided ? t : t + hit.ttc;
      }
    }
  }

  result.brake = !result.trigger_times.empty();
  if (!triggered && min_agent) {
    result.nearest_agent = agents[*min_agent].id;
    result.predicted_collision_time = min_step_time + result.min_ttc;
  }
  return result;
}

MetaAction classify_meta_action(const TriggerResult & r, const RuleConfig & cfg)
{
  if (r.min_ttc < cfg.t_emergency || r.first_collision_step.has_value()) {
    return MetaAction::EmergencyBraking;
  }
  if (r.min_ttc < cfg.t_warning) {
    return MetaAction::EarlyWarning;
  }
  return MetaAction::Normal;
}

std::vector<TriggerResult> evaluate_batch_serial(std::span<const RuleInputs> scenes, const RuleConfig & cfg)
{
  std::vector<TriggerResult> out;
  out.reserve(scenes.size());
  for (const RuleInputs & scene : scenes) {
    out.push_back(evaluate(scene, cfg));
  }
  return out;
}

std::vector<TriggerResult> evaluate_batch_parallel(
  std::span<const RuleInputs> scenes, const RuleConfig & cfg, int threads)
{
  std::vector<TriggerResult> out(scenes.size());
  const int n = static_cast<int>(scenes.size());
  const int team = threads > 0 ? threads : omp_get_max_threads();
  std::vector<std::exception_ptr> errors(scenes.size());
#pragma omp parallel for schedule(dynamic) num_threads(team)
  for (int i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    try {
      out[idx] = evaluate(scenes[idx], cfg);
    } catch (...) {
      errors[idx] = std::current_exception();
    }
  }
  for (const auto & e : errors) {
    if (e) {
      std::rethrow_exception(e);
    }
  }
  return out;
}

}  // namespace dual_aeb
