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

#ifndef DUAL_AEB__RULE_AEB_HPP_
#define DUAL_AEB__RULE_AEB_HPP_

#include "dual_aeb/geometry.hpp"
#include "dual_aeb/kinematics.hpp"
#include "dual_aeb/meta_action.hpp"

#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace dual_aeb
{

inline constexpr double kInfiniteTtc = std::numeric_limits<double>::infinity();

class InputValidationError : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

/// A perceived agent. `ghost` and `hidden` are scenario truth carried for
/// labeling; the quick path never reads them.
struct AgentTrack
{
  std::string id;
  OrientedBox box;
  Vec2 velocity;             // m/s, world frame
  double heading_rate{0.0};  // rad/s
  bool ghost{false};
  bool hidden{false};
  std::string descriptor;  // optional natural-language name, e.g. "the black vehicle on the left"
};

/// Planned ego waypoints. waypoints[k] is the planned pose at (k + 1) * dt.
struct Trajectory
{
  std::vector<Pose2D> waypoints;
  double dt{0.2};

  /// Builds a plan from positions only. Headings are finite-differenced
  /// between consecutive waypoints; the first inherits `current.heading`
  /// unless the first displacement is non-zero.
  static Trajectory from_positions(std::span<const Vec2> positions, const Pose2D & current, double dt);

  /// Throws InputValidationError if any step (including the one from
  /// `start`) is longer than v_max * dt.
  void validate_spacing(const Pose2D & start, double v_max) const;
};

struct RuleConfig
{
  double dt{0.2};
  int horizon_steps{15};
  double t_threshold{1.0};
  double t_warning{2.0};
  double t_emergency{1.0};
  double ttc_window{5.0};
  double fine_dt{0.05};
  double v_max{40.0};
};

struct RuleInputs
{
  OrientedBox ego_box;
  VehicleState ego_state;
  std::vector<AgentTrack> others;
  Trajectory plan;
  Polygon area;
  double dt{0.2};
  int horizon_steps{15};
  double t_threshold{1.0};
};

struct TriggerResult
{
  std::vector<double> trigger_times;
  double min_ttc{kInfiniteTtc};
  std::optional<int> first_collision_step;
  bool brake{false};
  std::optional<std::string> nearest_agent;
  std::optional<double> predicted_collision_time;

  friend bool operator==(const TriggerResult &, const TriggerResult &) = default;
};

struct TtcHit
{
  double ttc{kInfiniteTtc};
  std::optional<std::size_t> agent_index;
};

OrientedBox update_ego_bbox(const OrientedBox & prev, const Pose2D & waypoint);

/// Constant-velocity, constant-heading-rate extrapolation over dt.
OrientedBox update_other_bbox(const OrientedBox & prev, const AgentTrack & track, double dt);

/// Index of the first in-area agent overlapping the ego box, if any.
std::optional<std::size_t> find_collision(
  const OrientedBox & ego, std::span<const AgentTrack> others, const Polygon & area);

bool calculate_collision(const OrientedBox & ego, std::span<const AgentTrack> others, const Polygon & area);

/// First sampled time in (0, ttc_window] at which the ego, projected at
/// constant speed along its heading, overlaps an in-area agent projected at
/// constant velocity. Samples are integer multiples of fine_dt.
TtcHit time_to_collision(
  const OrientedBox & ego, const VehicleState & ego_state, std::span<const AgentTrack> others,
  const Polygon & area, double ttc_window, double fine_dt);

double calculate_ttc(
  const OrientedBox & ego, const VehicleState & ego_state, std::span<const AgentTrack> others,
  const Polygon & area, double ttc_window, double fine_dt);

/// The rule-based quick module: walks the planned horizon and records every
/// step whose TTC drops below the threshold or whose boxes already overlap.
TriggerResult evaluate(const RuleInputs & in, const RuleConfig & cfg);

MetaAction classify_meta_action(const TriggerResult & r, const RuleConfig & cfg);

/// Evaluates many independent scenes. The parallel kernel is an OpenMP loop;
/// the serial one is the reference it is tested against.
std::vector<TriggerResult> evaluate_batch_serial(std::span<const RuleInputs> scenes, const RuleConfig & cfg);
std::vector<TriggerResult> evaluate_batch_parallel(
  std::span<const RuleInputs> scenes, const RuleConfig & cfg, int threads = 0);

}  // namespace dual_aeb

#endif  // DUAL_AEB__RULE_AEB_HPP_
