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

#ifndef DUAL_AEB__SCENARIO_HPP_
#define DUAL_AEB__SCENARIO_HPP_

#include "dual_aeb/arbiter.hpp"
#include "dual_aeb/geometry.hpp"
#include "dual_aeb/kinematics.hpp"
#include "dual_aeb/rule_aeb.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace dual_aeb
{

inline constexpr int kScenarioSchemaVersion = 1;

/// Raised for schema violations. The message starts with the JSON path of the
/// offending field, e.g. "agents[1].motion.vx: expected a number".
class ScenarioError : public std::runtime_error
{
public:
  ScenarioError(std::string path, const std::string & what);
  const std::string & path() const { return path_; }

private:
  std::string path_;
};

/// Arc-length parameterized polyline. Poses past either end extrapolate
/// along the terminal segment.
class Route
{
public:
  explicit Route(std::vector<Vec2> points);

  double length() const { return cumulative_.back(); }
  Pose2D pose_at(double s) const;
  /// Arc length of the point on the route closest to p.
  double project(Vec2 p) const;
  std::span<const Vec2> points() const { return points_; }

private:
  std::vector<Vec2> points_;
  std::vector<double> cumulative_;
};

struct EgoSpec
{
  VehicleState initial;
  double length{4.6};
  double width{2.0};
  double target_speed{10.0};
  double plan_accel{2.0};  // m/s^2 the planner uses to regain target speed
  Route route{{{0.0, 0.0}, {1.0, 0.0}}};
};

struct ConstantTwistMotion
{
  Pose2D start;
  Vec2 velocity;
  double heading_rate{0.0};
};

struct WaypointMotion
{
  struct Knot
  {
    double t;
    Pose2D pose;
  };
  std::vector<Knot> knots;  // strictly increasing t; held constant outside
};

/// Straight-line motion along the start heading with piecewise-constant
/// acceleration switched at event times. Speed never goes negative.
struct LongitudinalMotion
{
  struct Event
  {
    double t;
    double accel;
  };
  Pose2D start;
  double speed{0.0};
  std::vector<Event> events;
};

using AgentMotion = std::variant<ConstantTwistMotion, WaypointMotion, LongitudinalMotion>;

struct AgentSpec
{
  std::string id;
  std::string category{"vehicle"};
  std::string color;
  std::string descriptor;  // empty -> derived from id
  double length{4.5};
  double width{1.9};
  double height{1.5};
  AgentMotion motion;
  bool ghost{false};
  std::optional<double> hidden_until;
  std::string signal{"none"};
  std::string intention;
};

struct CameraSpec
{
  double focal_px{1000.0};
  double width_px{1600.0};
  double height_px{900.0};
  double mount_height{1.6};
  double max_range{120.0};
};

struct Goal
{
  Vec2 position;
  double radius{3.0};
};

struct GroundTruthConfig
{
  double t_emergency{1.5};
  double t_warning{3.0};
};

struct Scenario
{
  int schema_version{kScenarioSchemaVersion};
  std::string name;
  std::uint64_t seed{0};
  Polygon map{Polygon::rectangle(-10.0, -10.0, 10.0, 10.0)};
  EgoSpec ego;
  std::vector<AgentSpec> agents;
  double duration{10.0};
  double dt{0.2};
  std::optional<Goal> goal;
  std::map<std::string, std::string> metadata;
  CameraSpec camera;
  GroundTruthConfig ground_truth;
  std::optional<RuleConfig> rule;
  std::optional<ArbiterConfig> arbiter;

  /// ceil(duration / dt) with a tolerance for binary representation.
  int tick_count() const;
  /// Arc length at which the route counts as complete.
  double route_goal_length() const;
  const AgentSpec * find_agent(std::string_view id) const;
};

Scenario parse_scenario(const nlohmann::json & doc);
Scenario load_scenario(const std::filesystem::path & path);
nlohmann::json scenario_to_json(const Scenario & sc);

/// Sorted *.json files of a directory, or the path itself for a file.
std::vector<std::filesystem::path> scenario_files(const std::filesystem::path & path);
/// Loads all paths; a single error lists every missing file.
std::vector<Scenario> load_scenarios(std::span<const std::filesystem::path> paths);

/// Applies the keys present in `j` on top of `base`. Unknown keys are rejected
/// with the offending path.
RuleConfig parse_rule_config(const nlohmann::json & j, RuleConfig base, const std::string & path = "rule");
ArbiterConfig parse_arbiter_config(const nlohmann::json & j, ArbiterConfig base, const std::string & path = "arbiter");
nlohmann::json to_json(const RuleConfig & cfg);
nlohmann::json to_json(const ArbiterConfig & cfg);

}  // namespace dual_aeb

#endif  // DUAL_AEB__SCENARIO_HPP_
