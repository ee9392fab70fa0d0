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

#ifndef DUAL_AEB__SIMULATOR_HPP_
#define DUAL_AEB__SIMULATOR_HPP_

#include "dual_aeb/arbiter.hpp"
#include "dual_aeb/scenario.hpp"
#include "dual_aeb/transport.hpp"
#include "dual_aeb/world.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace dual_aeb
{

inline constexpr int kSimLogVersion = 1;

struct RunOptions
{
  ArbiterMode mode{ArbiterMode::Dual};
  ArbiterConfig arbiter;
  RuleConfig rule;
  LatencyModel latency;
  std::uint64_t seed{0};
};

/// Scenario-embedded configs replace the defaults; anything the caller set
/// explicitly afterwards wins.
RunOptions options_for(const Scenario & sc, ArbiterMode mode, std::uint64_t seed);

struct AgentRecord
{
  std::string id;
  Pose2D pose;
  double speed{0.0};
  bool ghost{false};
  bool perceived{true};  // visible to the quick path at this tick
};

struct TickRecord
{
  int tick{0};
  double time{0.0};
  EgoSnapshot ego;
  std::vector<AgentRecord> agents;
  TriggerResult trigger;
  MetaAction quick_action{MetaAction::Normal};
  BrakeCommand command;
  std::optional<int> prompt_id;
  std::string prompt_text;
  std::optional<int> governing_request;
  std::vector<ReplyEvent> replies;
  MetaAction label{MetaAction::Normal};   // required action at the actual state
  std::vector<std::string> collisions;  // real overlaps after this tick's motion
};

struct LogEvent
{
  int tick{0};
  std::string kind;  // collision, goal_reached, prompt_sent, reply_applied, reply_discarded, reply_expired
  std::string agent_id;
  std::optional<int> request_id;
};

struct RunSummary
{
  int ticks{0};
  int collisions{0};  // distinct contact onsets
  std::vector<std::string> collided_agents;
  bool goal_reached{false};
  std::optional<int> goal_tick;
  double route_completion{0.0};
  double route_goal_length{0.0};
  int brake_ticks{0};
  int prompts{0};
  int replies_applied{0};
};

struct SimLog
{
  std::string scenario_name;
  ArbiterMode mode{ArbiterMode::Dual};
  std::uint64_t seed{0};
  double dt{0.2};
  nlohmann::json config;    // rule, arbiter, latency
  nlohmann::json scenario;  // full scenario document
  std::vector<TickRecord> ticks;
  std::vector<LogEvent> events;
  RunSummary summary;
};

/// One closed-loop run. Without a client the in-process mock is used for the
/// slow path with the options' latency model.
SimLog run(const Scenario & sc, const RunOptions & opts, SlowClient * client = nullptr);

/// Same as run() with a caller-supplied oracle for the in-process mock.
SimLog run_with_oracle(const Scenario & sc, const RunOptions & opts, std::shared_ptr<const OracleKnowledge> oracle);

void write_log(std::ostream & out, const SimLog & log);
std::string log_to_string(const SimLog & log);
SimLog read_log(std::istream & in);
SimLog load_log(const std::filesystem::path & path);

}  // namespace dual_aeb

#endif  // DUAL_AEB__SIMULATOR_HPP_
