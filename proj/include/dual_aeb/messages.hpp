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

#ifndef DUAL_AEB__MESSAGES_HPP_
#define DUAL_AEB__MESSAGES_HPP_

#include "dual_aeb/meta_action.hpp"

#include <optional>
#include <string>
#include <vector>

namespace dual_aeb
{

/// Text packaging of the quick module's initial decision.
struct AebPrompt
{
  std::string text;
  MetaAction initial_action{MetaAction::Normal};
  std::optional<std::string> agent_id;
  std::optional<double> predicted_collision_time;
  double ego_speed{0.0};
  int tick{0};

  friend bool operator==(const AebPrompt &, const AebPrompt &) = default;
};

/// Image-plane box in pixels.
struct ImageBox
{
  double x_min{0.0};
  double y_min{0.0};
  double x_max{1.0};
  double y_max{1.0};

  friend bool operator==(const ImageBox &, const ImageBox &) = default;
};

struct SceneAgent
{
  std::string id;
  std::string descriptor;
  std::string category;
  ImageBox box_2d;
  double distance{0.0};  // m
  std::string signal;

  friend bool operator==(const SceneAgent &, const SceneAgent &) = default;
};

struct EgoSnapshot
{
  double x{0.0};
  double y{0.0};
  double heading{0.0};
  double speed{0.0};
  double route_s{0.0};  // arc length travelled along the route

  friend bool operator==(const EgoSnapshot &, const EgoSnapshot &) = default;
};

struct SceneSummary
{
  EgoSnapshot ego;
  std::vector<SceneAgent> agents;

  friend bool operator==(const SceneSummary &, const SceneSummary &) = default;
};

/// One prior prompt/reply pair carried as dialogue context.
struct Exchange
{
  int request_id{0};
  int tick{0};
  std::string prompt;
  MetaAction meta_action{MetaAction::Normal};
  std::string rationale;

  friend bool operator==(const Exchange &, const Exchange &) = default;
};

inline constexpr std::size_t kMaxHistory = 4;

struct SlowRequest
{
  int request_id{0};
  int tick{0};
  AebPrompt prompt;
  SceneSummary scene_summary;
  std::vector<Exchange> history;

  friend bool operator==(const SlowRequest &, const SlowRequest &) = default;
};

struct SlowResponse
{
  int request_id{0};
  MetaAction meta_action{MetaAction::Normal};
  std::string rationale;
  double brake_signal{0.0};
  /// Agents the slow module judged to be perception artifacts.
  std::vector<std::string> dismissed_agents;

  friend bool operator==(const SlowResponse &, const SlowResponse &) = default;
};

}  // namespace dual_aeb

#endif  // DUAL_AEB__MESSAGES_HPP_
