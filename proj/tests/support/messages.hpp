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

#ifndef DUAL_AEB__TESTS__MESSAGES_HPP_
#define DUAL_AEB__TESTS__MESSAGES_HPP_

#include "dual_aeb/messages.hpp"
#include "dual_aeb/random.hpp"

#include <fmt/format.h>

#include <string>

namespace messages
{

inline std::string random_text(dual_aeb::Rng & rng)
{
  static const char * kWords[] = {"the", "black", "vehicle", "brakes", "\"quoted\"", "ünïcode", "line\nbreak", "<AEB>", "tab\t", "{}", "0.5"};
  std::string out;
  const auto n = rng.index(12);
  for (std::uint64_t i = 0; i < n; ++i) {
    out += kWords[rng.index(std::size(kWords))];
    out += ' ';
  }
  return out;
}

inline dual_aeb::MetaAction random_action(dual_aeb::Rng & rng)
{
  return dual_aeb::kAllMetaActions.at(rng.index(3));
}

inline dual_aeb::SlowRequest random_request(dual_aeb::Rng & rng)
{
  using namespace dual_aeb;
  SlowRequest req;
  req.request_id = static_cast<int>(rng.index(1000000));
  req.tick = static_cast<int>(rng.index(10000));
  req.prompt.text = random_text(rng) + "x";
  req.prompt.initial_action = random_action(rng);
  if (rng.unit() < 0.5) {
    req.prompt.agent_id = fmt::format("agent_{}", rng.index(50));
  }
  if (rng.unit() < 0.5) {
    req.prompt.predicted_collision_time = rng.uniform(0, 5);
  }
  req.prompt.ego_speed = rng.uniform(0, 40);
  req.prompt.tick = req.tick;
  req.scene_summary.ego = {rng.uniform(-1e3, 1e3), rng.uniform(-1e3, 1e3), rng.uniform(-3.14, 3.14), rng.uniform(0, 40), rng.uniform(0, 1e3)};
  const auto agents = rng.index(6);
  for (std::uint64_t i = 0; i < agents; ++i) {
    const double x0 = rng.uniform(0, 1500);
    const double y0 = rng.uniform(0, 800);
    req.scene_summary.agents.push_back(
      {fmt::format("a{}", i), random_text(rng), "vehicle", {x0, y0, x0 + rng.uniform(1, 100), y0 + rng.uniform(1, 100)},
       rng.uniform(0, 120), "none"});
  }
  const auto hist = rng.index(5);
  for (std::uint64_t i = 0; i < hist; ++i) {
    req.history.push_back({static_cast<int>(i + 1), static_cast<int>(i * 13), random_text(rng), random_action(rng), random_text(rng)});
  }
  return req;
}

inline dual_aeb::SlowResponse random_response(dual_aeb::Rng & rng)
{
  using namespace dual_aeb;
  SlowResponse resp;
  resp.request_id = static_cast<int>(rng.index(1000000));
  resp.meta_action = random_action(rng);
  resp.rationale = random_text(rng) + "y";
  resp.brake_signal = rng.unit();
  const auto n = rng.index(3);
  for (std::uint64_t i = 0; i < n; ++i) {
    resp.dismissed_agents.push_back(fmt::format("ghost_{}", i));
  }
  return resp;
}

}  // namespace messages

#endif  // DUAL_AEB__TESTS__MESSAGES_HPP_
