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

#ifndef DUAL_AEB__GENERATORS_HPP_
#define DUAL_AEB__GENERATORS_HPP_

#include "dual_aeb/kinematics.hpp"
#include "dual_aeb/random.hpp"
#include "dual_aeb/rule_aeb.hpp"

#include <json.hpp>

#include <cstdint>
#include <vector>

namespace dual_aeb
{

/// Seeded rule-path scene with up to `max_agents` agents. The ego drives a
/// gently curving constant-speed plan; about a third of the agents are placed
/// on or near that plan so both outcomes occur.
RuleInputs random_scene(Rng & rng, int max_agents, const RuleConfig & cfg);

/// Piecewise-constant controls kept inside the default limits.
std::vector<Control> random_controls(Rng & rng, int count);

/// Scenario document with one scripted hazard (or none) drawn from a small
/// family: stalled car, braking lead, crossing pedestrian, cut-in, ghost,
/// or an empty road. Short runs so labels cover all three classes.
nlohmann::json random_hazard_scenario(std::uint64_t seed);

}  // namespace dual_aeb

#endif  // DUAL_AEB__GENERATORS_HPP_
