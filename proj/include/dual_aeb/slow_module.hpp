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

#ifndef DUAL_AEB__SLOW_MODULE_HPP_
#define DUAL_AEB__SLOW_MODULE_HPP_

#include "dual_aeb/messages.hpp"
#include "dual_aeb/scenario.hpp"
#include "dual_aeb/world.hpp"

#include <optional>
#include <string>
#include <vector>

namespace dual_aeb
{

/// Logit of 0.9, so the mock's confident replies land at 0.1 and 0.9.
inline constexpr double kMockConfidentScore = 2.1972245773362196;

double project_brake_signal(double score);

double mock_score(MetaAction action);

/// Privileged view of a scenario that stands in for scene understanding.
struct OracleKnowledge
{
  Scenario scenario;
  std::vector<MetaAction> labels;  // required action per tick, undisturbed run
  std::vector<std::string> ghost_ids;
  std::vector<std::string> hidden_ids;
  std::optional<int> hazard_onset_tick;  // first tick labelled Emergency Braking

  static OracleKnowledge from_scenario(Scenario sc);

  bool covers(int tick) const { return tick >= 0 && static_cast<std::size_t>(tick) < labels.size(); }
};

/// Sentence explaining that a ghost detection is an advertisement.
std::string ghost_sentence(const AgentSpec & ghost);

/// Object sentences for the real agents in view, then ghost sentences.
std::vector<std::string> object_sentences(const Scenario & sc, const SceneSummary & scene);

/// Reason clause for a decision; mentions the hazard the forecast found.
std::string decision_clause(
  const Scenario & sc, int tick, MetaAction action, const std::optional<CollisionForecast> & forecast);

/// Deterministic answer to one consultation. The action is the required
/// action at the reported ego state with ghosts ignored and hidden agents
/// taken into account. Ghosts in view are returned as dismissed.
SlowResponse mock_respond(const SlowRequest & req, const OracleKnowledge & oracle);

/// Checks the response invariants (signal range, token rule, non-empty
/// rationale). Throws std::invalid_argument naming the broken field.
void check_response(const SlowResponse & resp);

}  // namespace dual_aeb

#endif  // DUAL_AEB__SLOW_MODULE_HPP_
