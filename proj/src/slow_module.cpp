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

#include "dual_aeb/slow_module.hpp"

#include "dual_aeb/templates.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace dual_aeb
{

double project_brake_signal(double score)
{
  if (score >= 0.0) {
    return 1.0 / (1.0 + std::exp(-score));
  }
  const double e = std::exp(score);
  return e / (1.0 + e);
}

double mock_score(MetaAction action)
{
  switch (action) {
    case MetaAction::EmergencyBraking:
      return kMockConfidentScore;
    case MetaAction::EarlyWarning:
      return 0.0;
    case MetaAction::Normal:
      break;
  }
  return -kMockConfidentScore;
}

OracleKnowledge OracleKnowledge::from_scenario(Scenario sc)
{
  OracleKnowledge oracle;
  oracle.labels = label_ground_truth(sc);
  for (const auto & a : sc.agents) {
    if (a.ghost) {
      oracle.ghost_ids.push_back(a.id);
    }
    if (a.hidden_until) {
      oracle.hidden_ids.push_back(a.id);
    }
  }
  const auto it = std::find(oracle.labels.begin(), oracle.labels.end(), MetaAction::EmergencyBraking);
  if (it != oracle.labels.end()) {
    oracle.hazard_onset_tick = static_cast<int>(it - oracle.labels.begin());
  }
  oracle.scenario = std::move(sc);
  return oracle;
}

std::string ghost_sentence(const AgentSpec & ghost)
{
  return fmt::format(
    "The {} figure ahead is an advertisement printed on a billboard, not a real road user, so it is filtered out.",
    ghost.category);
}

std::vector<std::string> object_sentences(const Scenario & sc, const SceneSummary & scene)
{
  std::vector<std::string> real;
  std::vector<std::string> ghosts;
  for (const SceneAgent & seen : scene.agents) {
    const AgentSpec * spec = sc.find_agent(seen.id);
    if (spec == nullptr) {
      continue;
    }
    if (spec->ghost) {
      ghosts.push_back(ghost_sentence(*spec));
      continue;
    }
    real.push_back(object_sentence(
      default_templates(), object_phrase(spec->color, spec->category, spec->signal), seen.box_2d, seen.distance,
      spec->intention));
  }
  real.insert(real.end(), ghosts.begin(), ghosts.end());
  return real;
}

std::string decision_clause(
  const Scenario & sc, int tick, MetaAction action, const std::optional<CollisionForecast> & forecast)
{
  if (!forecast || action == MetaAction::Normal) {
    return "No real road user threatens the planned path, so the ego vehicle can continue.";
  }
  const AgentSpec * agent = sc.find_agent(forecast->agent_id);
  const std::string who = agent ? agent_descriptor(*agent) : std::string("an obstacle ahead");
  const double when = forecast->steps * sc.dt;
  if (agent && !perceived_by_quick_path(*agent, tick * sc.dt)) {
    return fmt::format(
      "Traffic ahead is reacting to {} emerging from an occluded area; contact is possible in {:.1f} seconds.", who,
      when);
  }
  if (action == MetaAction::EmergencyBraking) {
    return fmt::format("A collision with {} is imminent in {:.1f} seconds and requires immediate braking.", who, when);
  }
  return fmt::format("The presence of {} in the planned path requires heightened awareness.", who);
}

SlowResponse mock_respond(const SlowRequest & req, const OracleKnowledge & oracle)
{
  SlowResponse resp;
  resp.request_id = req.request_id;
  if (!oracle.covers(req.tick)) {
    resp.meta_action = MetaAction::Normal;
    resp.brake_signal = 0.0;
    resp.rationale = fmt::format("Protocol error: tick {} is outside the scenario timeline.", req.tick);
    return resp;
  }

  const Scenario & sc = oracle.scenario;
  const EgoState ego = from_snapshot(sc, req.scene_summary.ego);
  const auto forecast = forecast_hazard(sc, ego, req.tick);
  resp.meta_action = classify_forecast(sc, forecast);
  resp.brake_signal = project_brake_signal(mock_score(resp.meta_action));

  std::vector<std::string> sentences;
  try {
    sentences.push_back(scenario_sentence(default_templates(), sc.metadata));
  } catch (const TemplateError &) {
    sentences.push_back("The ego vehicle drives along its planned route.");
  }
  SceneSummary real_view = req.scene_summary;
  std::erase_if(real_view.agents, [&](const SceneAgent & a) {
    const AgentSpec * spec = sc.find_agent(a.id);
    return spec == nullptr || spec->ghost;
  });
  for (auto & line : object_sentences(sc, real_view)) {
    sentences.push_back(std::move(line));
  }
  // The camera shows the advertisement before the detector misfires on it, so
  // every ghost is dismissed, including ones the quick path has not reported yet.
  for (const auto & id : oracle.ghost_ids) {
    if (const AgentSpec * ghost = sc.find_agent(id)) {
      resp.dismissed_agents.push_back(id);
      sentences.push_back(ghost_sentence(*ghost));
    }
  }
  sentences.push_back(decision_sentence(resp.meta_action, decision_clause(sc, req.tick, resp.meta_action, forecast)));

  for (std::size_t i = 0; i < sentences.size(); ++i) {
    if (i > 0) {
      resp.rationale += ' ';
    }
    resp.rationale += sentences[i];
  }
  return resp;
}

void check_response(const SlowResponse & resp)
{
  if (!(resp.brake_signal >= 0.0 && resp.brake_signal <= 1.0)) {
    throw std::invalid_argument("brake_signal: outside [0, 1]");
  }
  if (resp.rationale.empty()) {
    throw std::invalid_argument("rationale: empty");
  }
  const bool token = resp.rationale.ends_with(kAebToken);
  if (token != (resp.meta_action != MetaAction::Normal)) {
    throw std::invalid_argument("rationale: <AEB> token must be present exactly for non-Normal actions");
  }
}

}  // namespace dual_aeb
