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

#include "dual_aeb/scenario.hpp"
#include "dual_aeb/slow_module.hpp"
#include "dual_aeb/templates.hpp"
#include "dual_aeb/world.hpp"

#include <doctest.h>

#include <cmath>

using namespace dual_aeb;

namespace
{

Scenario bundled(const std::string & name)
{
  return load_scenario(std::string(DUAL_AEB_SCENARIO_DIR) + "/" + name + ".json");
}

// Request as the arbiter would send it with the ego on its nominal path.
SlowRequest request_at(const Scenario & sc, int tick, int id = 1)
{
  const auto states = nominal_ego_states(sc);
  SlowRequest req;
  req.request_id = id;
  req.tick = tick;
  req.prompt.text = "Initial decision: no imminent collision detected; I decide to continue.";
  req.prompt.tick = tick;
  req.scene_summary = scene_summary(sc, states.at(static_cast<std::size_t>(tick)), tick);
  return req;
}

}  // namespace

TEST_CASE("render fills placeholders and reports the missing one")
{
  CHECK(render("a {x} b {{y}}", {{"x", "1"}}) == "a 1 b {y}");
  try {
    render("{weather} and {road}", {{"weather", "rain"}});
    FAIL("expected a TemplateError");
  } catch (const TemplateError & e) {
    CHECK(e.variable() == "road");
  }
}

TEST_CASE("template library offers at least five phrasings per sub-task")
{
  const TemplateSet & t = default_templates();
  for (const Subtask s : {Subtask::ScenarioDescription, Subtask::CriticalObjects, Subtask::DecisionMaking}) {
    CHECK(t.questions(s).size() >= 5);
  }
  for (const auto & q : t.questions(Subtask::DecisionMaking)) {
    CHECK(q.find("{aeb_prompt}") != std::string::npos);
  }
}

TEST_CASE("scenario sentence follows the reference answer")
{
  const std::map<std::string, std::string> md{
    {"road", "arterial roadway"}, {"weather", "clear, sunny"}, {"environment", "urban"}, {"time_of_day", "daylight"}};
  CHECK(
    scenario_sentence(default_templates(), md) ==
    "The ego vehicle navigates an arterial roadway under clear, sunny conditions in an urban environment during daylight.");
  std::map<std::string, std::string> partial = md;
  partial.erase("weather");
  CHECK_THROWS_AS(scenario_sentence(default_templates(), partial), TemplateError);
}

TEST_CASE("object sentence carries box and two-decimal distance")
{
  const std::string phrase = object_phrase("black", "vehicle", "left_turn");
  CHECK(phrase == "A black vehicle with a blinking left turn signal");
  const std::string s = object_sentence(default_templates(), phrase, ImageBox{412, 388, 620, 505}, 14.2649, "preparing to turn left");
  CHECK(s.find("is 14.26 meters away from the ego vehicle") != std::string::npos);
  CHECK(s.find("[(412, 388), (620, 505)]") != std::string::npos);
}

TEST_CASE("decision sentence opens with the action and closes with the token")
{
  const std::string w = decision_sentence(MetaAction::EarlyWarning, "The presence of a truck requires attention.");
  CHECK(w.rfind("Early Warning.", 0) == 0);
  CHECK(w.size() >= kAebToken.size());
  CHECK(w.substr(w.size() - kAebToken.size()) == kAebToken);
  CHECK_FALSE(has_aeb_token(decision_sentence(MetaAction::Normal, "All clear.")));
}

TEST_CASE("brake signal projection")
{
  CHECK(project_brake_signal(0.0) == 0.5);
  CHECK(project_brake_signal(10.0) > 0.9999);
  CHECK(project_brake_signal(10.0) < 1.0);
  CHECK(std::abs(project_brake_signal(-2.1972) - 0.1) < 1e-4);
  CHECK(project_brake_signal(-800.0) >= 0.0);
  CHECK(project_brake_signal(800.0) <= 1.0);
  // Inverse of the logit.
  for (const double p : {0.1, 0.25, 0.5, 0.9}) {
    CHECK(project_brake_signal(std::log(p / (1 - p))) == doctest::Approx(p));
  }
  CHECK(std::abs(project_brake_signal(mock_score(MetaAction::Normal)) - 0.1) < 1e-12);
  CHECK(project_brake_signal(mock_score(MetaAction::EarlyWarning)) == 0.5);
  CHECK(std::abs(project_brake_signal(mock_score(MetaAction::EmergencyBraking)) - 0.9) < 1e-12);
}

TEST_CASE("mock filters the billboard figure")
{
  const Scenario sc = bundled("billboard_ghost");
  const OracleKnowledge oracle = OracleKnowledge::from_scenario(sc);
  for (int tick = 0; tick < sc.tick_count(); tick += 7) {
    const SlowResponse r = mock_respond(request_at(sc, tick), oracle);
    CHECK(r.meta_action == MetaAction::Normal);
    CHECK(std::abs(r.brake_signal - 0.1) < 1e-4);
    CHECK(r.rationale.find("advertisement") != std::string::npos);
    CHECK_FALSE(has_aeb_token(r.rationale));
    CHECK_NOTHROW(check_response(r));
  }
}

TEST_CASE("mock warns one tick before the occluded hazard")
{
  const Scenario sc = bundled("occluded_pedestrian");
  const OracleKnowledge oracle = OracleKnowledge::from_scenario(sc);
  REQUIRE(oracle.hazard_onset_tick.has_value());
  const SlowResponse r = mock_respond(request_at(sc, *oracle.hazard_onset_tick - 1), oracle);
  CHECK(r.meta_action == MetaAction::EarlyWarning);
  CHECK(r.brake_signal == 0.5);
  CHECK(r.rationale.size() >= kAebToken.size());
  CHECK(r.rationale.substr(r.rationale.size() - kAebToken.size()) == kAebToken);
}

TEST_CASE("mock on an empty road")
{
  const Scenario sc = bundled("empty_road");
  const OracleKnowledge oracle = OracleKnowledge::from_scenario(sc);
  const SlowResponse r = mock_respond(request_at(sc, 10), oracle);
  CHECK(r.meta_action == MetaAction::Normal);
  CHECK(std::abs(r.brake_signal - 0.1) < 1e-4);
}

TEST_CASE("unknown tick yields an error response")
{
  const Scenario sc = bundled("empty_road");
  const OracleKnowledge oracle = OracleKnowledge::from_scenario(sc);
  SlowRequest req = request_at(sc, 0, 42);
  req.tick = 100000;
  const SlowResponse r = mock_respond(req, oracle);
  CHECK(r.request_id == 42);
  CHECK(r.meta_action == MetaAction::Normal);
  CHECK(r.brake_signal == 0.0);
  CHECK(r.rationale.find("error") != std::string::npos);
}

TEST_CASE("mock invariants and determinism over the whole suite")
{
  for (const auto & path : scenario_files(DUAL_AEB_SCENARIO_DIR)) {
    const Scenario sc = load_scenario(path);
    const OracleKnowledge oracle = OracleKnowledge::from_scenario(sc);
    CHECK(oracle.labels == label_ground_truth(sc));
    for (int tick = 0; tick < sc.tick_count(); tick += 3) {
      const SlowRequest req = request_at(sc, tick);
      const SlowResponse a = mock_respond(req, oracle);
      CHECK(a == mock_respond(req, oracle));
      CHECK(a.brake_signal >= 0.0);
      CHECK(a.brake_signal <= 1.0);
      CHECK(!a.rationale.empty());
      CHECK(has_aeb_token(a.rationale) == (a.meta_action != MetaAction::Normal));
      // On the nominal path the mock agrees with the ground-truth label.
      CHECK(a.meta_action == oracle.labels.at(static_cast<std::size_t>(tick)));
    }
  }
}

TEST_CASE("adding ghosts never raises the mock's action")
{
  for (const auto & path : scenario_files(DUAL_AEB_SCENARIO_DIR)) {
    const Scenario sc = load_scenario(path);
    Scenario haunted = sc;
    for (int i = 0; i < 3; ++i) {
      AgentSpec ghost;
      ghost.id = "ghost_" + std::to_string(i);
      ghost.category = "pedestrian";
      ghost.length = 0.6;
      ghost.width = 0.6;
      ghost.ghost = true;
      ghost.motion = ConstantTwistMotion{Pose2D(20.0 + 25.0 * i, 0.0, 0.0), {-1.0, 0.0}, 0.0};
      haunted.agents.push_back(ghost);
    }
    const OracleKnowledge plain = OracleKnowledge::from_scenario(sc);
    const OracleKnowledge ghosts = OracleKnowledge::from_scenario(haunted);
    for (int tick = 0; tick < sc.tick_count(); tick += 5) {
      const auto a = mock_respond(request_at(sc, tick), plain).meta_action;
      const auto b = mock_respond(request_at(haunted, tick), ghosts).meta_action;
      CHECK(b <= a);
    }
  }
}
