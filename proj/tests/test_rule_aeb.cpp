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

#include "dual_aeb/generators.hpp"
#include "dual_aeb/rule_aeb.hpp"
#include "support/oracles.hpp"
#include "support/scenes.hpp"

#include <doctest.h>

#include <cmath>

using namespace dual_aeb;

using scenes::track;

namespace
{

RuleInputs straight_scene(double speed, std::vector<AgentTrack> others)
{
  return scenes::straight(speed, std::move(others));
}

}  // namespace

TEST_CASE("update_ego_bbox takes pose from the waypoint")
{
  const OrientedBox prev = OrientedBox::from_dimensions(Pose2D(1, 2, 0.3), 4, 2);
  CHECK(update_ego_bbox(prev, prev.center()) == prev);
  const OrientedBox ahead = update_ego_bbox(prev, Pose2D(1 + 2 * std::cos(0.3), 2 + 2 * std::sin(0.3), 0.3));
  CHECK(ahead.center().x == doctest::Approx(prev.center().x + 2 * std::cos(0.3)));
  CHECK(ahead.half_length() == prev.half_length());

  const OrientedBox rotated = update_ego_bbox(prev, Pose2D(1, 2, 0.4));
  const auto got = rotated.corners();
  const auto want = oracle::corners(1, 2, 0.4, 2, 1);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(got[i].x == doctest::Approx(want[i].x));
    CHECK(got[i].y == doctest::Approx(want[i].y));
  }
}

TEST_CASE("update_other_bbox extrapolates with constant twist")
{
  const AgentTrack still = track("a", 3, 4, 0.2, 4, 2);
  CHECK(update_other_bbox(still.box, still, 0.2) == still.box);

  const AgentTrack left = track("b", 10, 0, 0, 4, 2, {-5, 0});
  CHECK(update_other_bbox(left.box, left, 0.2).center().x == doctest::Approx(9.0));

  const AgentTrack twist = track("c", 1, 1, 0.1, 4, 2, {3, 4}, 0.5);
  OrientedBox b = twist.box;
  for (int k = 0; k < 15; ++k) {
    b = update_other_bbox(b, twist, 0.2);
  }
  CHECK(b.center().x == doctest::Approx(1 + 3 * 3.0));
  CHECK(b.center().y == doctest::Approx(1 + 4 * 3.0));
  CHECK(b.center().heading == doctest::Approx(0.1 + 0.5 * 3.0));
  CHECK(b.half_width() == twist.box.half_width());
}

TEST_CASE("calculate_collision filters by drivable area")
{
  const Polygon area = Polygon::rectangle(-10, -3, 10, 3);
  const OrientedBox ego = OrientedBox::from_dimensions(Pose2D(0, 0, 0), 4, 2);
  CHECK_FALSE(calculate_collision(ego, {}, area));
  const std::vector<AgentTrack> inside{track("in", 1, 1, 0, 4, 2)};
  CHECK(calculate_collision(ego, inside, area));
  // Overlaps the ego but its centre is off the road.
  const std::vector<AgentTrack> outside{track("out", 0, 3.5, 0, 4, 6)};
  REQUIRE(oracle::quads_overlap(oracle::corners(ego), oracle::corners(outside[0].box)));
  CHECK_FALSE(calculate_collision(ego, outside, area));
}

TEST_CASE("calculate_ttc closing-distance cases")
{
  const Polygon area = Polygon::rectangle(-50, -20, 200, 20);
  const OrientedBox ego = OrientedBox::from_dimensions(Pose2D(0, 0, 0), 4, 2);
  VehicleState s;
  s.speed = 10;
  const std::vector<AgentTrack> wall{track("w", 30, 0, 0, 4, 2)};
  CHECK(std::abs(calculate_ttc(ego, s, wall, area, 5.0, 0.05) - 2.6) <= 0.05);
  CHECK(std::isinf(calculate_ttc(ego, s, {}, area, 5.0, 0.05)));
  const std::vector<AgentTrack> away{track("r", 30, 0, 0, 4, 2, {15, 0})};
  CHECK(std::isinf(calculate_ttc(ego, s, away, area, 5.0, 0.05)));
}

TEST_CASE("calculate_ttc matches closed form on head-on approaches")
{
  const Polygon area = Polygon::rectangle(-50, -20, 300, 20);
  const OrientedBox ego = OrientedBox::from_dimensions(Pose2D(0, 0, 0), 4, 2);
  Rng rng(53);
  for (int i = 0; i < 20; ++i) {
    VehicleState s;
    s.speed = rng.uniform(3, 25);
    const double va = rng.uniform(0, 20);
    const double length = rng.uniform(3, 6);
    const double gap = rng.uniform(5, 0.9 * 5.0 * (s.speed + va));
    const std::vector<AgentTrack> other{track("o", 2 + gap + length / 2, rng.uniform(-0.5, 0.5), std::numbers::pi, length, 2, {-va, 0})};
    const double expected = gap / (s.speed + va);
    CHECK(std::abs(calculate_ttc(ego, s, other, area, 5.0, 0.05) - expected) <= 0.05);
  }
}

TEST_CASE("evaluate on the static obstacle table")
{
  const auto empty = evaluate(straight_scene(10, {}), RuleConfig{});
  CHECK_FALSE(empty.brake);
  CHECK(empty.trigger_times.empty());
  CHECK(std::isinf(empty.min_ttc));

  // Bumper gap 26 m, TTC at step k is 2.6 - 0.2k.
  const auto near = evaluate(straight_scene(10, {track("obstacle", 30, 0, 0, 4, 2)}), RuleConfig{});
  CHECK(near.brake);
  REQUIRE_FALSE(near.trigger_times.empty());
  CHECK(near.trigger_times.front() == doctest::Approx(1.8));
  CHECK(near.nearest_agent == std::optional<std::string>("obstacle"));
  CHECK(*near.predicted_collision_time == doctest::Approx(2.6).epsilon(0.03));
  CHECK(classify_meta_action(near, RuleConfig{}) == MetaAction::EmergencyBraking);

  const auto far = evaluate(straight_scene(10, {track("obstacle", 64, 0, 0, 4, 2)}), RuleConfig{});
  CHECK_FALSE(far.brake);
}

TEST_CASE("evaluate rejects a short plan")
{
  RuleInputs in = straight_scene(10, {});
  in.plan.waypoints.pop_back();
  CHECK_THROWS_AS(evaluate(in, RuleConfig{}), InputValidationError);
}

TEST_CASE("plan spacing validation and position-only plans")
{
  const Trajectory plan = Trajectory::from_positions(std::vector<Vec2>{{0, 0}, {1, 1}, {2, 1}}, Pose2D(0, 0, 0.7), 0.2);
  CHECK(plan.waypoints[0].heading == doctest::Approx(0.7));
  CHECK(plan.waypoints[1].heading == doctest::Approx(std::numbers::pi / 4));
  CHECK(plan.waypoints[2].heading == doctest::Approx(0.0));
  CHECK_NOTHROW(plan.validate_spacing(Pose2D(), 40));
  const Trajectory jump = Trajectory::from_positions(std::vector<Vec2>{{0, 0}, {20, 0}}, Pose2D(), 0.2);
  CHECK_THROWS_AS(jump.validate_spacing(Pose2D(), 40), InputValidationError);
}

TEST_CASE("classify_meta_action thresholds")
{
  const RuleConfig cfg;
  TriggerResult r;
  CHECK(classify_meta_action(r, cfg) == MetaAction::Normal);
  r.min_ttc = 1.5;
  CHECK(classify_meta_action(r, cfg) == MetaAction::EarlyWarning);
  r.min_ttc = 0.8;
  CHECK(classify_meta_action(r, cfg) == MetaAction::EmergencyBraking);
  r.min_ttc = 3.0;
  r.first_collision_step = 4;
  CHECK(classify_meta_action(r, cfg) == MetaAction::EmergencyBraking);
}

TEST_CASE("trigger result invariants and monotonicity on random scenes")
{
  Rng rng(59);
  const RuleConfig cfg;
  for (int i = 0; i < 60; ++i) {
    RuleInputs in = random_scene(rng, 12, cfg);
    const TriggerResult r = evaluate(in, cfg);
    CHECK(r.brake == !r.trigger_times.empty());
    for (std::size_t k = 0; k < r.trigger_times.size(); ++k) {
      CHECK(r.trigger_times[k] > 0.0);
      CHECK(r.trigger_times[k] <= in.horizon_steps * in.dt + 1e-9);
      if (k > 0) {
        CHECK(r.trigger_times[k] > r.trigger_times[k - 1]);
      }
    }
    CHECK(evaluate(in, cfg) == r);

    // Raising the threshold keeps every trigger.
    RuleInputs looser = in;
    looser.t_threshold = 2.0;
    const TriggerResult rl = evaluate(looser, cfg);
    for (const double t : r.trigger_times) {
      CHECK(std::find(rl.trigger_times.begin(), rl.trigger_times.end(), t) != rl.trigger_times.end());
    }

    // Dropping an agent never adds a trigger.
    if (!in.others.empty()) {
      RuleInputs fewer = in;
      fewer.others.erase(fewer.others.begin() + static_cast<long>(rng.index(fewer.others.size())));
      for (const double t : evaluate(fewer, cfg).trigger_times) {
        CHECK(std::find(r.trigger_times.begin(), r.trigger_times.end(), t) != r.trigger_times.end());
      }
    }
  }
}

TEST_CASE("evaluate agrees with the brute-force rollout outside the guard band")
{
  Rng rng(61);
  const RuleConfig cfg;
  int brakes = 0;
  for (int i = 0; i < 40; ++i) {
    const RuleInputs in = random_scene(rng, 20, cfg);
    const TriggerResult r = evaluate(in, cfg);
    const auto ref = oracle::brute_force_rule(in, cfg.ttc_window, 0.01);
    brakes += ref.brake ? 1 : 0;
    if (std::abs(ref.min_ttc - in.t_threshold) < 2 * cfg.fine_dt) {
      continue;
    }
    CHECK(r.brake == ref.brake);
  }
  CHECK(brakes > 5);
  CHECK(brakes < 35);
}

TEST_CASE("parallel batch matches the serial reference")
{
  Rng rng(67);
  const RuleConfig cfg;
  std::vector<RuleInputs> scenes;
  for (int i = 0; i < 64; ++i) {
    scenes.push_back(random_scene(rng, 20, cfg));
  }
  CHECK(evaluate_batch_parallel(scenes, cfg, 4) == evaluate_batch_serial(scenes, cfg));
  scenes[10].plan.waypoints.clear();
  CHECK_THROWS_AS(evaluate_batch_parallel(scenes, cfg, 4), InputValidationError);
}
