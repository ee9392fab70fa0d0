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
#include "dual_aeb/kinematics.hpp"
#include "support/oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace dual_aeb;

namespace
{

VehicleState make_state(double x, double y, double heading, double speed, double lf = kDefaultAxleToCg, double lr = kDefaultAxleToCg)
{
  VehicleState s;
  s.pose = Pose2D(x, y, heading);
  s.speed = speed;
  s.lf = lf;
  s.lr = lr;
  return s;
}

// Piecewise-constant controls, each held for `hold` seconds, split into
// `substeps` Euler steps.
VehicleState euler_endpoint(VehicleState s, const std::vector<Control> & controls, double hold, int substeps)
{
  for (const Control & u : controls) {
    s = integrate(s, u, hold, substeps);
  }
  return s;
}

oracle::BikeState rk4_endpoint(const VehicleState & s0, const std::vector<Control> & controls, double hold)
{
  oracle::BikeState s{s0.pose.x, s0.pose.y, s0.pose.heading, s0.speed};
  for (const Control & u : controls) {
    s = oracle::rk4_bicycle(s, u.accel, u.steer, s0.lf, s0.lr, hold, 1e-4);
  }
  return s;
}

double gap(const VehicleState & a, const oracle::BikeState & b)
{
  return std::hypot(a.pose.x - b.x, a.pose.y - b.y);
}

}  // namespace

TEST_CASE("stationary vehicle stays put")
{
  const VehicleState s = make_state(1, 2, 0.3, 0.0);
  for (const double steer : {-0.6, 0.0, 0.4}) {
    const VehicleState n = bicycle_step(s, {0.0, steer}, 0.2);
    CHECK(n.pose == s.pose);
    CHECK(n.speed == 0.0);
  }
  VehicleState many = s;
  for (int i = 0; i < 500; ++i) {
    many = bicycle_step(many, {0.0, 0.5}, 0.2);
  }
  CHECK(many.pose == s.pose);
}

TEST_CASE("straight line step")
{
  const VehicleState n = bicycle_step(make_state(0, 0, 0, 10), {0, 0}, 0.2);
  CHECK(n.pose.x == doctest::Approx(2.0));
  CHECK(n.pose.y == 0.0);
  CHECK(n.pose.heading == 0.0);
}

TEST_CASE("speed never goes negative")
{
  Rng rng(41);
  for (int i = 0; i < 1000; ++i) {
    const VehicleState n = bicycle_step(make_state(0, 0, 0, rng.uniform(0, 3)), {rng.uniform(-8, 3), rng.uniform(-0.6, 0.6)}, rng.uniform(0.01, 1.0));
    CHECK(n.speed >= 0.0);
  }
}

TEST_CASE("clamp_control honours the limits")
{
  const Control c = clamp_control({-20.0, 1.5});
  CHECK(c.accel == -8.0);
  CHECK(c.steer == 0.6);
  const Control d = clamp_control({5.0, -1.5});
  CHECK(d.accel == 3.0);
  CHECK(d.steer == -0.6);
}

TEST_CASE("rollout is a fold of bicycle_step")
{
  CHECK_THROWS_AS(rollout(make_state(0, 0, 0, 1), {}, 0.2), std::invalid_argument);
  const auto one = rollout(make_state(3, 4, 0.1, 0.0), std::vector<Control>{{0.0, 0.0}}, 0.2);
  REQUIRE(one.size() == 1);
  CHECK(one[0].pose == Pose2D(3, 4, 0.1));

  const std::vector<Control> zeros(15, Control{});
  const auto straight = rollout(make_state(0, 0, 0.5, 7.0), zeros, 0.2);
  CHECK(std::hypot(straight.back().pose.x, straight.back().pose.y) == doctest::Approx(15 * 7.0 * 0.2));

  Rng rng(43);
  const auto controls = random_controls(rng, 40);
  const VehicleState s0 = make_state(1, -1, 0.2, 9.0);
  const auto states = rollout(s0, controls, 0.2);
  REQUIRE(states.size() == controls.size());
  VehicleState s = s0;
  for (std::size_t k = 0; k < controls.size(); ++k) {
    s = bicycle_step(s, controls[k], 0.2);
    CHECK(states[k].pose == s.pose);
    CHECK(states[k].speed == s.speed);
  }
}

TEST_CASE("constant steer arc matches RK4 when substepped")
{
  const VehicleState s0 = make_state(0, 0, 0, 5.0, 1.5, 1.5);
  const std::vector<Control> controls(50, Control{0.0, 0.2});
  const auto ref = rk4_endpoint(s0, controls, 0.2);
  CHECK(gap(euler_endpoint(s0, controls, 0.2, 100), ref) < 0.05);
  // A single Euler step per 0.2 s drifts well outside that tolerance.
  CHECK(gap(euler_endpoint(s0, controls, 0.2, 1), ref) > 0.05);
}

TEST_CASE("halving the step roughly halves the error")
{
  // Single sequences can see partial cancellation, so the ratio is taken on
  // the summed error over the batch.
  Rng rng(47);
  double e1 = 0;
  double e2 = 0;
  double e4 = 0;
  for (int i = 0; i < 100; ++i) {
    const VehicleState s0 = make_state(0, 0, rng.uniform(-3, 3), rng.uniform(8, 15));
    const auto controls = random_controls(rng, 50);
    const auto ref = rk4_endpoint(s0, controls, 0.2);
    e1 += gap(euler_endpoint(s0, controls, 0.2, 1), ref);
    e2 += gap(euler_endpoint(s0, controls, 0.2, 2), ref);
    e4 += gap(euler_endpoint(s0, controls, 0.2, 4), ref);
  }
  CHECK(e1 / e2 >= 1.5);
  CHECK(e1 / e2 <= 2.5);
  CHECK(e2 / e4 >= 1.5);
  CHECK(e2 / e4 <= 2.5);
}
