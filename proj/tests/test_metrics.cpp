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

#include "dual_aeb/metrics.hpp"
#include "dual_aeb/random.hpp"

#include "support/confusion_cases.hpp"

#include <doctest.h>

#include <vector>

using namespace dual_aeb;

namespace
{

constexpr auto N = MetaAction::Normal;
constexpr auto W = MetaAction::EarlyWarning;
constexpr auto E = MetaAction::EmergencyBraking;

ConfusionMatrix cm_of(std::vector<MetaAction> pred, std::vector<MetaAction> truth)
{
  return confusion(pred, truth);
}

DrivingMetrics one(double score, bool success, int collisions)
{
  return {score, success, collisions, 1.0};
}

}  // namespace

TEST_CASE("confusion counts with Emergency Braking as the positive class")
{
  CHECK(cm_of({E, E, N}, {E, E, N}) == ConfusionMatrix{2, 0, 1, 0});
  CHECK(cm_of({E}, {N}) == ConfusionMatrix{0, 1, 0, 0});
  CHECK(cm_of({W}, {E}) == ConfusionMatrix{0, 0, 0, 1});
  CHECK(cm_of({W, N}, {N, W}) == ConfusionMatrix{0, 0, 2, 0});
  CHECK_THROWS_AS(cm_of({E}, {E, N}), std::invalid_argument);
}

TEST_CASE("precision and recall match hand arithmetic exactly")
{
  for (const auto & c : confusion_cases::kCases) {
    const PrecisionRecall pr = precision_recall(c.cm);
    CHECK(pr.precision == c.precision);
    CHECK(pr.recall == c.recall);
  }
}

TEST_CASE("driving score examples")
{
  CHECK(driving_score(1.0, 0) == 100.0);
  CHECK(driving_score(1.0, 1) == doctest::Approx(60.0).epsilon(1e-12));
  CHECK(driving_score(0.4, 0) == doctest::Approx(40.0).epsilon(1e-12));
  CHECK(driving_score(0.0, 0) == 0.0);
  CHECK(driving_score(0.0, 3) == 0.0);
}

TEST_CASE("driving score is monotone in collisions and completion")
{
  Rng rng(5);
  for (int i = 0; i < 1000; ++i) {
    const double rc = rng.unit();
    const int c = static_cast<int>(rng.index(6));
    const double s = driving_score(rc, c);
    CHECK(s >= 0.0);
    CHECK(s <= 100.0);
    CHECK(driving_score(rc, c + 1) <= s);
    CHECK(driving_score(std::min(1.0, rc + rng.unit() * 0.1), c) >= s);
  }
}

TEST_CASE("continuous overlap counts as one collision")
{
  std::vector<TickRecord> ticks(30);
  for (int i = 5; i < 15; ++i) {
    ticks[static_cast<std::size_t>(i)].collisions = {"truck"};
  }
  CHECK(count_collision_events(ticks) == 1);
  // A second agent and a renewed contact each count.
  ticks[10].collisions.push_back("walker");
  ticks[20].collisions = {"truck"};
  CHECK(count_collision_events(ticks) == 3);
}

TEST_CASE("driving metrics from a log")
{
  SimLog log;
  log.ticks.resize(10);
  log.summary.route_completion = 0.4;
  DrivingMetrics m = driving_metrics(log);
  CHECK(m.driving_score == doctest::Approx(40.0));
  CHECK_FALSE(m.success);

  log.summary.goal_reached = true;
  m = driving_metrics(log);
  CHECK(m.route_completion == 1.0);
  CHECK(m.driving_score == 100.0);
  CHECK(m.success);

  log.ticks[3].collisions = {"a"};
  m = driving_metrics(log);
  CHECK(m.collisions == 1);
  CHECK(m.driving_score == doctest::Approx(60.0));
  CHECK_FALSE(m.success);
}

TEST_CASE("suite aggregation")
{
  const std::vector<DrivingMetrics> two{one(100, true, 0), one(60, false, 1)};
  const SuiteMetrics s = aggregate(two);
  CHECK(s.driving_score == 80.0);
  CHECK(s.success_rate == 50.0);
  CHECK(s.collision_rate == 0.5);

  const std::vector<DrivingMetrics> clean{one(100, true, 0)};
  CHECK(aggregate(clean).success_rate == 100.0);
  CHECK(aggregate(clean).collision_rate == 0.0);

  const std::vector<DrivingMetrics> crashes(10, one(60, false, 1));
  CHECK(aggregate(crashes).collision_rate == 1.0);
  CHECK_THROWS_AS(aggregate(std::span<const DrivingMetrics>{}), std::invalid_argument);
}

TEST_CASE("consultation grid and decision-level confusion")
{
  const ArbiterConfig cfg;
  CHECK(consultation_ticks(51, 0.2, cfg) == std::vector<int>{0, 13, 25, 38, 50});
  SimLog log;
  log.dt = 0.2;
  log.ticks.resize(51);
  for (auto & t : log.ticks) {
    t.label = N;
  }
  log.ticks[13].label = E;
  log.ticks[13].command.action = E;
  log.ticks[14].command.action = E;  // off-grid, ignored at decision level
  CHECK(log_confusion(log, Granularity::Decision, cfg) == ConfusionMatrix{1, 0, 4, 0});
  CHECK(log_confusion(log, Granularity::Tick, cfg) == ConfusionMatrix{1, 1, 49, 0});
}
