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

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace dual_aeb
{

ConfusionMatrix & ConfusionMatrix::operator+=(const ConfusionMatrix & o)
{
  tp += o.tp;
  fp += o.fp;
  tn += o.tn;
  fn += o.fn;
  return *this;
}

ConfusionMatrix confusion(std::span<const MetaAction> pred, std::span<const MetaAction> truth)
{
  if (pred.size() != truth.size()) {
    throw std::invalid_argument(
      fmt::format("confusion: {} predictions but {} labels", pred.size(), truth.size()));
  }
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const bool p = pred[i] == MetaAction::EmergencyBraking;
    const bool t = truth[i] == MetaAction::EmergencyBraking;
    if (p && t) {
      ++cm.tp;
    } else if (p) {
      ++cm.fp;
    } else if (t) {
      ++cm.fn;
    } else {
      ++cm.tn;
    }
  }
  return cm;
}

PrecisionRecall precision_recall(const ConfusionMatrix & cm)
{
  PrecisionRecall pr;
  const long predicted = cm.tp + cm.fp;
  const long actual = cm.tp + cm.fn;
  pr.precision = predicted == 0 ? 1.0 : static_cast<double>(cm.tp) / static_cast<double>(predicted);
  pr.recall = actual == 0 ? 1.0 : static_cast<double>(cm.tp) / static_cast<double>(actual);
  return pr;
}

double driving_score(double route_completion, int collisions)
{
  return 100.0 * std::clamp(route_completion, 0.0, 1.0) * std::pow(kCollisionPenalty, collisions);
}

int count_collision_events(std::span<const TickRecord> ticks)
{
  int events = 0;
  std::set<std::string> previous;
  for (const auto & rec : ticks) {
    std::set<std::string> current(rec.collisions.begin(), rec.collisions.end());
    for (const auto & id : current) {
      if (!previous.contains(id)) {
        ++events;
      }
    }
    previous = std::move(current);
  }
  return events;
}

DrivingMetrics driving_metrics(const SimLog & log)
{
  DrivingMetrics m;
  m.collisions = count_collision_events(log.ticks);
  m.route_completion = log.summary.goal_reached ? 1.0 : log.summary.route_completion;
  m.driving_score = driving_score(m.route_completion, m.collisions);
  m.success = log.summary.goal_reached && m.collisions == 0;
  return m;
}

std::vector<int> consultation_ticks(int tick_count, double dt, const ArbiterConfig & cfg)
{
  std::vector<int> ticks;
  std::optional<double> last_due;
  for (int i = 0; i < tick_count; ++i) {
    const double now = i * dt;
    if (!should_invoke_slow(now, last_due, cfg)) {
      continue;
    }
    if (!last_due) {
      last_due = now;
    } else {
      *last_due += std::floor((now - *last_due + 1e-9) / cfg.trigger_interval) * cfg.trigger_interval;
    }
    ticks.push_back(i);
  }
  return ticks;
}

ConfusionMatrix log_confusion(const SimLog & log, Granularity granularity, const ArbiterConfig & cfg)
{
  std::vector<MetaAction> pred;
  std::vector<MetaAction> truth;
  if (granularity == Granularity::Tick) {
    for (const auto & rec : log.ticks) {
      pred.push_back(rec.command.action);
      truth.push_back(rec.label);
    }
  } else {
    for (const int i : consultation_ticks(static_cast<int>(log.ticks.size()), log.dt, cfg)) {
      pred.push_back(log.ticks[static_cast<std::size_t>(i)].command.action);
      truth.push_back(log.ticks[static_cast<std::size_t>(i)].label);
    }
  }
  return confusion(pred, truth);
}

SuiteMetrics aggregate(std::span<const DrivingMetrics> results)
{
  if (results.empty()) {
    throw std::invalid_argument("aggregate: at least one result required");
  }
  SuiteMetrics s;
  s.runs = static_cast<int>(results.size());
  double score = 0.0;
  int successes = 0;
  int collisions = 0;
  for (const auto & r : results) {
    score += r.driving_score;
    successes += r.success ? 1 : 0;
    collisions += r.collisions;
  }
  const double n = static_cast<double>(results.size());
  s.driving_score = score / n;
  s.success_rate = 100.0 * successes / n;
  s.collision_rate = collisions / n;
  return s;
}

}  // namespace dual_aeb
