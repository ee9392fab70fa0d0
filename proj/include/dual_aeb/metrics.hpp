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

#ifndef DUAL_AEB__METRICS_HPP_
#define DUAL_AEB__METRICS_HPP_

#include "dual_aeb/arbiter.hpp"
#include "dual_aeb/meta_action.hpp"
#include "dual_aeb/simulator.hpp"

#include <span>
#include <string>
#include <vector>

namespace dual_aeb
{

inline constexpr double kCollisionPenalty = 0.6;

/// Emergency Braking is the positive class; Early Warning and Normal are
/// both negative.
struct ConfusionMatrix
{
  long tp{0};
  long fp{0};
  long tn{0};
  long fn{0};

  long total() const { return tp + fp + tn + fn; }
  ConfusionMatrix & operator+=(const ConfusionMatrix & o);
  friend bool operator==(const ConfusionMatrix &, const ConfusionMatrix &) = default;
};

ConfusionMatrix confusion(std::span<const MetaAction> pred, std::span<const MetaAction> truth);

struct PrecisionRecall
{
  double precision{1.0};
  double recall{1.0};
};

/// Exact ratios; an empty denominator counts as 1.0.
PrecisionRecall precision_recall(const ConfusionMatrix & cm);

struct DrivingMetrics
{
  double driving_score{0.0};  // [0, 100]
  bool success{false};
  int collisions{0};
  double route_completion{0.0};

  friend bool operator==(const DrivingMetrics &, const DrivingMetrics &) = default;
};

double driving_score(double route_completion, int collisions);

/// Distinct contact onsets: an agent overlapping across consecutive ticks
/// counts once.
int count_collision_events(std::span<const TickRecord> ticks);

DrivingMetrics driving_metrics(const SimLog & log);

enum class Granularity { Decision, Tick };

/// Ticks at which the arbiter consults the slow path on its nominal grid.
std::vector<int> consultation_ticks(int tick_count, double dt, const ArbiterConfig & cfg);

/// Commanded action vs required action. Decision granularity samples the
/// consultation grid; tick granularity uses every tick.
ConfusionMatrix log_confusion(const SimLog & log, Granularity granularity, const ArbiterConfig & cfg);

struct SuiteMetrics
{
  int runs{0};
  double driving_score{0.0};
  double success_rate{0.0};  // percent
  double collision_rate{0.0};
};

SuiteMetrics aggregate(std::span<const DrivingMetrics> results);

}  // namespace dual_aeb

#endif  // DUAL_AEB__METRICS_HPP_
