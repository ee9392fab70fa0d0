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

#ifndef DUAL_AEB__BATCH_HPP_
#define DUAL_AEB__BATCH_HPP_

#include "dual_aeb/metrics.hpp"
#include "dual_aeb/scenario.hpp"
#include "dual_aeb/simulator.hpp"

#include <memory>
#include <span>
#include <string>
#include <vector>

namespace dual_aeb
{

struct BatchJob
{
  std::size_t scenario{0};  // index into the suite
  RunOptions options;
};

struct BatchResult
{
  std::string scenario;
  ArbiterMode mode{ArbiterMode::Dual};
  std::uint64_t seed{0};
  double trigger_interval{0.0};
  DrivingMetrics driving;
  ConfusionMatrix decisions;
  ConfusionMatrix ticks;
  std::string log;    // JSONL, only when requested
  std::string error;  // non-empty if the run failed

  friend bool operator==(const BatchResult &, const BatchResult &) = default;
};

/// Read-only data shared by all runs of a suite.
struct Suite
{
  std::vector<Scenario> scenarios;
  std::vector<std::shared_ptr<const OracleKnowledge>> oracles;

  explicit Suite(std::vector<Scenario> scenarios);
};

BatchResult run_job(const Suite & suite, const BatchJob & job, bool keep_log);

std::vector<BatchResult> run_batch_serial(const Suite & suite, std::span<const BatchJob> jobs, bool keep_logs = false);

/// OpenMP over jobs; each run stays sequential. threads <= 0 uses the
/// OpenMP default. Results are identical to the serial version.
std::vector<BatchResult> run_batch_parallel(
  const Suite & suite, std::span<const BatchJob> jobs, int threads = 0, bool keep_logs = false);

}  // namespace dual_aeb

#endif  // DUAL_AEB__BATCH_HPP_
