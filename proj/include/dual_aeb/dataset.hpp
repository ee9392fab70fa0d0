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

#ifndef DUAL_AEB__DATASET_HPP_
#define DUAL_AEB__DATASET_HPP_

#include "dual_aeb/arbiter.hpp"
#include "dual_aeb/simulator.hpp"
#include "dual_aeb/templates.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dual_aeb
{

struct TrainingSample
{
  std::string sample_id;
  std::string scenario;
  int tick{0};
  Subtask subtask{Subtask::ScenarioDescription};
  std::string question;
  std::string answer;
  std::optional<std::string> aeb_prompt;  // decision samples only
  bool prompt_corrupted{false};
  int brake_label{0};  // 1 iff meta_label is Emergency Braking
  MetaAction meta_label{MetaAction::Normal};

  // What the prompt states, kept so it can be rewritten.
  std::optional<MetaAction> prompt_action;
  std::optional<double> prompt_time;
  std::string prompt_subject;

  friend bool operator==(const TrainingSample &, const TrainingSample &) = default;
};

class BalanceError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// One sample per sub-task for every consultation-grid tick of every log.
std::vector<TrainingSample> build_samples(
  std::span<const SimLog> logs, const TemplateSet & templates, std::uint64_t seed,
  const ArbiterConfig & schedule = {});

/// Rewrites exactly round(fraction * N_decision) decision prompts to an
/// action different from the true label. Answers stay untouched.
std::vector<TrainingSample> corrupt_prompts(std::vector<TrainingSample> samples, double fraction, std::uint64_t seed);

/// Downsamples every class to the smallest class count, keeping input order.
std::vector<TrainingSample> balance_classes(
  std::vector<TrainingSample> samples, double tolerance, std::uint64_t seed);

/// Stratified by meta label; the test share is round(N * test_fraction)
/// spread over classes by largest remainder. Both halves keep input order.
std::pair<std::vector<TrainingSample>, std::vector<TrainingSample>> split(
  const std::vector<TrainingSample> & samples, double test_fraction, std::uint64_t seed);

/// Off-mode runs of `count` generated hazard scenarios seeded from `seed`.
std::vector<SimLog> generated_logs(int count, std::uint64_t seed);

std::vector<TrainingSample> decision_samples(const std::vector<TrainingSample> & samples);

nlohmann::json sample_to_json(const TrainingSample & s);
TrainingSample sample_from_json(const nlohmann::json & j);
std::string samples_to_jsonl(std::span<const TrainingSample> samples);

/// Counts per class, sub-task and corruption flag.
nlohmann::json manifest(std::span<const TrainingSample> train, std::span<const TrainingSample> test, std::uint64_t seed);

}  // namespace dual_aeb

#endif  // DUAL_AEB__DATASET_HPP_
