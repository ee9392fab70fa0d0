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

#include "dual_aeb/dataset.hpp"
#include "dual_aeb/scenario.hpp"
#include "dual_aeb/simulator.hpp"

#include <doctest.h>

#include <algorithm>
#include <map>
#include <regex>
#include <set>

using namespace dual_aeb;

namespace
{

const std::vector<SimLog> & logs()
{
  static const std::vector<SimLog> cached = generated_logs(60, 11);
  return cached;
}

std::vector<TrainingSample> synthetic(int normal, int warning, int emergency)
{
  std::vector<TrainingSample> out;
  const std::pair<MetaAction, int> counts[] = {
    {MetaAction::Normal, normal}, {MetaAction::EarlyWarning, warning}, {MetaAction::EmergencyBraking, emergency}};
  int id = 0;
  for (const auto & [action, n] : counts) {
    for (int i = 0; i < n; ++i) {
      TrainingSample s;
      s.sample_id = "s" + std::to_string(id++);
      s.subtask = Subtask::DecisionMaking;
      s.meta_label = action;
      s.brake_label = action == MetaAction::EmergencyBraking ? 1 : 0;
      out.push_back(s);
    }
  }
  // Interleave classes so order preservation is meaningful.
  std::stable_sort(out.begin(), out.end(), [](const auto & a, const auto & b) {
    return std::stoi(a.sample_id.substr(1)) % 7 < std::stoi(b.sample_id.substr(1)) % 7;
  });
  return out;
}

std::map<MetaAction, int> class_counts(const std::vector<TrainingSample> & samples)
{
  std::map<MetaAction, int> out;
  for (const auto & s : samples) {
    ++out[s.meta_label];
  }
  return out;
}

bool ends_with(const std::string & s, std::string_view tail)
{
  return s.size() >= tail.size() && s.compare(s.size() - tail.size(), tail.size(), tail) == 0;
}

}  // namespace

TEST_CASE("sample invariants on generated logs")
{
  const auto samples = build_samples(logs(), default_templates(), 3);
  REQUIRE(!samples.empty());
  CHECK(samples.size() % 3 == 0);
  const std::regex distance(R"(is \d+\.\d\d meters away from the ego vehicle)");
  const std::regex box(R"(\[\(\d+, \d+\), \(\d+, \d+\)\])");
  std::set<std::string> ids;
  for (const auto & s : samples) {
    CHECK(ids.insert(s.sample_id).second);
    CHECK((s.brake_label == 1) == (s.meta_label == MetaAction::EmergencyBraking));
    CHECK(s.aeb_prompt.has_value() == (s.subtask == Subtask::DecisionMaking));
    CHECK_FALSE(s.prompt_corrupted);
    if (s.subtask == Subtask::DecisionMaking) {
      CHECK(s.question.find(*s.aeb_prompt) != std::string::npos);
      CHECK(s.answer.rfind(std::string(display_name(s.meta_label)) + ".", 0) == 0);
      CHECK(ends_with(s.answer, kAebToken) == (s.meta_label != MetaAction::Normal));
    }
    if (s.subtask == Subtask::CriticalObjects && s.answer.find("No critical objects") == std::string::npos &&
        s.answer.find("advertisement") == std::string::npos) {
      CHECK(std::regex_search(s.answer, distance));
      CHECK(std::regex_search(s.answer, box));
    }
  }
}

TEST_CASE("scenario answer on an urban clear-day road")
{
  const Scenario sc = load_scenario(std::string(DUAL_AEB_SCENARIO_DIR) + "/stationary_obstacle.json");
  const std::vector<SimLog> one{run(sc, options_for(sc, ArbiterMode::Off, 0))};
  const auto samples = build_samples(one, default_templates(), 1);
  const auto it = std::find_if(samples.begin(), samples.end(), [](const auto & s) {
    return s.subtask == Subtask::ScenarioDescription;
  });
  REQUIRE(it != samples.end());
  CHECK(
    it->answer ==
    "The ego vehicle navigates an arterial roadway under clear, sunny conditions in an urban environment during daylight.");
}

TEST_CASE("corruption rewrites exactly the requested share")
{
  const auto samples = build_samples(logs(), default_templates(), 3);
  const auto n_dec = decision_samples(samples).size();

  const auto none = corrupt_prompts(samples, 0.0, 7);
  CHECK(none == samples);

  const auto all = corrupt_prompts(samples, 1.0, 7);
  for (const auto & s : decision_samples(all)) {
    CHECK(s.prompt_corrupted);
    REQUIRE(s.prompt_action.has_value());
    CHECK(*s.prompt_action != s.meta_label);
  }

  const auto half = corrupt_prompts(samples, 0.5, 7);
  CHECK(half == corrupt_prompts(samples, 0.5, 7));
  REQUIRE(half.size() == samples.size());
  std::size_t corrupted = 0;
  for (std::size_t i = 0; i < half.size(); ++i) {
    const auto & before = samples[i];
    const auto & after = half[i];
    CHECK(after.answer == before.answer);
    CHECK(after.meta_label == before.meta_label);
    if (after.prompt_corrupted) {
      ++corrupted;
      CHECK(*after.prompt_action != after.meta_label);
      // The quick path may already have been wrong in the same way.
      CHECK((after.aeb_prompt != before.aeb_prompt) == (after.prompt_action != before.prompt_action));
      CHECK(after.question.find(*after.aeb_prompt) != std::string::npos);
    } else {
      CHECK(after == before);
    }
  }
  CHECK(corrupted == static_cast<std::size_t>(std::llround(0.5 * static_cast<double>(n_dec))));
}

TEST_CASE("balancing")
{
  const auto even = synthetic(100, 100, 100);
  CHECK(balance_classes(even, 0.02, 1) == even);

  const auto skewed = balance_classes(synthetic(300, 100, 100), 0.02, 1);
  for (const auto & [action, n] : class_counts(skewed)) {
    CHECK(n == 100);
  }
  // Input order survives.
  const auto source = synthetic(300, 100, 100);
  std::size_t cursor = 0;
  for (const auto & s : skewed) {
    while (cursor < source.size() && source[cursor].sample_id != s.sample_id) {
      ++cursor;
    }
    CHECK(cursor < source.size());
  }

  try {
    balance_classes(synthetic(0, 5, 5), 0.02, 1);
    FAIL("expected a BalanceError");
  } catch (const BalanceError & e) {
    CHECK(std::string(e.what()).find("Normal") != std::string::npos);
  }
}

TEST_CASE("nine-to-one stratified split")
{
  const auto samples = synthetic(50, 30, 20);
  const auto [train, test] = split(samples, 0.1, 4);
  CHECK(train.size() == 90);
  CHECK(test.size() == 10);
  std::set<std::string> seen;
  for (const auto & s : train) {
    seen.insert(s.sample_id);
  }
  for (const auto & s : test) {
    CHECK(seen.insert(s.sample_id).second);
  }
  CHECK(seen.size() == samples.size());

  const auto again = split(samples, 0.1, 4);
  CHECK(again.first == train);
  CHECK(again.second == test);

  const auto tr = class_counts(train);
  const auto te = class_counts(test);
  for (const auto & [action, n] : class_counts(samples)) {
    const double share_train = tr.at(action) / static_cast<double>(train.size());
    const double share_test = te.at(action) / static_cast<double>(test.size());
    CHECK(std::abs(share_train - share_test) < 0.02);
  }
  CHECK_THROWS(split(synthetic(3, 3, 3), 0.1, 4));
}

TEST_CASE("json round trip and pipeline determinism")
{
  const auto run_pipeline = [] {
    auto samples = build_samples(logs(), default_templates(), 9);
    samples = corrupt_prompts(decision_samples(samples), 0.5, 9);
    samples = balance_classes(samples, 0.02, 9);
    const auto [train, test] = split(samples, 0.1, 9);
    return samples_to_jsonl(train) + samples_to_jsonl(test);
  };
  CHECK(run_pipeline() == run_pipeline());

  for (const auto & s : corrupt_prompts(build_samples(logs(), default_templates(), 2), 0.5, 2)) {
    CHECK(sample_from_json(sample_to_json(s)) == s);
  }
}
