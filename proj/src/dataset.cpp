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

#include "dual_aeb/generators.hpp"
#include "dual_aeb/metrics.hpp"
#include "dual_aeb/random.hpp"
#include "dual_aeb/slow_module.hpp"
#include "dual_aeb/world.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

namespace dual_aeb
{

using nlohmann::json;

namespace
{

std::string_view subtask_tag(Subtask s)
{
  switch (s) {
    case Subtask::ScenarioDescription:
      return "scn";
    case Subtask::CriticalObjects:
      return "obj";
    case Subtask::DecisionMaking:
      break;
  }
  return "dec";
}

std::string join_sentences(const std::vector<std::string> & parts)
{
  std::string out;
  for (const auto & p : parts) {
    if (!out.empty()) {
      out += ' ';
    }
    out += p;
  }
  return out;
}

const std::string & pick(const std::vector<std::string> & options, Rng & rng)
{
  if (options.empty()) {
    throw std::invalid_argument("template set has an empty sub-task");
  }
  return options[static_cast<std::size_t>(rng.index(options.size()))];
}

std::size_t class_index(MetaAction a)
{
  return static_cast<std::size_t>(a);
}

}  // namespace

std::vector<TrainingSample> build_samples(
  std::span<const SimLog> logs, const TemplateSet & templates, std::uint64_t seed, const ArbiterConfig & schedule)
{
  Rng rng(seed);
  std::vector<TrainingSample> out;
  for (std::size_t li = 0; li < logs.size(); ++li) {
    const SimLog & log = logs[li];
    const Scenario sc = parse_scenario(log.scenario);
    const RuleConfig rule = parse_rule_config(log.config.at("rule"), RuleConfig{});
    const auto ticks = consultation_ticks(static_cast<int>(log.ticks.size()), log.dt, schedule);
    for (const int tick : ticks) {
      const TickRecord & rec = log.ticks.at(static_cast<std::size_t>(tick));
      const EgoState ego = from_snapshot(sc, rec.ego);
      const SceneSummary scene = scene_summary(sc, ego, tick);
      const MetaAction label = rec.label;
      const std::string id_prefix = fmt::format("{:04}-{}-{}-t{:04}", li, log.scenario_name, to_string(log.mode), tick);

      TrainingSample base;
      base.scenario = log.scenario_name;
      base.tick = tick;
      base.meta_label = label;
      base.brake_label = label == MetaAction::EmergencyBraking ? 1 : 0;

      TrainingSample scn = base;
      scn.subtask = Subtask::ScenarioDescription;
      scn.sample_id = fmt::format("{}-{}", id_prefix, subtask_tag(scn.subtask));
      scn.question = pick(templates.scenario_questions, rng);
      scn.answer = scenario_sentence(templates, sc.metadata);

      TrainingSample obj = base;
      obj.subtask = Subtask::CriticalObjects;
      obj.sample_id = fmt::format("{}-{}", id_prefix, subtask_tag(obj.subtask));
      obj.question = pick(templates.object_questions, rng);
      const auto objects = object_sentences(sc, scene);
      obj.answer = objects.empty() ? "No critical objects are present in front of the ego vehicle." : join_sentences(objects);

      TrainingSample dec = base;
      dec.subtask = Subtask::DecisionMaking;
      dec.sample_id = fmt::format("{}-{}", id_prefix, subtask_tag(dec.subtask));
      const RuleInputs inputs = compose_rule_inputs(sc, ego, tick, rule);
      const TriggerResult trig = evaluate(inputs, rule);
      const MetaAction initial = classify_meta_action(trig, rule);
      const AebPrompt prompt = build_aeb_prompt(trig, initial, ego.vehicle, inputs.others, tick);
      dec.aeb_prompt = prompt.text;
      dec.prompt_action = initial;
      if (initial != MetaAction::Normal) {
        dec.prompt_time = prompt.predicted_collision_time;
        if (prompt.agent_id) {
          const auto it = std::find_if(inputs.others.begin(), inputs.others.end(), [&](const AgentTrack & a) {
            return a.id == *prompt.agent_id;
          });
          dec.prompt_subject = it != inputs.others.end() ? describe_agent(*it) : *prompt.agent_id;
        }
      }
      dec.question = render(pick(templates.decision_questions, rng), {{"aeb_prompt", prompt.text}});
      dec.answer = decision_sentence(label, decision_clause(sc, tick, label, forecast_hazard(sc, ego, tick)));

      out.push_back(std::move(scn));
      out.push_back(std::move(obj));
      out.push_back(std::move(dec));
    }
  }
  return out;
}

std::vector<TrainingSample> corrupt_prompts(std::vector<TrainingSample> samples, double fraction, std::uint64_t seed)
{
  if (!(fraction >= 0.0 && fraction <= 1.0)) {
    throw std::invalid_argument("corrupt_prompts: fraction must lie in [0, 1]");
  }
  std::vector<std::size_t> decisions;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (samples[i].subtask == Subtask::DecisionMaking) {
      decisions.push_back(i);
    }
  }
  const auto count = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(decisions.size())));
  Rng rng(seed);
  rng.shuffle(std::span<std::size_t>(decisions));
  decisions.resize(count);
  std::sort(decisions.begin(), decisions.end());

  for (const std::size_t i : decisions) {
    TrainingSample & s = samples[i];
    std::array<MetaAction, 2> others{};
    std::size_t k = 0;
    for (const MetaAction a : kAllMetaActions) {
      if (a != s.meta_label) {
        others.at(k++) = a;
      }
    }
    const MetaAction wrong = others.at(static_cast<std::size_t>(rng.index(2)));
    double when = 0.0;
    if (wrong == MetaAction::Normal) {
      s.prompt_time.reset();
    } else {
      // Keep the stated time when there is one; invent a plausible one otherwise.
      when = s.prompt_time ? *s.prompt_time : std::round(rng.uniform(0.5, 3.0) * 10.0) / 10.0;
      s.prompt_time = when;
    }
    const std::string subject = s.prompt_subject.empty() ? std::string("an obstacle ahead") : s.prompt_subject;
    const std::string text = aeb_prompt_text(wrong, subject, when);
    if (s.aeb_prompt) {
      if (const auto pos = s.question.find(*s.aeb_prompt); pos != std::string::npos) {
        s.question.replace(pos, s.aeb_prompt->size(), text);
      }
    }
    s.aeb_prompt = text;
    s.prompt_action = wrong;
    s.prompt_corrupted = true;
  }
  return samples;
}

std::vector<TrainingSample> balance_classes(std::vector<TrainingSample> samples, double tolerance, std::uint64_t seed)
{
  if (!(tolerance >= 0.0)) {
    throw std::invalid_argument("balance_classes: tolerance must be >= 0");
  }
  std::array<std::vector<std::size_t>, 3> by_class;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    by_class.at(class_index(samples[i].meta_label)).push_back(i);
  }
  for (const MetaAction a : kAllMetaActions) {
    if (by_class.at(class_index(a)).empty()) {
      throw BalanceError(fmt::format("balance: class {} has no samples", display_name(a)));
    }
  }
  std::size_t target = samples.size();
  for (const auto & c : by_class) {
    target = std::min(target, c.size());
  }
  Rng rng(seed);
  std::vector<bool> keep(samples.size(), false);
  for (auto & members : by_class) {
    rng.shuffle(std::span<std::size_t>(members));
    for (std::size_t j = 0; j < target; ++j) {
      keep[members[j]] = true;
    }
  }
  std::vector<TrainingSample> out;
  out.reserve(3 * target);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (keep[i]) {
      out.push_back(std::move(samples[i]));
    }
  }
  return out;
}

std::pair<std::vector<TrainingSample>, std::vector<TrainingSample>> split(
  const std::vector<TrainingSample> & samples, double test_fraction, std::uint64_t seed)
{
  if (samples.size() < 10) {
    throw std::invalid_argument("split: at least 10 samples required");
  }
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw std::invalid_argument("split: test fraction must lie in (0, 1)");
  }
  std::array<std::vector<std::size_t>, 3> by_class;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    by_class.at(class_index(samples[i].meta_label)).push_back(i);
  }
  const auto total_test = static_cast<std::size_t>(std::llround(test_fraction * static_cast<double>(samples.size())));

  // Largest remainder over classes.
  std::array<std::size_t, 3> quota{};
  std::array<double, 3> remainder{};
  std::size_t assigned = 0;
  for (std::size_t c = 0; c < 3; ++c) {
    const double exact = test_fraction * static_cast<double>(by_class[c].size());
    quota[c] = static_cast<std::size_t>(std::floor(exact));
    remainder[c] = exact - static_cast<double>(quota[c]);
    assigned += quota[c];
  }
  std::array<std::size_t, 3> order{0, 1, 2};
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
  for (std::size_t k = 0; assigned < total_test && k < 3; ++k) {
    if (quota[order[k]] < by_class[order[k]].size()) {
      ++quota[order[k]];
      ++assigned;
    }
  }

  Rng rng(seed);
  std::vector<bool> in_test(samples.size(), false);
  for (std::size_t c = 0; c < 3; ++c) {
    rng.shuffle(std::span<std::size_t>(by_class[c]));
    for (std::size_t j = 0; j < quota[c]; ++j) {
      in_test[by_class[c][j]] = true;
    }
  }
  std::pair<std::vector<TrainingSample>, std::vector<TrainingSample>> out;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    (in_test[i] ? out.second : out.first).push_back(samples[i]);
  }
  return out;
}

std::vector<SimLog> generated_logs(int count, std::uint64_t seed)
{
  std::vector<SimLog> logs;
  logs.reserve(static_cast<std::size_t>(std::max(count, 0)));
  for (int i = 0; i < count; ++i) {
    const std::uint64_t s = splitmix64(seed + static_cast<std::uint64_t>(i));
    const Scenario sc = parse_scenario(random_hazard_scenario(s));
    logs.push_back(run(sc, options_for(sc, ArbiterMode::Off, s)));
  }
  return logs;
}

std::vector<TrainingSample> decision_samples(const std::vector<TrainingSample> & samples)
{
  std::vector<TrainingSample> out;
  std::copy_if(samples.begin(), samples.end(), std::back_inserter(out), [](const TrainingSample & s) {
    return s.subtask == Subtask::DecisionMaking;
  });
  return out;
}

json sample_to_json(const TrainingSample & s)
{
  json j = {
    {"sample_id", s.sample_id},
    {"scenario", s.scenario},
    {"tick", s.tick},
    {"subtask", to_string(s.subtask)},
    {"question", s.question},
    {"answer", s.answer},
    {"aeb_prompt", s.aeb_prompt ? json(*s.aeb_prompt) : json(nullptr)},
    {"prompt_corrupted", s.prompt_corrupted},
    {"brake_label", s.brake_label},
    {"meta_label", to_string(s.meta_label)},
  };
  if (s.prompt_action) {
    j["prompt_action"] = to_string(*s.prompt_action);
  }
  if (s.prompt_time) {
    j["prompt_time"] = *s.prompt_time;
  }
  if (!s.prompt_subject.empty()) {
    j["prompt_subject"] = s.prompt_subject;
  }
  return j;
}

TrainingSample sample_from_json(const json & j)
{
  TrainingSample s;
  s.sample_id = j.at("sample_id").get<std::string>();
  s.scenario = j.at("scenario").get<std::string>();
  s.tick = j.at("tick").get<int>();
  const std::string sub = j.at("subtask").get<std::string>();
  if (sub == "scenario_description") {
    s.subtask = Subtask::ScenarioDescription;
  } else if (sub == "critical_objects") {
    s.subtask = Subtask::CriticalObjects;
  } else if (sub == "decision_making") {
    s.subtask = Subtask::DecisionMaking;
  } else {
    throw std::runtime_error(fmt::format("unknown subtask '{}'", sub));
  }
  s.question = j.at("question").get<std::string>();
  s.answer = j.at("answer").get<std::string>();
  if (!j.at("aeb_prompt").is_null()) {
    s.aeb_prompt = j.at("aeb_prompt").get<std::string>();
  }
  s.prompt_corrupted = j.at("prompt_corrupted").get<bool>();
  s.brake_label = j.at("brake_label").get<int>();
  const auto label = parse_meta_action(j.at("meta_label").get<std::string>());
  if (!label) {
    throw std::runtime_error("unknown meta_label");
  }
  s.meta_label = *label;
  if (j.contains("prompt_action")) {
    s.prompt_action = parse_meta_action(j.at("prompt_action").get<std::string>());
  }
  if (j.contains("prompt_time")) {
    s.prompt_time = j.at("prompt_time").get<double>();
  }
  s.prompt_subject = j.value("prompt_subject", "");
  return s;
}

std::string samples_to_jsonl(std::span<const TrainingSample> samples)
{
  std::string out;
  for (const auto & s : samples) {
    out += sample_to_json(s).dump();
    out += '\n';
  }
  return out;
}

json manifest(std::span<const TrainingSample> train, std::span<const TrainingSample> test, std::uint64_t seed)
{
  auto count = [](std::span<const TrainingSample> set) {
    json classes = {{"normal", 0}, {"early_warning", 0}, {"emergency_braking", 0}};
    json subtasks = {{"scenario_description", 0}, {"critical_objects", 0}, {"decision_making", 0}};
    int corrupted = 0;
    for (const auto & s : set) {
      classes[std::string(to_string(s.meta_label))] = classes[std::string(to_string(s.meta_label))].get<int>() + 1;
      subtasks[std::string(to_string(s.subtask))] = subtasks[std::string(to_string(s.subtask))].get<int>() + 1;
      corrupted += s.prompt_corrupted ? 1 : 0;
    }
    return json{{"samples", set.size()}, {"classes", classes}, {"subtasks", subtasks}, {"corrupted_prompts", corrupted}};
  };
  return {{"seed", seed}, {"train", count(train)}, {"test", count(test)}};
}

}  // namespace dual_aeb
