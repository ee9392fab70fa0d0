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

#include "dual_aeb/templates.hpp"

#include <fmt/format.h>

#include <cctype>

namespace dual_aeb
{

TemplateError::TemplateError(std::string variable)
: std::runtime_error("missing template variable: " + variable), variable_(std::move(variable))
{
}

std::string render(std::string_view tmpl, const TemplateVars & vars)
{
  std::string out;
  out.reserve(tmpl.size() + 32);
  for (std::size_t i = 0; i < tmpl.size(); ++i) {
    const char c = tmpl[i];
    if (c == '{' && i + 1 < tmpl.size() && tmpl[i + 1] == '{') {
      out.push_back('{');
      ++i;
    } else if (c == '}' && i + 1 < tmpl.size() && tmpl[i + 1] == '}') {
      out.push_back('}');
      ++i;
    } else if (c == '{') {
      const auto close = tmpl.find('}', i);
      if (close == std::string_view::npos) {
        throw std::invalid_argument(fmt::format("unterminated placeholder in template: {}", tmpl));
      }
      const std::string_view name = tmpl.substr(i + 1, close - i - 1);
      const auto it = vars.find(name);
      if (it == vars.end()) {
        throw TemplateError(std::string(name));
      }
      out += it->second;
      i = close;
    } else {
      out.push_back(c);
    }
  }
  return out;
}

std::string_view to_string(Subtask subtask)
{
  switch (subtask) {
    case Subtask::ScenarioDescription:
      return "scenario_description";
    case Subtask::CriticalObjects:
      return "critical_objects";
    case Subtask::DecisionMaking:
      return "decision_making";
  }
  return "unknown";
}

const std::vector<std::string> & TemplateSet::questions(Subtask subtask) const
{
  switch (subtask) {
    case Subtask::ScenarioDescription:
      return scenario_questions;
    case Subtask::CriticalObjects:
      return object_questions;
    case Subtask::DecisionMaking:
      break;
  }
  return decision_questions;
}

const TemplateSet & default_templates()
{
  static const TemplateSet set{
    {
      "Describe the driving scenario in front of the ego vehicle.",
      "What kind of road, weather and lighting is the ego vehicle driving in?",
      "Summarize the current environment around the ego vehicle.",
      "Give a short description of the scene: road type, weather, and time of day.",
      "In one sentence, what are the driving conditions right now?",
      "How would you characterize the setting the ego vehicle is operating in?",
    },
    {
      "Which objects in view are critical for the ego vehicle, and where are they?",
      "List the road users that could affect the ego vehicle, with their image boxes and distances.",
      "Identify the critical objects ahead, including their 2D bounding boxes and distance to the ego vehicle.",
      "What objects should the ego vehicle pay attention to, and how far away are they?",
      "Point out the relevant agents in the image with their locations and likely intentions.",
    },
    {
      "{aeb_prompt} Should the ego vehicle brake? Answer with Normal, Early Warning or Emergency Braking.",
      "{aeb_prompt} Evaluate this initial decision and give the final action.",
      "The rule-based module reports: {aeb_prompt} Confirm or adjust the decision.",
      "{aeb_prompt} Given the scene, what is the correct braking decision?",
      "Consider the initial assessment: {aeb_prompt} Decide between Normal, Early Warning and Emergency Braking.",
    },
    "The ego vehicle navigates {road_article} {road} under {weather} conditions in {environment_article} "
    "{environment} environment during {time_of_day}.",
    "{object}, located at {box}, is {distance} meters away from the ego vehicle, suggesting it is {intention}.",
    "{object}, located at {box}, is {distance} meters away from the ego vehicle.",
  };
  return set;
}

std::string_view indefinite_article(std::string_view word)
{
  if (word.empty()) {
    return "a";
  }
  const char c = static_cast<char>(std::tolower(static_cast<unsigned char>(word.front())));
  return (c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u') ? "an" : "a";
}

std::string capitalize(std::string text)
{
  if (!text.empty()) {
    text.front() = static_cast<char>(std::toupper(static_cast<unsigned char>(text.front())));
  }
  return text;
}

std::string scenario_sentence(const TemplateSet & templates, const std::map<std::string, std::string> & metadata)
{
  TemplateVars vars(metadata.begin(), metadata.end());
  if (const auto it = vars.find("road"); it != vars.end()) {
    vars["road_article"] = std::string(indefinite_article(it->second));
  }
  if (const auto it = vars.find("environment"); it != vars.end()) {
    vars["environment_article"] = std::string(indefinite_article(it->second));
  }
  return render(templates.scenario_answer, vars);
}

std::string object_phrase(std::string_view color, std::string_view category, std::string_view signal)
{
  std::string noun = color.empty() ? std::string(category) : fmt::format("{} {}", color, category);
  std::string phrase = fmt::format("{} {}", indefinite_article(noun), noun);
  if (signal == "left_turn") {
    phrase += " with a blinking left turn signal";
  } else if (signal == "right_turn") {
    phrase += " with a blinking right turn signal";
  } else if (signal == "brake") {
    phrase += " with its brake lights on";
  } else if (signal == "hazard") {
    phrase += " with its hazard lights flashing";
  }
  return capitalize(std::move(phrase));
}

std::string format_image_box(const ImageBox & box)
{
  return fmt::format("[({:.0f}, {:.0f}), ({:.0f}, {:.0f})]", box.x_min, box.y_min, box.x_max, box.y_max);
}

std::string object_sentence(
  const TemplateSet & templates, std::string_view phrase, const ImageBox & box, double distance,
  std::string_view intention)
{
  TemplateVars vars{
    {"object", std::string(phrase)},
    {"box", format_image_box(box)},
    {"distance", fmt::format("{:.2f}", distance)},
  };
  if (intention.empty()) {
    return render(templates.object_answer_no_intention, vars);
  }
  vars["intention"] = std::string(intention);
  return render(templates.object_answer, vars);
}

std::string decision_sentence(MetaAction action, std::string_view clause)
{
  std::string text = fmt::format("{}. {}", display_name(action), clause);
  if (action != MetaAction::Normal) {
    text += " ";
    text += kAebToken;
  }
  return text;
}

bool has_aeb_token(std::string_view text)
{
  return text.find(kAebToken) != std::string_view::npos;
}

}  // namespace dual_aeb
