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

#ifndef DUAL_AEB__TEMPLATES_HPP_
#define DUAL_AEB__TEMPLATES_HPP_

#include "dual_aeb/messages.hpp"
#include "dual_aeb/meta_action.hpp"

#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

namespace dual_aeb
{

inline constexpr std::string_view kAebToken = "<AEB>";

/// Thrown when a template references a variable that was not supplied.
class TemplateError : public std::runtime_error
{
public:
  explicit TemplateError(std::string variable);
  const std::string & variable() const { return variable_; }

private:
  std::string variable_;
};

using TemplateVars = std::map<std::string, std::string, std::less<>>;

/// Replaces every {name} with vars[name]. "{{" and "}}" escape braces.
std::string render(std::string_view tmpl, const TemplateVars & vars);

enum class Subtask { ScenarioDescription, CriticalObjects, DecisionMaking };

std::string_view to_string(Subtask subtask);

struct TemplateSet
{
  std::vector<std::string> scenario_questions;
  std::vector<std::string> object_questions;
  std::vector<std::string> decision_questions;  // may reference {aeb_prompt}
  std::string scenario_answer;
  std::string object_answer;
  std::string object_answer_no_intention;

  const std::vector<std::string> & questions(Subtask subtask) const;
};

const TemplateSet & default_templates();

/// "a" or "an" for the word that follows.
std::string_view indefinite_article(std::string_view word);

std::string capitalize(std::string text);

/// Sentence describing the scene from its metadata (road, weather,
/// environment, time_of_day).
std::string scenario_sentence(const TemplateSet & templates, const std::map<std::string, std::string> & metadata);

/// "A black vehicle with a blinking left turn signal".
std::string object_phrase(std::string_view color, std::string_view category, std::string_view signal);

std::string format_image_box(const ImageBox & box);

std::string object_sentence(
  const TemplateSet & templates, std::string_view phrase, const ImageBox & box, double distance,
  std::string_view intention);

/// "<Display name>. <clause>" with the token appended for non-Normal actions.
std::string decision_sentence(MetaAction action, std::string_view clause);

bool has_aeb_token(std::string_view text);

}  // namespace dual_aeb

#endif  // DUAL_AEB__TEMPLATES_HPP_
