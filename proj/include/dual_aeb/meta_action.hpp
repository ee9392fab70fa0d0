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

#ifndef DUAL_AEB__META_ACTION_HPP_
#define DUAL_AEB__META_ACTION_HPP_

#include <algorithm>
#include <array>
#include <optional>
#include <string_view>

namespace dual_aeb
{

/// Braking meta-actions ordered by severity.
enum class MetaAction : int { Normal = 0, EarlyWarning = 1, EmergencyBraking = 2 };

inline constexpr std::array<MetaAction, 3> kAllMetaActions = {
  MetaAction::Normal, MetaAction::EarlyWarning, MetaAction::EmergencyBraking};

inline MetaAction max_action(MetaAction a, MetaAction b) { return std::max(a, b); }

/// Wire/log identifier: "normal", "early_warning", "emergency_braking".
std::string_view to_string(MetaAction action);

/// Sentence form used in generated text: "Normal", "Early Warning", "Emergency Braking".
std::string_view display_name(MetaAction action);

std::optional<MetaAction> parse_meta_action(std::string_view text);

}  // namespace dual_aeb

#endif  // DUAL_AEB__META_ACTION_HPP_
