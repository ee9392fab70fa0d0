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

#include "dual_aeb/meta_action.hpp"

namespace dual_aeb
{

std::string_view to_string(MetaAction action)
{
  switch (action) {
    case MetaAction::Normal:
      return "normal";
    case MetaAction::EarlyWarning:
      return "early_warning";
    case MetaAction::EmergencyBraking:
      return "emergency_braking";
  }
  return "normal";
}

std::string_view display_name(MetaAction action)
{
  switch (action) {
    case MetaAction::Normal:
      return "Normal";
    case MetaAction::EarlyWarning:
      return "Early Warning";
    case MetaAction::EmergencyBraking:
      return "Emergency Braking";
  }
  return "Normal";
}

std::optional<MetaAction> parse_meta_action(std::string_view text)
{
  for (const MetaAction a : kAllMetaActions) {
    if (text == to_string(a)) {
      return a;
    }
  }
  return std::nullopt;
}

}  // namespace dual_aeb
