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

#ifndef DUAL_AEB__TESTS__CONFUSION_CASES_HPP_
#define DUAL_AEB__TESTS__CONFUSION_CASES_HPP_

#include "dual_aeb/metrics.hpp"

#include <array>

namespace confusion_cases
{

// Precision and recall worked out by hand, written as reduced fractions.
struct Case
{
  dual_aeb::ConfusionMatrix cm;
  double precision;
  double recall;
};

inline const std::array<Case, 10> kCases{{
  {{1, 0, 0, 0}, 1.0, 1.0},
  {{3, 1, 4, 2}, 3.0 / 4.0, 3.0 / 5.0},
  {{0, 0, 7, 0}, 1.0, 1.0},
  {{0, 2, 5, 0}, 0.0, 1.0},
  {{0, 0, 5, 3}, 1.0, 0.0},
  {{5, 5, 0, 5}, 1.0 / 2.0, 1.0 / 2.0},
  {{1, 2, 10, 0}, 1.0 / 3.0, 1.0},
  {{2, 0, 1, 5}, 1.0, 2.0 / 7.0},
  {{9, 1, 80, 1}, 9.0 / 10.0, 9.0 / 10.0},
  {{12, 4, 30, 3}, 3.0 / 4.0, 4.0 / 5.0},
}};

}  // namespace confusion_cases

#endif  // DUAL_AEB__TESTS__CONFUSION_CASES_HPP_
