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

#ifndef DUAL_AEB__RANDOM_HPP_
#define DUAL_AEB__RANDOM_HPP_

#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace dual_aeb
{

std::uint64_t splitmix64(std::uint64_t x);

/// Seeded generator with distribution code written out here, because the
/// standard distributions are not required to produce the same sequence
/// across library implementations.
class Rng
{
public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, n). n must be > 0.
  std::uint64_t index(std::uint64_t n);

  /// Uniform in [0, 1) with 53 bits of resolution.
  double unit();

  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

  template <typename T>
  void shuffle(std::span<T> items)
  {
    for (std::size_t i = items.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(index(i));
      std::swap(items[i - 1], items[j]);
    }
  }

private:
  std::mt19937_64 engine_;
};

}  // namespace dual_aeb

#endif  // DUAL_AEB__RANDOM_HPP_
