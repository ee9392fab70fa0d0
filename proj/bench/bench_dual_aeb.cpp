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

// Serial reference kernels against their OpenMP counterparts.

#include "dual_aeb/batch.hpp"
#include "dual_aeb/generators.hpp"
#include "dual_aeb/rule_aeb.hpp"
#include "dual_aeb/scenario.hpp"

#include <benchmark/benchmark.h>

#include <vector>

using namespace dual_aeb;

namespace
{

std::vector<RuleInputs> scenes(int count)
{
  Rng rng(99);
  const RuleConfig cfg;
  std::vector<RuleInputs> out;
  for (int i = 0; i < count; ++i) {
    out.push_back(random_scene(rng, 20, cfg));
  }
  return out;
}

const Suite & suite()
{
  static const Suite s = [] {
    std::vector<Scenario> scenarios;
    for (const auto & p : scenario_files(DUAL_AEB_SCENARIO_DIR)) {
      scenarios.push_back(load_scenario(p));
    }
    return Suite(std::move(scenarios));
  }();
  return s;
}

std::vector<BatchJob> suite_jobs()
{
  std::vector<BatchJob> jobs;
  for (std::size_t i = 0; i < suite().scenarios.size(); ++i) {
    for (const ArbiterMode mode : {ArbiterMode::Off, ArbiterMode::RuleOnly, ArbiterMode::SlowOnly, ArbiterMode::Dual}) {
      jobs.push_back({i, options_for(suite().scenarios[i], mode, 1)});
    }
  }
  return jobs;
}

void BM_Evaluate(benchmark::State & state)
{
  const auto in = scenes(1);
  const RuleConfig cfg;
  for (auto _ : state) {
    benchmark::DoNotOptimize(evaluate(in[0], cfg));
  }
}

void BM_EvaluateBatchSerial(benchmark::State & state)
{
  const auto in = scenes(static_cast<int>(state.range(0)));
  const RuleConfig cfg;
  for (auto _ : state) {
    benchmark::DoNotOptimize(evaluate_batch_serial(in, cfg));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_EvaluateBatchParallel(benchmark::State & state)
{
  const auto in = scenes(static_cast<int>(state.range(0)));
  const RuleConfig cfg;
  for (auto _ : state) {
    benchmark::DoNotOptimize(evaluate_batch_parallel(in, cfg));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_SuiteSerial(benchmark::State & state)
{
  const auto jobs = suite_jobs();
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_batch_serial(suite(), jobs));
  }
}

void BM_SuiteParallel(benchmark::State & state)
{
  const auto jobs = suite_jobs();
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_batch_parallel(suite(), jobs));
  }
}

}  // namespace

BENCHMARK(BM_Evaluate)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_EvaluateBatchSerial)->Arg(64)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EvaluateBatchParallel)->Arg(64)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SuiteSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SuiteParallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
