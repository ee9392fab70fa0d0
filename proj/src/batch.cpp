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

#include "dual_aeb/batch.hpp"

#include <omp.h>

namespace dual_aeb
{

Suite::Suite(std::vector<Scenario> scs) : scenarios(std::move(scs))
{
  oracles.reserve(scenarios.size());
  for (const auto & sc : scenarios) {
    oracles.push_back(std::make_shared<const OracleKnowledge>(OracleKnowledge::from_scenario(sc)));
  }
}

BatchResult run_job(const Suite & suite, const BatchJob & job, bool keep_log)
{
  BatchResult r;
  r.mode = job.options.mode;
  r.seed = job.options.seed;
  r.trigger_interval = job.options.arbiter.trigger_interval;
  try {
    const Scenario & sc = suite.scenarios.at(job.scenario);
    r.scenario = sc.name;
    const SimLog log = run_with_oracle(sc, job.options, suite.oracles.at(job.scenario));
    r.driving = driving_metrics(log);
    r.decisions = log_confusion(log, Granularity::Decision, job.options.arbiter);
    r.ticks = log_confusion(log, Granularity::Tick, job.options.arbiter);
    if (keep_log) {
      r.log = log_to_string(log);
    }
  } catch (const std::exception & e) {
    r.error = e.what();
  }
  return r;
}

std::vector<BatchResult> run_batch_serial(const Suite & suite, std::span<const BatchJob> jobs, bool keep_logs)
{
  std::vector<BatchResult> out;
  out.reserve(jobs.size());
  for (const auto & job : jobs) {
    out.push_back(run_job(suite, job, keep_logs));
  }
  return out;
}

std::vector<BatchResult> run_batch_parallel(
  const Suite & suite, std::span<const BatchJob> jobs, int threads, bool keep_logs)
{
  std::vector<BatchResult> out(jobs.size());
  const int n = static_cast<int>(jobs.size());
  const int team = threads > 0 ? threads : omp_get_max_threads();
  // run_job reports failures in-band, so nothing escapes the region.
#pragma omp parallel for schedule(dynamic) num_threads(team)
  for (int i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = run_job(suite, jobs[static_cast<std::size_t>(i)], keep_logs);
  }
  return out;
}

}  // namespace dual_aeb
