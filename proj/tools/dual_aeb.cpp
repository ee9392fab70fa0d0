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

// Command-line front end: run, eval, ablation, dataset, serve-mock, validate.

#include "dual_aeb/batch.hpp"
#include "dual_aeb/dataset.hpp"
#include "dual_aeb/metrics.hpp"
#include "dual_aeb/scenario.hpp"
#include "dual_aeb/simulator.hpp"
#include "dual_aeb/slow_module.hpp"
#include "dual_aeb/transport.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace dual_aeb;

namespace
{

struct RunFlags
{
  std::string mode{"dual"};
  bool off{false};
  bool rule_only{false};
  bool slow_only{false};
  bool dual{false};
  std::uint64_t seed{0};
  std::optional<double> trigger_interval;
  std::optional<double> slow_deadline;
  std::string latency;
  std::string slow_endpoint;
  std::string config;
};

ArbiterMode mode_from(const RunFlags & f)
{
  if (f.off) {
    return ArbiterMode::Off;
  }
  if (f.rule_only) {
    return ArbiterMode::RuleOnly;
  }
  if (f.slow_only) {
    return ArbiterMode::SlowOnly;
  }
  if (f.dual) {
    return ArbiterMode::Dual;
  }
  const auto m = parse_arbiter_mode(f.mode);
  if (!m) {
    throw CLI::ValidationError("--mode", fmt::format("unknown mode '{}'", f.mode));
  }
  return *m;
}

json read_json_file(const fs::path & path)
{
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error(fmt::format("cannot open {}", path.string()));
  }
  return json::parse(in);
}

// Defaults, then flags, then the config file on top.
RunOptions resolve_options(const Scenario & sc, const RunFlags & f)
{
  RunOptions opts = options_for(sc, mode_from(f), f.seed);
  if (f.trigger_interval) {
    opts.arbiter.trigger_interval = *f.trigger_interval;
  }
  if (f.slow_deadline) {
    opts.arbiter.slow_deadline = *f.slow_deadline;
  }
  if (!f.latency.empty()) {
    opts.latency = LatencyModel::parse(f.latency);
    opts.latency.seed = f.seed;
  }
  if (!f.config.empty()) {
    const json cfg = read_json_file(f.config);
    for (const auto & [key, value] : cfg.items()) {
      if (key == "rule") {
        opts.rule = parse_rule_config(value, opts.rule);
      } else if (key == "arbiter") {
        opts.arbiter = parse_arbiter_config(value, opts.arbiter);
      } else if (key == "latency") {
        const std::uint64_t seed = opts.latency.seed;
        opts.latency = LatencyModel::parse(value.get<std::string>());
        opts.latency.seed = seed;
      } else if (key == "mode") {
        const auto m = parse_arbiter_mode(value.get<std::string>());
        if (!m) {
          throw std::runtime_error(fmt::format("{}: mode: unknown mode", f.config));
        }
        opts.mode = *m;
      } else if (key == "seed") {
        opts.seed = value.get<std::uint64_t>();
        opts.latency.seed = opts.seed;
      } else {
        throw std::runtime_error(fmt::format("{}: {}: unknown key", f.config, key));
      }
    }
  }
  opts.arbiter.validate();
  return opts;
}

std::string endpoint_from(const RunFlags & f)
{
  if (!f.slow_endpoint.empty()) {
    return f.slow_endpoint;
  }
  if (const char * env = std::getenv(std::string(kSlowEndpointEnv).c_str())) {
    return env;
  }
  return {};
}

void add_run_flags(CLI::App * cmd, RunFlags & f)
{
  cmd->add_option("--mode", f.mode, "off | rule-only | slow-only | dual")->capture_default_str();
  cmd->add_flag("--off", f.off, "Disable both braking paths");
  cmd->add_flag("--rule-only", f.rule_only, "Quick path only");
  cmd->add_flag("--slow-only", f.slow_only, "Slow path only");
  cmd->add_flag("--dual", f.dual, "Both paths (default)");
  cmd->add_option("--seed", f.seed, "Run seed")->capture_default_str();
  cmd->add_option("--trigger-interval", f.trigger_interval, "Seconds between slow consultations");
  cmd->add_option("--slow-deadline", f.slow_deadline, "Seconds a slow reply may take");
  cmd->add_option("--latency", f.latency, "constant:N or uniform:MIN:MAX (ticks)");
  cmd->add_option("--slow-endpoint", f.slow_endpoint, "host:port of a slow module service");
  cmd->add_option("--config", f.config, "JSON file with rule/arbiter/latency/mode/seed overrides");
}

void write_text(const fs::path & path, const std::string & text)
{
  if (path.has_parent_path()) {
    fs::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error(fmt::format("cannot write {}", path.string()));
  }
  out << text;
}

int cmd_run(const std::vector<std::string> & scenario_paths, const RunFlags & f, const std::string & out)
{
  std::vector<fs::path> paths;
  for (const auto & p : scenario_paths) {
    for (const auto & file : scenario_files(p)) {
      paths.push_back(file);
    }
  }
  const auto scenarios = load_scenarios(paths);
  const std::string endpoint = endpoint_from(f);
  for (const Scenario & sc : scenarios) {
    const RunOptions opts = resolve_options(sc, f);
    SimLog log;
    if (!endpoint.empty() && slow_enabled(opts.mode)) {
      SocketSlowClient client(Endpoint::parse(endpoint), opts.latency);
      if (!client.connected()) {
        std::cerr << fmt::format("warning: slow endpoint {} unreachable ({}); quick path only\n", endpoint, client.last_error());
      }
      log = run(sc, opts, &client);
    } else {
      log = run(sc, opts);
    }
    const std::string text = log_to_string(log);
    if (out.empty() || out == "-") {
      std::cout << text;
    } else {
      fs::path target = out;
      // A trailing separator names a directory that may not exist yet.
      if (scenarios.size() > 1 || fs::is_directory(target) || out.ends_with('/')) {
        target = target / fmt::format("{}.{}.s{}.jsonl", sc.name, to_string(opts.mode), opts.seed);
      }
      write_text(target, text);
    }
    const DrivingMetrics m = driving_metrics(log);
    std::cerr << fmt::format(
      "{} mode={} seed={} collisions={} route_completion={:.3f} driving_score={:.2f}\n", sc.name, to_string(opts.mode),
      opts.seed, m.collisions, m.route_completion, m.driving_score);
  }
  return 0;
}

std::vector<fs::path> log_files(const std::string & dir)
{
  std::vector<fs::path> out;
  if (fs::is_directory(dir)) {
    for (const auto & e : fs::directory_iterator(dir)) {
      if (e.is_regular_file() && e.path().extension() == ".jsonl") {
        out.push_back(e.path());
      }
    }
    std::sort(out.begin(), out.end());
  } else {
    out.emplace_back(dir);
  }
  return out;
}

int cmd_eval(const std::string & logs_dir, const std::string & out, const std::string & granularity)
{
  const Granularity g = granularity == "tick" ? Granularity::Tick : Granularity::Decision;
  std::ostringstream csv;
  csv << "scenario,mode,seed,driving_score,success,collisions,route_completion,precision,recall\n";
  std::vector<DrivingMetrics> all;
  ConfusionMatrix total;
  for (const auto & path : log_files(logs_dir)) {
    const SimLog log = load_log(path);
    const ArbiterConfig cfg = parse_arbiter_config(log.config.at("arbiter"), ArbiterConfig{});
    const DrivingMetrics m = driving_metrics(log);
    const ConfusionMatrix cm = log_confusion(log, g, cfg);
    const PrecisionRecall pr = precision_recall(cm);
    csv << fmt::format(
      "{},{},{},{:.4f},{},{},{:.4f},{:.4f},{:.4f}\n", log.scenario_name, to_string(log.mode), log.seed, m.driving_score,
      m.success ? 1 : 0, m.collisions, m.route_completion, pr.precision, pr.recall);
    all.push_back(m);
    total += cm;
  }
  if (all.empty()) {
    throw std::runtime_error(fmt::format("no .jsonl logs under {}", logs_dir));
  }
  const SuiteMetrics s = aggregate(all);
  const PrecisionRecall pr = precision_recall(total);
  std::cerr << fmt::format(
    "runs={} driving_score={:.2f} success_rate={:.1f} collision_rate={:.3f} precision={:.3f} recall={:.3f}\n", s.runs,
    s.driving_score, s.success_rate, s.collision_rate, pr.precision, pr.recall);
  if (out.empty() || out == "-") {
    std::cout << csv.str();
  } else {
    write_text(out, csv.str());
  }
  return 0;
}

std::vector<std::string> split_list(const std::string & text)
{
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) {
      out.push_back(item);
    }
  }
  return out;
}

int cmd_ablation(
  const std::string & suite_dir, const std::vector<std::string> & modes_in, const std::vector<std::uint64_t> & seeds,
  const std::vector<double> & intervals, int jobs, const std::string & out)
{
  std::vector<std::string> modes_text;
  for (const auto & m : modes_in) {
    for (const auto & part : split_list(m)) {
      modes_text.push_back(part);
    }
  }
  if (modes_text.empty()) {
    throw CLI::ValidationError("--modes", "at least one mode is required");
  }
  std::vector<ArbiterMode> modes;
  for (const auto & m : modes_text) {
    const auto parsed = parse_arbiter_mode(m);
    if (!parsed) {
      throw CLI::ValidationError("--modes", fmt::format("unknown mode '{}'", m));
    }
    modes.push_back(*parsed);
  }
  const Suite suite(load_scenarios(scenario_files(suite_dir)));
  if (suite.scenarios.empty()) {
    throw std::runtime_error(fmt::format("suite {} is empty", suite_dir));
  }
  std::vector<BatchJob> batch;
  for (const double interval : intervals) {
    for (const ArbiterMode mode : modes) {
      for (const std::uint64_t seed : seeds) {
        for (std::size_t i = 0; i < suite.scenarios.size(); ++i) {
          BatchJob job{i, options_for(suite.scenarios[i], mode, seed)};
          job.options.arbiter.trigger_interval = interval;
          batch.push_back(job);
        }
      }
    }
  }
  const auto results = run_batch_parallel(suite, batch, jobs);

  int failures = 0;
  for (const auto & r : results) {
    if (!r.error.empty()) {
      ++failures;
      std::cerr << fmt::format("error: {} mode={} seed={}: {}\n", r.scenario, to_string(r.mode), r.seed, r.error);
    }
  }
  std::ostringstream csv;
  csv << "trigger_interval,mode,runs,driving_score,success_rate,collision_rate,precision,recall\n";
  std::size_t k = 0;
  for (const double interval : intervals) {
    for (const ArbiterMode mode : modes) {
      std::vector<DrivingMetrics> rows;
      ConfusionMatrix cm;
      for (std::size_t n = 0; n < seeds.size() * suite.scenarios.size(); ++n, ++k) {
        if (results[k].error.empty()) {
          rows.push_back(results[k].driving);
          cm += results[k].decisions;
        }
      }
      if (rows.empty()) {
        continue;
      }
      const SuiteMetrics s = aggregate(rows);
      const PrecisionRecall pr = precision_recall(cm);
      csv << fmt::format(
        "{:.2f},{},{},{:.4f},{:.2f},{:.4f},{:.4f},{:.4f}\n", interval, to_string(mode), s.runs, s.driving_score,
        s.success_rate, s.collision_rate, pr.precision, pr.recall);
    }
  }
  if (out.empty() || out == "-") {
    std::cout << csv.str();
  } else {
    write_text(out, csv.str());
  }
  return failures == 0 ? 0 : 1;
}

struct DatasetFlags
{
  std::string logs;
  int generate{0};
  std::string out{"dataset"};
  std::uint64_t seed{0};
  bool balance{false};
  double corrupt{0.5};
  double test_fraction{0.1};
  double sample_interval{2.5};
  bool decisions_only{false};
};

int cmd_dataset(const DatasetFlags & f)
{
  std::vector<SimLog> logs;
  if (!f.logs.empty()) {
    for (const auto & path : log_files(f.logs)) {
      logs.push_back(load_log(path));
    }
  }
  if (f.generate > 0) {
    auto generated = generated_logs(f.generate, f.seed);
    std::move(generated.begin(), generated.end(), std::back_inserter(logs));
  }
  if (logs.empty()) {
    throw CLI::ValidationError("dataset", "give --logs <dir> or --generate <n>");
  }
  ArbiterConfig schedule;
  schedule.trigger_interval = f.sample_interval;
  auto samples = build_samples(logs, default_templates(), f.seed, schedule);
  if (f.decisions_only) {
    samples = decision_samples(samples);
  }
  samples = corrupt_prompts(std::move(samples), f.corrupt, f.seed + 1);
  if (f.balance) {
    samples = balance_classes(std::move(samples), 0.02, f.seed + 2);
  }
  const auto [train, test] = split(samples, f.test_fraction, f.seed + 3);
  const fs::path dir = f.out;
  write_text(dir / "train.jsonl", samples_to_jsonl(train));
  write_text(dir / "test.jsonl", samples_to_jsonl(test));
  write_text(dir / "manifest.json", manifest(train, test, f.seed).dump(2) + "\n");
  std::cerr << fmt::format("wrote {} train and {} test samples to {}\n", train.size(), test.size(), dir.string());
  return 0;
}

MockServer * g_server = nullptr;

extern "C" void on_signal(int)
{
  if (g_server != nullptr) {
    g_server->stop();
  }
}

int cmd_serve(const std::string & scenario, const std::string & host, int port)
{
  auto oracle = std::make_shared<const OracleKnowledge>(OracleKnowledge::from_scenario(load_scenario(scenario)));
  MockServer server(oracle);
  const int bound = server.listen(host, port);
  std::cout << fmt::format("listening on {}:{}", host, bound) << std::endl;
  g_server = &server;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  server.serve();
  g_server = nullptr;
  return 0;
}

int cmd_validate(const std::vector<std::string> & paths)
{
  int bad = 0;
  for (const auto & p : paths) {
    for (const auto & file : scenario_files(p)) {
      try {
        const Scenario sc = load_scenario(file);
        std::cout << fmt::format("OK   {} ({} agents, {} ticks)\n", file.string(), sc.agents.size(), sc.tick_count());
      } catch (const std::exception & e) {
        ++bad;
        std::cout << fmt::format("FAIL {}: {}\n", file.string(), e.what());
      }
    }
  }
  return bad == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char ** argv)
{
  CLI::App app{"Dual-path emergency braking simulator"};
  app.require_subcommand(1);

  RunFlags run_flags;
  std::vector<std::string> run_scenarios;
  std::string run_out;
  auto * run_cmd = app.add_subcommand("run", "Simulate scenarios and write JSONL logs");
  run_cmd->add_option("--scenario,scenarios", run_scenarios, "Scenario file or directory")->required();
  run_cmd->add_option("--out", run_out, "Log file, or directory for several scenarios (default stdout)");
  add_run_flags(run_cmd, run_flags);

  std::string eval_logs;
  std::string eval_out;
  std::string eval_granularity{"decision"};
  auto * eval_cmd = app.add_subcommand("eval", "Score logs into a CSV table");
  eval_cmd->add_option("--logs", eval_logs, "Log directory or file")->required();
  eval_cmd->add_option("--out", eval_out, "CSV path (default stdout)");
  eval_cmd->add_option("--granularity", eval_granularity, "decision | tick")
    ->check(CLI::IsMember({"decision", "tick"}))
    ->capture_default_str();

  std::string abl_suite{"scenarios"};
  std::vector<std::string> abl_modes{"off", "rule-only", "slow-only", "dual"};
  std::vector<std::uint64_t> abl_seeds{0};
  std::vector<double> abl_intervals{2.5};
  int abl_jobs = 0;
  std::string abl_out;
  auto * abl_cmd = app.add_subcommand("ablation", "Run every (interval, mode, seed, scenario) and tabulate");
  abl_cmd->add_option("--suite", abl_suite, "Scenario directory")->capture_default_str();
  abl_cmd->add_option("--modes", abl_modes, "Modes, comma separated")->delimiter(',');
  abl_cmd->add_option("--seeds", abl_seeds, "Seeds, comma separated")->delimiter(',');
  abl_cmd->add_option("--intervals", abl_intervals, "Trigger intervals in seconds")->delimiter(',');
  abl_cmd->add_option("--jobs", abl_jobs, "Worker threads (0 = all cores)");
  abl_cmd->add_option("--out", abl_out, "CSV path (default stdout)");

  DatasetFlags ds;
  auto * ds_cmd = app.add_subcommand("dataset", "Build question/answer samples from logs");
  ds_cmd->add_option("--logs", ds.logs, "Log directory");
  ds_cmd->add_option("--generate", ds.generate, "Also simulate this many generated hazard scenarios");
  ds_cmd->add_option("--out", ds.out, "Output directory")->capture_default_str();
  ds_cmd->add_option("--seed", ds.seed, "Seed")->capture_default_str();
  ds_cmd->add_flag("--balance", ds.balance, "Downsample to equal class counts");
  ds_cmd->add_option("--corrupt", ds.corrupt, "Fraction of decision prompts to corrupt")->capture_default_str();
  ds_cmd->add_option("--test-fraction", ds.test_fraction, "Held-out share")->capture_default_str();
  ds_cmd->add_option("--sample-interval", ds.sample_interval, "Seconds between sampled ticks")->capture_default_str();
  ds_cmd->add_flag("--decisions-only", ds.decisions_only, "Keep only decision-making samples");

  std::string serve_scenario;
  std::string serve_host{"127.0.0.1"};
  int serve_port = 0;
  auto * serve_cmd = app.add_subcommand("serve-mock", "Serve the mock slow module over TCP");
  serve_cmd->add_option("--scenario", serve_scenario, "Scenario the mock answers for")->required();
  serve_cmd->add_option("--host", serve_host, "Bind address")->capture_default_str();
  serve_cmd->add_option("--port", serve_port, "Port (0 picks a free one)")->capture_default_str();

  std::vector<std::string> validate_paths;
  auto * val_cmd = app.add_subcommand("validate", "Check scenario files against the schema");
  val_cmd->add_option("paths", validate_paths, "Scenario files or directories")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) {
      return cmd_run(run_scenarios, run_flags, run_out);
    }
    if (eval_cmd->parsed()) {
      return cmd_eval(eval_logs, eval_out, eval_granularity);
    }
    if (abl_cmd->parsed()) {
      return cmd_ablation(abl_suite, abl_modes, abl_seeds, abl_intervals, abl_jobs, abl_out);
    }
    if (ds_cmd->parsed()) {
      return cmd_dataset(ds);
    }
    if (serve_cmd->parsed()) {
      return cmd_serve(serve_scenario, serve_host, serve_port);
    }
    if (val_cmd->parsed()) {
      return cmd_validate(validate_paths);
    }
  } catch (const CLI::Error & e) {
    return app.exit(e);
  } catch (const std::exception & e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
