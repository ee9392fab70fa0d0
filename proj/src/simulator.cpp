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

#include "dual_aeb/simulator.hpp"

#include "dual_aeb/slow_module.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

namespace dual_aeb
{

using nlohmann::json;

RunOptions options_for(const Scenario & sc, ArbiterMode mode, std::uint64_t seed)
{
  RunOptions opts;
  opts.mode = mode;
  opts.seed = seed;
  if (sc.rule) {
    opts.rule = *sc.rule;
  }
  if (sc.arbiter) {
    opts.arbiter = *sc.arbiter;
  }
  opts.latency.seed = seed;
  return opts;
}

namespace
{

std::string_view event_kind(ReplyOutcome outcome)
{
  switch (outcome) {
    case ReplyOutcome::Applied:
      return "reply_applied";
    case ReplyOutcome::Discarded:
      return "reply_discarded";
    case ReplyOutcome::Expired:
      return "reply_expired";
  }
  return "reply_unknown";
}

bool goal_reached(const Scenario & sc, const EgoState & ego)
{
  if (sc.goal) {
    return norm(ego.vehicle.pose.position() - sc.goal->position) <= sc.goal->radius;
  }
  return ego.route_s + 1e-9 >= sc.route_goal_length();
}

}  // namespace

SimLog run_with_oracle(const Scenario & sc, const RunOptions & opts, std::shared_ptr<const OracleKnowledge> oracle)
{
  InProcessSlowClient client(std::move(oracle), opts.latency);
  return run(sc, opts, &client);
}

SimLog run(const Scenario & sc, const RunOptions & opts, SlowClient * client)
{
  std::unique_ptr<InProcessSlowClient> owned;
  if (client == nullptr && slow_enabled(opts.mode)) {
    owned = std::make_unique<InProcessSlowClient>(
      std::make_shared<const OracleKnowledge>(OracleKnowledge::from_scenario(sc)), opts.latency);
    client = owned.get();
  }

  SimLog log;
  log.scenario_name = sc.name;
  log.mode = opts.mode;
  log.seed = opts.seed;
  log.dt = sc.dt;
  log.config = {{"rule", to_json(opts.rule)}, {"arbiter", to_json(opts.arbiter)}, {"latency", opts.latency.describe()}};
  log.scenario = scenario_to_json(sc);

  Arbiter arbiter(opts.mode, opts.arbiter, opts.rule, sc.dt);
  EgoState ego = initial_ego(sc);
  const int n = sc.tick_count();
  const double goal_length = sc.route_goal_length();
  RunSummary & summary = log.summary;
  summary.ticks = n;
  summary.route_goal_length = goal_length;
  std::set<std::string> in_contact;
  std::set<std::string> collided;
  double furthest = 0.0;

  log.ticks.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double t = i * sc.dt;
    std::vector<SlowDelivery> deliveries;
    if (client != nullptr && opts.mode != ArbiterMode::Off) {
      deliveries = client->collect(i);
    }
    const RuleInputs inputs = compose_rule_inputs(sc, ego, i, opts.rule);
    ArbiterOutput out = arbiter.step(i, inputs, deliveries);

    TickRecord rec;
    rec.tick = i;
    rec.time = t;
    rec.ego = snapshot(ego);
    for (const auto & a : sc.agents) {
      const AgentState st = agent_state_at(a, t);
      rec.agents.push_back({a.id, st.pose, norm(st.velocity), a.ghost, perceived_by_quick_path(a, t)});
    }
    rec.trigger = out.trigger;
    rec.quick_action = out.quick_action;
    rec.command = out.command;
    rec.governing_request = out.governing_request;
    rec.replies = out.reply_events;
    rec.label = required_action(sc, ego, i);

    if (out.prompt) {
      rec.prompt_id = out.prompt->request_id;
      rec.prompt_text = out.prompt->prompt.text;
      log.events.push_back({i, "prompt_sent", "", out.prompt->request_id});
      ++summary.prompts;
      if (client != nullptr) {
        client->submit({out.prompt->request_id, i, out.prompt->prompt, scene_summary(sc, ego, i), arbiter.history()});
      }
    }
    for (const auto & ev : out.reply_events) {
      log.events.push_back({i, std::string(event_kind(ev.outcome)), "", ev.request_id});
      if (ev.outcome == ReplyOutcome::Applied) {
        ++summary.replies_applied;
      }
    }

    if (out.command.action == MetaAction::Normal) {
      ego = advance_planned(sc, ego, sc.dt);
    } else {
      ++summary.brake_ticks;
      ego = advance_braking(ego, out.command.decel, sc.dt);
    }
    furthest = std::max(furthest, ego.route_s);

    rec.collisions = real_collisions(sc, ego.vehicle.pose, i + 1);
    std::set<std::string> now(rec.collisions.begin(), rec.collisions.end());
    for (const auto & id : rec.collisions) {
      if (!in_contact.contains(id)) {
        log.events.push_back({i, "collision", id, std::nullopt});
        ++summary.collisions;
        if (collided.insert(id).second) {
          summary.collided_agents.push_back(id);
        }
      }
    }
    in_contact = std::move(now);

    if (!summary.goal_reached && goal_reached(sc, ego)) {
      summary.goal_reached = true;
      summary.goal_tick = i;
      log.events.push_back({i, "goal_reached", "", std::nullopt});
    }
    log.ticks.push_back(std::move(rec));
  }

  summary.route_completion = summary.goal_reached ? 1.0 : std::clamp(furthest / goal_length, 0.0, 1.0);
  return log;
}

namespace
{

json optional_json(const std::optional<double> & v)
{
  return v ? json(*v) : json(nullptr);
}

json trigger_to_json(const TriggerResult & r)
{
  return {
    {"brake", r.brake},
    {"trigger_times", r.trigger_times},
    {"min_ttc", std::isfinite(r.min_ttc) ? json(r.min_ttc) : json(nullptr)},
    {"first_collision_step", r.first_collision_step ? json(*r.first_collision_step) : json(nullptr)},
    {"nearest_agent", r.nearest_agent ? json(*r.nearest_agent) : json(nullptr)},
    {"predicted_collision_time", optional_json(r.predicted_collision_time)}};
}

TriggerResult trigger_from_json(const json & j)
{
  TriggerResult r;
  r.brake = j.at("brake").get<bool>();
  r.trigger_times = j.at("trigger_times").get<std::vector<double>>();
  r.min_ttc = j.at("min_ttc").is_null() ? kInfiniteTtc : j.at("min_ttc").get<double>();
  if (!j.at("first_collision_step").is_null()) {
    r.first_collision_step = j.at("first_collision_step").get<int>();
  }
  if (!j.at("nearest_agent").is_null()) {
    r.nearest_agent = j.at("nearest_agent").get<std::string>();
  }
  if (!j.at("predicted_collision_time").is_null()) {
    r.predicted_collision_time = j.at("predicted_collision_time").get<double>();
  }
  return r;
}

MetaAction action_from(const json & j)
{
  const auto a = parse_meta_action(j.get<std::string>());
  if (!a) {
    throw std::runtime_error(fmt::format("unknown meta action '{}'", j.get<std::string>()));
  }
  return *a;
}

json tick_to_json(const TickRecord & r)
{
  json agents = json::array();
  for (const auto & a : r.agents) {
    agents.push_back(
      {{"id", a.id},
       {"x", a.pose.x},
       {"y", a.pose.y},
       {"heading", a.pose.heading},
       {"speed", a.speed},
       {"ghost", a.ghost},
       {"perceived", a.perceived}});
  }
  json replies = json::array();
  for (const auto & e : r.replies) {
    replies.push_back({{"request_id", e.request_id}, {"outcome", to_string(e.outcome)}});
  }
  return {
    {"type", "tick"},
    {"tick", r.tick},
    {"time", r.time},
    {"ego", {{"x", r.ego.x}, {"y", r.ego.y}, {"heading", r.ego.heading}, {"speed", r.ego.speed}, {"route_s", r.ego.route_s}}},
    {"agents", agents},
    {"trigger", trigger_to_json(r.trigger)},
    {"quick_action", to_string(r.quick_action)},
    {"command", {{"action", to_string(r.command.action)}, {"decel", r.command.decel}, {"source", to_string(r.command.source)}}},
    {"prompt_id", r.prompt_id ? json(*r.prompt_id) : json(nullptr)},
    {"prompt", r.prompt_text},
    {"governing_request", r.governing_request ? json(*r.governing_request) : json(nullptr)},
    {"replies", replies},
    {"label", to_string(r.label)},
    {"collisions", r.collisions}};
}

TickRecord tick_from_json(const json & j)
{
  TickRecord r;
  r.tick = j.at("tick").get<int>();
  r.time = j.at("time").get<double>();
  const json & ego = j.at("ego");
  r.ego = {ego.at("x").get<double>(), ego.at("y").get<double>(), ego.at("heading").get<double>(),
           ego.at("speed").get<double>(), ego.at("route_s").get<double>()};
  for (const auto & a : j.at("agents")) {
    AgentRecord rec;
    rec.id = a.at("id").get<std::string>();
    rec.pose.x = a.at("x").get<double>();
    rec.pose.y = a.at("y").get<double>();
    rec.pose.heading = a.at("heading").get<double>();
    rec.speed = a.at("speed").get<double>();
    rec.ghost = a.at("ghost").get<bool>();
    rec.perceived = a.at("perceived").get<bool>();
    r.agents.push_back(std::move(rec));
  }
  r.trigger = trigger_from_json(j.at("trigger"));
  r.quick_action = action_from(j.at("quick_action"));
  const json & cmd = j.at("command");
  r.command.action = action_from(cmd.at("action"));
  r.command.decel = cmd.at("decel").get<double>();
  const auto source = parse_brake_source(cmd.at("source").get<std::string>());
  if (!source) {
    throw std::runtime_error("unknown brake source in log");
  }
  r.command.source = *source;
  if (!j.at("prompt_id").is_null()) {
    r.prompt_id = j.at("prompt_id").get<int>();
  }
  r.prompt_text = j.at("prompt").get<std::string>();
  if (!j.at("governing_request").is_null()) {
    r.governing_request = j.at("governing_request").get<int>();
  }
  for (const auto & e : j.at("replies")) {
    const std::string outcome = e.at("outcome").get<std::string>();
    ReplyOutcome o = ReplyOutcome::Applied;
    if (outcome == "discarded") {
      o = ReplyOutcome::Discarded;
    } else if (outcome == "expired") {
      o = ReplyOutcome::Expired;
    }
    r.replies.push_back({e.at("request_id").get<int>(), o});
  }
  r.label = action_from(j.at("label"));
  r.collisions = j.at("collisions").get<std::vector<std::string>>();
  return r;
}

json summary_to_json(const RunSummary & s)
{
  return {
    {"type", "summary"},
    {"ticks", s.ticks},
    {"collisions", s.collisions},
    {"collided_agents", s.collided_agents},
    {"goal_reached", s.goal_reached},
    {"goal_tick", s.goal_tick ? json(*s.goal_tick) : json(nullptr)},
    {"route_completion", s.route_completion},
    {"route_goal_length", s.route_goal_length},
    {"brake_ticks", s.brake_ticks},
    {"prompts", s.prompts},
    {"replies_applied", s.replies_applied}};
}

RunSummary summary_from_json(const json & j)
{
  RunSummary s;
  s.ticks = j.at("ticks").get<int>();
  s.collisions = j.at("collisions").get<int>();
  s.collided_agents = j.at("collided_agents").get<std::vector<std::string>>();
  s.goal_reached = j.at("goal_reached").get<bool>();
  if (!j.at("goal_tick").is_null()) {
    s.goal_tick = j.at("goal_tick").get<int>();
  }
  s.route_completion = j.at("route_completion").get<double>();
  s.route_goal_length = j.at("route_goal_length").get<double>();
  s.brake_ticks = j.at("brake_ticks").get<int>();
  s.prompts = j.at("prompts").get<int>();
  s.replies_applied = j.at("replies_applied").get<int>();
  return s;
}

}  // namespace

void write_log(std::ostream & out, const SimLog & log)
{
  const json header = {
    {"type", "header"},
    {"format", "dual_aeb.simlog"},
    {"version", kSimLogVersion},
    {"scenario_name", log.scenario_name},
    {"mode", to_string(log.mode)},
    {"seed", log.seed},
    {"dt", log.dt},
    {"config", log.config},
    {"scenario", log.scenario}};
  out << header.dump() << '\n';
  std::size_t next_event = 0;
  for (const auto & rec : log.ticks) {
    out << tick_to_json(rec).dump() << '\n';
    while (next_event < log.events.size() && log.events[next_event].tick <= rec.tick) {
      const LogEvent & e = log.events[next_event++];
      json ev = {{"type", "event"}, {"tick", e.tick}, {"kind", e.kind}};
      if (!e.agent_id.empty()) {
        ev["agent_id"] = e.agent_id;
      }
      if (e.request_id) {
        ev["request_id"] = *e.request_id;
      }
      out << ev.dump() << '\n';
    }
  }
  out << summary_to_json(log.summary).dump() << '\n';
}

std::string log_to_string(const SimLog & log)
{
  std::ostringstream out;
  write_log(out, log);
  return out.str();
}

SimLog read_log(std::istream & in)
{
  SimLog log;
  std::string line;
  int line_no = 0;
  bool have_header = false;
  bool have_summary = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) {
      continue;
    }
    try {
      const json j = json::parse(line);
      const std::string type = j.at("type").get<std::string>();
      if (type == "header") {
        if (j.at("format").get<std::string>() != "dual_aeb.simlog" || j.at("version").get<int>() != kSimLogVersion) {
          throw std::runtime_error("unsupported log format or version");
        }
        log.scenario_name = j.at("scenario_name").get<std::string>();
        const auto mode = parse_arbiter_mode(j.at("mode").get<std::string>());
        if (!mode) {
          throw std::runtime_error("unknown mode");
        }
        log.mode = *mode;
        log.seed = j.at("seed").get<std::uint64_t>();
        log.dt = j.at("dt").get<double>();
        log.config = j.at("config");
        log.scenario = j.at("scenario");
        have_header = true;
      } else if (type == "tick") {
        log.ticks.push_back(tick_from_json(j));
      } else if (type == "event") {
        LogEvent e;
        e.tick = j.at("tick").get<int>();
        e.kind = j.at("kind").get<std::string>();
        e.agent_id = j.value("agent_id", "");
        if (j.contains("request_id")) {
          e.request_id = j.at("request_id").get<int>();
        }
        log.events.push_back(std::move(e));
      } else if (type == "summary") {
        log.summary = summary_from_json(j);
        have_summary = true;
      }
    } catch (const std::exception & e) {
      throw std::runtime_error(fmt::format("log line {}: {}", line_no, e.what()));
    }
  }
  if (!have_header || !have_summary) {
    throw std::runtime_error("log is missing its header or summary line");
  }
  return log;
}

SimLog load_log(const std::filesystem::path & path)
{
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error(fmt::format("cannot open log {}", path.string()));
  }
  try {
    return read_log(in);
  } catch (const std::exception & e) {
    throw std::runtime_error(fmt::format("{}: {}", path.string(), e.what()));
  }
}

}  // namespace dual_aeb
