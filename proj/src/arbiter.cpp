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

#include "dual_aeb/arbiter.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dual_aeb
{

namespace
{

constexpr double kTimeEps = 1e-9;

std::vector<std::string> split_tokens(std::string_view id)
{
  std::vector<std::string> tokens;
  std::string current;
  for (const char c : id) {
    if (c == '_' || c == '-' || c == ' ') {
      if (!current.empty()) {
        tokens.push_back(current);
        current.clear();
      }
    } else {
      current.push_back(c);
    }
  }
  if (!current.empty()) {
    tokens.push_back(current);
  }
  return tokens;
}

std::string join(std::span<const std::string> tokens)
{
  std::string out;
  for (const auto & t : tokens) {
    if (!out.empty()) {
      out.push_back(' ');
    }
    out += t;
  }
  return out;
}

}  // namespace

std::string_view to_string(BrakeSource source)
{
  switch (source) {
    case BrakeSource::Quick:
      return "quick";
    case BrakeSource::SlowConfirmed:
      return "slow_confirmed";
    case BrakeSource::SlowAdjusted:
      return "slow_adjusted";
    case BrakeSource::QuickFallback:
      return "quick_fallback";
  }
  return "quick";
}

std::optional<BrakeSource> parse_brake_source(std::string_view text)
{
  for (const BrakeSource s :
       {BrakeSource::Quick, BrakeSource::SlowConfirmed, BrakeSource::SlowAdjusted, BrakeSource::QuickFallback}) {
    if (text == to_string(s)) {
      return s;
    }
  }
  return std::nullopt;
}

std::string_view to_string(ArbiterMode mode)
{
  switch (mode) {
    case ArbiterMode::Off:
      return "off";
    case ArbiterMode::RuleOnly:
      return "rule-only";
    case ArbiterMode::SlowOnly:
      return "slow-only";
    case ArbiterMode::Dual:
      return "dual";
  }
  return "off";
}

std::optional<ArbiterMode> parse_arbiter_mode(std::string_view text)
{
  for (const ArbiterMode m : {ArbiterMode::Off, ArbiterMode::RuleOnly, ArbiterMode::SlowOnly, ArbiterMode::Dual}) {
    if (text == to_string(m)) {
      return m;
    }
  }
  return std::nullopt;
}

std::string_view to_string(ReplyOutcome outcome)
{
  switch (outcome) {
    case ReplyOutcome::Applied:
      return "applied";
    case ReplyOutcome::Discarded:
      return "discarded";
    case ReplyOutcome::Expired:
      return "expired";
  }
  return "applied";
}

void ArbiterConfig::validate() const
{
  if (!(trigger_interval > 0.0)) {
    throw std::invalid_argument("arbiter.trigger_interval must be > 0");
  }
  if (!(slow_deadline >= 0.0)) {
    throw std::invalid_argument("arbiter.slow_deadline must be >= 0");
  }
  if (!(brake_threshold > 0.0 && brake_threshold < 1.0)) {
    throw std::invalid_argument("arbiter.brake_threshold must lie in (0, 1)");
  }
  if (decel_warning < 0.0 || decel_emergency < 0.0 || decel_warning > decel_max || decel_emergency > decel_max) {
    throw std::invalid_argument("arbiter decelerations must lie in [0, decel_max]");
  }
}

double decel_for(MetaAction action, const ArbiterConfig & cfg)
{
  switch (action) {
    case MetaAction::Normal:
      return 0.0;
    case MetaAction::EarlyWarning:
      return std::min(cfg.decel_warning, cfg.decel_max);
    case MetaAction::EmergencyBraking:
      return std::min(cfg.decel_emergency, cfg.decel_max);
  }
  return 0.0;
}

BrakeCommand make_command(MetaAction action, BrakeSource source, const ArbiterConfig & cfg)
{
  return {action, decel_for(action, cfg), source};
}

std::string describe_agent(const AgentTrack & track)
{
  if (!track.descriptor.empty()) {
    return track.descriptor;
  }
  std::vector<std::string> tokens = split_tokens(track.id);
  if (tokens.empty()) {
    return "an unidentified object";
  }
  const std::string last = tokens.back();
  if (tokens.size() > 1 && (last == "left" || last == "right")) {
    tokens.pop_back();
    return fmt::format("the {} on the {}", join(tokens), last);
  }
  if (tokens.size() > 1 && last == "ahead") {
    tokens.pop_back();
    return fmt::format("the {} ahead", join(tokens));
  }
  return fmt::format("the {}", join(tokens));
}

std::string aeb_prompt_text(MetaAction action, std::string_view descriptor, double seconds)
{
  switch (action) {
    case MetaAction::EmergencyBraking:
      return fmt::format(
        "Initial decision: A collision with {} is expected in {:.1f} seconds, and I decide to brake.", descriptor,
        seconds);
    case MetaAction::EarlyWarning:
      return fmt::format(
        "Initial decision: A potential collision with {} is expected in {:.1f} seconds, and I decide to issue an "
        "early warning.",
        descriptor, seconds);
    case MetaAction::Normal:
      break;
  }
  return "Initial decision: no imminent collision detected; I decide to continue.";
}

AebPrompt build_aeb_prompt(
  const TriggerResult & r, MetaAction action, const VehicleState & ego, std::span<const AgentTrack> agents,
  int tick)
{
  AebPrompt prompt;
  prompt.initial_action = action;
  prompt.ego_speed = ego.speed;
  prompt.tick = tick;

  std::string descriptor = "an obstacle ahead";
  if (r.nearest_agent) {
    prompt.agent_id = r.nearest_agent;
    const auto it = std::find_if(agents.begin(), agents.end(), [&](const AgentTrack & a) { return a.id == *r.nearest_agent; });
    descriptor = it != agents.end() ? describe_agent(*it) : describe_agent(AgentTrack{*r.nearest_agent, OrientedBox({}, 1, 1), {}, 0.0, false, false, {}});
  }

  if (action != MetaAction::Normal) {
    double when = 0.0;
    if (r.predicted_collision_time) {
      when = *r.predicted_collision_time;
    } else if (std::isfinite(r.min_ttc)) {
      when = r.min_ttc;
    }
    prompt.predicted_collision_time = when;
    prompt.text = aeb_prompt_text(action, descriptor, when);
  } else {
    prompt.agent_id.reset();
    prompt.text = aeb_prompt_text(action, descriptor, 0.0);
  }
  return prompt;
}

bool should_invoke_slow(double now, std::optional<double> last_invocation, const ArbiterConfig & cfg)
{
  if (!last_invocation) {
    return true;
  }
  return now - *last_invocation + kTimeEps >= cfg.trigger_interval;
}

BrakeCommand fuse(
  const BrakeCommand & quick, const std::optional<SlowResponse> & slow, bool deadline_met,
  const ArbiterConfig & cfg)
{
  if (!slow || !deadline_met) {
    BrakeCommand fallback = quick;
    fallback.source = BrakeSource::QuickFallback;
    return fallback;
  }
  MetaAction action = slow->meta_action;
  if (slow->brake_signal >= cfg.brake_threshold) {
    action = max_action(slow->meta_action, MetaAction::EarlyWarning);
  } else if (slow->meta_action == MetaAction::Normal) {
    action = MetaAction::Normal;
  }
  const BrakeSource source = action == quick.action ? BrakeSource::SlowConfirmed : BrakeSource::SlowAdjusted;
  return make_command(action, source, cfg);
}

Arbiter::Arbiter(ArbiterMode mode, ArbiterConfig arb_cfg, RuleConfig rule_cfg, double dt)
: mode_(mode),
  arb_cfg_(arb_cfg),
  rule_cfg_(rule_cfg),
  dt_(dt),
  deadline_ticks_(static_cast<int>(std::floor(arb_cfg.slow_deadline / dt + kTimeEps)))
{
  arb_cfg_.validate();
  if (!(dt > 0.0)) {
    throw std::invalid_argument("arbiter: dt must be positive");
  }
}

void Arbiter::drain(int tick, std::span<const SlowDelivery> replies, ArbiterOutput & out)
{
  for (const SlowDelivery & d : replies) {
    const int id = d.response.request_id;
    if (outstanding_ && outstanding_->request_id == id && d.arrival_tick - outstanding_->request_tick <= deadline_ticks_) {
      active_ = ActiveReply{d.response, outstanding_->request_tick};
      history_.push_back({id, outstanding_->request_tick, outstanding_->prompt_text, d.response.meta_action, d.response.rationale});
      while (history_.size() > kMaxHistory) {
        history_.pop_front();
      }
      outstanding_.reset();
      out.reply_events.push_back({id, ReplyOutcome::Applied});
    } else {
      out.reply_events.push_back({id, ReplyOutcome::Discarded});
    }
  }

  // The pending consultation resolves as failed once its deadline passes;
  // the previous reply stops governing at that point.
  if (outstanding_ && tick - outstanding_->request_tick > deadline_ticks_) {
    out.reply_events.push_back({outstanding_->request_id, ReplyOutcome::Expired});
    outstanding_.reset();
    active_.reset();
  }

  if (active_) {
    const double age = static_cast<double>(tick - active_->request_tick) * dt_;
    if (age > arb_cfg_.trigger_interval + arb_cfg_.slow_deadline + dt_ + kTimeEps) {
      active_.reset();
    }
  }
}

MetaAction Arbiter::filtered_quick_action(const RuleInputs & inputs, const ActiveReply & active) const
{
  const auto & dismissed = active.response.dismissed_agents;
  RuleInputs filtered = inputs;
  std::erase_if(filtered.others, [&](const AgentTrack & a) {
    return std::find(dismissed.begin(), dismissed.end(), a.id) != dismissed.end();
  });
  return classify_meta_action(evaluate(filtered, rule_cfg_), rule_cfg_);
}

ArbiterOutput Arbiter::step(int tick, const RuleInputs & inputs, std::span<const SlowDelivery> replies)
{
  ArbiterOutput out;
  const double now = static_cast<double>(tick) * dt_;

  if (mode_ == ArbiterMode::Off) {
    out.command = make_command(MetaAction::Normal, BrakeSource::Quick, arb_cfg_);
    return out;
  }

  drain(tick, replies, out);

  out.trigger = evaluate(inputs, rule_cfg_);
  out.quick_action = classify_meta_action(out.trigger, rule_cfg_);

  if (slow_enabled(mode_) && should_invoke_slow(now, last_due_, arb_cfg_)) {
    if (!last_due_) {
      last_due_ = now;
    } else {
      const double periods = std::floor((now - *last_due_ + kTimeEps) / arb_cfg_.trigger_interval);
      *last_due_ += periods * arb_cfg_.trigger_interval;
    }
    OutboundPrompt outbound{
      next_request_id_++, build_aeb_prompt(out.trigger, out.quick_action, inputs.ego_state, inputs.others, tick)};
    if (outstanding_) {
      out.reply_events.push_back({outstanding_->request_id, ReplyOutcome::Expired});
    }
    outstanding_ = Outstanding{outbound.request_id, tick, outbound.prompt.text};
    out.prompt = std::move(outbound);
  }

  if (mode_ == ArbiterMode::RuleOnly) {
    out.command = make_command(out.quick_action, BrakeSource::Quick, arb_cfg_);
    return out;
  }

  const MetaAction quick_action = mode_ == ArbiterMode::Dual ? out.quick_action : MetaAction::Normal;
  const BrakeCommand quick = make_command(quick_action, BrakeSource::Quick, arb_cfg_);
  if (!active_) {
    out.command = fuse(quick, std::nullopt, false, arb_cfg_);
    return out;
  }

  out.governing_request = active_->response.request_id;
  // Agents the reply dismissed are removed before the quick decision acts as
  // a severity floor; the reply can only lower severity through dismissal.
  MetaAction severity_floor = quick_action;
  if (mode_ == ArbiterMode::Dual && quick_action != MetaAction::Normal && !active_->response.dismissed_agents.empty()) {
    severity_floor = filtered_quick_action(inputs, *active_);
  }
  BrakeCommand fused = fuse(quick, active_->response, true, arb_cfg_);
  if (severity_floor > fused.action) {
    fused = make_command(severity_floor, BrakeSource::Quick, arb_cfg_);
  }
  out.command = fused;
  return out;
}

}  // namespace dual_aeb
