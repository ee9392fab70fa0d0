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

#ifndef DUAL_AEB__ARBITER_HPP_
#define DUAL_AEB__ARBITER_HPP_

#include "dual_aeb/messages.hpp"
#include "dual_aeb/rule_aeb.hpp"

#include <deque>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dual_aeb
{

enum class BrakeSource { Quick, SlowConfirmed, SlowAdjusted, QuickFallback };

std::string_view to_string(BrakeSource source);
std::optional<BrakeSource> parse_brake_source(std::string_view text);

struct BrakeCommand
{
  MetaAction action{MetaAction::Normal};
  double decel{0.0};  // m/s^2, applied as deceleration
  BrakeSource source{BrakeSource::Quick};

  friend bool operator==(const BrakeCommand &, const BrakeCommand &) = default;
};

struct ArbiterConfig
{
  double trigger_interval{2.5};  // s between slow consultations
  double slow_deadline{0.5};     // s of sim time a reply may take
  double brake_threshold{0.5};
  double decel_emergency{8.0};
  double decel_warning{3.0};
  double decel_max{8.0};

  /// Throws std::invalid_argument on out-of-range values.
  void validate() const;
};

/// Which decision paths are live. Off disables both.
enum class ArbiterMode { Off, RuleOnly, SlowOnly, Dual };

std::string_view to_string(ArbiterMode mode);
std::optional<ArbiterMode> parse_arbiter_mode(std::string_view text);

inline bool quick_enabled(ArbiterMode m) { return m == ArbiterMode::RuleOnly || m == ArbiterMode::Dual; }
inline bool slow_enabled(ArbiterMode m) { return m == ArbiterMode::SlowOnly || m == ArbiterMode::Dual; }

double decel_for(MetaAction action, const ArbiterConfig & cfg);

BrakeCommand make_command(MetaAction action, BrakeSource source, const ArbiterConfig & cfg);

/// "the black vehicle on the left" from either the track's descriptor or an
/// id such as "black_vehicle_left".
std::string describe_agent(const AgentTrack & track);

/// Text of an initial decision. `seconds` is ignored for Normal.
std::string aeb_prompt_text(MetaAction action, std::string_view descriptor, double seconds);

AebPrompt build_aeb_prompt(
  const TriggerResult & r, MetaAction action, const VehicleState & ego, std::span<const AgentTrack> agents,
  int tick);

bool should_invoke_slow(double now, std::optional<double> last_invocation, const ArbiterConfig & cfg);

/// Confirm-or-adjust fusion of the quick command with a slow reply.
BrakeCommand fuse(
  const BrakeCommand & quick, const std::optional<SlowResponse> & slow, bool deadline_met,
  const ArbiterConfig & cfg);

enum class ReplyOutcome { Applied, Discarded, Expired };

std::string_view to_string(ReplyOutcome outcome);

struct ReplyEvent
{
  int request_id{0};
  ReplyOutcome outcome{ReplyOutcome::Applied};
};

/// A slow reply as delivered by the mailbox at a tick boundary.
struct SlowDelivery
{
  SlowResponse response;
  int arrival_tick{0};
};

struct OutboundPrompt
{
  int request_id{0};
  AebPrompt prompt;
};

struct ArbiterOutput
{
  BrakeCommand command;
  MetaAction quick_action{MetaAction::Normal};
  TriggerResult trigger;
  std::optional<OutboundPrompt> prompt;
  std::vector<ReplyEvent> reply_events;
  std::optional<int> governing_request;
};

/// Tick-driven dual-path controller. One owner advances it; it never waits on
/// the slow path. Replies are handed in at tick boundaries.
class Arbiter
{
public:
  Arbiter(ArbiterMode mode, ArbiterConfig arb_cfg, RuleConfig rule_cfg, double dt);

  ArbiterOutput step(int tick, const RuleInputs & inputs, std::span<const SlowDelivery> replies);

  ArbiterMode mode() const { return mode_; }
  int deadline_ticks() const { return deadline_ticks_; }
  std::vector<Exchange> history() const { return {history_.begin(), history_.end()}; }

private:
  struct Outstanding
  {
    int request_id;
    int request_tick;
    std::string prompt_text;
  };
  struct ActiveReply
  {
    SlowResponse response;
    int request_tick;
  };

  void drain(int tick, std::span<const SlowDelivery> replies, ArbiterOutput & out);
  MetaAction filtered_quick_action(const RuleInputs & inputs, const ActiveReply & active) const;

  ArbiterMode mode_;
  ArbiterConfig arb_cfg_;
  RuleConfig rule_cfg_;
  double dt_;
  int deadline_ticks_;

  std::optional<double> last_due_;
  int next_request_id_{1};
  std::optional<Outstanding> outstanding_;
  std::optional<ActiveReply> active_;
  std::deque<Exchange> history_;
};

}  // namespace dual_aeb

#endif  // DUAL_AEB__ARBITER_HPP_
