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

#include "dual_aeb/protocol.hpp"

#include <fmt/format.h>

#include <cmath>
#include <limits>

namespace dual_aeb
{

using nlohmann::json;

ProtocolError::ProtocolError(std::string field, const std::string & what)
: std::runtime_error(fmt::format("{}: {}", field, what)), field_(std::move(field))
{
}

namespace
{

std::string join_path(const std::string & base, std::string_view key)
{
  return base.empty() ? std::string(key) : fmt::format("{}.{}", base, key);
}

const json & field(const json & obj, const std::string & base, std::string_view key)
{
  if (!obj.is_object()) {
    throw ProtocolError(base.empty() ? "<root>" : base, "expected an object");
  }
  const auto it = obj.find(std::string(key));
  if (it == obj.end()) {
    throw ProtocolError(join_path(base, key), "missing field");
  }
  return *it;
}

const json * optional_field(const json & obj, std::string_view key)
{
  const auto it = obj.find(std::string(key));
  return it == obj.end() || it->is_null() ? nullptr : &*it;
}

double get_number(const json & v, const std::string & path)
{
  if (!v.is_number()) {
    throw ProtocolError(path, "expected a number");
  }
  const double d = v.get<double>();
  if (!std::isfinite(d)) {
    throw ProtocolError(path, "expected a finite number");
  }
  return d;
}

int get_int(const json & v, const std::string & path)
{
  if (!v.is_number_integer()) {
    throw ProtocolError(path, "expected an integer");
  }
  const auto i = v.get<std::int64_t>();
  if (i < std::numeric_limits<int>::min() || i > std::numeric_limits<int>::max()) {
    throw ProtocolError(path, "integer out of range");
  }
  return static_cast<int>(i);
}

std::string get_string(const json & v, const std::string & path)
{
  if (!v.is_string()) {
    throw ProtocolError(path, "expected a string");
  }
  return v.get<std::string>();
}

MetaAction get_action(const json & v, const std::string & path)
{
  const auto action = parse_meta_action(get_string(v, path));
  if (!action) {
    throw ProtocolError(path, "unknown meta action");
  }
  return *action;
}

const json & get_array(const json & v, const std::string & path)
{
  if (!v.is_array()) {
    throw ProtocolError(path, "expected an array");
  }
  return v;
}

#define DUAL_AEB_FIELD(obj, base, key) field(obj, base, key), join_path(base, key)

json prompt_to_json(const AebPrompt & p)
{
  json j = {{"text", p.text}, {"initial_action", to_string(p.initial_action)}, {"ego_speed", p.ego_speed}, {"tick", p.tick}};
  if (p.agent_id) {
    j["agent_id"] = *p.agent_id;
  }
  if (p.predicted_collision_time) {
    j["predicted_collision_time"] = *p.predicted_collision_time;
  }
  return j;
}

AebPrompt prompt_from_json(const json & j, const std::string & base)
{
  AebPrompt p;
  p.text = get_string(DUAL_AEB_FIELD(j, base, "text"));
  p.initial_action = get_action(DUAL_AEB_FIELD(j, base, "initial_action"));
  p.ego_speed = get_number(DUAL_AEB_FIELD(j, base, "ego_speed"));
  p.tick = get_int(DUAL_AEB_FIELD(j, base, "tick"));
  if (const json * v = optional_field(j, "agent_id")) {
    p.agent_id = get_string(*v, join_path(base, "agent_id"));
  }
  if (const json * v = optional_field(j, "predicted_collision_time")) {
    p.predicted_collision_time = get_number(*v, join_path(base, "predicted_collision_time"));
  }
  return p;
}

json scene_to_json(const SceneSummary & s)
{
  json agents = json::array();
  for (const auto & a : s.agents) {
    agents.push_back(
      {{"id", a.id},
       {"descriptor", a.descriptor},
       {"category", a.category},
       {"box_2d", {a.box_2d.x_min, a.box_2d.y_min, a.box_2d.x_max, a.box_2d.y_max}},
       {"distance", a.distance},
       {"signal", a.signal}});
  }
  return {
    {"ego",
     {{"x", s.ego.x}, {"y", s.ego.y}, {"heading", s.ego.heading}, {"speed", s.ego.speed}, {"route_s", s.ego.route_s}}},
    {"agents", agents}};
}

SceneSummary scene_from_json(const json & j, const std::string & base)
{
  SceneSummary s;
  const std::string ego_path = join_path(base, "ego");
  const json & ego = field(j, base, "ego");
  s.ego.x = get_number(DUAL_AEB_FIELD(ego, ego_path, "x"));
  s.ego.y = get_number(DUAL_AEB_FIELD(ego, ego_path, "y"));
  s.ego.heading = get_number(DUAL_AEB_FIELD(ego, ego_path, "heading"));
  s.ego.speed = get_number(DUAL_AEB_FIELD(ego, ego_path, "speed"));
  s.ego.route_s = get_number(DUAL_AEB_FIELD(ego, ego_path, "route_s"));
  const std::string agents_path = join_path(base, "agents");
  const json & agents = get_array(field(j, base, "agents"), agents_path);
  for (std::size_t i = 0; i < agents.size(); ++i) {
    const std::string ap = fmt::format("{}[{}]", agents_path, i);
    const json & a = agents[i];
    SceneAgent agent;
    agent.id = get_string(DUAL_AEB_FIELD(a, ap, "id"));
    agent.descriptor = get_string(DUAL_AEB_FIELD(a, ap, "descriptor"));
    agent.category = get_string(DUAL_AEB_FIELD(a, ap, "category"));
    const std::string bp = join_path(ap, "box_2d");
    const json & box = get_array(field(a, ap, "box_2d"), bp);
    if (box.size() != 4) {
      throw ProtocolError(bp, "expected [x_min, y_min, x_max, y_max]");
    }
    agent.box_2d = {get_number(box[0], bp), get_number(box[1], bp), get_number(box[2], bp), get_number(box[3], bp)};
    if (!(agent.box_2d.x_min < agent.box_2d.x_max) || !(agent.box_2d.y_min < agent.box_2d.y_max)) {
      throw ProtocolError(bp, "box must satisfy x_min < x_max and y_min < y_max");
    }
    agent.distance = get_number(DUAL_AEB_FIELD(a, ap, "distance"));
    agent.signal = get_string(DUAL_AEB_FIELD(a, ap, "signal"));
    s.agents.push_back(std::move(agent));
  }
  return s;
}

json parse_payload(std::string_view payload)
{
  try {
    return json::parse(payload);
  } catch (const json::parse_error & e) {
    throw ProtocolError("<root>", fmt::format("invalid JSON: {}", e.what()));
  }
}

}  // namespace

json request_to_json(const SlowRequest & req)
{
  json history = json::array();
  for (const auto & h : req.history) {
    history.push_back(
      {{"request_id", h.request_id},
       {"tick", h.tick},
       {"prompt", h.prompt},
       {"meta_action", to_string(h.meta_action)},
       {"rationale", h.rationale}});
  }
  return {
    {"request_id", req.request_id},
    {"tick", req.tick},
    {"prompt", prompt_to_json(req.prompt)},
    {"scene_summary", scene_to_json(req.scene_summary)},
    {"history", history}};
}

json response_to_json(const SlowResponse & resp)
{
  json j = {
    {"request_id", resp.request_id},
    {"meta_action", to_string(resp.meta_action)},
    {"rationale", resp.rationale},
    {"brake_signal", resp.brake_signal}};
  if (!resp.dismissed_agents.empty()) {
    j["dismissed_agents"] = resp.dismissed_agents;
  }
  return j;
}

SlowRequest request_from_json(const json & j)
{
  SlowRequest req;
  req.request_id = get_int(DUAL_AEB_FIELD(j, "", "request_id"));
  req.tick = get_int(DUAL_AEB_FIELD(j, "", "tick"));
  req.prompt = prompt_from_json(field(j, "", "prompt"), "prompt");
  req.scene_summary = scene_from_json(field(j, "", "scene_summary"), "scene_summary");
  const json & history = get_array(field(j, "", "history"), "history");
  for (std::size_t i = 0; i < history.size(); ++i) {
    const std::string hp = fmt::format("history[{}]", i);
    const json & h = history[i];
    Exchange ex;
    ex.request_id = get_int(DUAL_AEB_FIELD(h, hp, "request_id"));
    ex.tick = get_int(DUAL_AEB_FIELD(h, hp, "tick"));
    ex.prompt = get_string(DUAL_AEB_FIELD(h, hp, "prompt"));
    ex.meta_action = get_action(DUAL_AEB_FIELD(h, hp, "meta_action"));
    ex.rationale = get_string(DUAL_AEB_FIELD(h, hp, "rationale"));
    req.history.push_back(std::move(ex));
  }
  return req;
}

SlowResponse response_from_json(const json & j)
{
  SlowResponse resp;
  resp.request_id = get_int(DUAL_AEB_FIELD(j, "", "request_id"));
  resp.meta_action = get_action(DUAL_AEB_FIELD(j, "", "meta_action"));
  resp.rationale = get_string(DUAL_AEB_FIELD(j, "", "rationale"));
  resp.brake_signal = get_number(DUAL_AEB_FIELD(j, "", "brake_signal"));
  if (resp.brake_signal < 0.0 || resp.brake_signal > 1.0) {
    throw ProtocolError("brake_signal", "must lie in [0, 1]");
  }
  if (const json * v = optional_field(j, "dismissed_agents")) {
    const json & arr = get_array(*v, "dismissed_agents");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      resp.dismissed_agents.push_back(get_string(arr[i], fmt::format("dismissed_agents[{}]", i)));
    }
  }
  return resp;
}

#undef DUAL_AEB_FIELD

std::string encode_request(const SlowRequest & req)
{
  return request_to_json(req).dump();
}

std::string encode_response(const SlowResponse & resp)
{
  return response_to_json(resp).dump();
}

SlowRequest decode_request(std::string_view payload)
{
  return request_from_json(parse_payload(payload));
}

SlowResponse decode_response(std::string_view payload)
{
  return response_from_json(parse_payload(payload));
}

std::string frame(std::string_view payload)
{
  if (payload.size() > kMaxFrameBytes) {
    throw std::length_error("frame payload too large");
  }
  const auto n = static_cast<std::uint32_t>(payload.size());
  std::string out;
  out.reserve(payload.size() + 4);
  out.push_back(static_cast<char>((n >> 24U) & 0xFFU));
  out.push_back(static_cast<char>((n >> 16U) & 0xFFU));
  out.push_back(static_cast<char>((n >> 8U) & 0xFFU));
  out.push_back(static_cast<char>(n & 0xFFU));
  out.append(payload);
  return out;
}

std::optional<std::string> take_frame(std::string & buffer)
{
  if (buffer.size() < 4) {
    return std::nullopt;
  }
  std::uint32_t n = 0;
  for (int i = 0; i < 4; ++i) {
    n = (n << 8U) | static_cast<unsigned char>(buffer[static_cast<std::size_t>(i)]);
  }
  if (n > kMaxFrameBytes) {
    throw ProtocolError("<frame>", fmt::format("frame of {} bytes exceeds the limit", n));
  }
  if (buffer.size() < 4 + static_cast<std::size_t>(n)) {
    return std::nullopt;
  }
  std::string payload = buffer.substr(4, n);
  buffer.erase(0, 4 + static_cast<std::size_t>(n));
  return payload;
}

}  // namespace dual_aeb
