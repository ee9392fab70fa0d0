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

#ifndef DUAL_AEB__PROTOCOL_HPP_
#define DUAL_AEB__PROTOCOL_HPP_

#include "dual_aeb/messages.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace dual_aeb
{

inline constexpr std::uint32_t kMaxFrameBytes = 16U << 20U;

/// Malformed payload. field() is the path of the first offending field,
/// e.g. "brake_signal" or "scene_summary.agents[2].box_2d".
class ProtocolError : public std::runtime_error
{
public:
  ProtocolError(std::string field, const std::string & what);
  const std::string & field() const { return field_; }

private:
  std::string field_;
};

nlohmann::json request_to_json(const SlowRequest & req);
nlohmann::json response_to_json(const SlowResponse & resp);
SlowRequest request_from_json(const nlohmann::json & j);
SlowResponse response_from_json(const nlohmann::json & j);

/// UTF-8 JSON payloads without framing.
std::string encode_request(const SlowRequest & req);
std::string encode_response(const SlowResponse & resp);
SlowRequest decode_request(std::string_view payload);
SlowResponse decode_response(std::string_view payload);

/// 4-byte big-endian length followed by the payload.
std::string frame(std::string_view payload);

/// Pops one complete frame from the front of `buffer` if available.
std::optional<std::string> take_frame(std::string & buffer);

}  // namespace dual_aeb

#endif  // DUAL_AEB__PROTOCOL_HPP_
