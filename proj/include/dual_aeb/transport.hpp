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

#ifndef DUAL_AEB__TRANSPORT_HPP_
#define DUAL_AEB__TRANSPORT_HPP_

#include "dual_aeb/arbiter.hpp"
#include "dual_aeb/messages.hpp"
#include "dual_aeb/slow_module.hpp"

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace dual_aeb
{

inline constexpr std::string_view kSlowEndpointEnv = "DUAL_AEB_SLOW_ENDPOINT";

/// Simulated reply delay in ticks, decided per request id so that it does not
/// depend on wall-clock timing or on call order.
struct LatencyModel
{
  enum class Kind { Constant, Uniform };

  Kind kind{Kind::Constant};
  int ticks{1};
  int min_ticks{0};
  int max_ticks{2};
  std::uint64_t seed{0};
  std::map<int, int> overrides;  // request_id -> ticks

  int ticks_for(int request_id) const;

  /// "constant:N" or "uniform:MIN:MAX". Throws std::invalid_argument.
  static LatencyModel parse(std::string_view text);
  std::string describe() const;
};

/// Mailbox between the arbiter and a slow module. submit() never waits for
/// the reply; collect() hands over the replies due by `tick`.
class SlowClient
{
public:
  virtual ~SlowClient() = default;
  virtual void submit(const SlowRequest & req) = 0;
  virtual std::vector<SlowDelivery> collect(int tick) = 0;
};

class InProcessSlowClient : public SlowClient
{
public:
  InProcessSlowClient(std::shared_ptr<const OracleKnowledge> oracle, LatencyModel latency);

  void submit(const SlowRequest & req) override;
  std::vector<SlowDelivery> collect(int tick) override;

private:
  std::shared_ptr<const OracleKnowledge> oracle_;
  LatencyModel latency_;
  std::vector<SlowDelivery> pending_;
};

struct Endpoint
{
  std::string host;
  int port{0};

  /// "host:port", optionally prefixed with "tcp://".
  static Endpoint parse(std::string_view text);
};

/// Length-prefixed JSON over TCP. Arrival ticks follow the latency model, so
/// a run is reproducible regardless of network timing; collect() waits up to
/// `reply_timeout` of wall time for a reply that is due in simulation time and
/// drops it if it never comes. An unreachable endpoint yields no replies.
class SocketSlowClient : public SlowClient
{
public:
  SocketSlowClient(
    const Endpoint & endpoint, LatencyModel latency,
    std::chrono::milliseconds reply_timeout = std::chrono::milliseconds(10000));
  ~SocketSlowClient() override;

  SocketSlowClient(const SocketSlowClient &) = delete;
  SocketSlowClient & operator=(const SocketSlowClient &) = delete;

  bool connected() const { return fd_ >= 0 && !broken_.load(); }
  const std::string & last_error() const { return error_; }

  void submit(const SlowRequest & req) override;
  std::vector<SlowDelivery> collect(int tick) override;

private:
  void reader_loop();

  LatencyModel latency_;
  std::chrono::milliseconds reply_timeout_;
  int fd_{-1};
  std::string error_;
  std::atomic<bool> broken_{false};
  std::thread reader_;
  std::mutex mutex_;
  std::condition_variable cv_;
  std::map<int, SlowResponse> received_;
  std::vector<std::pair<int, int>> pending_;  // (request_id, arrival_tick)
};

/// Serves the mock over TCP. Each connection is an independent session whose
/// request ids must strictly increase.
class MockServer
{
public:
  explicit MockServer(std::shared_ptr<const OracleKnowledge> oracle);
  ~MockServer();

  MockServer(const MockServer &) = delete;
  MockServer & operator=(const MockServer &) = delete;

  /// Binds and listens; port 0 picks a free port. Returns the bound port.
  int listen(const std::string & host, int port);
  /// Blocks until stop() is called.
  void serve();
  void stop();

  /// Answers one decoded payload the way a session would.
  static std::string handle_payload(const OracleKnowledge & oracle, std::string_view payload, int & last_request_id);

private:
  void session(int fd);

  std::shared_ptr<const OracleKnowledge> oracle_;
  int listen_fd_{-1};
  std::atomic<bool> stop_{false};
  std::mutex sessions_mutex_;
  std::vector<std::thread> sessions_;
};

}  // namespace dual_aeb

#endif  // DUAL_AEB__TRANSPORT_HPP_
