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

#include "dual_aeb/transport.hpp"

#include "dual_aeb/protocol.hpp"
#include "dual_aeb/random.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <fmt/format.h>

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cstring>
#include <stdexcept>

namespace dual_aeb
{

namespace
{

int parse_int(std::string_view text, std::string_view what)
{
  int value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw std::invalid_argument(fmt::format("invalid {}: '{}'", what, text));
  }
  return value;
}

bool send_all(int fd, std::string_view data)
{
  std::size_t sent = 0;
  while (sent < data.size()) {
    const ssize_t n = ::send(fd, data.data() + sent, data.size() - sent, MSG_NOSIGNAL);
    if (n < 0 && errno == EINTR) {
      continue;
    }
    if (n <= 0) {
      return false;
    }
    sent += static_cast<std::size_t>(n);
  }
  return true;
}

void sort_deliveries(std::vector<SlowDelivery> & out)
{
  std::stable_sort(out.begin(), out.end(), [](const SlowDelivery & a, const SlowDelivery & b) {
    return a.arrival_tick != b.arrival_tick ? a.arrival_tick < b.arrival_tick
                                            : a.response.request_id < b.response.request_id;
  });
}

}  // namespace

int LatencyModel::ticks_for(int request_id) const
{
  if (const auto it = overrides.find(request_id); it != overrides.end()) {
    return it->second;
  }
  if (kind == Kind::Constant) {
    return ticks;
  }
  const auto span = static_cast<std::uint64_t>(max_ticks - min_ticks + 1);
  const std::uint64_t h = splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(request_id)));
  return min_ticks + static_cast<int>(h % span);
}

LatencyModel LatencyModel::parse(std::string_view text)
{
  LatencyModel m;
  const auto colon = text.find(':');
  const std::string_view kind = text.substr(0, colon);
  const std::string_view rest = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
  if (kind == "constant") {
    m.kind = Kind::Constant;
    m.ticks = rest.empty() ? 1 : parse_int(rest, "latency ticks");
    if (m.ticks < 0) {
      throw std::invalid_argument("latency ticks must be >= 0");
    }
  } else if (kind == "uniform") {
    const auto sep = rest.find(':');
    if (sep == std::string_view::npos) {
      throw std::invalid_argument("uniform latency needs uniform:MIN:MAX");
    }
    m.kind = Kind::Uniform;
    m.min_ticks = parse_int(rest.substr(0, sep), "latency min");
    m.max_ticks = parse_int(rest.substr(sep + 1), "latency max");
    if (m.min_ticks < 0 || m.max_ticks < m.min_ticks) {
      throw std::invalid_argument("uniform latency needs 0 <= MIN <= MAX");
    }
  } else {
    throw std::invalid_argument(fmt::format("unknown latency model '{}'", text));
  }
  return m;
}

std::string LatencyModel::describe() const
{
  if (kind == Kind::Constant) {
    return fmt::format("constant:{}", ticks);
  }
  return fmt::format("uniform:{}:{}", min_ticks, max_ticks);
}

InProcessSlowClient::InProcessSlowClient(std::shared_ptr<const OracleKnowledge> oracle, LatencyModel latency)
: oracle_(std::move(oracle)), latency_(std::move(latency))
{
  if (!oracle_) {
    throw std::invalid_argument("InProcessSlowClient: oracle required");
  }
}

void InProcessSlowClient::submit(const SlowRequest & req)
{
  pending_.push_back({mock_respond(req, *oracle_), req.tick + latency_.ticks_for(req.request_id)});
}

std::vector<SlowDelivery> InProcessSlowClient::collect(int tick)
{
  std::vector<SlowDelivery> due;
  std::erase_if(pending_, [&](const SlowDelivery & d) {
    if (d.arrival_tick <= tick) {
      due.push_back(d);
      return true;
    }
    return false;
  });
  sort_deliveries(due);
  return due;
}

Endpoint Endpoint::parse(std::string_view text)
{
  if (text.starts_with("tcp://")) {
    text.remove_prefix(6);
  }
  const auto colon = text.rfind(':');
  if (colon == std::string_view::npos || colon == 0) {
    throw std::invalid_argument(fmt::format("endpoint must be host:port, got '{}'", text));
  }
  Endpoint e{std::string(text.substr(0, colon)), parse_int(text.substr(colon + 1), "port")};
  if (e.port <= 0 || e.port > 65535) {
    throw std::invalid_argument(fmt::format("port out of range in '{}'", text));
  }
  return e;
}

SocketSlowClient::SocketSlowClient(const Endpoint & endpoint, LatencyModel latency, std::chrono::milliseconds reply_timeout)
: latency_(std::move(latency)), reply_timeout_(reply_timeout)
{
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo * res = nullptr;
  const std::string port = std::to_string(endpoint.port);
  if (const int rc = ::getaddrinfo(endpoint.host.c_str(), port.c_str(), &hints, &res); rc != 0) {
    error_ = fmt::format("cannot resolve {}: {}", endpoint.host, ::gai_strerror(rc));
    return;
  }
  for (addrinfo * ai = res; ai != nullptr; ai = ai->ai_next) {
    const int fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
    if (fd < 0) {
      continue;
    }
    if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) {
      fd_ = fd;
      break;
    }
    error_ = fmt::format("cannot connect to {}:{}: {}", endpoint.host, endpoint.port, std::strerror(errno));
    ::close(fd);
  }
  ::freeaddrinfo(res);
  if (fd_ < 0) {
    return;
  }
  const int one = 1;
  ::setsockopt(fd_, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
  error_.clear();
  reader_ = std::thread([this] { reader_loop(); });
}

SocketSlowClient::~SocketSlowClient()
{
  if (fd_ >= 0) {
    ::shutdown(fd_, SHUT_RDWR);
  }
  if (reader_.joinable()) {
    reader_.join();
  }
  if (fd_ >= 0) {
    ::close(fd_);
  }
}

void SocketSlowClient::reader_loop()
{
  std::string buffer;
  char chunk[8192];
  while (true) {
    const ssize_t n = ::recv(fd_, chunk, sizeof(chunk), 0);
    if (n < 0 && errno == EINTR) {
      continue;
    }
    if (n <= 0) {
      break;
    }
    buffer.append(chunk, static_cast<std::size_t>(n));
    try {
      while (auto payload = take_frame(buffer)) {
        SlowResponse resp = decode_response(*payload);
        const std::lock_guard lock(mutex_);
        received_[resp.request_id] = std::move(resp);
        cv_.notify_all();
      }
    } catch (const std::exception & e) {
      const std::lock_guard lock(mutex_);
      error_ = e.what();
      break;
    }
  }
  broken_.store(true);
  const std::lock_guard lock(mutex_);
  cv_.notify_all();
}

void SocketSlowClient::submit(const SlowRequest & req)
{
  if (!connected()) {
    return;
  }
  {
    const std::lock_guard lock(mutex_);
    pending_.emplace_back(req.request_id, req.tick + latency_.ticks_for(req.request_id));
  }
  if (!send_all(fd_, frame(encode_request(req)))) {
    broken_.store(true);
  }
}

std::vector<SlowDelivery> SocketSlowClient::collect(int tick)
{
  std::vector<SlowDelivery> due;
  std::unique_lock lock(mutex_);
  for (auto it = pending_.begin(); it != pending_.end();) {
    const auto [id, arrival] = *it;
    if (arrival > tick) {
      ++it;
      continue;
    }
    cv_.wait_for(lock, reply_timeout_, [&] { return received_.contains(id) || broken_.load(); });
    if (const auto r = received_.find(id); r != received_.end()) {
      due.push_back({std::move(r->second), arrival});
      received_.erase(r);
    }
    it = pending_.erase(it);
  }
  lock.unlock();
  sort_deliveries(due);
  return due;
}

MockServer::MockServer(std::shared_ptr<const OracleKnowledge> oracle) : oracle_(std::move(oracle))
{
  if (!oracle_) {
    throw std::invalid_argument("MockServer: oracle required");
  }
}

MockServer::~MockServer()
{
  stop();
  const std::lock_guard lock(sessions_mutex_);
  for (auto & t : sessions_) {
    if (t.joinable()) {
      t.join();
    }
  }
  if (listen_fd_ >= 0) {
    ::close(listen_fd_);
  }
}

int MockServer::listen(const std::string & host, int port)
{
  listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (listen_fd_ < 0) {
    throw std::runtime_error(fmt::format("socket: {}", std::strerror(errno)));
  }
  const int one = 1;
  ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(static_cast<std::uint16_t>(port));
  const std::string ip = host == "localhost" ? "127.0.0.1" : host;
  if (::inet_pton(AF_INET, ip.c_str(), &addr.sin_addr) != 1) {
    throw std::invalid_argument(fmt::format("serve-mock: '{}' is not an IPv4 address", host));
  }
  if (::bind(listen_fd_, reinterpret_cast<sockaddr *>(&addr), sizeof(addr)) != 0) {
    throw std::runtime_error(fmt::format("bind {}:{}: {}", host, port, std::strerror(errno)));
  }
  if (::listen(listen_fd_, 16) != 0) {
    throw std::runtime_error(fmt::format("listen: {}", std::strerror(errno)));
  }
  socklen_t len = sizeof(addr);
  ::getsockname(listen_fd_, reinterpret_cast<sockaddr *>(&addr), &len);
  return ntohs(addr.sin_port);
}

void MockServer::serve()
{
  if (listen_fd_ < 0) {
    throw std::logic_error("MockServer::serve before listen");
  }
  while (!stop_.load()) {
    pollfd p{listen_fd_, POLLIN, 0};
    const int rc = ::poll(&p, 1, 100);
    if (rc <= 0) {
      continue;
    }
    const int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) {
      continue;
    }
    const int one = 1;
    ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
    const std::lock_guard lock(sessions_mutex_);
    sessions_.emplace_back([this, fd] { session(fd); });
  }
}

void MockServer::stop()
{
  stop_.store(true);
}

std::string MockServer::handle_payload(const OracleKnowledge & oracle, std::string_view payload, int & last_request_id)
{
  SlowResponse resp;
  try {
    const SlowRequest req = decode_request(payload);
    resp.request_id = req.request_id;
    if (req.request_id <= last_request_id) {
      resp.rationale = fmt::format(
        "Protocol error: request_id {} does not increase on this session (last {}).", req.request_id, last_request_id);
    } else {
      last_request_id = req.request_id;
      resp = mock_respond(req, oracle);
    }
  } catch (const ProtocolError & e) {
    resp.request_id = 0;
    resp.rationale = fmt::format("Protocol error: {}", e.what());
  }
  return encode_response(resp);
}

void MockServer::session(int fd)
{
  std::string buffer;
  char chunk[8192];
  int last_request_id = 0;
  while (!stop_.load()) {
    pollfd p{fd, POLLIN, 0};
    if (::poll(&p, 1, 100) <= 0) {
      continue;
    }
    const ssize_t n = ::recv(fd, chunk, sizeof(chunk), 0);
    if (n < 0 && errno == EINTR) {
      continue;
    }
    if (n <= 0) {
      break;
    }
    buffer.append(chunk, static_cast<std::size_t>(n));
    try {
      bool ok = true;
      while (auto payload = take_frame(buffer)) {
        if (!send_all(fd, frame(handle_payload(*oracle_, *payload, last_request_id)))) {
          ok = false;
          break;
        }
      }
      if (!ok) {
        break;
      }
    } catch (const ProtocolError &) {
      break;  // oversized frame: the stream cannot be resynchronized
    }
  }
  ::close(fd);
}

}  // namespace dual_aeb
