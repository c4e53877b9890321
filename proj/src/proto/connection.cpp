// Copyright 2026 The secslice Authors
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

#include "secslice/proto/connection.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <system_error>

namespace secslice::proto {
namespace {

using Kind = ProtocolError::Kind;

class MemoryEnd : public Connection {
 public:
  MemoryEnd(std::shared_ptr<Bytes> inbound, std::shared_ptr<Bytes> outbound)
      : inbound_(std::move(inbound)), outbound_(std::move(outbound)) {}

  void write(std::span<const std::uint8_t> bytes) override {
    outbound_->insert(outbound_->end(), bytes.begin(), bytes.end());
  }

  std::string read_payload() override {
    if (!inbound_->empty()) {
      decoder_.feed(*inbound_);
      inbound_->clear();
    }
    if (auto p = decoder_.next_payload()) return std::move(*p);
    throw ProtocolError(Kind::kClosed, "in-memory channel has no complete frame");
  }

 private:
  std::shared_ptr<Bytes> inbound_;
  std::shared_ptr<Bytes> outbound_;
  FrameDecoder decoder_;
};

[[noreturn]] void sys_fail(const char* what) {
  throw std::system_error(errno, std::generic_category(), what);
}

}  // namespace

std::pair<std::unique_ptr<Connection>, std::unique_ptr<Connection>> make_memory_pair() {
  auto a_to_b = std::make_shared<Bytes>();
  auto b_to_a = std::make_shared<Bytes>();
  return {std::make_unique<MemoryEnd>(b_to_a, a_to_b),
          std::make_unique<MemoryEnd>(a_to_b, b_to_a)};
}

SocketConnection::SocketConnection(int fd) : fd_(fd) {
  int one = 1;
  ::setsockopt(fd_, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
}

SocketConnection::~SocketConnection() { close_fd(fd_); }

void SocketConnection::write(std::span<const std::uint8_t> bytes) {
  std::size_t off = 0;
  while (off < bytes.size()) {
    const auto n = ::send(fd_, bytes.data() + off, bytes.size() - off, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw ProtocolError(Kind::kClosed, std::string("send failed: ") + std::strerror(errno));
    }
    off += static_cast<std::size_t>(n);
  }
}

std::string SocketConnection::read_payload() {
  std::uint8_t buf[1 << 16];
  for (;;) {
    if (auto p = decoder_.next_payload()) return std::move(*p);
    const auto n = ::recv(fd_, buf, sizeof buf, 0);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw ProtocolError(Kind::kClosed, std::string("recv failed: ") + std::strerror(errno));
    }
    if (n == 0) throw ProtocolError(Kind::kClosed, "peer closed the connection");
    decoder_.feed(std::span<const std::uint8_t>(buf, static_cast<std::size_t>(n)));
  }
}

Listener listen_loopback() {
  const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd < 0) sys_fail("socket");
  int one = 1;
  ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  addr.sin_port = 0;
  if (::bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) < 0) {
    close_fd(fd);
    sys_fail("bind");
  }
  if (::listen(fd, 4) < 0) {
    close_fd(fd);
    sys_fail("listen");
  }
  socklen_t len = sizeof addr;
  if (::getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len) < 0) {
    close_fd(fd);
    sys_fail("getsockname");
  }
  return {fd, ntohs(addr.sin_port)};
}

int accept_one(int listen_fd) {
  for (;;) {
    const int fd = ::accept(listen_fd, nullptr, nullptr);
    if (fd >= 0) return fd;
    if (errno != EINTR) sys_fail("accept");
  }
}

int connect_loopback(std::uint16_t port) {
  const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd < 0) sys_fail("socket");
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  addr.sin_port = htons(port);
  for (;;) {
    if (::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) == 0) return fd;
    if (errno != EINTR) {
      close_fd(fd);
      sys_fail("connect");
    }
  }
}

void close_fd(int fd) {
  if (fd >= 0) ::close(fd);
}

void handshake_initiate(Connection& conn) {
  conn.send(Hello{});
  auto reply = conn.recv();
  if (!std::holds_alternative<Hello>(reply)) {
    throw ProtocolError(Kind::kHandshake,
                        "expected Hello, got " + std::string(type_tag(reply)));
  }
}

void handshake_accept(Connection& conn) {
  ControlMessage first;
  try {
    first = conn.recv();
  } catch (const ProtocolError& e) {
    if (e.kind() == Kind::kHandshake) conn.send(Error{e.what()});
    throw;
  }
  if (!std::holds_alternative<Hello>(first)) {
    conn.send(Error{"expected Hello first"});
    throw ProtocolError(Kind::kHandshake,
                        "expected Hello, got " + std::string(type_tag(first)));
  }
  conn.send(Hello{});
}

}  // namespace secslice::proto
