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

#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <utility>

#include "secslice/proto/codec.hpp"

namespace secslice::proto {

/// One end of an ordered, reliable frame stream.
class Connection {
 public:
  virtual ~Connection() = default;

  virtual void write(std::span<const std::uint8_t> bytes) = 0;
  /// Next complete frame payload. Blocks on sockets; a memory end with
  /// nothing buffered throws ProtocolError(kClosed).
  virtual std::string read_payload() = 0;

  void send(const ControlMessage& msg) { write(encode_frame(msg)); }
  void send_payload(std::string_view payload) { write(frame_payload(payload)); }
  ControlMessage recv() { return decode_body(read_payload()); }
};

/// Two connected in-memory ends. Bytes still go through the frame codec.
std::pair<std::unique_ptr<Connection>, std::unique_ptr<Connection>> make_memory_pair();

/// TCP stream over an already connected descriptor; closes it on destruction.
class SocketConnection : public Connection {
 public:
  explicit SocketConnection(int fd);
  ~SocketConnection() override;
  SocketConnection(const SocketConnection&) = delete;
  SocketConnection& operator=(const SocketConnection&) = delete;

  void write(std::span<const std::uint8_t> bytes) override;
  std::string read_payload() override;

 private:
  int fd_;
  FrameDecoder decoder_;
};

struct Listener {
  int fd = -1;
  std::uint16_t port = 0;
};

/// Listening socket on 127.0.0.1 with a kernel-chosen port.
Listener listen_loopback();
int accept_one(int listen_fd);
int connect_loopback(std::uint16_t port);
void close_fd(int fd);

/// Sends Hello and expects Hello back.
void handshake_initiate(Connection& conn);
/// Expects Hello and answers with Hello. On a version mismatch an Error is
/// sent before the ProtocolError(kHandshake) propagates.
void handshake_accept(Connection& conn);

}  // namespace secslice::proto
