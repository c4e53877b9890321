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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "secslice/proto/message.hpp"

namespace secslice::proto {

/// Frames carry a 4-byte big-endian length, then that many bytes of UTF-8
/// JSON with sorted keys.
inline constexpr std::size_t kFrameHeaderBytes = 4;
inline constexpr std::uint32_t kMaxPayloadBytes = 1u << 20;

using Bytes = std::vector<std::uint8_t>;

class ProtocolError : public std::runtime_error {
 public:
  enum class Kind { kOversize, kUnknownType, kMalformed, kHandshake, kEncode, kClosed };

  ProtocolError(Kind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// Canonical body text of a message (no framing).
std::string encode_body(const ControlMessage& msg);

/// Parses one body. A Hello with a version other than "1" raises kHandshake;
/// a missing or mistyped field raises kMalformed naming the field.
ControlMessage decode_body(std::string_view body);

/// Length-prefixes an arbitrary payload. kEncode if over kMaxPayloadBytes.
Bytes frame_payload(std::string_view payload);

/// Validates `msg` (ThrottleCmd cap in [0,1], finite numbers) and frames it.
Bytes encode_frame(const ControlMessage& msg);

struct NeedMoreData {};

template <class T>
struct Decoded {
  T value;
  std::size_t consumed = 0;
};

/// Pulls one payload off the front of `bytes`, or NeedMoreData when the
/// frame is not complete yet. kOversize as soon as a header declares more
/// than kMaxPayloadBytes.
std::variant<Decoded<std::string>, NeedMoreData> split_frame(
    std::span<const std::uint8_t> bytes);

/// split_frame + decode_body.
std::variant<Decoded<ControlMessage>, NeedMoreData> decode_frame(
    std::span<const std::uint8_t> bytes);

/// Accumulates a byte stream and hands out complete payloads in order.
/// After any error the decoder is poisoned; the connection must be torn down.
class FrameDecoder {
 public:
  void feed(std::span<const std::uint8_t> bytes);
  /// Next complete payload, if any.
  std::optional<std::string> next_payload();
  std::optional<ControlMessage> next_message();
  std::size_t buffered() const { return buf_.size() - pos_; }

 private:
  Bytes buf_;
  std::size_t pos_ = 0;
  bool failed_ = false;
};

}  // namespace secslice::proto
