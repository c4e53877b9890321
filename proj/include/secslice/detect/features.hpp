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
#include <string>

namespace secslice::detect {

/// The five protocol-level fields the detector sees for each packet.
struct PacketFeatures {
  std::string protocol_type;  // tcp | udp | icmp
  std::string service;        // destination-port label, e.g. http
  std::string flag;           // connection flag state, e.g. SF, S0
  std::uint64_t src_bytes = 0;
  std::uint64_t dst_bytes = 0;

  bool operator==(const PacketFeatures&) const = default;
};

}  // namespace secslice::detect
