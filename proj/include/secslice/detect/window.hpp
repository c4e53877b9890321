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

#include <array>
#include <cstddef>
#include <cstdint>

#include "secslice/detect/features.hpp"

namespace secslice::detect {

inline constexpr std::size_t kWindowSize = 40;

/// The most recent kWindowSize classified packets of one UE.
class FeatureWindow {
 public:
  struct Entry {
    PacketFeatures features;
    bool anomalous = false;
  };

  void push(PacketFeatures features, bool anomalous);

  std::size_t size() const { return size_; }
  bool full() const { return size_ == kWindowSize; }
  std::size_t anomalous_count() const { return anomalous_; }
  std::uint64_t packets_seen() const { return seen_; }

  /// i = 0 is the oldest entry still held.
  const Entry& at(std::size_t i) const;

  /// Fraction of anomalous entries over the entries held. A full 1.0 is only
  /// reported once kWindowSize packets have been seen; before that an
  /// all-anomalous window scores anomalous / kWindowSize.
  double score() const;

 private:
  std::array<Entry, kWindowSize> ring_{};
  std::size_t head_ = 0;  // next write position
  std::size_t size_ = 0;
  std::size_t anomalous_ = 0;
  std::uint64_t seen_ = 0;
};

}  // namespace secslice::detect
