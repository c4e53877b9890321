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
#include <deque>

namespace secslice::sim {

struct LoadProxyConfig {
  std::uint32_t window_ttis = 100;
  double capacity_pkts_per_tti = 128.0;
  double control_weight = 10.0;  // one control message costs this many packets
};

/// Synthetic stand-in for core CPU load:
///   100 * min(1, (packets + weight * control msgs) / (capacity * window)).
/// Only relative comparisons between runs are meaningful.
class LoadMeter {
 public:
  explicit LoadMeter(LoadProxyConfig config = {});

  void record(std::uint64_t packets, std::uint64_t control_messages);

  /// Over the last `window` recorded TTIs (fewer if not that many yet);
  /// 0 when nothing has been recorded.
  double percent(std::uint32_t window) const;
  double percent() const { return percent(config_.window_ttis); }

  const LoadProxyConfig& config() const { return config_; }

 private:
  struct Tick {
    std::uint64_t packets;
    std::uint64_t control;
  };
  LoadProxyConfig config_;
  std::deque<Tick> history_;
  std::size_t keep_;
};

}  // namespace secslice::sim
