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

#include "secslice/sim/load.hpp"

#include <algorithm>

#include "secslice/common/error.hpp"

namespace secslice::sim {

LoadMeter::LoadMeter(LoadProxyConfig config)
    : config_(config), keep_(std::max<std::size_t>(config.window_ttis, 1) * 8) {
  if (config_.window_ttis == 0) throw ConfigError("load_proxy.window_ttis must be >= 1");
  if (!(config_.capacity_pkts_per_tti > 0.0)) {
    throw ConfigError("load_proxy.capacity_pkts_per_tti must be > 0");
  }
}

void LoadMeter::record(std::uint64_t packets, std::uint64_t control_messages) {
  history_.push_back({packets, control_messages});
  if (history_.size() > keep_) history_.pop_front();
}

double LoadMeter::percent(std::uint32_t window) const {
  if (window == 0) throw ConfigError("load proxy window must be >= 1 TTI");
  if (history_.empty()) return 0.0;
  const auto n = std::min<std::size_t>(window, history_.size());
  double work = 0.0;
  for (auto it = history_.end() - static_cast<std::ptrdiff_t>(n); it != history_.end(); ++it) {
    work += static_cast<double>(it->packets) +
            config_.control_weight * static_cast<double>(it->control);
  }
  const double cap = config_.capacity_pkts_per_tti * static_cast<double>(n);
  return 100.0 * std::min(1.0, work / cap);
}

}  // namespace secslice::sim
