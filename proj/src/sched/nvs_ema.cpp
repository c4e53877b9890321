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

#include <algorithm>

#include "secslice/common/error.hpp"
#include "secslice/sched/ema.hpp"
#include "secslice/sched/nvs.hpp"

namespace secslice::sched {

std::uint32_t PrbAllocation::slice_total() const {
  std::uint32_t n = 0;
  for (const auto& [id, c] : per_slice) n += c;
  return n;
}

std::uint32_t PrbAllocation::ue_total() const {
  std::uint32_t n = 0;
  for (const auto& [id, c] : per_ue) n += c;
  return n;
}

double nvs_priority(const SliceConfig& config, const SliceRuntimeState& state) {
  if (const auto* rate = std::get_if<NvsRatePolicy>(&config.policy)) {
    const double delivered = std::min(state.ema_rate_mbps, rate->ref_rate_mbps);
    return rate->min_rate_mbps / std::max(delivered, kNvsEpsilon);
  }
  if (const auto* cap = std::get_if<NvsCapacityPolicy>(&config.policy)) {
    return cap->share / std::max(state.ema_prb_share, kNvsEpsilon);
  }
  throw PolicyMismatch("nvs_priority on " + policy_name(config.policy) +
                       " slice " + std::to_string(config.id));
}

SliceRuntimeState update_ema(SliceRuntimeState state, double delivered_bits,
                             std::uint32_t used_prbs, std::uint32_t grid_size,
                             double alpha, double tti_ms) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw ConfigError("ema alpha must be in (0, 1], got " + std::to_string(alpha));
  }
  if (grid_size == 0) throw ConfigError("grid_size must be >= 1");
  const double rate = bits_to_mbps(std::max(delivered_bits, 0.0), tti_ms);
  const double share = std::min(1.0, static_cast<double>(used_prbs) / grid_size);
  state.ema_rate_mbps = (1.0 - alpha) * state.ema_rate_mbps + alpha * rate;
  state.ema_prb_share = (1.0 - alpha) * state.ema_prb_share + alpha * share;
  return state;
}

}  // namespace secslice::sched
