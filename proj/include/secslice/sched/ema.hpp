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

#include "secslice/sched/allocation.hpp"

namespace secslice::sched {

inline constexpr double kDefaultEmaAlpha = 0.01;

/// Folds one TTI of service into the slice's moving averages.
///
/// The instantaneous rate is delivered_bits over one TTI, in Mbit/s; the
/// instantaneous share is used_prbs / grid_size. Both use the same alpha.
/// alpha == 1 is accepted and makes the EMA track the last sample. Throws
/// ConfigError for alpha outside (0, 1].
SliceRuntimeState update_ema(SliceRuntimeState state, double delivered_bits,
                             std::uint32_t used_prbs, std::uint32_t grid_size,
                             double alpha, double tti_ms = 1.0);

/// Mbit/s carried by `bits` spread over one TTI of `tti_ms` milliseconds.
inline double bits_to_mbps(double bits, double tti_ms) {
  return bits / (tti_ms * 1000.0);
}

}  // namespace secslice::sched
