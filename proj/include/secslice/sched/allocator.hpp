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
#include <map>
#include <span>

#include "secslice/sched/allocation.hpp"
#include "secslice/sched/ema.hpp"
#include "secslice/sched/slice_config.hpp"

namespace secslice::sched {

struct AllocatorOptions {
  double bits_per_prb = 1132.0;
  std::uint32_t nvs_quantum_prbs = 1;
  double ema_alpha = kDefaultEmaAlpha;
  double tti_ms = 1.0;
};

/// Slice-level PRB split for one TTI.
///
/// Order of service:
///   1. Static slices take up to their own prb_set; idle set members are not
///      lent out.
///   2. EDF slices take what their backlog needs from the shared pool,
///      lowest slice id first.
///   3. The rest of the pool goes to backlogged NVS slices one quantum at a
///      time, always to the slice with the highest nvs_priority under its
///      provisional (in-TTI) state; ties to the lowest id.
///
/// Slices with zero backlog get zero PRBs. `per_ue` is left empty.
/// Throws ConfigError on duplicate slice ids, a demand for an unknown slice,
/// grid_size == 0, or any slice invariant violation.
PrbAllocation allocate_tti(std::span<const SliceConfig> configs,
                           const std::map<SliceId, SliceRuntimeState>& states,
                           const std::map<SliceId, std::uint64_t>& demands,
                           std::uint32_t grid_size,
                           const AllocatorOptions& options = {}, Tti tti = 0);

}  // namespace secslice::sched
