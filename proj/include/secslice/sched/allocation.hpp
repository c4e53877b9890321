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
#include <vector>

#include "secslice/common/ids.hpp"

namespace secslice::sched {

/// Smoothed per-slice bookkeeping carried between TTIs.
struct SliceRuntimeState {
  double ema_rate_mbps = 0.0;
  double ema_prb_share = 0.0;
  std::uint64_t backlog_bytes = 0;
  bool operator==(const SliceRuntimeState&) const = default;
};

/// Result of one TTI of scheduling.
///
/// `prbs` lists the concrete grid indices handed to each slice; its sizes
/// always equal `per_slice`. `per_ue` is filled by the intra-slice pass.
struct PrbAllocation {
  Tti tti = 0;
  std::map<SliceId, std::uint32_t> per_slice;
  std::map<UeId, std::uint32_t> per_ue;
  std::map<SliceId, std::vector<std::uint32_t>> prbs;
  bool operator==(const PrbAllocation&) const = default;

  std::uint32_t slice_total() const;
  std::uint32_t ue_total() const;
};

}  // namespace secslice::sched
