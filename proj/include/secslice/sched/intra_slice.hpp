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
#include <optional>
#include <span>

#include "secslice/common/ids.hpp"

namespace secslice::sched {

struct UeDemand {
  UeId ue = 0;
  std::uint64_t backlog_bytes = 0;
  double throttle_cap = 1.0;
};

/// Where the next round-robin pass starts. Carried across TTIs so that the
/// odd PRB left over by an uneven split rotates between UEs.
struct DrrCursor {
  std::optional<UeId> last_first;
};

/// Max-min fair PRB level for the given per-UE needs and slice size: the
/// largest L with sum(min(need_i, L)) <= slice_prbs. Returns the largest need
/// if everything fits.
double fair_share_level(std::span<const std::uint32_t> needs,
                        std::uint32_t slice_prbs);

/// PRBs needed to carry `bytes` at `bits_per_prb`.
std::uint32_t prbs_for_bytes(std::uint64_t bytes, double bits_per_prb);

/// Splits a slice's PRBs among its UEs.
///
/// Deficit round robin with a one-PRB quantum over backlogged UEs. The fair
/// share is the max-min level over the UEs' needs; each UE's grant is capped
/// at ceil(throttle_cap * fair_share) and whatever a throttled UE cannot take
/// stays idle for the TTI. A cap of 0 starves the UE.
std::map<UeId, std::uint32_t> intra_slice_schedule(
    std::span<const UeDemand> ues, std::uint32_t slice_prbs,
    double bits_per_prb, DrrCursor* cursor = nullptr);

}  // namespace secslice::sched
