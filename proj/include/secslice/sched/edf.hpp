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

/// A queued packet as the EDF pass sees it. `bytes` is what is still left to
/// send of the packet.
struct EdfPacket {
  std::uint64_t bytes = 0;
  Tti deadline_tti = 0;
};

/// Per-UE FIFO queues, head of line first.
using EdfQueues = std::map<UeId, std::vector<EdfPacket>>;

/// Grants PRBs to head-of-line packets in nondecreasing deadline order (ties
/// to the lower UE id) until the grid runs out. The packet that does not fit
/// gets the remaining PRBs and blocks its UE for this TTI.
///
/// `ue_limits`, when given, caps the PRBs any single UE may take.
std::map<UeId, std::uint32_t> edf_schedule(
    const EdfQueues& queues, std::uint32_t grid_size, double bits_per_prb,
    const std::map<UeId, std::uint32_t>* ue_limits = nullptr);

}  // namespace secslice::sched
