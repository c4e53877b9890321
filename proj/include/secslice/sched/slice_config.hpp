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
#include <string>
#include <variant>
#include <vector>

#include "secslice/common/ids.hpp"

namespace secslice::sched {

/// Fixed, non-overlapping PRB indices owned by the slice.
struct StaticPolicy {
  std::vector<std::uint32_t> prb_set;
  bool operator==(const StaticPolicy&) const = default;
};

/// NVS rate-based reservation.
struct NvsRatePolicy {
  double min_rate_mbps = 0.0;
  double ref_rate_mbps = 0.0;
  bool operator==(const NvsRatePolicy&) const = default;
};

/// NVS capacity-based reservation: a fraction of the grid.
struct NvsCapacityPolicy {
  double share = 0.0;
  bool operator==(const NvsCapacityPolicy&) const = default;
};

/// Earliest-deadline-first; every packet gets enqueue time + deadline_ms.
struct EdfPolicy {
  double deadline_ms = 1.0;
  bool operator==(const EdfPolicy&) const = default;
};

using SlicePolicy =
    std::variant<StaticPolicy, NvsRatePolicy, NvsCapacityPolicy, EdfPolicy>;

struct SliceConfig {
  SliceId id = 0;
  SlicePolicy policy;
  bool operator==(const SliceConfig&) const = default;
};

inline bool is_nvs(const SliceConfig& c) {
  return std::holds_alternative<NvsRatePolicy>(c.policy) ||
         std::holds_alternative<NvsCapacityPolicy>(c.policy);
}

/// Lowercase policy tag used in config files and on the wire.
std::string policy_name(const SlicePolicy& policy);

/// Every invariant violation across the slice list, one readable line each.
/// Empty result means the set is valid for a grid of `grid_size` PRBs and a
/// TTI of `tti_ms`.
std::vector<std::string> validate_slices(std::span<const SliceConfig> slices,
                                         std::uint32_t grid_size,
                                         double tti_ms = 1.0);

/// Throws ConfigError carrying the first violation, if any.
void require_valid_slices(std::span<const SliceConfig> slices,
                          std::uint32_t grid_size, double tti_ms = 1.0);

/// Indices of the grid not owned by any Static slice, ascending.
std::vector<std::uint32_t> shared_pool(std::span<const SliceConfig> slices,
                                       std::uint32_t grid_size);

}  // namespace secslice::sched
