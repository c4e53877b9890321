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

#include "secslice/sched/allocation.hpp"
#include "secslice/sched/slice_config.hpp"

namespace secslice::sched {

inline constexpr double kNvsEpsilon = 1e-6;

/// How far an NVS slice sits below its reservation; larger means more urgent.
///
///   rate:     min_rate / max(min(ema_rate, ref_rate), eps)
///   capacity: share    / max(ema_prb_share, eps)
///
/// Delivered rate above ref_rate counts as ref_rate. Throws PolicyMismatch
/// for Static and EDF slices.
double nvs_priority(const SliceConfig& config, const SliceRuntimeState& state);

}  // namespace secslice::sched
