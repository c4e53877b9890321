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

// Exhaustive feasibility search for small EDF instances, and a replay of the
// production edf_schedule over the same instance.

#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <vector>

#include "secslice/sched/edf.hpp"

namespace oracle {

/// One packet per UE. Needs are in whole PRBs; the packet may be served in
/// TTIs [release, deadline] and misses if it is unfinished after `deadline`.
struct EdfJob {
  std::uint32_t ue = 0;
  std::uint32_t need_prbs = 0;
  std::uint64_t release = 0;
  std::uint64_t deadline = 0;
};

struct EdfInstance {
  std::vector<EdfJob> jobs;
  std::uint32_t grid = 1;
  std::uint64_t horizon = 1;  // TTIs 0..horizon-1
};

/// True if some assignment of PRBs to released packets, TTI by TTI, finishes
/// every packet by its deadline. Depth-first over all splits of the grid,
/// with memoized dead states.
inline bool feasible(const EdfInstance& inst) {
  const auto n = inst.jobs.size();
  std::set<std::pair<std::uint64_t, std::vector<std::uint32_t>>> dead;

  std::function<bool(std::uint64_t, std::vector<std::uint32_t>&)> from =
      [&](std::uint64_t t, std::vector<std::uint32_t>& left) -> bool {
    for (std::size_t i = 0; i < n; ++i) {
      if (left[i] > 0 && t > inst.jobs[i].deadline) return false;
    }
    bool all_done = true;
    for (auto l : left) all_done = all_done && l == 0;
    if (all_done) return true;
    if (t >= inst.horizon) return false;
    if (dead.contains({t, left})) return false;

    // Enumerate every way to hand out up to `grid` PRBs to active packets.
    std::function<bool(std::size_t, std::uint32_t)> split = [&](std::size_t i,
                                                                std::uint32_t budget) -> bool {
      if (i == n) return from(t + 1, left);
      const auto& job = inst.jobs[i];
      std::uint32_t most = 0;
      if (job.release <= t && left[i] > 0) most = std::min(budget, left[i]);
      for (std::uint32_t g = most + 1; g-- > 0;) {
        left[i] -= g;
        const bool ok = split(i + 1, budget - g);
        left[i] += g;
        if (ok) return true;
      }
      return false;
    };
    const bool ok = split(0, inst.grid);
    if (!ok) dead.insert({t, left});
    return ok;
  };
  std::vector<std::uint32_t> left;
  for (const auto& j : inst.jobs) left.push_back(j.need_prbs);
  return from(0, left);
}

/// Runs secslice::sched::edf_schedule TTI by TTI and counts misses.
inline std::uint32_t edf_misses(const EdfInstance& inst, double bits_per_prb) {
  std::vector<std::uint64_t> bits;
  for (const auto& j : inst.jobs) {
    bits.push_back(static_cast<std::uint64_t>(j.need_prbs * bits_per_prb));
  }
  std::vector<bool> missed(inst.jobs.size(), false);
  for (std::uint64_t t = 0; t < inst.horizon; ++t) {
    secslice::sched::EdfQueues queues;
    for (std::size_t i = 0; i < inst.jobs.size(); ++i) {
      const auto& j = inst.jobs[i];
      if (j.release <= t && bits[i] > 0) queues[j.ue].push_back({bits[i] / 8, j.deadline});
    }
    const auto grant = secslice::sched::edf_schedule(queues, inst.grid, bits_per_prb);
    for (std::size_t i = 0; i < inst.jobs.size(); ++i) {
      const auto& j = inst.jobs[i];
      auto it = grant.find(j.ue);
      if (it == grant.end() || bits[i] == 0) continue;
      const auto served = static_cast<std::uint64_t>(it->second * bits_per_prb);
      bits[i] = served >= bits[i] ? 0 : bits[i] - served;
      if (bits[i] == 0 && t > j.deadline) missed[i] = true;
    }
  }
  std::uint32_t misses = 0;
  for (std::size_t i = 0; i < inst.jobs.size(); ++i) {
    if (missed[i] || bits[i] > 0) ++misses;
  }
  return misses;
}

}  // namespace oracle
