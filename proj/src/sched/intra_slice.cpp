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

#include "secslice/sched/intra_slice.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace secslice::sched {

std::uint32_t prbs_for_bytes(std::uint64_t bytes, double bits_per_prb) {
  if (bytes == 0) return 0;
  return static_cast<std::uint32_t>(
      std::ceil(static_cast<double>(bytes) * 8.0 / bits_per_prb - 1e-9));
}

double fair_share_level(std::span<const std::uint32_t> needs,
                        std::uint32_t slice_prbs) {
  if (needs.empty()) return 0.0;
  std::vector<std::uint32_t> sorted(needs.begin(), needs.end());
  std::sort(sorted.begin(), sorted.end());
  double left = slice_prbs;
  std::size_t n = sorted.size();
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double even = left / static_cast<double>(n - i);
    if (sorted[i] >= even) return even;
    left -= sorted[i];
  }
  return sorted.back();
}

std::map<UeId, std::uint32_t> intra_slice_schedule(
    std::span<const UeDemand> ues, std::uint32_t slice_prbs,
    double bits_per_prb, DrrCursor* cursor) {
  struct Entry {
    UeId ue;
    std::uint32_t need;
    double cap;
    std::uint32_t limit = 0;
    std::uint32_t granted = 0;
  };
  std::vector<Entry> active;
  for (const auto& d : ues) {
    if (d.backlog_bytes == 0) continue;
    active.push_back({d.ue, prbs_for_bytes(d.backlog_bytes, bits_per_prb),
                      std::clamp(d.throttle_cap, 0.0, 1.0)});
  }
  std::map<UeId, std::uint32_t> out;
  if (active.empty() || slice_prbs == 0) return out;
  std::sort(active.begin(), active.end(),
            [](const Entry& a, const Entry& b) { return a.ue < b.ue; });

  std::vector<std::uint32_t> needs;
  for (const auto& e : active) needs.push_back(e.need);
  const double fair = fair_share_level(needs, slice_prbs);
  for (auto& e : active) {
    const auto capped =
        static_cast<std::uint32_t>(std::ceil(e.cap * fair - 1e-9));
    e.limit = std::min(e.need, capped);
  }

  // Rotate the starting UE so leftovers of an uneven split move around.
  std::size_t start = 0;
  if (cursor && cursor->last_first) {
    auto it = std::upper_bound(
        active.begin(), active.end(), *cursor->last_first,
        [](UeId id, const Entry& e) { return id < e.ue; });
    start = it == active.end() ? 0 : static_cast<std::size_t>(it - active.begin());
  }
  if (cursor) cursor->last_first = active[start].ue;

  std::uint32_t left = slice_prbs;
  bool progress = true;
  while (left > 0 && progress) {
    progress = false;
    for (std::size_t k = 0; k < active.size() && left > 0; ++k) {
      auto& e = active[(start + k) % active.size()];
      if (e.granted < e.limit) {
        ++e.granted;
        --left;
        progress = true;
      }
    }
  }
  for (const auto& e : active) {
    if (e.granted > 0) out[e.ue] = e.granted;
  }
  return out;
}

}  // namespace secslice::sched
