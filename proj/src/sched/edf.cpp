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

#include "secslice/sched/edf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace secslice::sched {
namespace {

std::uint32_t prbs_for_bits(double bits, double bits_per_prb) {
  if (bits <= 0.0) return 0;
  return static_cast<std::uint32_t>(std::ceil(bits / bits_per_prb - 1e-9));
}

struct Cursor {
  UeId ue;
  const std::vector<EdfPacket>* queue;
  std::size_t head = 0;
  double bits = 0.0;
  std::uint32_t prbs = 0;
  std::uint32_t limit = std::numeric_limits<std::uint32_t>::max();
  bool blocked = false;
};

}  // namespace

std::map<UeId, std::uint32_t> edf_schedule(
    const EdfQueues& queues, std::uint32_t grid_size, double bits_per_prb,
    const std::map<UeId, std::uint32_t>* ue_limits) {
  std::vector<Cursor> cursors;
  cursors.reserve(queues.size());
  for (const auto& [ue, q] : queues) {
    Cursor c{ue, &q};
    if (ue_limits) {
      if (auto it = ue_limits->find(ue); it != ue_limits->end()) c.limit = it->second;
    }
    cursors.push_back(c);
  }

  std::uint32_t remaining = grid_size;
  while (remaining > 0) {
    // queues is an ordered map, so scanning in order and keeping the first
    // minimum breaks deadline ties toward the lower UE id.
    Cursor* best = nullptr;
    for (auto& c : cursors) {
      if (c.blocked || c.head >= c.queue->size() || c.prbs >= c.limit) continue;
      if (!best || (*c.queue)[c.head].deadline_tti <
                       (*best->queue)[best->head].deadline_tti) {
        best = &c;
      }
    }
    if (!best) break;

    const auto& pkt = (*best->queue)[best->head];
    const double need_bits = best->bits + static_cast<double>(pkt.bytes) * 8.0;
    const std::uint32_t extra = prbs_for_bits(need_bits, bits_per_prb) - best->prbs;
    const std::uint32_t allowed = std::min(remaining, best->limit - best->prbs);
    if (extra <= allowed) {
      best->prbs += extra;
      remaining -= extra;
      best->bits = need_bits;
      ++best->head;
    } else {
      best->prbs += allowed;
      remaining -= allowed;
      best->blocked = true;
    }
  }

  std::map<UeId, std::uint32_t> out;
  for (const auto& c : cursors) {
    if (c.prbs > 0) out[c.ue] = c.prbs;
  }
  return out;
}

}  // namespace secslice::sched
