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

#include "secslice/sched/allocator.hpp"

#include <algorithm>
#include <set>

#include "secslice/common/error.hpp"
#include "secslice/sched/intra_slice.hpp"
#include "secslice/sched/nvs.hpp"

namespace secslice::sched {

PrbAllocation allocate_tti(std::span<const SliceConfig> configs,
                           const std::map<SliceId, SliceRuntimeState>& states,
                           const std::map<SliceId, std::uint64_t>& demands,
                           std::uint32_t grid_size,
                           const AllocatorOptions& options, Tti tti) {
  if (grid_size == 0) throw ConfigError("grid_size must be >= 1");
  if (options.nvs_quantum_prbs == 0) throw ConfigError("nvs quantum must be >= 1 PRB");
  if (!(options.bits_per_prb > 0.0)) throw ConfigError("bits_per_prb must be > 0");

  std::map<SliceId, const SliceConfig*> by_id;
  for (const auto& c : configs) {
    if (!by_id.emplace(c.id, &c).second) {
      throw ConfigError("duplicate slice id " + std::to_string(c.id));
    }
  }
  for (const auto& [id, bytes] : demands) {
    if (!by_id.contains(id)) {
      throw ConfigError("demand for unknown slice id " + std::to_string(id));
    }
  }
  require_valid_slices(configs, grid_size, options.tti_ms);

  auto need_of = [&](SliceId id) -> std::uint32_t {
    auto it = demands.find(id);
    return it == demands.end() ? 0 : prbs_for_bytes(it->second, options.bits_per_prb);
  };

  PrbAllocation out;
  out.tti = tti;
  for (const auto& [id, c] : by_id) {
    out.per_slice[id] = 0;
    out.prbs[id];
  }

  // Static: own set only.
  for (const auto& [id, c] : by_id) {
    const auto* p = std::get_if<StaticPolicy>(&c->policy);
    if (!p) continue;
    std::vector<std::uint32_t> set = p->prb_set;
    std::sort(set.begin(), set.end());
    const auto k = std::min<std::size_t>(set.size(), need_of(id));
    out.prbs[id].assign(set.begin(), set.begin() + static_cast<std::ptrdiff_t>(k));
    out.per_slice[id] = static_cast<std::uint32_t>(k);
  }

  const auto pool = shared_pool(configs, grid_size);
  std::size_t next = 0;
  auto take = [&](SliceId id, std::uint32_t k) {
    auto& dst = out.prbs[id];
    for (std::uint32_t i = 0; i < k; ++i) dst.push_back(pool[next++]);
    out.per_slice[id] += k;
  };

  // EDF ahead of NVS in the shared pool.
  for (const auto& [id, c] : by_id) {
    if (!std::holds_alternative<EdfPolicy>(c->policy)) continue;
    const auto k = std::min<std::size_t>(pool.size() - next, need_of(id));
    take(id, static_cast<std::uint32_t>(k));
  }

  struct Candidate {
    SliceId id;
    const SliceConfig* config;
    SliceRuntimeState base;
    std::uint32_t need;
    std::uint32_t granted = 0;
  };
  std::vector<Candidate> nvs;
  for (const auto& [id, c] : by_id) {
    if (!is_nvs(*c)) continue;
    const auto need = need_of(id);
    if (need == 0) continue;
    auto st = states.find(id);
    nvs.push_back({id, c, st == states.end() ? SliceRuntimeState{} : st->second, need});
  }

  std::size_t left = pool.size() - next;
  const double a = options.ema_alpha;
  while (left > 0) {
    Candidate* best = nullptr;
    double best_pri = -1.0;
    for (auto& cand : nvs) {
      if (cand.granted >= cand.need) continue;
      // What the EMAs would read if the TTI closed with the grants so far.
      SliceRuntimeState prov = cand.base;
      prov.ema_prb_share = (1.0 - a) * prov.ema_prb_share +
                           a * static_cast<double>(cand.granted) / grid_size;
      prov.ema_rate_mbps =
          (1.0 - a) * prov.ema_rate_mbps +
          a * bits_to_mbps(cand.granted * options.bits_per_prb, options.tti_ms);
      const double pri = nvs_priority(*cand.config, prov);
      if (pri > best_pri) {
        best_pri = pri;
        best = &cand;
      }
    }
    if (!best) break;
    const auto q = static_cast<std::uint32_t>(std::min<std::size_t>(
        {static_cast<std::size_t>(options.nvs_quantum_prbs), left,
         static_cast<std::size_t>(best->need - best->granted)}));
    best->granted += q;
    left -= q;
  }
  for (const auto& cand : nvs) take(cand.id, cand.granted);
  return out;
}

}  // namespace secslice::sched
