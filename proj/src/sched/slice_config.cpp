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

#include "secslice/sched/slice_config.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "secslice/common/error.hpp"

namespace secslice::sched {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string join_indices(const std::vector<std::uint32_t>& v) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) os << ',';
    os << v[i];
  }
  return os.str();
}

}  // namespace

std::string policy_name(const SlicePolicy& policy) {
  return std::visit(overloaded{
                        [](const StaticPolicy&) { return std::string("static"); },
                        [](const NvsRatePolicy&) { return std::string("nvs_rate"); },
                        [](const NvsCapacityPolicy&) {
                          return std::string("nvs_capacity");
                        },
                        [](const EdfPolicy&) { return std::string("edf"); },
                    },
                    policy);
}

std::vector<std::string> validate_slices(std::span<const SliceConfig> slices,
                                         std::uint32_t grid_size,
                                         double tti_ms) {
  std::vector<std::string> out;
  if (grid_size == 0) out.emplace_back("grid_size must be >= 1");

  std::set<SliceId> seen;
  double capacity_sum = 0.0;
  // owner[prb] = index into `slices` of the Static slice claiming it.
  std::map<std::uint32_t, std::size_t> owner;
  for (std::size_t i = 0; i < slices.size(); ++i) {
    const auto& s = slices[i];
    std::ostringstream where;
    where << "slice " << s.id;
    if (!seen.insert(s.id).second) {
      out.push_back("duplicate slice id " + std::to_string(s.id));
    }
    std::visit(
        overloaded{
            [&](const StaticPolicy& p) {
              if (p.prb_set.empty()) {
                out.push_back(where.str() + ": static prb_set is empty");
              }
              std::set<std::uint32_t> mine;
              for (auto prb : p.prb_set) {
                if (prb >= grid_size) {
                  out.push_back(where.str() + ": prb index " + std::to_string(prb) +
                                " >= grid size " + std::to_string(grid_size));
                }
                if (!mine.insert(prb).second) {
                  out.push_back(where.str() + ": prb index " + std::to_string(prb) +
                                " listed twice");
                }
              }
              std::map<std::size_t, std::vector<std::uint32_t>> clashes;
              for (auto prb : mine) {
                auto [it, fresh] = owner.emplace(prb, i);
                if (!fresh) clashes[it->second].push_back(prb);
              }
              for (const auto& [other, prbs] : clashes) {
                out.push_back("static slices " + std::to_string(slices[other].id) +
                              " and " + std::to_string(s.id) +
                              " overlap on prbs " + join_indices(prbs));
              }
            },
            [&](const NvsRatePolicy& p) {
              if (!(p.min_rate_mbps > 0.0)) {
                out.push_back(where.str() + ": min_rate_mbps must be > 0");
              }
              if (!(p.min_rate_mbps <= p.ref_rate_mbps)) {
                out.push_back(where.str() + ": min_rate_mbps must be <= ref_rate_mbps");
              }
            },
            [&](const NvsCapacityPolicy& p) {
              if (!(p.share > 0.0 && p.share <= 1.0)) {
                out.push_back(where.str() + ": share must be in (0, 1]");
              }
              capacity_sum += p.share;
            },
            [&](const EdfPolicy& p) {
              if (!(p.deadline_ms >= tti_ms)) {
                out.push_back(where.str() + ": deadline_ms must be >= one TTI");
              }
            },
        },
        s.policy);
  }
  if (capacity_sum > 1.0 + 1e-9) {
    std::ostringstream os;
    os << "nvs capacity shares sum to " << capacity_sum << " > 1";
    out.push_back(os.str());
  }
  return out;
}

void require_valid_slices(std::span<const SliceConfig> slices,
                          std::uint32_t grid_size, double tti_ms) {
  auto v = validate_slices(slices, grid_size, tti_ms);
  if (!v.empty()) throw ConfigError(v.front());
}

std::vector<std::uint32_t> shared_pool(std::span<const SliceConfig> slices,
                                       std::uint32_t grid_size) {
  std::vector<bool> owned(grid_size, false);
  for (const auto& s : slices) {
    if (const auto* p = std::get_if<StaticPolicy>(&s.policy)) {
      for (auto prb : p->prb_set) {
        if (prb < grid_size) owned[prb] = true;
      }
    }
  }
  std::vector<std::uint32_t> pool;
  for (std::uint32_t i = 0; i < grid_size; ++i) {
    if (!owned[i]) pool.push_back(i);
  }
  return pool;
}

}  // namespace secslice::sched
