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

#include <cmath>
#include <map>
#include <random>
#include <set>

#include <doctest.h>

#include "secslice/common/error.hpp"
#include "secslice/sched/allocator.hpp"
#include "secslice/sched/edf.hpp"
#include "secslice/sched/ema.hpp"
#include "secslice/sched/intra_slice.hpp"
#include "secslice/sched/nvs.hpp"
#include "secslice/sched/slice_config.hpp"
#include "edf_oracle.hpp"

using namespace secslice;
using namespace secslice::sched;

namespace {

std::vector<std::uint32_t> range(std::uint32_t a, std::uint32_t b) {
  std::vector<std::uint32_t> v;
  for (auto i = a; i <= b; ++i) v.push_back(i);
  return v;
}

SliceConfig static_slice(SliceId id, std::uint32_t a, std::uint32_t b) {
  return {id, StaticPolicy{range(a, b)}};
}

constexpr std::uint64_t kSaturated = 1ull << 40;

// Runs allocate_tti with every slice permanently backlogged and EMA fed from
// the PRBs handed out. Returns summed PRBs per slice over [from, ttis).
std::map<SliceId, double> saturated_run(const std::vector<SliceConfig>& slices, Tti ttis,
                                        Tti from, std::uint32_t grid = 106) {
  std::map<SliceId, SliceRuntimeState> states;
  std::map<SliceId, std::uint64_t> demand;
  for (const auto& s : slices) {
    states[s.id];
    demand[s.id] = kSaturated;
  }
  AllocatorOptions opt;
  std::map<SliceId, double> sum;
  for (Tti t = 0; t < ttis; ++t) {
    const auto a = allocate_tti(slices, states, demand, grid, opt, t);
    for (const auto& s : slices) {
      const auto n = a.per_slice.at(s.id);
      states[s.id] = update_ema(states[s.id], n * opt.bits_per_prb, n, grid, opt.ema_alpha);
      if (t >= from) sum[s.id] += n;
    }
  }
  return sum;
}

}  // namespace

TEST_CASE("validate_slices names overlapping static slices and indices") {
  std::vector<SliceConfig> s = {static_slice(1, 0, 10), static_slice(2, 9, 20)};
  const auto issues = validate_slices(s, 106);
  REQUIRE(issues.size() == 1);
  CHECK(issues[0].find("1") != std::string::npos);
  CHECK(issues[0].find("2") != std::string::npos);
  CHECK(issues[0].find("9,10") != std::string::npos);
}

TEST_CASE("validate_slices rejects out-of-grid PRBs, bad shares, bad rates, short deadlines") {
  CHECK_FALSE(validate_slices(std::vector{static_slice(1, 100, 106)}, 106).empty());
  CHECK_FALSE(validate_slices(std::vector<SliceConfig>{{1, NvsCapacityPolicy{0.7}},
                                                       {2, NvsCapacityPolicy{0.4}}},
                              106)
                  .empty());
  CHECK_FALSE(validate_slices(std::vector<SliceConfig>{{1, NvsRatePolicy{20, 10}}}, 106).empty());
  CHECK_FALSE(validate_slices(std::vector<SliceConfig>{{1, NvsRatePolicy{0, 10}}}, 106).empty());
  CHECK_FALSE(validate_slices(std::vector<SliceConfig>{{1, EdfPolicy{0.5}}}, 106).empty());
  CHECK_FALSE(validate_slices(std::vector<SliceConfig>{{1, NvsCapacityPolicy{0.5}},
                                                       {1, NvsCapacityPolicy{0.2}}},
                              106)
                  .empty());
  CHECK(validate_slices(std::vector<SliceConfig>{{1, NvsCapacityPolicy{0.6}},
                                                 {2, NvsCapacityPolicy{0.4}}},
                        106)
            .empty());
}

TEST_CASE("two static slices split the grid by their sets") {
  std::vector<SliceConfig> s = {static_slice(1, 0, 51), static_slice(2, 52, 105)};
  const auto a = allocate_tti(s, {}, {{1, kSaturated}, {2, kSaturated}}, 106);
  CHECK(a.per_slice.at(1) == 52);
  CHECK(a.per_slice.at(2) == 54);
  CHECK(a.prbs.at(1) == range(0, 51));
}

TEST_CASE("idle static PRBs are not lent") {
  std::vector<SliceConfig> s = {static_slice(1, 0, 51), {2, NvsCapacityPolicy{1.0}}};
  const auto a = allocate_tti(s, {}, {{1, 0}, {2, kSaturated}}, 106);
  CHECK(a.per_slice.at(1) == 0);
  CHECK(a.per_slice.at(2) == 54);
}

TEST_CASE("static slice only takes what its backlog needs") {
  std::vector<SliceConfig> s = {static_slice(1, 0, 51)};
  const auto a = allocate_tti(s, {}, {{1, 1132 * 3 / 8}}, 106);
  CHECK(a.per_slice.at(1) == 3);
}

TEST_CASE("allocate_tti errors") {
  std::vector<SliceConfig> s = {static_slice(1, 0, 5)};
  CHECK_THROWS_AS(allocate_tti(s, {}, {{9, 10}}, 106), ConfigError);
  CHECK_THROWS_AS(allocate_tti(s, {}, {{1, 10}}, 0), ConfigError);
  std::vector<SliceConfig> dup = {static_slice(1, 0, 5), static_slice(1, 6, 9)};
  CHECK_THROWS_AS(allocate_tti(dup, {}, {}, 106), ConfigError);
}

TEST_CASE("nvs_priority follows the stated formulas") {
  CHECK(nvs_priority({1, NvsCapacityPolicy{0.5}}, {0, 0.5, 0}) == doctest::Approx(1.0));
  CHECK(nvs_priority({1, NvsRatePolicy{10, 20}}, {5, 0, 0}) == doctest::Approx(2.0));
  // Delivered rate above ref counts as ref.
  CHECK(nvs_priority({1, NvsRatePolicy{10, 20}}, {40, 0, 0}) == doctest::Approx(0.5));
  CHECK(nvs_priority({1, NvsCapacityPolicy{0.5}}, {0, 0, 0}) == doctest::Approx(0.5 / kNvsEpsilon));
  CHECK_THROWS_AS(nvs_priority(static_slice(1, 0, 3), {}), PolicyMismatch);
  CHECK_THROWS_AS(nvs_priority({1, EdfPolicy{5}}, {}), PolicyMismatch);
}

TEST_CASE("update_ema") {
  SliceRuntimeState s;
  CHECK(update_ema(s, 0, 0, 106, 0.01).ema_rate_mbps == 0.0);
  const auto one = update_ema({3.0, 0.2, 0}, 50'000, 53, 106, 1.0);
  CHECK(one.ema_rate_mbps == doctest::Approx(50.0));
  CHECK(one.ema_prb_share == doctest::Approx(0.5));
  CHECK_THROWS_AS(update_ema(s, 0, 0, 106, 0.0), ConfigError);
  CHECK_THROWS_AS(update_ema(s, 0, 0, 106, 1.5), ConfigError);

  // Constant input r reaches r within 1% after ceil(ln 0.01 / ln(1 - alpha)) TTIs.
  for (double alpha : {0.01, 0.05, 0.3}) {
    const int n = static_cast<int>(std::ceil(std::log(0.01) / std::log(1.0 - alpha)));
    SliceRuntimeState e;
    for (int i = 0; i < n; ++i) e = update_ema(e, 20'000, 10, 106, alpha);
    CHECK(e.ema_rate_mbps >= 0.99 * 20.0);
  }
}

TEST_CASE("two capacity slices at 0.5 converge to half the grid each") {
  std::vector<SliceConfig> s = {{1, NvsCapacityPolicy{0.5}}, {2, NvsCapacityPolicy{0.5}}};
  const auto sum = saturated_run(s, 10'000, 5'000);
  for (SliceId id : {1u, 2u}) CHECK(std::abs(sum.at(id) / (5'000.0 * 106) - 0.5) <= 0.02);
}

TEST_CASE("capacity shares 0.75/0.25 are served 3:1") {
  std::vector<SliceConfig> s = {{1, NvsCapacityPolicy{0.75}}, {2, NvsCapacityPolicy{0.25}}};
  const auto sum = saturated_run(s, 10'000, 0);
  CHECK(sum.at(1) / sum.at(2) == doctest::Approx(3.0).epsilon(0.05));
}

TEST_CASE("rate slice gets its minimum next to a saturated capacity slice") {
  // Rate slice offered exactly 10 Mbit/s; capacity slice always backlogged.
  std::vector<SliceConfig> s = {{1, NvsRatePolicy{10, 10}}, {2, NvsCapacityPolicy{0.9}}};
  AllocatorOptions opt;
  std::map<SliceId, SliceRuntimeState> states{{1, {}}, {2, {}}};
  double queue_bits = 0, delivered = 0;
  const Tti ttis = 10'000;
  for (Tti t = 0; t < ttis; ++t) {
    queue_bits += 10'000;  // 10 Mbit/s at 1 ms
    std::map<SliceId, std::uint64_t> demand{
        {1, static_cast<std::uint64_t>(queue_bits / 8)}, {2, kSaturated}};
    const auto a = allocate_tti(s, states, demand, 106, opt, t);
    const double sent = std::min(queue_bits, a.per_slice.at(1) * opt.bits_per_prb);
    queue_bits -= sent;
    delivered += sent;
    states[1] = update_ema(states[1], sent, a.per_slice.at(1), 106, opt.ema_alpha);
    const auto n2 = a.per_slice.at(2);
    states[2] = update_ema(states[2], n2 * opt.bits_per_prb, n2, 106, opt.ema_alpha);
  }
  CHECK(delivered / (ttis * 1000.0) >= 10.0 * 0.999);
}

TEST_CASE("edf_schedule examples") {
  SUBCASE("one packet due now gets exactly its PRBs") {
    EdfQueues q{{1, {{1132 * 3 / 8, 0}}}};
    const auto g = edf_schedule(q, 106, 1132);
    CHECK(g.at(1) == 3);
  }
  SUBCASE("equal deadlines, grid fits one: lower UE id first") {
    EdfQueues q{{2, {{800, 5}}}, {1, {{800, 5}}}};
    const auto g = edf_schedule(q, 8, 800);
    CHECK(g.at(1) == 8);
    CHECK_FALSE(g.contains(2));
  }
  SUBCASE("earlier deadline wins regardless of id") {
    EdfQueues q{{1, {{800, 9}}}, {2, {{800, 3}}}};
    const auto g = edf_schedule(q, 8, 800);
    CHECK(g.at(2) == 8);
  }
  SUBCASE("empty queues") { CHECK(edf_schedule({}, 106, 1132).empty()); }
  SUBCASE("per-UE limit") {
    EdfQueues q{{1, {{8000, 1}}}, {2, {{800, 2}}}};
    std::map<UeId, std::uint32_t> lim{{1, 4}};
    const auto g = edf_schedule(q, 20, 800, &lim);
    CHECK(g.at(1) == 4);
    CHECK(g.at(2) == 8);
  }
}

TEST_CASE("edf matches exhaustive feasibility on small instances") {
  std::mt19937_64 rng(11);
  int feasible_count = 0;
  for (int trial = 0; trial < 300; ++trial) {
    oracle::EdfInstance inst;
    inst.grid = 1 + rng() % 4;
    inst.horizon = 12;
    const auto n = 1 + rng() % 4;
    for (std::uint32_t i = 0; i < n; ++i) {
      const auto release = rng() % 6;
      inst.jobs.push_back({i + 1, static_cast<std::uint32_t>(1 + rng() % 6), release,
                           release + rng() % 5});
    }
    if (oracle::feasible(inst)) {
      ++feasible_count;
      CHECK(oracle::edf_misses(inst, 800) == 0);
    }
  }
  CHECK(feasible_count > 50);
}

TEST_CASE("intra_slice_schedule examples") {
  std::vector<UeDemand> eq = {{1, kSaturated, 1.0}, {2, kSaturated, 1.0}};
  auto g = intra_slice_schedule(eq, 10, 1132);
  CHECK(g.at(1) == 5);
  CHECK(g.at(2) == 5);

  std::vector<UeDemand> half = {{1, kSaturated, 1.0}, {2, kSaturated, 0.5}};
  g = intra_slice_schedule(half, 10, 1132);
  CHECK(g.at(1) == 5);
  CHECK(g.at(2) == 3);

  std::vector<UeDemand> zero = {{1, kSaturated, 0.0}};
  CHECK(intra_slice_schedule(zero, 10, 1132).empty());
}

TEST_CASE("intra_slice odd PRB rotates between UEs") {
  std::vector<UeDemand> eq = {{1, kSaturated, 1.0}, {2, kSaturated, 1.0}};
  DrrCursor cursor;
  std::map<UeId, std::uint32_t> total;
  for (int t = 0; t < 100; ++t) {
    for (const auto& [ue, n] : intra_slice_schedule(eq, 11, 1132, &cursor)) total[ue] += n;
  }
  CHECK(total.at(1) == 550);
  CHECK(total.at(2) == 550);
}

TEST_CASE("fair share level is max-min") {
  std::vector<std::uint32_t> needs = {2, 10, 10};
  CHECK(fair_share_level(needs, 12) == doctest::Approx(5.0));
  CHECK(fair_share_level(needs, 40) == doctest::Approx(10.0));
  CHECK(prbs_for_bytes(0, 1132) == 0);
  CHECK(prbs_for_bytes(1, 1132) == 1);
  CHECK(prbs_for_bytes(1132 / 8 * 2, 1128) == 2);
}

TEST_CASE("property: allocations respect conservation and isolation") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const std::uint32_t grid = 20 + rng() % 100;
    const std::uint32_t cut = 1 + rng() % (grid / 2);
    std::vector<SliceConfig> s = {static_slice(1, 0, cut - 1),
                                  {2, NvsCapacityPolicy{0.3 + 0.1 * (rng() % 4)}},
                                  {3, NvsRatePolicy{5.0 + rng() % 20, 40}},
                                  {4, EdfPolicy{1.0 + rng() % 10}}};
    std::map<SliceId, SliceRuntimeState> st;
    std::map<SliceId, std::uint64_t> demand;
    for (SliceId id = 1; id <= 4; ++id) {
      st[id] = {static_cast<double>(rng() % 50), (rng() % 100) / 100.0, 0};
      demand[id] = rng() % 3 == 0 ? 0 : rng() % 40'000;
    }
    const auto a = allocate_tti(s, st, demand, grid);
    std::uint32_t total = 0;
    std::set<std::uint32_t> used;
    for (const auto& [id, n] : a.per_slice) {
      total += n;
      if (demand[id] == 0) CHECK(n == 0);
      const auto& idx = a.prbs.at(id);
      CHECK(idx.size() == n);
      for (auto i : idx) CHECK(used.insert(i).second);
    }
    CHECK(total <= grid);
    for (auto i : a.prbs.at(1)) CHECK(i < cut);
  }
}
