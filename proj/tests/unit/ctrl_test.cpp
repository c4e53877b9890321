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

#include <random>

#include <doctest.h>

#include "secslice/common/error.hpp"
#include "secslice/ctrl/controller.hpp"

using namespace secslice;
using namespace secslice::ctrl;
using proto::ControlMessage;

namespace {

SlaPolicy two_slice_policy(bool reconfig = false) {
  SlaPolicy p;
  p.slices = {{1, sched::NvsRatePolicy{20, 40}}, {2, sched::NvsCapacityPolicy{0.5}}};
  p.ue_slices = {{1, 1}, {2, 2}};
  p.reconfig.enabled = reconfig;
  return p;
}

detect::AnomalyReport report(UeId ue, double score) { return {ue, score, 40, 0}; }

proto::SliceIndication indication(double rate1, double share2) {
  proto::SliceIndication m;
  m.slices = {{1, rate1, 0.1, 0}, {2, 0.0, share2, 0}};
  return m;
}

double cap_of(const ControlMessage& m) { return std::get<proto::ThrottleCmd>(m).cap; }

}  // namespace

TEST_CASE("proportional throttle examples") {
  const auto p = two_slice_policy();
  auto d = on_anomaly_report(report(1, 0.0), {1}, p);
  REQUIRE(d.out.size() == 1);
  CHECK(cap_of(d.out[0]) == 1.0);

  d = on_anomaly_report(report(1, 0.5), {1}, p);
  REQUIRE(d.out.size() == 1);
  CHECK(cap_of(d.out[0]) == doctest::Approx(0.5));
  CHECK(std::get<proto::ThrottleCmd>(d.out[0]).score == doctest::Approx(0.5));

  d = on_anomaly_report(report(1, 1.0), {1}, p);
  REQUIRE(d.out.size() == 2);
  CHECK(cap_of(d.out[0]) == doctest::Approx(0.05));
  CHECK(d.out[1] == ControlMessage{proto::RrcReleaseCmd{1}});
  CHECK(d.state.released);
}

TEST_CASE("release needs K consecutive full scores") {
  auto p = two_slice_policy();
  p.release_after = 3;
  UeThreatState s{1};
  for (double score : {1.0, 1.0, 0.9, 1.0, 1.0}) {
    auto d = on_anomaly_report(report(1, score), s, p);
    CHECK(d.out.size() == 1);
    s = d.state;
  }
  CHECK(s.consecutive_full_score_reports == 2);
  auto d = on_anomaly_report(report(1, 1.0), s, p);
  CHECK(d.out.size() == 2);
  CHECK(d.state.released);
}

TEST_CASE("released UEs ignore further reports with a warning") {
  const auto p = two_slice_policy();
  UeThreatState s{1, 1.0, 1, true};
  for (double score : {0.0, 0.5, 1.0}) {
    auto d = on_anomaly_report(report(1, score), s, p);
    CHECK(d.out.empty());
    CHECK(d.warning);
    CHECK(d.state == s);
  }
}

TEST_CASE("property: cap is nonincreasing in score and within [min_cap, 1]") {
  auto p = two_slice_policy();
  std::mt19937_64 rng(9);
  for (int i = 0; i < 2000; ++i) {
    p.min_cap = 0.01 + 0.98 * static_cast<double>(rng() % 1000) / 1000.0;
    const double a = static_cast<double>(rng() % 41) / 40.0;
    const double b = static_cast<double>(rng() % 41) / 40.0;
    const double lo = std::min(a, b), hi = std::max(a, b);
    const auto ca = cap_of(on_anomaly_report(report(1, lo), {1}, p).out[0]);
    const auto cb = cap_of(on_anomaly_report(report(1, hi), {1}, p).out[0]);
    CHECK(cb <= ca);
    CHECK(cb >= p.min_cap);
    CHECK(ca <= 1.0);
  }
}

TEST_CASE("property: benign UEs only ever see cap 1 and replay is idempotent") {
  SliceController c(two_slice_policy());
  for (int i = 0; i < 100; ++i) {
    for (const auto& m : c.handle(proto::AnomalyReport{report(2, 0.0)})) {
      CHECK(cap_of(m) == 1.0);
    }
  }
  std::mt19937_64 rng(4);
  std::vector<double> scores;
  for (int i = 0; i < 300; ++i) scores.push_back(static_cast<double>(rng() % 41) / 40.0);
  auto run = [&] {
    SliceController fresh(two_slice_policy());
    std::vector<ControlMessage> out;
    for (double s : scores) {
      for (auto& m : fresh.handle(proto::AnomalyReport{report(1, s)})) out.push_back(m);
    }
    return out;
  };
  CHECK(run() == run());
}

TEST_CASE("controller startup and unknown UEs") {
  std::vector<std::string> warnings;
  SliceController c(two_slice_policy(), [&](const std::string& w) { warnings.push_back(w); });
  const auto start = c.startup();
  REQUIRE(start.size() == 4);
  CHECK(std::holds_alternative<proto::SliceCreate>(start[0]));
  CHECK(start[2] == ControlMessage{proto::UeAssociate{1, 1}});
  CHECK(c.handle(proto::AnomalyReport{report(77, 1.0)}).empty());
  CHECK(warnings.size() == 1);
  CHECK(c.handle(proto::Hello{}).empty());
}

TEST_CASE("reconfiguration rule") {
  const auto p = two_slice_policy(true);
  SUBCASE("all slices meeting reservations -> nothing") {
    ReconfigHistory h;
    for (int i = 0; i < 10; ++i) {
      auto d = on_slice_indication(indication(25, 0.5), h, p);
      CHECK(d.out.empty());
      h = d.history;
    }
  }
  SUBCASE("rate slice at half its minimum for 5 indications -> exactly one SliceCreate") {
    ReconfigHistory h;
    std::vector<ControlMessage> out;
    for (int i = 0; i < 5; ++i) {
      auto d = on_slice_indication(indication(10, 0.8), h, p);
      out.insert(out.end(), d.out.begin(), d.out.end());
      h = d.history;
    }
    REQUIRE(out.size() == 1);
    const auto& created = std::get<proto::SliceCreate>(out[0]).slice;
    CHECK(created.id == 1);
    CHECK(std::get<sched::NvsRatePolicy>(created.policy).min_rate_mbps == doctest::Approx(25.0));
  }
  SUBCASE("4 violations then recovery -> nothing") {
    ReconfigHistory h;
    for (int i = 0; i < 4; ++i) {
      auto d = on_slice_indication(indication(10, 0.8), h, p);
      CHECK(d.out.empty());
      h = d.history;
    }
    auto d = on_slice_indication(indication(25, 0.8), h, p);
    CHECK(d.out.empty());
    d = on_slice_indication(indication(10, 0.8), d.history, p);
    CHECK(d.out.empty());
  }
  SUBCASE("no surplus elsewhere -> nothing") {
    ReconfigHistory h;
    for (int i = 0; i < 10; ++i) {
      auto d = on_slice_indication(indication(10, 0.4), h, p);
      CHECK(d.out.empty());
      h = d.history;
    }
  }
  SUBCASE("disabled rule never fires") {
    ReconfigHistory h;
    for (int i = 0; i < 10; ++i) {
      auto d = on_slice_indication(indication(1, 0.9), h, two_slice_policy(false));
      CHECK(d.out.empty());
      h = d.history;
    }
  }
  SUBCASE("unknown slice") {
    proto::SliceIndication m;
    m.slices = {{9, 1, 0.1, 0}};
    CHECK_THROWS_AS(on_slice_indication(m, {}, p), ConfigError);
  }
}

TEST_CASE("policy validation") {
  auto p = two_slice_policy();
  p.min_cap = 0.0;
  CHECK_THROWS_AS(validate_policy(p), ConfigError);
  p.min_cap = 1.0;
  CHECK_THROWS_AS(validate_policy(p), ConfigError);
  p.min_cap = 0.05;
  p.release_after = 0;
  CHECK_THROWS_AS(SliceController{p}, ConfigError);
}
