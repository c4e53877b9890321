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
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "secslice/common/ids.hpp"
#include "secslice/detect/detector.hpp"
#include "secslice/sched/slice_config.hpp"

namespace secslice::proto {

inline constexpr std::string_view kProtocolVersion = "1";

struct Hello {
  std::string version{kProtocolVersion};
  bool operator==(const Hello&) const = default;
};

/// Creates a slice, or reconfigures it if the id already exists.
struct SliceCreate {
  sched::SliceConfig slice;
  bool operator==(const SliceCreate&) const = default;
};

struct SliceDelete {
  SliceId slice = 0;
  bool operator==(const SliceDelete&) const = default;
};

struct UeAssociate {
  UeId ue = 0;
  SliceId slice = 0;
  bool operator==(const UeAssociate&) const = default;
};

struct SliceMetrics {
  SliceId slice = 0;
  double rate_mbps = 0.0;
  double prb_share = 0.0;
  std::uint64_t backlog_bytes = 0;
  bool operator==(const SliceMetrics&) const = default;
};

struct UeMetrics {
  UeId ue = 0;
  SliceId slice = 0;
  double rate_mbps = 0.0;
  std::uint64_t queue_bytes = 0;
  double cap = 1.0;
  bool released = false;
  bool operator==(const UeMetrics&) const = default;
};

/// Periodic RAN-side measurement push.
struct SliceIndication {
  Tti tti = 0;
  std::vector<SliceMetrics> slices;
  std::vector<UeMetrics> ues;
  bool operator==(const SliceIndication&) const = default;
};

struct AnomalyReport {
  detect::AnomalyReport report;
  bool operator==(const AnomalyReport&) const = default;
};

/// `score` is the window score that produced the cap; informational.
struct ThrottleCmd {
  UeId ue = 0;
  double cap = 1.0;
  double score = 0.0;
  bool operator==(const ThrottleCmd&) const = default;
};

struct RrcReleaseCmd {
  UeId ue = 0;
  bool operator==(const RrcReleaseCmd&) const = default;
};

/// `of` names what is acknowledged. Ack{"tick", t} closes a peer's output
/// for TTI t.
struct Ack {
  std::string of;
  Tti tti = 0;
  bool operator==(const Ack&) const = default;
};

struct Error {
  std::string reason;
  bool operator==(const Error&) const = default;
};

using ControlMessage =
    std::variant<Hello, SliceCreate, SliceDelete, UeAssociate, SliceIndication,
                 AnomalyReport, ThrottleCmd, RrcReleaseCmd, Ack, Error>;

/// Wire type tag, e.g. "ThrottleCmd".
std::string_view type_tag(const ControlMessage& msg);

inline bool is_tick(const ControlMessage& msg, Tti tti) {
  const auto* a = std::get_if<Ack>(&msg);
  return a && a->of == "tick" && a->tti == tti;
}

}  // namespace secslice::proto
