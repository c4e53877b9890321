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
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "secslice/common/ids.hpp"
#include "secslice/detect/detector.hpp"
#include "secslice/proto/message.hpp"
#include "secslice/sched/slice_config.hpp"

namespace secslice::ctrl {

struct UeThreatState {
  UeId ue = 0;
  double last_score = 0.0;
  std::uint32_t consecutive_full_score_reports = 0;
  bool released = false;
  bool operator==(const UeThreatState&) const = default;
};

/// SLA-enforcement rule for rate slices. Off unless a scenario turns it on.
struct ReconfigRule {
  bool enabled = false;
  double violation_ratio = 0.9;   // rate < ratio * min_rate counts as a violation
  std::uint32_t consecutive = 5;  // violations in a row before acting
  double raise_factor = 1.25;     // new min_rate = old * factor
};

struct SlaPolicy {
  std::vector<sched::SliceConfig> slices;
  std::map<UeId, SliceId> ue_slices;
  double min_cap = 0.05;
  std::uint32_t release_after = 1;  // K full-score reports before release
  ReconfigRule reconfig;
};

/// Throws ConfigError if min_cap is outside (0,1) or release_after is 0.
void validate_policy(const SlaPolicy& policy);

struct ThreatDecision {
  UeThreatState state;
  std::vector<proto::ControlMessage> out;
  std::optional<std::string> warning;
};

/// Proportional throttle: cap = clamp(1 - score, min_cap, 1). A full score
/// bumps the counter; the K-th one in a row adds an RrcReleaseCmd after the
/// throttle. Reports for a released UE are dropped with a warning.
ThreatDecision on_anomaly_report(const detect::AnomalyReport& report,
                                 UeThreatState state, const SlaPolicy& policy);

/// Per-slice count of consecutive under-reservation indications.
struct ReconfigHistory {
  std::map<SliceId, std::uint32_t> violations;
  bool operator==(const ReconfigHistory&) const = default;
};

struct ReconfigDecision {
  ReconfigHistory history;
  std::vector<proto::ControlMessage> out;
};

/// Watches rate slices against their reservation. After `consecutive`
/// indications below violation_ratio * min_rate, while another slice is
/// consuming above its own reservation, emits one SliceCreate that raises
/// the slice's min_rate. Throws ConfigError for metrics of unknown slices.
ReconfigDecision on_slice_indication(const proto::SliceIndication& metrics,
                                     ReconfigHistory history, const SlaPolicy& policy);

/// The xApp event loop state: threat table, SLA history, current policy.
class SliceController {
 public:
  using Logger = std::function<void(const std::string&)>;

  explicit SliceController(SlaPolicy policy, Logger warn = {});

  /// SliceCreate for every slice, then UeAssociate for every UE.
  std::vector<proto::ControlMessage> startup() const;

  /// Dispatches an inbound message; returns what to send to the RAN.
  std::vector<proto::ControlMessage> handle(const proto::ControlMessage& msg);

  const UeThreatState* threat(UeId ue) const;
  const SlaPolicy& policy() const { return policy_; }

 private:
  SlaPolicy policy_;
  Logger warn_;
  std::map<UeId, UeThreatState> threats_;
  ReconfigHistory history_;
};

}  // namespace secslice::ctrl
