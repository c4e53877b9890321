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

#include "secslice/ctrl/controller.hpp"

#include <algorithm>
#include <cmath>

#include "secslice/common/error.hpp"

namespace secslice::ctrl {

void validate_policy(const SlaPolicy& policy) {
  if (!(policy.min_cap > 0.0 && policy.min_cap < 1.0)) {
    throw ConfigError("controller.min_cap must be in (0, 1)");
  }
  if (policy.release_after == 0) throw ConfigError("controller.release_after must be >= 1");
  if (policy.reconfig.consecutive == 0) {
    throw ConfigError("controller.reconfigure.consecutive must be >= 1");
  }
}

ThreatDecision on_anomaly_report(const detect::AnomalyReport& report,
                                 UeThreatState state, const SlaPolicy& policy) {
  ThreatDecision d;
  if (state.released) {
    d.state = state;
    d.warning = "late anomaly report for released ue " + std::to_string(report.ue) +
                " ignored";
    return d;
  }
  const double score = std::clamp(report.window_score, 0.0, 1.0);
  state.ue = report.ue;
  state.last_score = score;
  if (score >= 1.0) {
    ++state.consecutive_full_score_reports;
  } else {
    state.consecutive_full_score_reports = 0;
  }
  const double cap = std::clamp(1.0 - score, policy.min_cap, 1.0);
  d.out.push_back(proto::ThrottleCmd{report.ue, cap, score});
  if (state.consecutive_full_score_reports >= policy.release_after) {
    d.out.push_back(proto::RrcReleaseCmd{report.ue});
    state.released = true;
  }
  d.state = state;
  return d;
}

namespace {

bool above_reservation(const sched::SliceConfig& cfg, const proto::SliceMetrics& m) {
  if (const auto* r = std::get_if<sched::NvsRatePolicy>(&cfg.policy)) {
    return m.rate_mbps > r->min_rate_mbps;
  }
  if (const auto* c = std::get_if<sched::NvsCapacityPolicy>(&cfg.policy)) {
    return m.prb_share > c->share;
  }
  return false;
}

}  // namespace

ReconfigDecision on_slice_indication(const proto::SliceIndication& metrics,
                                     ReconfigHistory history, const SlaPolicy& policy) {
  std::map<SliceId, const sched::SliceConfig*> cfg;
  for (const auto& s : policy.slices) cfg[s.id] = &s;
  for (const auto& m : metrics.slices) {
    if (!cfg.contains(m.slice)) {
      throw ConfigError("indication for unknown slice " + std::to_string(m.slice));
    }
  }

  ReconfigDecision d;
  if (!policy.reconfig.enabled) {
    d.history = std::move(history);
    return d;
  }
  for (const auto& m : metrics.slices) {
    const auto& slice = *cfg.at(m.slice);
    const auto* rate = std::get_if<sched::NvsRatePolicy>(&slice.policy);
    if (!rate) continue;
    auto& count = history.violations[m.slice];
    if (m.rate_mbps >= policy.reconfig.violation_ratio * rate->min_rate_mbps) {
      count = 0;
      continue;
    }
    const bool surplus = std::any_of(
        metrics.slices.begin(), metrics.slices.end(), [&](const proto::SliceMetrics& o) {
          return o.slice != m.slice && above_reservation(*cfg.at(o.slice), o);
        });
    if (!surplus) {
      count = 0;
      continue;
    }
    if (++count < policy.reconfig.consecutive) continue;
    count = 0;
    sched::NvsRatePolicy raised = *rate;
    raised.min_rate_mbps *= policy.reconfig.raise_factor;
    raised.ref_rate_mbps = std::max(raised.ref_rate_mbps, raised.min_rate_mbps);
    d.out.push_back(proto::SliceCreate{{slice.id, raised}});
  }
  d.history = std::move(history);
  return d;
}

SliceController::SliceController(SlaPolicy policy, Logger warn)
    : policy_(std::move(policy)), warn_(std::move(warn)) {
  validate_policy(policy_);
  for (const auto& [ue, slice] : policy_.ue_slices) threats_[ue] = UeThreatState{ue};
}

std::vector<proto::ControlMessage> SliceController::startup() const {
  std::vector<proto::ControlMessage> out;
  for (const auto& s : policy_.slices) out.push_back(proto::SliceCreate{s});
  for (const auto& [ue, slice] : policy_.ue_slices) {
    out.push_back(proto::UeAssociate{ue, slice});
  }
  return out;
}

std::vector<proto::ControlMessage> SliceController::handle(const proto::ControlMessage& msg) {
  if (const auto* r = std::get_if<proto::AnomalyReport>(&msg)) {
    auto it = threats_.find(r->report.ue);
    if (it == threats_.end()) {
      if (warn_) warn_("anomaly report for unknown ue " + std::to_string(r->report.ue));
      return {};
    }
    auto d = on_anomaly_report(r->report, it->second, policy_);
    if (d.warning && warn_) warn_(*d.warning);
    it->second = d.state;
    return std::move(d.out);
  }
  if (const auto* ind = std::get_if<proto::SliceIndication>(&msg)) {
    auto d = on_slice_indication(*ind, history_, policy_);
    history_ = std::move(d.history);
    for (const auto& m : d.out) {
      const auto& created = std::get<proto::SliceCreate>(m).slice;
      for (auto& s : policy_.slices) {
        if (s.id == created.id) s = created;
      }
    }
    return std::move(d.out);
  }
  return {};
}

const UeThreatState* SliceController::threat(UeId ue) const {
  auto it = threats_.find(ue);
  return it == threats_.end() ? nullptr : &it->second;
}

}  // namespace secslice::ctrl
