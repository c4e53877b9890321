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
#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "secslice/common/ids.hpp"
#include "secslice/detect/detector.hpp"
#include "secslice/proto/message.hpp"
#include "secslice/sched/allocation.hpp"
#include "secslice/sched/allocator.hpp"
#include "secslice/sched/intra_slice.hpp"
#include "secslice/sim/load.hpp"
#include "secslice/sim/traffic.hpp"

namespace secslice::sim {

/// Abstract PHY: every PRB carries the same number of bits each TTI.
struct LinkModel {
  double bits_per_prb_per_tti = 1132.0;  // 106 PRBs ~ 120 Mbit/s at 1 ms
  double tti_ms = 1.0;
  double base_rtt_ms = 10.0;
};

enum class RrcState { kConnected, kReleased };

struct QueuedPacket {
  std::uint64_t seq = 0;
  std::uint32_t bytes = 0;
  std::uint32_t remaining = 0;
  Tti enqueue_tti = 0;
  std::optional<Tti> deadline_tti;
  bool is_probe = false;
  const detect::PacketFeatures* features = nullptr;
};

struct UeContext {
  UeId id = 0;
  SliceId slice = 0;
  std::deque<QueuedPacket> queue;
  std::uint64_t queued_bytes = 0;
  double throttle_cap = 1.0;
  RrcState rrc = RrcState::kConnected;
  double anomaly_score = 0.0;

  // Lifetime byte accounting: generated == delivered + queued + dropped.
  std::uint64_t generated_bytes = 0;
  std::uint64_t delivered_bytes = 0;
  std::uint64_t dropped_bytes = 0;
  std::uint64_t deadline_misses = 0;
};

struct UeSpec {
  UeId id = 0;
  SliceId slice = 0;
};

struct ProbeConfig {
  bool enabled = true;
  Tti interval_ttis = 20;
  std::uint32_t bytes = 64;
};

struct WorldConfig {
  std::uint64_t seed = 1;
  std::uint32_t grid_size = 106;
  LinkModel link;
  std::uint64_t queue_limit_bytes = 5'000'000;
  std::uint32_t nvs_quantum_prbs = 1;
  double ema_alpha = sched::kDefaultEmaAlpha;
  std::vector<sched::SliceConfig> slices;
  std::vector<UeSpec> ues;
  std::vector<TrafficSource> sources;
  ProbeConfig probes;
  LoadProxyConfig load;
};

/// RTT probe outcome; no value means the probe timed out (UE released or
/// probe tail-dropped).
struct RttSample {
  UeId ue = 0;
  Tti tti = 0;
  std::optional<double> rtt_ms;
};

struct StepResult {
  Tti tti = 0;
  sched::PrbAllocation allocation;
  std::map<UeId, std::uint64_t> delivered_bytes;
  std::vector<detect::TapRecord> delivered;  // completed non-probe packets, FIFO order
  std::vector<RttSample> rtt;
  std::uint64_t arrivals = 0;  // packets offered this TTI, dropped ones included
  double load_proxy_pct = 0.0;
};

/// The RAN side of the simulation: queues, scheduler, link, measurements.
/// Single-threaded; external components reach it only through apply().
class World {
 public:
  explicit World(WorldConfig config);

  /// Enqueue arrivals, schedule, drain, measure; then advance the clock.
  StepResult step();

  /// Applies a command from the controller. Returns false (and changes
  /// nothing) for a command that does not fit the current state, such as a
  /// throttle for a released UE or a SliceCreate that breaks slice invariants.
  bool apply(const proto::ControlMessage& msg);

  /// Counts control messages the RAN handled outside apply() (indications
  /// it sent, acks) toward the load proxy.
  void count_control(std::uint64_t n) { pending_control_ += n; }

  /// Measurements averaged since the previous indication.
  proto::SliceIndication indication();

  /// Probe `ue` every `interval` TTIs. Throws ConfigError for unknown UEs.
  void start_probes(UeId ue, Tti interval);
  const std::vector<RttSample>& rtt_series(UeId ue) const;

  Tti now() const { return now_; }
  const UeContext& ue(UeId id) const;
  const std::map<UeId, UeContext>& ues() const { return ues_; }
  const std::vector<sched::SliceConfig>& slices() const { return slices_; }
  const std::map<SliceId, sched::SliceRuntimeState>& slice_states() const {
    return states_;
  }
  const WorldConfig& config() const { return config_; }
  const LoadMeter& load() const { return load_; }

 private:
  void enqueue(UeContext& ue, QueuedPacket pkt, StepResult& r);
  void release(UeContext& ue);
  std::map<UeId, std::uint32_t> split_slice(const sched::SliceConfig& slice,
                                            std::uint32_t prbs);
  const sched::SliceConfig* find_slice(SliceId id) const;

  WorldConfig config_;
  Tti now_ = 0;
  Rng rng_;
  std::uint64_t seq_ = 0;
  std::vector<sched::SliceConfig> slices_;
  std::map<SliceId, sched::SliceRuntimeState> states_;
  std::map<SliceId, sched::DrrCursor> cursors_;
  std::map<UeId, UeContext> ues_;
  std::vector<std::unique_ptr<SourceState>> sources_;
  std::map<UeId, Tti> probe_interval_;
  std::map<UeId, std::vector<RttSample>> rtt_;
  LoadMeter load_;
  std::uint64_t pending_control_ = 0;

  // Accumulators between indications.
  Tti period_start_ = 0;
  std::map<SliceId, double> period_slice_bits_;
  std::map<SliceId, std::uint64_t> period_slice_prbs_;
  std::map<UeId, double> period_ue_bits_;
};

}  // namespace secslice::sim
