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

#include "secslice/sim/world.hpp"

#include <algorithm>
#include <cmath>

#include "secslice/common/error.hpp"
#include "secslice/sched/edf.hpp"

namespace secslice::sim {

World::World(WorldConfig config)
    : config_(std::move(config)), rng_(config_.seed), load_(config_.load) {
  const auto& link = config_.link;
  if (!(link.bits_per_prb_per_tti > 0.0 && link.tti_ms > 0.0 && link.base_rtt_ms > 0.0)) {
    throw ConfigError("link constants must all be > 0");
  }
  if (config_.queue_limit_bytes == 0) throw ConfigError("queue_limit_bytes must be > 0");
  sched::require_valid_slices(config_.slices, config_.grid_size, link.tti_ms);
  slices_ = config_.slices;
  for (const auto& s : slices_) states_[s.id];
  for (const auto& u : config_.ues) {
    if (!find_slice(u.slice)) {
      throw ConfigError("ue " + std::to_string(u.id) + " bound to missing slice " +
                        std::to_string(u.slice));
    }
    UeContext ctx;
    ctx.id = u.id;
    ctx.slice = u.slice;
    if (!ues_.emplace(u.id, std::move(ctx)).second) {
      throw ConfigError("duplicate ue id " + std::to_string(u.id));
    }
  }
  for (const auto& src : config_.sources) {
    if (!ues_.contains(src.ue)) {
      throw ConfigError("traffic source targets unknown ue " + std::to_string(src.ue));
    }
    sources_.push_back(std::make_unique<SourceState>(src));
  }
  if (config_.probes.enabled) {
    for (const auto& u : config_.ues) start_probes(u.id, config_.probes.interval_ttis);
  }
}

const sched::SliceConfig* World::find_slice(SliceId id) const {
  for (const auto& s : slices_) {
    if (s.id == id) return &s;
  }
  return nullptr;
}

const UeContext& World::ue(UeId id) const {
  auto it = ues_.find(id);
  if (it == ues_.end()) throw ConfigError("unknown ue " + std::to_string(id));
  return it->second;
}

void World::start_probes(UeId ue, Tti interval) {
  if (!ues_.contains(ue)) throw ConfigError("unknown ue " + std::to_string(ue));
  if (interval == 0) throw ConfigError("probe interval must be >= 1 TTI");
  probe_interval_[ue] = interval;
  rtt_[ue];
}

const std::vector<RttSample>& World::rtt_series(UeId ue) const {
  auto it = rtt_.find(ue);
  if (it == rtt_.end()) throw ConfigError("no probes running for ue " + std::to_string(ue));
  return it->second;
}

void World::enqueue(UeContext& ue, QueuedPacket pkt, StepResult& r) {
  ue.generated_bytes += pkt.bytes;
  if (ue.queued_bytes + pkt.bytes > config_.queue_limit_bytes) {
    ue.dropped_bytes += pkt.bytes;
    if (pkt.is_probe) {
      RttSample s{ue.id, now_, std::nullopt};
      rtt_[ue.id].push_back(s);
      r.rtt.push_back(s);
    }
    return;
  }
  if (const auto* s = find_slice(ue.slice)) {
    if (const auto* edf = std::get_if<sched::EdfPolicy>(&s->policy)) {
      pkt.deadline_tti =
          now_ + static_cast<Tti>(std::ceil(edf->deadline_ms / config_.link.tti_ms - 1e-9));
    }
  }
  pkt.seq = seq_++;
  pkt.remaining = pkt.bytes;
  pkt.enqueue_tti = now_;
  ue.queued_bytes += pkt.bytes;
  ue.queue.push_back(pkt);
}

void World::release(UeContext& ue) {
  ue.dropped_bytes += ue.queued_bytes;
  ue.queued_bytes = 0;
  ue.queue.clear();
  ue.rrc = RrcState::kReleased;
}

std::map<UeId, std::uint32_t> World::split_slice(const sched::SliceConfig& slice,
                                                 std::uint32_t prbs) {
  const double bpp = config_.link.bits_per_prb_per_tti;
  std::vector<sched::UeDemand> demands;
  for (const auto& [id, ue] : ues_) {
    if (ue.slice != slice.id || ue.rrc != RrcState::kConnected || ue.queued_bytes == 0) continue;
    demands.push_back({id, ue.queued_bytes, ue.throttle_cap});
  }
  if (demands.empty() || prbs == 0) return {};

  if (!std::holds_alternative<sched::EdfPolicy>(slice.policy)) {
    return sched::intra_slice_schedule(demands, prbs, bpp, &cursors_[slice.id]);
  }

  // EDF: same throttle ceilings as the round-robin path, deadline order inside.
  std::vector<std::uint32_t> needs;
  for (const auto& d : demands) needs.push_back(sched::prbs_for_bytes(d.backlog_bytes, bpp));
  const double fair = sched::fair_share_level(needs, prbs);
  std::map<UeId, std::uint32_t> limits;
  sched::EdfQueues queues;
  const double budget_bytes = prbs * bpp / 8.0;
  for (std::size_t i = 0; i < demands.size(); ++i) {
    const auto& d = demands[i];
    limits[d.ue] = std::min(
        needs[i], static_cast<std::uint32_t>(std::ceil(d.throttle_cap * fair - 1e-9)));
    if (limits[d.ue] == 0) continue;
    auto& q = queues[d.ue];
    double seen = 0.0;
    for (const auto& pkt : ues_.at(d.ue).queue) {
      q.push_back({pkt.remaining, pkt.deadline_tti.value_or(pkt.enqueue_tti)});
      seen += pkt.remaining;
      if (seen > budget_bytes) break;
    }
  }
  return sched::edf_schedule(queues, prbs, bpp, &limits);
}

StepResult World::step() {
  StepResult r;
  r.tti = now_;
  const auto& link = config_.link;

  for (const auto& [id, interval] : probe_interval_) {
    if (now_ % interval != 0) continue;
    auto& ue = ues_.at(id);
    if (ue.rrc == RrcState::kReleased) {
      RttSample s{id, now_, std::nullopt};
      rtt_[id].push_back(s);
      r.rtt.push_back(s);
      continue;
    }
    QueuedPacket probe;
    probe.bytes = config_.probes.bytes;
    probe.is_probe = true;
    enqueue(ue, probe, r);
  }

  std::vector<Arrival> arrivals;
  for (auto& src : sources_) {
    auto& ue = ues_.at(src->source().ue);
    if (ue.rrc == RrcState::kReleased) continue;
    arrivals.clear();
    src->generate(now_, link.tti_ms, rng_, arrivals);
    for (const auto& a : arrivals) {
      QueuedPacket pkt;
      pkt.bytes = a.bytes;
      pkt.features = a.features;
      enqueue(ue, pkt, r);
    }
    r.arrivals += arrivals.size();
  }

  std::map<SliceId, std::uint64_t> demand;
  for (const auto& s : slices_) demand[s.id] = 0;
  for (const auto& [id, ue] : ues_) {
    if (ue.rrc == RrcState::kConnected && ue.throttle_cap > 0.0) {
      demand[ue.slice] += ue.queued_bytes;
    }
  }
  for (auto& [id, st] : states_) st.backlog_bytes = demand[id];

  sched::AllocatorOptions opts;
  opts.bits_per_prb = link.bits_per_prb_per_tti;
  opts.nvs_quantum_prbs = config_.nvs_quantum_prbs;
  opts.ema_alpha = config_.ema_alpha;
  opts.tti_ms = link.tti_ms;
  r.allocation = sched::allocate_tti(slices_, states_, demand, config_.grid_size, opts, now_);
  for (const auto& s : slices_) {
    for (const auto& [ue, n] : split_slice(s, r.allocation.per_slice.at(s.id))) {
      r.allocation.per_ue[ue] = n;
    }
  }

  std::map<SliceId, double> slice_bits;
  for (auto& [id, ue] : ues_) {
    r.delivered_bytes[id] = 0;
    auto it = r.allocation.per_ue.find(id);
    if (it == r.allocation.per_ue.end()) continue;
    auto budget = static_cast<std::uint64_t>(
        std::floor(it->second * link.bits_per_prb_per_tti / 8.0 + 1e-9));
    std::uint64_t sent = 0;
    while (budget > 0 && !ue.queue.empty()) {
      auto& head = ue.queue.front();
      const auto take = std::min<std::uint64_t>(head.remaining, budget);
      head.remaining -= static_cast<std::uint32_t>(take);
      budget -= take;
      sent += take;
      if (head.remaining > 0) break;
      if (head.deadline_tti && now_ > *head.deadline_tti) ++ue.deadline_misses;
      if (head.is_probe) {
        RttSample s{id, now_,
                    link.base_rtt_ms + static_cast<double>(now_ - head.enqueue_tti) * link.tti_ms};
        rtt_[id].push_back(s);
        r.rtt.push_back(s);
      } else if (head.features) {
        r.delivered.push_back({id, ue.slice, *head.features});
      }
      ue.queue.pop_front();
    }
    ue.queued_bytes -= sent;
    ue.delivered_bytes += sent;
    r.delivered_bytes[id] = sent;
    slice_bits[ue.slice] += static_cast<double>(sent) * 8.0;
    period_ue_bits_[id] += static_cast<double>(sent) * 8.0;
  }

  for (const auto& s : slices_) {
    const auto used = r.allocation.per_slice.at(s.id);
    auto& st = states_[s.id];
    st = sched::update_ema(st, slice_bits[s.id], used, config_.grid_size, config_.ema_alpha,
                           link.tti_ms);
    period_slice_bits_[s.id] += slice_bits[s.id];
    period_slice_prbs_[s.id] += used;
  }

  load_.record(r.arrivals, pending_control_);
  pending_control_ = 0;
  r.load_proxy_pct = load_.percent();
  ++now_;
  return r;
}

bool World::apply(const proto::ControlMessage& msg) {
  ++pending_control_;
  if (const auto* m = std::get_if<proto::ThrottleCmd>(&msg)) {
    auto it = ues_.find(m->ue);
    if (it == ues_.end() || it->second.rrc == RrcState::kReleased) return false;
    it->second.throttle_cap = std::clamp(m->cap, 0.0, 1.0);
    it->second.anomaly_score = std::clamp(m->score, 0.0, 1.0);
    return true;
  }
  if (const auto* m = std::get_if<proto::RrcReleaseCmd>(&msg)) {
    auto it = ues_.find(m->ue);
    if (it == ues_.end() || it->second.rrc == RrcState::kReleased) return false;
    release(it->second);
    return true;
  }
  if (const auto* m = std::get_if<proto::SliceCreate>(&msg)) {
    auto next = slices_;
    auto it = std::find_if(next.begin(), next.end(),
                           [&](const auto& s) { return s.id == m->slice.id; });
    if (it != next.end()) {
      *it = m->slice;
    } else {
      next.push_back(m->slice);
    }
    if (!sched::validate_slices(next, config_.grid_size, config_.link.tti_ms).empty()) {
      return false;
    }
    slices_ = std::move(next);
    states_[m->slice.id];
    return true;
  }
  if (const auto* m = std::get_if<proto::SliceDelete>(&msg)) {
    if (!find_slice(m->slice)) return false;
    for (const auto& [id, ue] : ues_) {
      if (ue.slice == m->slice && ue.rrc == RrcState::kConnected) return false;
    }
    std::erase_if(slices_, [&](const auto& s) { return s.id == m->slice; });
    states_.erase(m->slice);
    cursors_.erase(m->slice);
    return true;
  }
  if (const auto* m = std::get_if<proto::UeAssociate>(&msg)) {
    auto it = ues_.find(m->ue);
    if (it == ues_.end() || !find_slice(m->slice)) return false;
    it->second.slice = m->slice;
    return true;
  }
  return false;
}

proto::SliceIndication World::indication() {
  proto::SliceIndication ind;
  ind.tti = now_;
  const double ttis = static_cast<double>(std::max<Tti>(now_ - period_start_, 1));
  const double ms = ttis * config_.link.tti_ms;
  for (const auto& s : slices_) {
    std::uint64_t backlog = 0;
    for (const auto& [id, ue] : ues_) {
      if (ue.slice == s.id) backlog += ue.queued_bytes;
    }
    ind.slices.push_back({s.id, period_slice_bits_[s.id] / (ms * 1000.0),
                          static_cast<double>(period_slice_prbs_[s.id]) /
                              (ttis * config_.grid_size),
                          backlog});
  }
  for (const auto& [id, ue] : ues_) {
    ind.ues.push_back({id, ue.slice, period_ue_bits_[id] / (ms * 1000.0), ue.queued_bytes,
                       ue.throttle_cap, ue.rrc == RrcState::kReleased});
  }
  period_start_ = now_;
  period_slice_bits_.clear();
  period_slice_prbs_.clear();
  period_ue_bits_.clear();
  return ind;
}

}  // namespace secslice::sim
