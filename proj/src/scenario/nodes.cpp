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

#include "secslice/scenario/nodes.hpp"

#include <algorithm>

#include "secslice/proto/codec.hpp"
#include "secslice/proto/tap_codec.hpp"

namespace secslice::scenario {
namespace {

using proto::ProtocolError;
using Kind = ProtocolError::Kind;

constexpr const char* kStartupAck = "startup";
constexpr const char* kShutdownAck = "shutdown";

proto::Ack tick(Tti t) { return {"tick", t}; }

void expect_hello_on(proto::Connection& conn) {
  const auto msg = conn.recv();
  if (!std::holds_alternative<proto::Hello>(msg)) {
    throw ProtocolError(Kind::kHandshake,
                        "expected Hello, got " + std::string(proto::type_tag(msg)));
  }
}

const proto::Ack* as_ack(const proto::ControlMessage& msg) {
  return std::get_if<proto::Ack>(&msg);
}

}  // namespace

std::vector<std::string> render_events(std::vector<EventRecord> events) {
  std::stable_sort(events.begin(), events.end(), [](const auto& a, const auto& b) {
    if (a.tti != b.tti) return a.tti < b.tti;
    return static_cast<int>(a.stage) < static_cast<int>(b.stage);
  });
  std::vector<std::string> lines;
  lines.reserve(events.size());
  for (const auto& e : events) {
    lines.push_back("tti=" + std::to_string(e.tti) + " dir=" + e.dir + " " + e.body);
  }
  return lines;
}

RanNode::RanNode(sim::World& world, proto::Connection& ctrl, proto::Connection* tap,
                 const ControllerSettings& settings)
    : world_(world), ctrl_(ctrl), tap_(tap), settings_(settings) {}

void RanNode::accept_hello() { proto::handshake_accept(ctrl_); }

void RanNode::receive_startup() {
  for (;;) {
    const auto msg = ctrl_.recv();
    if (const auto* a = as_ack(msg)) {
      if (a->of == kStartupAck) return;
      throw ProtocolError(Kind::kMalformed, "unexpected Ack '" + a->of + "' during startup");
    }
    if (!world_.apply(msg)) ++rejected_;
  }
}

sim::StepResult RanNode::begin_tti() {
  const Tti t = world_.now();
  for (auto it = due_.begin(); it != due_.end() && it->first <= t;) {
    if (!world_.apply(it->second)) ++rejected_;
    it = due_.erase(it);
  }
  auto r = world_.step();
  if (tap_) tap_->send_payload(proto::encode_tap({t, r.delivered}));
  if ((t + 1) % settings_.indication_period_ttis == 0) {
    // The indication covers TTIs up to and including t; world_.now() is t+1.
    auto ind = world_.indication();
    ind.tti = t;
    ctrl_.send(ind);
    events_.push_back({t, Stage::kRanToCtrl, "ran->ctrl", proto::encode_body(ind)});
    world_.count_control(1);
  }
  ctrl_.send(tick(t));
  return r;
}

void RanNode::end_tti() {
  const Tti t = world_.now() - 1;
  for (;;) {
    auto msg = ctrl_.recv();
    if (proto::is_tick(msg, t)) return;
    if (as_ack(msg)) {
      throw ProtocolError(Kind::kMalformed, "controller acknowledged out of order");
    }
    due_.emplace(t + settings_.control_delay_ttis, std::move(msg));
  }
}

void RanNode::shutdown() { ctrl_.send(proto::Ack{kShutdownAck, world_.now()}); }

EdgeNode::EdgeNode(detect::EdgeServer& server, proto::Connection& tap, proto::Connection& ctrl)
    : server_(server), tap_(tap), ctrl_(ctrl) {}

void EdgeNode::send_hello() { ctrl_.send(proto::Hello{}); }

void EdgeNode::expect_hello() { expect_hello_on(ctrl_); }

bool EdgeNode::serve_tti() {
  std::string payload;
  try {
    payload = tap_.read_payload();
  } catch (const ProtocolError& e) {
    if (e.kind() == Kind::kClosed) return false;
    throw;
  }
  const auto batch = proto::decode_tap(payload);
  for (const auto& report : server_.ingest(batch)) {
    const proto::ControlMessage msg = proto::AnomalyReport{report};
    ctrl_.send(msg);
    events_.push_back({batch.tti, Stage::kEdgeToCtrl, "edge->ctrl", proto::encode_body(msg)});
  }
  ctrl_.send(tick(batch.tti));
  return true;
}

ControllerNode::ControllerNode(ctrl::SliceController& controller, proto::Connection& ran,
                               proto::Connection* edge)
    : controller_(controller), ran_(ran), edge_(edge) {}

void ControllerNode::send_hello() { ran_.send(proto::Hello{}); }

void ControllerNode::finish_startup() {
  expect_hello_on(ran_);
  if (edge_) proto::handshake_accept(*edge_);
  for (const auto& msg : controller_.startup()) {
    ran_.send(msg);
    events_.push_back({0, Stage::kStartup, "ctrl->ran", proto::encode_body(msg)});
  }
  ran_.send(proto::Ack{kStartupAck, 0});
}

bool ControllerNode::serve_tti() {
  outbox_.clear();
  Tti t = 0;
  for (;;) {
    const auto msg = ran_.recv();
    if (const auto* a = as_ack(msg)) {
      if (a->of == kShutdownAck) return false;
      if (a->of != "tick") {
        throw ProtocolError(Kind::kMalformed, "unexpected Ack '" + a->of + "' from RAN");
      }
      t = a->tti;
      break;
    }
    for (auto& out : controller_.handle(msg)) outbox_.push_back(std::move(out));
  }
  if (edge_) {
    for (;;) {
      const auto msg = edge_->recv();
      if (proto::is_tick(msg, t)) break;
      if (as_ack(msg)) {
        throw ProtocolError(Kind::kMalformed, "edge acknowledged out of order");
      }
      for (auto& out : controller_.handle(msg)) outbox_.push_back(std::move(out));
    }
  }
  for (const auto& out : outbox_) {
    ran_.send(out);
    events_.push_back({t, Stage::kCtrlToRan, "ctrl->ran", proto::encode_body(out)});
  }
  ran_.send(tick(t));
  return true;
}

}  // namespace secslice::scenario
