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
#include <map>
#include <string>
#include <vector>

#include "secslice/ctrl/controller.hpp"
#include "secslice/detect/detector.hpp"
#include "secslice/proto/connection.hpp"
#include "secslice/scenario/config.hpp"
#include "secslice/sim/world.hpp"

namespace secslice::scenario {

// The three components exchange frames in a fixed per-TTI order:
//
//   RAN   step t, send tap batch, maybe an indication, then tick(t)
//   edge  read the tap batch, send reports, then tick(t)
//   ctrl  read RAN up to tick(t), then edge up to tick(t); send commands
//         and tick(t)
//   RAN   read commands up to tick(t); they apply at t + control delay
//
// Every node only ever blocks on a peer that is ahead of it in this order,
// so the same code runs as one sequential pump or as separate processes.

/// Position of a message inside a TTI; with the TTI it orders events.log.
enum class Stage { kStartup = 0, kRanToCtrl = 1, kEdgeToCtrl = 2, kCtrlToRan = 3 };

struct EventRecord {
  Tti tti = 0;
  Stage stage = Stage::kStartup;
  std::string dir;   // e.g. "ctrl->ran"
  std::string body;  // canonical JSON
};

/// Sorts by (tti, stage) keeping send order within a stage, and renders
/// "tti=<t> dir=<a>-><b> <body>" lines.
std::vector<std::string> render_events(std::vector<EventRecord> events);

class RanNode {
 public:
  RanNode(sim::World& world, proto::Connection& ctrl, proto::Connection* tap,
          const ControllerSettings& settings);

  void accept_hello();
  /// Applies the controller's startup batch (slice and UE setup) before TTI 0.
  void receive_startup();

  /// Steps the world one TTI and publishes its outputs.
  sim::StepResult begin_tti();
  /// Waits for the controller's commands for the TTI just stepped.
  void end_tti();

  void shutdown();

  std::vector<EventRecord>& events() { return events_; }
  std::uint64_t rejected_commands() const { return rejected_; }

 private:
  sim::World& world_;
  proto::Connection& ctrl_;
  proto::Connection* tap_;
  ControllerSettings settings_;
  std::multimap<Tti, proto::ControlMessage> due_;
  std::vector<EventRecord> events_;
  std::uint64_t rejected_ = 0;
};

class EdgeNode {
 public:
  EdgeNode(detect::EdgeServer& server, proto::Connection& tap, proto::Connection& ctrl);

  void send_hello();
  void expect_hello();
  /// Handles one tap batch. Returns false when the tap stream has ended.
  bool serve_tti();

  std::vector<EventRecord>& events() { return events_; }

 private:
  detect::EdgeServer& server_;
  proto::Connection& tap_;
  proto::Connection& ctrl_;
  std::vector<EventRecord> events_;
};

class ControllerNode {
 public:
  ControllerNode(ctrl::SliceController& controller, proto::Connection& ran,
                 proto::Connection* edge);

  void send_hello();
  /// Completes both handshakes and sends the startup batch.
  void finish_startup();
  /// One TTI of the loop. Returns false once the RAN announced shutdown.
  bool serve_tti();

  std::vector<EventRecord>& events() { return events_; }

 private:
  ctrl::SliceController& controller_;
  proto::Connection& ran_;
  proto::Connection* edge_;
  std::vector<proto::ControlMessage> outbox_;
  std::vector<EventRecord> events_;
};

}  // namespace secslice::scenario
