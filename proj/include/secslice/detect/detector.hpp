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
#include <memory>
#include <optional>
#include <vector>

#include "secslice/common/ids.hpp"
#include "secslice/detect/features.hpp"
#include "secslice/detect/model.hpp"
#include "secslice/detect/window.hpp"

namespace secslice::detect {

struct AnomalyReport {
  UeId ue = 0;
  double window_score = 0.0;
  std::uint64_t packets_seen = 0;
  Tti tti = 0;
  bool operator==(const AnomalyReport&) const = default;
};

struct DetectorOptions {
  std::uint32_t report_every = 10;
};

/// One xEdge detector instance. Keeps a FeatureWindow per UE and emits a
/// report every `report_every` packets of that UE.
class Detector {
 public:
  Detector(std::shared_ptr<const TreeEnsembleModel> model, DetectorOptions options = {});

  double probability(const PacketFeatures& features) const;
  bool is_anomalous(const PacketFeatures& features) const;

  std::optional<AnomalyReport> observe(UeId ue, const PacketFeatures& features,
                                       Tti now = 0);

  /// nullptr if the UE has not been seen.
  const FeatureWindow* window(UeId ue) const;

 private:
  std::shared_ptr<const TreeEnsembleModel> model_;
  DetectorOptions options_;
  std::map<UeId, FeatureWindow> windows_;
};

/// A delivered packet as mirrored to the edge server.
struct TapRecord {
  UeId ue = 0;
  SliceId slice = 0;
  PacketFeatures features;
  bool operator==(const TapRecord&) const = default;
};

/// Everything delivered in one TTI.
struct TapBatch {
  Tti tti = 0;
  std::vector<TapRecord> records;
  bool operator==(const TapBatch&) const = default;
};

/// The edge server: one Detector per slice, created on first traffic.
/// Instances share the loaded model and nothing else.
class EdgeServer {
 public:
  EdgeServer(std::shared_ptr<const TreeEnsembleModel> model, DetectorOptions options = {});

  /// Reports in packet order.
  std::vector<AnomalyReport> ingest(const TapBatch& batch);

  const Detector* detector(SliceId slice) const;

 private:
  std::shared_ptr<const TreeEnsembleModel> model_;
  DetectorOptions options_;
  std::map<SliceId, Detector> per_slice_;
};

}  // namespace secslice::detect
