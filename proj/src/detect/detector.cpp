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

#include "secslice/detect/detector.hpp"

#include "secslice/common/error.hpp"

namespace secslice::detect {

Detector::Detector(std::shared_ptr<const TreeEnsembleModel> model, DetectorOptions options)
    : model_(std::move(model)), options_(options) {
  if (!model_) throw ModelError("detector needs a loaded model");
  if (options_.report_every == 0) throw ConfigError("report_every must be >= 1");
}

double Detector::probability(const PacketFeatures& features) const {
  const auto v = encode(features, model_->schema);
  return predict(*model_, v);
}

bool Detector::is_anomalous(const PacketFeatures& features) const {
  return probability(features) >= model_->threshold;
}

std::optional<AnomalyReport> Detector::observe(UeId ue, const PacketFeatures& features,
                                               Tti now) {
  const bool bad = is_anomalous(features);
  auto& w = windows_[ue];
  w.push(features, bad);
  if (w.packets_seen() % options_.report_every != 0) return std::nullopt;
  return AnomalyReport{ue, w.score(), w.packets_seen(), now};
}

const FeatureWindow* Detector::window(UeId ue) const {
  auto it = windows_.find(ue);
  return it == windows_.end() ? nullptr : &it->second;
}

EdgeServer::EdgeServer(std::shared_ptr<const TreeEnsembleModel> model,
                       DetectorOptions options)
    : model_(std::move(model)), options_(options) {
  if (!model_) throw ModelError("edge server needs a loaded model");
}

std::vector<AnomalyReport> EdgeServer::ingest(const TapBatch& batch) {
  std::vector<AnomalyReport> out;
  for (const auto& rec : batch.records) {
    auto it = per_slice_.find(rec.slice);
    if (it == per_slice_.end()) {
      it = per_slice_.emplace(rec.slice, Detector(model_, options_)).first;
    }
    if (auto r = it->second.observe(rec.ue, rec.features, batch.tti)) out.push_back(*r);
  }
  return out;
}

const Detector* EdgeServer::detector(SliceId slice) const {
  auto it = per_slice_.find(slice);
  return it == per_slice_.end() ? nullptr : &it->second;
}

}  // namespace secslice::detect
