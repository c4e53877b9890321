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

#include "secslice/detect/window.hpp"

#include <stdexcept>
#include <utility>

namespace secslice::detect {

void FeatureWindow::push(PacketFeatures features, bool anomalous) {
  auto& slot = ring_[head_];
  if (size_ == kWindowSize) {
    if (slot.anomalous) --anomalous_;
  } else {
    ++size_;
  }
  slot.features = std::move(features);
  slot.anomalous = anomalous;
  if (anomalous) ++anomalous_;
  head_ = (head_ + 1) % kWindowSize;
  ++seen_;
}

const FeatureWindow::Entry& FeatureWindow::at(std::size_t i) const {
  if (i >= size_) throw std::out_of_range("FeatureWindow::at");
  const std::size_t oldest = (head_ + kWindowSize - size_) % kWindowSize;
  return ring_[(oldest + i) % kWindowSize];
}

double FeatureWindow::score() const {
  if (size_ == 0) return 0.0;
  if (anomalous_ == size_ && seen_ < kWindowSize) {
    return static_cast<double>(anomalous_) / static_cast<double>(kWindowSize);
  }
  return static_cast<double>(anomalous_) / static_cast<double>(size_);
}

}  // namespace secslice::detect
