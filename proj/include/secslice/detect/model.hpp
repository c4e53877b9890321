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

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "secslice/detect/features.hpp"

namespace secslice::detect {

enum class NumericTransform { kIdentity, kLog1p };

struct NumericFeature {
  std::string name;  // src_bytes | dst_bytes
  NumericTransform transform = NumericTransform::kLog1p;
  bool operator==(const NumericFeature&) const = default;
};

/// Layout of the numeric vector the trees consume: one-hot protocol, service
/// and flag groups (in that order, each in vocabulary order), then the
/// numeric fields.
struct FeatureSchema {
  std::string vocab_version;
  std::vector<std::string> protocols;
  std::vector<std::string> services;
  std::vector<std::string> flags;
  std::vector<NumericFeature> numeric;
  std::vector<std::string> feature_names;

  std::size_t size() const {
    return protocols.size() + services.size() + flags.size() + numeric.size();
  }
  bool operator==(const FeatureSchema&) const = default;
};

/// Internal node when `feature >= 0`, leaf otherwise.
struct TreeNode {
  std::int32_t feature = -1;
  double threshold = 0.0;
  std::int32_t left = -1;
  std::int32_t right = -1;
  double leaf = 0.0;

  bool is_leaf() const { return feature < 0; }
};

struct Tree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root
};

struct ModelMetadata {
  std::string dataset;
  std::string training_hash;
};

struct TreeEnsembleModel {
  FeatureSchema schema;
  std::vector<Tree> trees;
  double bias = 0.0;
  double threshold = 0.5;
  std::uint32_t max_depth = 0;
  ModelMetadata metadata;
};

/// Parses the portable JSON model document and checks its structural
/// invariants (node indices, feature indices, depth, finite leaves).
/// Throws ModelError naming the offending element.
TreeEnsembleModel parse_model(std::string_view json_text);
TreeEnsembleModel load_model(const std::filesystem::path& path);

/// Throws ModelError if the model is not self-consistent.
void validate_model(const TreeEnsembleModel& model);

/// Throws ModelError unless the schema is internally consistent and was
/// built for `vocab_version`.
void require_vocab(const FeatureSchema& schema, std::string_view vocab_version);

/// One-hot + transform encoding of a packet. A category missing from the
/// vocabulary leaves its whole group at zero.
std::vector<double> encode(const PacketFeatures& features,
                           const FeatureSchema& schema);

/// logistic(bias + sum of tree outputs); a node sends x left iff
/// x[feature] <= threshold. Throws InputError on a length mismatch.
double predict(const TreeEnsembleModel& model, std::span<const double> vector);

inline double logistic(double z) { return 1.0 / (1.0 + std::exp(-z)); }

}  // namespace secslice::detect
