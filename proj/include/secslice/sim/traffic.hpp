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
#include <filesystem>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "secslice/common/ids.hpp"
#include "secslice/detect/features.hpp"

namespace secslice::sim {

struct ReplayRecord {
  detect::PacketFeatures features;
  std::uint32_t payload_bytes = 0;
  int label = 0;
};

/// Pre-extracted dataset rows replayed as traffic.
struct ReplayDataset {
  std::string vocab_version;
  std::vector<ReplayRecord> records;
};

/// Reads the replay CSV: an optional "# vocab_version=..." line, a header
/// with protocol_type,service,flag,src_bytes,dst_bytes,payload_bytes[,label],
/// then one record per line. Throws ConfigError with the line number.
ReplayDataset load_replay(const std::filesystem::path& path);

struct ConstantBitRate {
  double mbps = 0.0;
  std::uint32_t packet_bytes = 1500;
};

struct Poisson {
  double mbps = 0.0;
  std::uint32_t mean_packet_bytes = 1500;
};

struct DatasetReplay {
  std::shared_ptr<const ReplayDataset> dataset;
  double records_per_second = 2000.0;
};

using TrafficKind = std::variant<ConstantBitRate, Poisson, DatasetReplay>;

struct TrafficSource {
  TrafficKind kind;
  UeId ue = 0;
  Tti start_tti = 0;
  std::optional<Tti> stop_tti;  // exclusive
  /// Features stamped on CBR/Poisson packets. Replay packets carry their own.
  detect::PacketFeatures profile{"tcp", "http", "SF", 250, 1500};

  bool active(Tti t) const { return t >= start_tti && (!stop_tti || t < *stop_tti); }
};

/// One generated packet before it is queued.
struct Arrival {
  std::uint32_t bytes = 0;
  const detect::PacketFeatures* features = nullptr;
};

/// Deterministic 64-bit generator with a portable uniform/Poisson layer
/// (the standard distributions are not reproducible across libraries).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform();  // [0, 1)
  std::uint64_t poisson(double mean);

 private:
  std::mt19937_64 engine_;
};

/// Stateful per-source packet generator. `features` pointers stay valid for
/// the lifetime of the source.
class SourceState {
 public:
  explicit SourceState(TrafficSource source);

  /// Packets this source emits during one TTI of `tti_ms`.
  void generate(Tti t, double tti_ms, Rng& rng, std::vector<Arrival>& out);
  const TrafficSource& source() const { return source_; }

 private:
  TrafficSource source_;
  double carry_ = 0.0;  // fractional packets owed
  std::size_t next_record_ = 0;
};

}  // namespace secslice::sim
