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

#include "secslice/sim/traffic.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "secslice/common/error.hpp"

namespace secslice::sim {
namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) {
    while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
    out.push_back(cell);
  }
  return out;
}

std::uint64_t parse_u64(const std::string& s, const std::string& where) {
  std::size_t pos = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != s.size() || s.empty() || s.front() == '-') {
    throw ConfigError(where + ": expected a nonnegative integer, got '" + s + "'");
  }
  return v;
}

}  // namespace

ReplayDataset load_replay(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open replay file " + path.string());
  ReplayDataset ds;
  std::string line;
  std::size_t lineno = 0;
  std::vector<std::string> header;
  const std::vector<std::string> required = {"protocol_type", "service",   "flag",
                                             "src_bytes",     "dst_bytes", "payload_bytes"};
  std::vector<std::size_t> col(required.size());
  std::optional<std::size_t> label_col;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line.front() == '#') {
      constexpr std::string_view key = "# vocab_version=";
      if (line.rfind(key, 0) == 0) ds.vocab_version = line.substr(key.size());
      continue;
    }
    const auto cells = split_csv(line);
    const std::string where = path.filename().string() + ":" + std::to_string(lineno);
    if (header.empty()) {
      header = cells;
      for (std::size_t i = 0; i < required.size(); ++i) {
        auto it = std::find(header.begin(), header.end(), required[i]);
        if (it == header.end()) throw ConfigError(where + ": missing column " + required[i]);
        col[i] = static_cast<std::size_t>(it - header.begin());
      }
      if (auto it = std::find(header.begin(), header.end(), "label"); it != header.end()) {
        label_col = static_cast<std::size_t>(it - header.begin());
      }
      continue;
    }
    if (cells.size() != header.size()) {
      throw ConfigError(where + ": expected " + std::to_string(header.size()) + " cells");
    }
    ReplayRecord r;
    r.features.protocol_type = cells[col[0]];
    r.features.service = cells[col[1]];
    r.features.flag = cells[col[2]];
    r.features.src_bytes = parse_u64(cells[col[3]], where + " src_bytes");
    r.features.dst_bytes = parse_u64(cells[col[4]], where + " dst_bytes");
    const auto payload = parse_u64(cells[col[5]], where + " payload_bytes");
    if (payload == 0 || payload > 65535) {
      throw ConfigError(where + ": payload_bytes must be in [1, 65535]");
    }
    r.payload_bytes = static_cast<std::uint32_t>(payload);
    if (label_col) r.label = static_cast<int>(parse_u64(cells[*label_col], where + " label"));
    ds.records.push_back(std::move(r));
  }
  if (header.empty()) throw ConfigError(path.string() + ": no header line");
  return ds;
}

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::uint64_t Rng::poisson(double mean) {
  if (mean <= 0.0) return 0;
  if (mean > 200.0) {
    const double half = mean / 2.0;
    return poisson(half) + poisson(half);
  }
  // Knuth: count uniforms until their product drops below e^-mean.
  const double limit = std::exp(-mean);
  std::uint64_t k = 0;
  double p = uniform();
  while (p > limit) {
    ++k;
    p *= uniform();
  }
  return k;
}

SourceState::SourceState(TrafficSource source) : source_(std::move(source)) {
  if (const auto* r = std::get_if<DatasetReplay>(&source_.kind)) {
    if (!r->dataset || r->dataset->records.empty()) {
      throw ConfigError("replay source for ue " + std::to_string(source_.ue) +
                        " has no records");
    }
  }
}

void SourceState::generate(Tti t, double tti_ms, Rng& rng, std::vector<Arrival>& out) {
  if (!source_.active(t)) return;
  std::visit(
      [&](const auto& kind) {
        using K = std::decay_t<decltype(kind)>;
        if constexpr (std::is_same_v<K, ConstantBitRate>) {
          const double bytes = kind.mbps * 1e6 / 8.0 * tti_ms / 1000.0;
          carry_ += bytes / kind.packet_bytes;
          while (carry_ >= 1.0 - 1e-9) {
            out.push_back({kind.packet_bytes, &source_.profile});
            carry_ -= 1.0;
          }
        } else if constexpr (std::is_same_v<K, Poisson>) {
          const double bytes = kind.mbps * 1e6 / 8.0 * tti_ms / 1000.0;
          const auto n = rng.poisson(bytes / kind.mean_packet_bytes);
          for (std::uint64_t i = 0; i < n; ++i) {
            out.push_back({kind.mean_packet_bytes, &source_.profile});
          }
        } else {
          carry_ += kind.records_per_second * tti_ms / 1000.0;
          const auto& recs = kind.dataset->records;
          while (carry_ >= 1.0 - 1e-9) {
            const auto& r = recs[next_record_];
            next_record_ = (next_record_ + 1) % recs.size();
            out.push_back({r.payload_bytes, &r.features});
            carry_ -= 1.0;
          }
        }
      },
      source_.kind);
}

}  // namespace secslice::sim
