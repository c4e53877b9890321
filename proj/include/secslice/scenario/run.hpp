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
#include <optional>
#include <string>
#include <vector>

#include "secslice/common/ids.hpp"
#include "secslice/scenario/config.hpp"

namespace secslice::scenario {

enum class Mode { kInproc, kSockets };

/// "inproc" or "sockets"; throws ConfigError otherwise.
Mode parse_mode(std::string_view text);

struct RunOptions {
  Mode mode = Mode::kInproc;
  std::optional<std::filesystem::path> out_dir;  // overrides the config
  std::optional<std::uint64_t> seed;             // overrides the config
  bool write_files = true;
};

/// One metrics.csv row: a UE's view of one TTI.
struct MetricRow {
  Tti tti = 0;
  std::string phase;
  UeId ue = 0;
  double throughput_mbps = 0.0;
  bool rtt_timeout = false;
  std::optional<double> rtt_ms;  // set when a probe completed this TTI
  double load_proxy_pct = 0.0;
  double anomaly_score = 0.0;
  bool released = false;
};

struct PhaseSummary {
  std::string phase;
  UeId ue = 0;
  std::uint64_t ttis = 0;
  double mean_throughput_mbps = 0.0;
  std::optional<double> median_rtt_ms;
  std::uint64_t rtt_samples = 0;
  std::uint64_t rtt_timeouts = 0;
  double mean_load_proxy_pct = 0.0;
  double mean_anomaly_score = 0.0;
};

struct RunResult {
  std::vector<MetricRow> rows;
  std::vector<std::string> events;  // events.log lines
  std::vector<PhaseSummary> summary;
  std::vector<std::string> warnings;  // controller log
  std::uint64_t rejected_commands = 0;
  std::filesystem::path out_dir;
};

/// Drives RAN, edge detector and controller to the horizon. In sockets mode
/// the detector and controller run as child processes on loopback TCP.
/// Protocol failures throw after flushing whatever was written; ConfigError
/// for invalid input.
RunResult run_scenario(const ScenarioConfig& config, const RunOptions& options = {});

std::vector<PhaseSummary> summarize(const std::vector<MetricRow>& rows,
                                    const std::vector<Phase>& phases);

/// The exact text written to metrics.csv for `row` (no newline).
std::string format_row(const MetricRow& row);
inline constexpr const char* kMetricsHeader =
    "tti,phase,ue_id,throughput_mbps,rtt_ms,load_proxy_pct,anomaly_score,rrc_state";

}  // namespace secslice::scenario
