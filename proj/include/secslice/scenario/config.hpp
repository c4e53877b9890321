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
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "secslice/common/ids.hpp"
#include "secslice/ctrl/controller.hpp"
#include "secslice/detect/model.hpp"
#include "secslice/sim/world.hpp"

namespace secslice::scenario {

struct Phase {
  std::string label;
  Tti start_tti = 0;
};

struct DetectorSettings {
  bool enabled = false;
  std::filesystem::path model_path;
  std::uint32_t report_every = 10;
  std::shared_ptr<const detect::TreeEnsembleModel> model;  // loaded when enabled
};

struct ControllerSettings {
  double min_cap = 0.05;
  std::uint32_t release_after = 1;
  Tti control_delay_ttis = 10;
  Tti indication_period_ttis = 100;
  ctrl::ReconfigRule reconfig;
};

struct ScenarioConfig {
  std::filesystem::path source;  // the file it was read from, if any
  Tti horizon_ttis = 1;
  sim::WorldConfig world;
  std::map<UeId, std::string> roles;  // "attacker", "victim", ...
  DetectorSettings detector;
  ControllerSettings controller;
  std::vector<Phase> phases;
  std::filesystem::path output_dir;

  /// Label of the phase active at `t`.
  const std::string& phase_at(Tti t) const;
  /// First UE whose role is `role`, if any.
  std::optional<UeId> ue_with_role(std::string_view role) const;
  ctrl::SlaPolicy sla_policy() const;
};

/// Structural parse of the JSON config text. Relative file paths resolve
/// against `base_dir`; replay files and the model are loaded here. Throws
/// ConfigError naming the offending field, e.g. "slices[1].share: ...".
ScenarioConfig parse_config(std::string_view text, const std::filesystem::path& base_dir);

/// Every semantic invariant violation, one line each; empty when valid.
std::vector<std::string> check_config(const ScenarioConfig& config);

/// Reads, parses and checks. Throws InputError if the file cannot be read
/// and ConfigError listing the violations otherwise.
ScenarioConfig load_config(const std::filesystem::path& path);

/// All violations for the file at `path` without running anything. A parse
/// failure is reported as a single violation. Throws InputError if the file
/// cannot be read.
std::vector<std::string> validate_config_file(const std::filesystem::path& path);

}  // namespace secslice::scenario
