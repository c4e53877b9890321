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

// secslice: run or validate a sliced-RAN scenario.
//
//   secslice run <config> [--mode inproc|sockets] [--out <dir>] [--seed <n>]
//   secslice validate <config>

#include <cstdio>
#include <exception>
#include <iostream>

#include <CLI11.hpp>

#include "secslice/common/error.hpp"
#include "secslice/scenario/config.hpp"
#include "secslice/scenario/run.hpp"

namespace {

using namespace secslice;

int do_validate(const std::string& path) {
  try {
    const auto issues = scenario::validate_config_file(path);
    for (const auto& i : issues) std::cout << i << '\n';
    std::cout << issues.size() << (issues.size() == 1 ? " violation" : " violations") << '\n';
    return issues.empty() ? 0 : 1;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}

int do_run(const std::string& path, const std::string& mode, const std::string& out,
           const std::optional<std::uint64_t>& seed) {
  scenario::ScenarioConfig config;
  scenario::RunOptions options;
  try {
    config = scenario::load_config(path);
    options.mode = scenario::parse_mode(mode);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  if (!out.empty()) options.out_dir = out;
  options.seed = seed;
  try {
    const auto result = scenario::run_scenario(config, options);
    std::cout << "wrote " << result.out_dir.string() << " (" << result.rows.size()
              << " metric rows, " << result.events.size() << " events";
    if (!result.warnings.empty()) {
      std::cout << ", " << result.warnings.size() << " controller warnings";
    }
    std::cout << ")\n";
    for (const auto& s : result.summary) {
      std::printf("  %-9s ue %u  %8.2f Mbit/s  rtt %s  load %6.2f%%\n", s.phase.c_str(), s.ue,
                  s.mean_throughput_mbps,
                  s.median_rtt_ms ? (std::to_string(*s.median_rtt_ms) + " ms").c_str() : "n/a",
                  s.mean_load_proxy_pct);
    }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sliced-RAN downlink simulator with a closed anomaly-control loop"};
  app.require_subcommand(1);

  std::string config_path, mode = "inproc", out;
  std::optional<std::uint64_t> seed;

  auto* run = app.add_subcommand("run", "Run a scenario and write metrics.csv, summary.csv, events.log");
  run->add_option("config", config_path, "Scenario config file")->required();
  run->add_option("--mode", mode, "inproc or sockets")->check(CLI::IsMember({"inproc", "sockets"}));
  run->add_option("--out", out, "Output directory (overrides the config)");
  run->add_option("--seed", seed, "RNG seed (overrides the config)");

  auto* validate = app.add_subcommand("validate", "Report every invariant violation in a config");
  validate->add_option("config", config_path, "Scenario config file")->required();

  CLI11_PARSE(app, argc, argv);
  if (*validate) return do_validate(config_path);
  return do_run(config_path, mode, out, seed);
}
