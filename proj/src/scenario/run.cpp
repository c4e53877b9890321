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

#include "secslice/scenario/run.hpp"

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <csignal>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "secslice/common/error.hpp"
#include "secslice/proto/codec.hpp"
#include "secslice/scenario/nodes.hpp"

namespace secslice::scenario {
namespace {

std::string fixed(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

// Collects rows and streams them to metrics.csv as the run progresses, so a
// failed run still leaves everything up to the failure on disk.
class MetricsSink {
 public:
  MetricsSink(const ScenarioConfig& config, const sim::World& world,
              const std::optional<std::filesystem::path>& file)
      : config_(config), world_(world) {
    if (file) {
      out_.open(*file, std::ios::binary | std::ios::trunc);
      if (!out_) throw InputError("cannot write " + file->string());
      out_ << kMetricsHeader << '\n';
    }
  }

  void record(const sim::StepResult& r) {
    const auto& phase = config_.phase_at(r.tti);
    const double ms = world_.config().link.tti_ms;
    for (const auto& [id, ue] : world_.ues()) {
      MetricRow row;
      row.tti = r.tti;
      row.phase = phase;
      row.ue = id;
      const auto it = r.delivered_bytes.find(id);
      const double bytes = it == r.delivered_bytes.end() ? 0.0 : static_cast<double>(it->second);
      row.throughput_mbps = bytes * 8.0 / (ms * 1000.0);
      for (const auto& s : r.rtt) {
        if (s.ue != id) continue;
        if (!s.rtt_ms) {
          row.rtt_timeout = true;
        } else if (!row.rtt_ms || *s.rtt_ms > *row.rtt_ms) {
          row.rtt_ms = s.rtt_ms;
        }
      }
      if (row.rtt_ms) row.rtt_timeout = false;
      row.load_proxy_pct = r.load_proxy_pct;
      row.anomaly_score = ue.anomaly_score;
      row.released = ue.rrc == sim::RrcState::kReleased;
      if (out_.is_open()) out_ << format_row(row) << '\n';
      rows_.push_back(std::move(row));
    }
  }

  std::vector<MetricRow> take() {
    if (out_.is_open()) out_.flush();
    return std::move(rows_);
  }

 private:
  const ScenarioConfig& config_;
  const sim::World& world_;
  std::ofstream out_;
  std::vector<MetricRow> rows_;
};

void write_lines(const std::filesystem::path& path, const std::vector<std::string>& lines) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write " + path.string());
  for (const auto& l : lines) out << l << '\n';
}

void write_summary(const std::filesystem::path& path, const std::vector<PhaseSummary>& summary) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write " + path.string());
  out << "phase,ue_id,ttis,mean_throughput_mbps,median_rtt_ms,rtt_samples,rtt_timeouts,"
         "mean_load_proxy_pct,mean_anomaly_score\n";
  for (const auto& s : summary) {
    out << s.phase << ',' << s.ue << ',' << s.ttis << ',' << fixed(s.mean_throughput_mbps) << ','
        << (s.median_rtt_ms ? fixed(*s.median_rtt_ms) : "") << ',' << s.rtt_samples << ','
        << s.rtt_timeouts << ',' << fixed(s.mean_load_proxy_pct) << ','
        << fixed(s.mean_anomaly_score) << '\n';
  }
}

struct Outputs {
  std::vector<EventRecord> events;
  std::vector<std::string> warnings;
  std::uint64_t rejected = 0;
};

void run_inproc(const ScenarioConfig& config, sim::World& world, MetricsSink& sink,
                Outputs& out) {
  const bool edge_on = config.detector.enabled;
  auto [ran_ctrl, ctrl_ran] = proto::make_memory_pair();
  auto [ran_tap, edge_tap] = proto::make_memory_pair();
  auto [edge_ctrl, ctrl_edge] = proto::make_memory_pair();

  ctrl::SliceController controller(config.sla_policy(),
                                   [&](const std::string& w) { out.warnings.push_back(w); });
  std::optional<detect::EdgeServer> server;
  std::optional<EdgeNode> edge;
  if (edge_on) {
    server.emplace(config.detector.model, detect::DetectorOptions{config.detector.report_every});
    edge.emplace(*server, *edge_tap, *edge_ctrl);
  }
  RanNode ran(world, *ran_ctrl, edge_on ? ran_tap.get() : nullptr, config.controller);
  ControllerNode ctl(controller, *ctrl_ran, edge_on ? ctrl_edge.get() : nullptr);

  auto collect = [&] {
    for (auto* v : {&ran.events(), &ctl.events()}) {
      out.events.insert(out.events.end(), v->begin(), v->end());
      v->clear();
    }
    if (edge) {
      out.events.insert(out.events.end(), edge->events().begin(), edge->events().end());
      edge->events().clear();
    }
    out.rejected = ran.rejected_commands();
  };
  try {
    if (edge_on) edge->send_hello();
    ctl.send_hello();
    ran.accept_hello();
    ctl.finish_startup();
    if (edge_on) edge->expect_hello();
    ran.receive_startup();
    for (Tti t = 0; t < config.horizon_ttis; ++t) {
      const auto r = ran.begin_tti();
      if (edge_on) edge->serve_tti();
      ctl.serve_tti();
      ran.end_tti();
      sink.record(r);
    }
    ran.shutdown();
    ctl.serve_tti();
  } catch (...) {
    collect();
    throw;
  }
  collect();
}

// Child-process side of sockets mode: results travel back through a file,
// one line per event ("E tti stage dir body") or warning ("W text").
void write_part(const std::filesystem::path& path, const std::vector<EventRecord>& events,
                const std::vector<std::string>& warnings) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  for (const auto& e : events) {
    f << "E " << e.tti << ' ' << static_cast<int>(e.stage) << ' ' << e.dir << ' ' << e.body
      << '\n';
  }
  for (const auto& w : warnings) f << "W " << w << '\n';
  f.flush();
  if (!f) throw InputError("cannot write " + path.string());
}

void read_part(const std::filesystem::path& path, Outputs& out) {
  std::ifstream f(path, std::ios::binary);
  std::string line;
  while (std::getline(f, line)) {
    if (line.rfind("W ", 0) == 0) {
      out.warnings.push_back(line.substr(2));
      continue;
    }
    std::istringstream in(line);
    std::string tag, dir;
    EventRecord e;
    int stage = 0;
    in >> tag >> e.tti >> stage >> dir;
    in.get();
    std::getline(in, e.body);
    e.stage = static_cast<Stage>(stage);
    e.dir = dir;
    out.events.push_back(std::move(e));
  }
}

template <class Body>
pid_t spawn(Body body) {
  std::fflush(nullptr);
  const pid_t pid = ::fork();
  if (pid < 0) throw std::runtime_error("fork failed");
  if (pid == 0) {
    int code = 0;
    try {
      body();
    } catch (const std::exception& e) {
      std::fprintf(stderr, "error: %s\n", e.what());
      code = 1;
    }
    std::fflush(nullptr);
    ::_exit(code);
  }
  return pid;
}

bool reap(pid_t pid) {
  int status = 0;
  while (::waitpid(pid, &status, 0) < 0) {
    if (errno != EINTR) return false;
  }
  return WIFEXITED(status) && WEXITSTATUS(status) == 0;
}

void run_sockets(const ScenarioConfig& config, sim::World& world, MetricsSink& sink,
                 Outputs& out) {
  const bool edge_on = config.detector.enabled;
  char tmpl[] = "/tmp/secslice-run-XXXXXX";
  if (!::mkdtemp(tmpl)) throw std::runtime_error("cannot create a temporary directory");
  const std::filesystem::path parts(tmpl);
  const auto ctrl_part = parts / "ctrl";
  const auto edge_part = parts / "edge";

  const auto ran_listener = proto::listen_loopback();
  proto::Listener tap_listener, edge_listener;
  if (edge_on) {
    tap_listener = proto::listen_loopback();
    edge_listener = proto::listen_loopback();
  }

  const pid_t ctrl_pid = spawn([&] {
    proto::close_fd(ran_listener.fd);
    proto::close_fd(tap_listener.fd);
    std::vector<std::string> warnings;
    ctrl::SliceController controller(config.sla_policy(),
                                      [&](const std::string& w) { warnings.push_back(w); });
    proto::SocketConnection ran(proto::connect_loopback(ran_listener.port));
    std::unique_ptr<proto::SocketConnection> edge;
    if (edge_on) {
      edge = std::make_unique<proto::SocketConnection>(proto::accept_one(edge_listener.fd));
      proto::close_fd(edge_listener.fd);
    }
    ControllerNode node(controller, ran, edge.get());
    try {
      node.send_hello();
      node.finish_startup();
      while (node.serve_tti()) {
      }
    } catch (...) {
      write_part(ctrl_part, node.events(), warnings);
      throw;
    }
    write_part(ctrl_part, node.events(), warnings);
  });

  pid_t edge_pid = -1;
  if (edge_on) {
    edge_pid = spawn([&] {
      proto::close_fd(ran_listener.fd);
      proto::close_fd(tap_listener.fd);
      proto::close_fd(edge_listener.fd);
      detect::EdgeServer server(config.detector.model, {config.detector.report_every});
      proto::SocketConnection tap(proto::connect_loopback(tap_listener.port));
      proto::SocketConnection ctrl(proto::connect_loopback(edge_listener.port));
      EdgeNode node(server, tap, ctrl);
      try {
        node.send_hello();
        node.expect_hello();
        while (node.serve_tti()) {
        }
      } catch (...) {
        write_part(edge_part, node.events(), {});
        throw;
      }
      write_part(edge_part, node.events(), {});
    });
    proto::close_fd(edge_listener.fd);
  }

  std::string failure;
  {
    std::unique_ptr<proto::SocketConnection> ctrl, tap;
    std::unique_ptr<RanNode> ran;
    try {
      ctrl = std::make_unique<proto::SocketConnection>(proto::accept_one(ran_listener.fd));
      if (edge_on) tap = std::make_unique<proto::SocketConnection>(proto::accept_one(tap_listener.fd));
      ran = std::make_unique<RanNode>(world, *ctrl, tap.get(), config.controller);
      ran->accept_hello();
      ran->receive_startup();
      for (Tti t = 0; t < config.horizon_ttis; ++t) {
        const auto r = ran->begin_tti();
        ran->end_tti();
        sink.record(r);
      }
      ran->shutdown();
    } catch (const std::exception& e) {
      failure = e.what();
    }
    if (ran) {
      out.events.insert(out.events.end(), ran->events().begin(), ran->events().end());
      out.rejected = ran->rejected_commands();
    }
    proto::close_fd(ran_listener.fd);
    proto::close_fd(tap_listener.fd);
    // Closing the connections here is what lets the children see EOF.
  }
  if (!failure.empty()) {
    ::kill(ctrl_pid, SIGTERM);
    if (edge_pid > 0) ::kill(edge_pid, SIGTERM);
  }
  const bool ctrl_ok = reap(ctrl_pid);
  const bool edge_ok = edge_pid < 0 || reap(edge_pid);
  read_part(ctrl_part, out);
  if (edge_on) read_part(edge_part, out);
  std::filesystem::remove_all(parts);
  if (!failure.empty()) {
    throw proto::ProtocolError(proto::ProtocolError::Kind::kClosed,
                               "sockets run failed: " + failure);
  }
  if (!ctrl_ok || !edge_ok) {
    throw proto::ProtocolError(proto::ProtocolError::Kind::kClosed,
                               std::string(!ctrl_ok ? "controller" : "detector") +
                                   " process exited abnormally");
  }
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const auto n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

Mode parse_mode(std::string_view text) {
  if (text == "inproc") return Mode::kInproc;
  if (text == "sockets") return Mode::kSockets;
  throw ConfigError("--mode: expected inproc or sockets, got '" + std::string(text) + "'");
}

std::string format_row(const MetricRow& row) {
  std::string s = std::to_string(row.tti) + ',' + row.phase + ',' + std::to_string(row.ue) +
                  ',' + fixed(row.throughput_mbps) + ',';
  if (row.rtt_ms) {
    s += fixed(*row.rtt_ms);
  } else if (row.rtt_timeout) {
    s += "timeout";
  }
  s += ',' + fixed(row.load_proxy_pct) + ',' + fixed(row.anomaly_score) + ',' +
       (row.released ? "released" : "connected");
  return s;
}

std::vector<PhaseSummary> summarize(const std::vector<MetricRow>& rows,
                                    const std::vector<Phase>& phases) {
  std::vector<PhaseSummary> out;
  for (const auto& phase : phases) {
    std::map<UeId, std::vector<const MetricRow*>> by_ue;
    for (const auto& r : rows) {
      if (r.phase == phase.label) by_ue[r.ue].push_back(&r);
    }
    for (const auto& [ue, list] : by_ue) {
      PhaseSummary s;
      s.phase = phase.label;
      s.ue = ue;
      s.ttis = list.size();
      std::vector<double> rtts;
      for (const auto* r : list) {
        s.mean_throughput_mbps += r->throughput_mbps;
        s.mean_load_proxy_pct += r->load_proxy_pct;
        s.mean_anomaly_score += r->anomaly_score;
        if (r->rtt_ms) rtts.push_back(*r->rtt_ms);
        if (r->rtt_timeout) ++s.rtt_timeouts;
      }
      const auto n = static_cast<double>(list.size());
      s.mean_throughput_mbps /= n;
      s.mean_load_proxy_pct /= n;
      s.mean_anomaly_score /= n;
      s.rtt_samples = rtts.size();
      if (!rtts.empty()) s.median_rtt_ms = median(std::move(rtts));
      out.push_back(std::move(s));
    }
  }
  return out;
}

RunResult run_scenario(const ScenarioConfig& original, const RunOptions& options) {
  ScenarioConfig config = original;
  if (options.seed) config.world.seed = *options.seed;
  if (const auto issues = check_config(config); !issues.empty()) {
    throw ConfigError("invalid scenario: " + issues.front());
  }

  RunResult result;
  result.out_dir = options.out_dir ? *options.out_dir : config.output_dir;
  if (result.out_dir.empty()) {
    result.out_dir = std::filesystem::path("out") /
                     (config.source.empty() ? "run" : config.source.stem().string());
  }
  std::optional<std::filesystem::path> metrics_file;
  if (options.write_files) {
    std::filesystem::create_directories(result.out_dir);
    metrics_file = result.out_dir / "metrics.csv";
  }

  sim::World world(config.world);
  MetricsSink sink(config, world, metrics_file);
  Outputs out;
  auto finish = [&] {
    result.rows = sink.take();
    result.events = render_events(std::move(out.events));
    result.warnings = std::move(out.warnings);
    result.rejected_commands = out.rejected;
    result.summary = summarize(result.rows, config.phases);
    if (options.write_files) {
      write_lines(result.out_dir / "events.log", result.events);
      write_summary(result.out_dir / "summary.csv", result.summary);
      write_lines(result.out_dir / "controller.log", result.warnings);
    }
  };
  try {
    if (options.mode == Mode::kInproc) {
      run_inproc(config, world, sink, out);
    } else {
      run_sockets(config, world, sink, out);
    }
  } catch (...) {
    finish();
    throw;
  }
  finish();
  return result;
}

}  // namespace secslice::scenario
