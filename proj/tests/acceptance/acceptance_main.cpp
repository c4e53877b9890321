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

// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.
//
//   acceptance [work_dir]
//
// Scenario outputs go under work_dir (default: a fresh temp directory).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "edf_oracle.hpp"
#include "generators.hpp"
#include "secslice/detect/model.hpp"
#include "secslice/detect/window.hpp"
#include "secslice/proto/codec.hpp"
#include "secslice/scenario/config.hpp"
#include "secslice/scenario/run.hpp"
#include "secslice/sched/allocator.hpp"
#include "secslice/sched/ema.hpp"
#include "secslice/sched/intra_slice.hpp"
#include "secslice/sched/slice_config.hpp"
#include "window_oracle.hpp"

using namespace secslice;
using namespace secslice::sched;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const fs::path kRoot = SECSLICE_SOURCE_DIR;

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// ---------------------------------------------------------------- scheduler

constexpr Tti kSchedTtis = 10'000;
constexpr std::uint32_t kGrid = 106;
constexpr std::uint64_t kSaturated = 1ull << 40;

std::vector<std::uint32_t> range(std::uint32_t a, std::uint32_t b) {
  std::vector<std::uint32_t> v;
  for (auto i = a; i <= b; ++i) v.push_back(i);
  return v;
}

// Static slices cut from the grid at random, plus NVS and EDF slices on the
// leftover pool, all with random demand every TTI.
Outcome static_isolation(std::mt19937_64& rng) {
  Outcome o;
  std::uint64_t checked = 0;
  for (int run = 0; run < 5; ++run) {
    const std::uint32_t a = 10 + rng() % 30, b = a + 10 + rng() % 30;
    std::vector<SliceConfig> slices = {{1, StaticPolicy{range(0, a - 1)}},
                                       {2, StaticPolicy{range(a, b - 1)}},
                                       {3, NvsCapacityPolicy{0.5}},
                                       {4, NvsRatePolicy{10.0, 10.0}},
                                       {5, EdfPolicy{5.0}}};
    std::map<SliceId, SliceRuntimeState> states;
    for (const auto& s : slices) states[s.id];
    AllocatorOptions opt;
    for (Tti t = 0; t < kSchedTtis; ++t) {
      std::map<SliceId, std::uint64_t> demand;
      for (const auto& s : slices) demand[s.id] = rng() % 4 == 0 ? 0 : rng() % 30'000;
      const auto alloc = allocate_tti(slices, states, demand, kGrid, opt, t);
      for (const auto& s : slices) {
        const auto n = alloc.per_slice.at(s.id);
        const auto need = prbs_for_bytes(demand[s.id], opt.bits_per_prb);
        for (auto i : alloc.prbs.at(s.id)) {
          const bool own_static = s.id == 1 ? i < a : s.id == 2 ? (i >= a && i < b) : i >= b;
          if (!own_static) {
            o.pass = false;
            o.detail = fmt("slice %u got PRB %u at TTI %llu", s.id, i,
                           static_cast<unsigned long long>(t));
            return o;
          }
        }
        if (s.id <= 2 && n != std::min<std::uint64_t>(need, s.id == 1 ? a : b - a)) {
          o.pass = false;
          o.detail = fmt("static slice %u got %u PRBs for a need of %llu", s.id, n,
                         static_cast<unsigned long long>(need));
          return o;
        }
        states[s.id] = update_ema(states[s.id], n * opt.bits_per_prb, n, kGrid, opt.ema_alpha);
      }
      ++checked;
    }
  }
  o.detail = fmt("%llu TTIs, static sets never lent or borrowed",
                 static_cast<unsigned long long>(checked));
  return o;
}

// Saturated capacity slices with random shares; measured fraction of the grid
// against the reservation.
Outcome nvs_capacity(std::mt19937_64& rng) {
  Outcome o;
  double worst = 0.0;
  for (int run = 0; run < 5; ++run) {
    const int n = 2 + static_cast<int>(rng() % 3);
    std::vector<double> w(n);
    double sum = 0;
    for (auto& x : w) sum += (x = 1.0 + rng() % 9);
    std::vector<SliceConfig> slices;
    std::map<SliceId, SliceRuntimeState> states;
    std::map<SliceId, std::uint64_t> demand;
    for (int i = 0; i < n; ++i) {
      const SliceId id = i + 1;
      slices.push_back({id, NvsCapacityPolicy{w[i] / sum}});
      states[id];
      demand[id] = kSaturated;
    }
    AllocatorOptions opt;
    std::map<SliceId, double> prbs;
    for (Tti t = 0; t < kSchedTtis; ++t) {
      const auto alloc = allocate_tti(slices, states, demand, kGrid, opt, t);
      for (const auto& s : slices) {
        const auto k = alloc.per_slice.at(s.id);
        prbs[s.id] += k;
        states[s.id] = update_ema(states[s.id], k * opt.bits_per_prb, k, kGrid, opt.ema_alpha);
      }
    }
    for (const auto& s : slices) {
      const double got = prbs[s.id] / (double(kSchedTtis) * kGrid);
      const double want = std::get<NvsCapacityPolicy>(s.policy).share;
      worst = std::max(worst, std::abs(got - want));
    }
  }
  o.pass = worst <= 0.02;
  o.detail = fmt("worst |served - reserved| = %.4f of the grid (limit 0.02)", worst);
  return o;
}

// Rate slices offered exactly their minimum, next to a saturated capacity
// slice; feasible because the minimums sum to well under link capacity.
Outcome nvs_rate(std::mt19937_64& rng) {
  Outcome o;
  double worst = 1e9;
  for (int run = 0; run < 5; ++run) {
    AllocatorOptions opt;
    const double capacity = kGrid * opt.bits_per_prb / 1000.0;
    const int n = 1 + static_cast<int>(rng() % 3);
    std::vector<SliceConfig> slices;
    std::map<SliceId, SliceRuntimeState> states;
    std::map<SliceId, double> queue, sent, rate;
    for (int i = 0; i < n; ++i) {
      const SliceId id = i + 1;
      rate[id] = (0.05 + (rng() % 20) / 100.0) * capacity;
      slices.push_back({id, NvsRatePolicy{rate[id], rate[id]}});
      states[id];
    }
    slices.push_back({99, NvsCapacityPolicy{0.2}});
    states[99];
    for (Tti t = 0; t < kSchedTtis; ++t) {
      std::map<SliceId, std::uint64_t> demand{{99, kSaturated}};
      for (int i = 0; i < n; ++i) {
        const SliceId id = i + 1;
        queue[id] += rate[id] * 1000.0;
        demand[id] = static_cast<std::uint64_t>(std::ceil(queue[id] / 8.0));
      }
      const auto alloc = allocate_tti(slices, states, demand, kGrid, opt, t);
      for (const auto& s : slices) {
        const auto k = alloc.per_slice.at(s.id);
        double bits = k * opt.bits_per_prb;
        if (s.id != 99) {
          bits = std::min(bits, queue[s.id]);
          queue[s.id] -= bits;
          sent[s.id] += bits;
        }
        states[s.id] = update_ema(states[s.id], bits, k, kGrid, opt.ema_alpha);
      }
    }
    for (int i = 0; i < n; ++i) {
      const SliceId id = i + 1;
      worst = std::min(worst, sent[id] / (kSchedTtis * 1000.0) / rate[id]);
    }
  }
  o.pass = worst >= 0.95;
  o.detail = fmt("worst delivered/min_rate = %.4f (limit 0.95)", worst);
  return o;
}

// EDF against exhaustive search on instances of at most four packets.
Outcome edf_parity(std::mt19937_64& rng) {
  Outcome o;
  int feasible = 0, misses = 0;
  for (int trial = 0; trial < 10'000; ++trial) {
    oracle::EdfInstance inst;
    inst.grid = 1 + rng() % 4;
    inst.horizon = 12;
    const auto n = 1 + rng() % 4;
    for (std::uint32_t i = 0; i < n; ++i) {
      const auto release = rng() % 6;
      inst.jobs.push_back({i + 1, static_cast<std::uint32_t>(1 + rng() % 6), release,
                           release + rng() % 5});
    }
    if (!oracle::feasible(inst)) continue;
    ++feasible;
    if (oracle::edf_misses(inst, 800) != 0) ++misses;
  }
  o.pass = misses == 0;
  o.detail = fmt("%d feasible instances, %d with EDF misses", feasible, misses);
  return o;
}

// ---------------------------------------------------------------- detector

Outcome window_oracle() {
  std::mt19937_64 rng(1000);
  std::uint64_t compared = 0;
  for (int stream = 0; stream < 1000; ++stream) {
    detect::FeatureWindow w;
    std::vector<bool> labels;
    const int n = 1 + static_cast<int>(rng() % 200);
    const auto p_bad = rng() % 101;
    for (int i = 0; i < n; ++i) {
      const bool bad = rng() % 100 < p_bad;
      w.push({"tcp", "http", "SF", static_cast<std::uint64_t>(i), 0}, bad);
      labels.push_back(bad);
      ++compared;
      if (w.score() != oracle::window_score(labels)) {
        return {false, fmt("stream %d diverges after %d packets", stream, i + 1)};
      }
    }
  }
  return {true, fmt("1000 streams, %llu scores equal", static_cast<unsigned long long>(compared))};
}

Outcome inference_parity() {
  const auto model = detect::load_model(kRoot / "data/model/detector_gbdt.json");
  std::ifstream in(kRoot / "data/model/fixtures.json");
  const auto fx = json::parse(in);
  double worst = 0.0;
  std::size_t n = 0;
  for (const auto& row : fx.at("rows")) {
    const auto& f = row.at("features");
    const auto v = detect::encode({f.at("protocol_type"), f.at("service"), f.at("flag"),
                                   f.at("src_bytes"), f.at("dst_bytes")},
                                  model.schema);
    worst = std::max(worst, std::abs(detect::predict(model, v) - row.at("probability").get<double>()));
    ++n;
  }
  return {n == 50 && worst <= 1e-6, fmt("%zu fixtures, max |p - ref| = %.3g", n, worst)};
}

// ---------------------------------------------------------------- protocol

Outcome protocol() {
  gen::Rng rng(4242);
  int round_trips = 0;
  for (std::size_t kind = 0; kind < gen::kMessageKinds; ++kind) {
    for (int i = 0; i < 500; ++i) {
      const auto msg = gen::message(rng, kind);
      const auto frame = proto::encode_frame(msg);
      auto r = proto::decode_frame(frame);
      auto* d = std::get_if<proto::Decoded<proto::ControlMessage>>(&r);
      if (!d || d->consumed != frame.size() || !(d->value == msg)) {
        return {false, "round trip differs for " + proto::encode_body(msg)};
      }
      ++round_trips;
    }
  }
  int splits = 0, frames = 0;
  for (const auto& entry : fs::directory_iterator(kRoot / "tests/fixtures/frames")) {
    if (entry.path().extension() != ".hex") continue;
    ++frames;
    const auto frame = gen::read_hex(entry.path());
    auto whole = proto::decode_frame(frame);
    const auto expect = std::get<proto::Decoded<proto::ControlMessage>>(whole).value;
    for (std::size_t cut = 0; cut <= frame.size(); ++cut) {
      proto::FrameDecoder dec;
      dec.feed(std::span(frame).first(cut));
      const bool early = cut < frame.size() && dec.next_message().has_value();
      dec.feed(std::span(frame).subspan(cut));
      const auto m = dec.next_message();
      if (early || !m || !(*m == expect) || dec.buffered() != 0) {
        return {false, fmt("%s differs when cut at byte %zu",
                           entry.path().filename().c_str(), cut)};
      }
      ++splits;
    }
  }
  return {frames >= 10,
          fmt("%d randomized round trips over %zu types, %d splits of %d fixture frames",
              round_trips, gen::kMessageKinds, splits, frames)};
}

// ---------------------------------------------------------------- scenarios

struct ScenarioRun {
  scenario::ScenarioConfig config;
  scenario::RunResult result;
  double seconds = 0.0;
  fs::path dir;
};

ScenarioRun run(const std::string& name, const fs::path& work, scenario::Mode mode,
                const std::string& tag) {
  ScenarioRun r;
  r.config = scenario::load_config(kRoot / "scenarios" / (name + ".cfg"));
  r.dir = work / (name + "-" + tag);
  fs::remove_all(r.dir);
  const auto t0 = Clock::now();
  r.result = scenario::run_scenario(r.config, {mode, r.dir});
  r.seconds = seconds_since(t0);
  return r;
}

const scenario::PhaseSummary* find(const scenario::RunResult& r, const std::string& phase, UeId ue) {
  for (const auto& s : r.summary) {
    if (s.phase == phase && s.ue == ue) return &s;
  }
  return nullptr;
}

// Mean over every row of the given phase; the proxy is the same for all UEs
// in a TTI so any UE's rows will do.
double phase_load(const scenario::RunResult& r, const std::string& phase, UeId ue) {
  const auto* s = find(r, phase, ue);
  return s ? s->mean_load_proxy_pct : NAN;
}

double phase_rtt(const scenario::RunResult& r, const std::string& phase, UeId ue) {
  const auto* s = find(r, phase, ue);
  return s && s->median_rtt_ms ? *s->median_rtt_ms : NAN;
}

double phase_tput(const scenario::RunResult& r, const std::string& phase, UeId ue) {
  const auto* s = find(r, phase, ue);
  return s ? s->mean_throughput_mbps : NAN;
}

int count_events(const scenario::RunResult& r, const std::string& needle) {
  return static_cast<int>(std::count_if(r.events.begin(), r.events.end(), [&](const auto& e) {
    return e.find(needle) != std::string::npos;
  }));
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Tti phase_start(const scenario::ScenarioConfig& c, const std::string& label) {
  for (const auto& p : c.phases) {
    if (p.label == label) return p.start_tti;
  }
  return c.horizon_ttis;
}

// TTIs from attack onset until the victim's trailing 200-TTI mean first
// reaches `fraction` of its baseline mean; -1 if it never does.
long long recovery_ttis(const ScenarioRun& r, UeId victim, double fraction) {
  const Tti onset = phase_start(r.config, "attack");
  const double target = fraction * phase_tput(r.result, "baseline", victim);
  std::vector<double> series;
  for (const auto& row : r.result.rows) {
    if (row.ue == victim && row.tti >= onset) series.push_back(row.throughput_mbps);
  }
  constexpr std::size_t kTrail = 200;
  double sum = 0;
  for (std::size_t i = 0; i < series.size(); ++i) {
    sum += series[i];
    if (i >= kTrail) sum -= series[i - kTrail];
    if (i + 1 >= kTrail && sum / kTrail >= target) return static_cast<long long>(i);
  }
  return -1;
}

}  // namespace

int main(int argc, char** argv) {
  fs::path work;
  if (argc > 1) {
    work = argv[1];
  } else {
    work = fs::temp_directory_path() / "secslice-acceptance";
  }
  fs::create_directories(work);

  int failed = 0;
  auto report = [&](const std::string& name, const Outcome& o) {
    std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failed;
  };
  auto guarded = [&](const std::string& name, const std::function<Outcome()>& f) {
    try {
      report(name, f());
    } catch (const std::exception& e) {
      report(name, {false, std::string("exception: ") + e.what()});
    }
  };

  guarded("scheduler-invariants", [] {
    std::mt19937_64 rng(20260101);
    const auto t0 = Clock::now();
    const std::vector<std::pair<std::string, Outcome>> parts = {
        {"static", static_isolation(rng)},
        {"nvs-capacity", nvs_capacity(rng)},
        {"nvs-rate", nvs_rate(rng)},
        {"edf", edf_parity(rng)}};
    const double secs = seconds_since(t0);
    Outcome o{secs < 30.0, ""};
    for (const auto& [n, p] : parts) {
      o.pass = o.pass && p.pass;
      o.detail += n + " " + (p.pass ? "ok" : "FAILED") + " (" + p.detail + "); ";
    }
    o.detail += fmt("%.2f s (limit 30 s)", secs);
    return o;
  });

  guarded("window-oracle", window_oracle);
  guarded("inference-parity", inference_parity);
  guarded("protocol", protocol);

  std::map<std::string, ScenarioRun> runs;
  for (const char* name : {"baseline", "attack_undefended", "attack_defended"}) {
    try {
      runs.emplace(name, run(name, work, scenario::Mode::kInproc, "inproc"));
    } catch (const std::exception& e) {
      report(std::string("scenario-") + name, {false, std::string("exception: ") + e.what()});
    }
  }
  const bool all_ran = runs.size() == 3;

  guarded("scenario-throughput", [&] {
    if (!all_ran) return Outcome{false, "a scenario failed to run"};
    Outcome o;
    const auto& base = runs.at("baseline");
    const auto u1 = *base.config.ue_with_role("attacker"), u2 = *base.config.ue_with_role("victim");
    const double t1 = phase_tput(base.result, "baseline", u1);
    const double t2 = phase_tput(base.result, "baseline", u2);
    const double spread = std::abs(t1 - t2) / std::max(t1, t2);
    const bool b_ok = spread <= 0.05;

    const auto& und = runs.at("attack_undefended");
    const auto v = *und.config.ue_with_role("victim");
    const double ub = phase_tput(und.result, "baseline", v), ua = phase_tput(und.result, "attack", v);
    const bool u_ok = ua < 0.5 * ub;

    const auto& def = runs.at("attack_defended");
    const auto dv = *def.config.ue_with_role("victim"), da = *def.config.ue_with_role("attacker");
    const auto rec = recovery_ttis(def, dv, 0.9);
    const int releases = count_events(def.result, "\"type\":\"RrcReleaseCmd\"");
    const int on_attacker =
        count_events(def.result, "{\"type\":\"RrcReleaseCmd\",\"ue\":" + std::to_string(da) + "}");
    const bool d_ok = rec >= 0 && rec <= 2000 && releases == 1 && on_attacker == 1;

    double slowest = 0;
    for (const auto& [_, r] : runs) slowest = std::max(slowest, r.seconds);
    o.pass = b_ok && u_ok && d_ok && slowest < 60.0;
    o.detail = fmt("baseline UEs %.2f/%.2f Mbit/s (spread %.2f%%, limit 5%%); "
                   "undefended victim %.2f -> %.2f Mbit/s (%.1f%% of baseline, limit <50%%); "
                   "defended victim recovers in %lld TTIs (limit 2000), %d RrcReleaseCmd, "
                   "%d on the attacker; slowest scenario %.2f s (limit 60 s)",
                   t1, t2, 100 * spread, ub, ua, 100 * ua / ub, rec, releases, on_attacker, slowest);
    return o;
  });

  guarded("scenario-rtt-load", [&] {
    if (!all_ran) return Outcome{false, "a scenario failed to run"};
    const auto& und = runs.at("attack_undefended");
    const auto v = *und.config.ue_with_role("victim");
    const double rb = phase_rtt(und.result, "baseline", v), ra = phase_rtt(und.result, "attack", v);
    const double lb = phase_load(und.result, "baseline", v), la = phase_load(und.result, "attack", v);
    const bool u_ok = ra >= 10 * rb && la >= 5 * lb;

    const auto& def = runs.at("attack_defended");
    const auto dv = *def.config.ue_with_role("victim");
    const double drb = phase_rtt(def.result, "baseline", dv), drd = phase_rtt(def.result, "defended", dv);
    const double dlb = phase_load(def.result, "baseline", dv), dld = phase_load(def.result, "defended", dv);
    const bool d_ok = drd <= 2 * drb && dld <= 1.5 * dlb;
    return Outcome{u_ok && d_ok,
                   fmt("undefended RTT median %.1f -> %.1f ms (%.1fx, limit >=10x), load %.2f -> "
                       "%.2f%% (%.2fx, limit >=5x); defended RTT median %.1f -> %.1f ms (%.2fx, "
                       "limit <=2x), load %.2f -> %.2f%% (%.2fx, limit <=1.5x)",
                       rb, ra, ra / rb, lb, la, la / lb, drb, drd, drd / drb, dlb, dld, dld / dlb)};
  });

  guarded("determinism", [&] {
    if (!all_ran) return Outcome{false, "a scenario failed to run"};
    Outcome o;
    int compared = 0;
    for (const auto& [name, first] : runs) {
      const auto a = slurp(first.dir / "metrics.csv");
      const auto again = run(name, work, scenario::Mode::kInproc, "inproc-again");
      const auto sock = run(name, work, scenario::Mode::kSockets, "sockets");
      const bool same_again = slurp(again.dir / "metrics.csv") == a;
      const bool same_sock = slurp(sock.dir / "metrics.csv") == a;
      compared += 2;
      if (a.empty() || !same_again || !same_sock) {
        o.pass = false;
        o.detail += name + (same_again ? "" : " differs between inproc runs;") +
                    (same_sock ? "" : " differs between inproc and sockets;") + " ";
      }
    }
    if (o.pass) o.detail = fmt("%d metrics.csv comparisons byte-identical", compared);
    return o;
  });

  std::printf("%d criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
