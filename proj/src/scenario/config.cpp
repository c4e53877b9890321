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

#include "secslice/scenario/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <json.hpp>

#include "secslice/common/error.hpp"

namespace secslice::scenario {
namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& field, const std::string& why) {
  throw ConfigError(field + ": " + why);
}

// Object view that remembers which keys were read so leftovers (typos) can
// be reported.
class Obj {
 public:
  Obj(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) bad(where(), "expected an object");
  }

  std::string field(std::string_view key) const {
    return path_.empty() ? std::string(key) : path_ + "." + std::string(key);
  }
  const std::string& where() const { return path_; }
  bool has(const char* key) const { return j_.contains(key); }

  const json& need(const char* key) {
    seen_.insert(key);
    if (!j_.contains(key)) bad(field(key), "missing");
    return j_.at(key);
  }

  double number(const char* key) {
    const auto& v = need(key);
    if (!v.is_number()) bad(field(key), "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) bad(field(key), "not finite");
    return d;
  }
  double number(const char* key, double fallback) { return has(key) ? number(key) : fallback; }

  std::uint64_t count(const char* key) {
    const auto& v = need(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
      bad(field(key), "expected a nonnegative integer");
    }
    return v.get<std::uint64_t>();
  }
  std::uint64_t count(const char* key, std::uint64_t fallback) {
    return has(key) ? count(key) : fallback;
  }
  std::uint32_t count32(const char* key) {
    const auto v = count(key);
    if (v > std::numeric_limits<std::uint32_t>::max()) bad(field(key), "out of range");
    return static_cast<std::uint32_t>(v);
  }
  std::uint32_t count32(const char* key, std::uint32_t fallback) {
    return has(key) ? count32(key) : fallback;
  }

  std::string text(const char* key) {
    const auto& v = need(key);
    if (!v.is_string()) bad(field(key), "expected a string");
    return v.get<std::string>();
  }
  std::string text(const char* key, std::string fallback) {
    return has(key) ? text(key) : std::move(fallback);
  }

  bool flag(const char* key, bool fallback) {
    if (!has(key)) return fallback;
    const auto& v = need(key);
    if (!v.is_boolean()) bad(field(key), "expected true or false");
    return v.get<bool>();
  }

  const json& array(const char* key) {
    const auto& v = need(key);
    if (!v.is_array()) bad(field(key), "expected an array");
    return v;
  }

  Obj child(const char* key) { return Obj(need(key), field(key)); }

  void done() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.contains(it.key())) bad(field(it.key()), "unknown field");
    }
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string, std::less<>> seen_;
};

std::string indexed(const std::string& base, std::size_t i) {
  return base + "[" + std::to_string(i) + "]";
}

sched::SliceConfig parse_slice(Obj o) {
  sched::SliceConfig s;
  s.id = o.count32("id");
  const auto policy = o.text("policy");
  if (policy == "static") {
    sched::StaticPolicy p;
    if (o.has("prb_range")) {
      const auto& r = o.array("prb_range");
      if (r.size() != 2 || !r[0].is_number_unsigned() || !r[1].is_number_unsigned()) {
        bad(o.field("prb_range"), "expected [first, last] PRB indices");
      }
      const auto a = r[0].get<std::uint32_t>();
      const auto b = r[1].get<std::uint32_t>();
      if (b < a) bad(o.field("prb_range"), "last index is below first");
      for (auto i = a; i <= b; ++i) p.prb_set.push_back(i);
    }
    if (o.has("prb_set")) {
      const auto& arr = o.array("prb_set");
      for (std::size_t i = 0; i < arr.size(); ++i) {
        if (!arr[i].is_number_unsigned()) {
          bad(indexed(o.field("prb_set"), i), "expected a PRB index");
        }
        p.prb_set.push_back(arr[i].get<std::uint32_t>());
      }
    }
    if (!o.has("prb_range") && !o.has("prb_set")) bad(o.field("prb_set"), "missing");
    s.policy = std::move(p);
  } else if (policy == "nvs_rate") {
    const double min_rate = o.number("min_rate_mbps");
    s.policy = sched::NvsRatePolicy{min_rate, o.number("ref_rate_mbps", min_rate)};
  } else if (policy == "nvs_capacity") {
    s.policy = sched::NvsCapacityPolicy{o.number("share")};
  } else if (policy == "edf") {
    s.policy = sched::EdfPolicy{o.number("deadline_ms")};
  } else {
    bad(o.field("policy"), "unknown policy '" + policy +
                               "' (static, nvs_rate, nvs_capacity, edf)");
  }
  o.done();
  return s;
}

detect::PacketFeatures parse_features(Obj o, detect::PacketFeatures f) {
  f.protocol_type = o.text("protocol_type", f.protocol_type);
  f.service = o.text("service", f.service);
  f.flag = o.text("flag", f.flag);
  f.src_bytes = o.count("src_bytes", f.src_bytes);
  f.dst_bytes = o.count("dst_bytes", f.dst_bytes);
  o.done();
  return f;
}

std::uint32_t packet_size(Obj& o, const char* key, std::uint32_t fallback) {
  const auto v = o.count32(key, fallback);
  if (v == 0 || v > 65535) bad(o.field(key), "must be in [1, 65535]");
  return v;
}

double rate(Obj& o, const char* key) {
  const double v = o.number(key);
  if (v < 0.0) bad(o.field(key), "must be >= 0");
  return v;
}

sim::TrafficSource parse_source(
    Obj o, const std::filesystem::path& base,
    std::map<std::filesystem::path, std::shared_ptr<const sim::ReplayDataset>>& cache) {
  sim::TrafficSource s;
  s.ue = o.count32("ue");
  const auto kind = o.text("kind");
  if (kind == "cbr") {
    sim::ConstantBitRate k;
    k.mbps = rate(o, "mbps");
    k.packet_bytes = packet_size(o, "packet_bytes", k.packet_bytes);
    s.kind = k;
  } else if (kind == "poisson") {
    sim::Poisson k;
    k.mbps = rate(o, "mbps");
    k.mean_packet_bytes = packet_size(o, "mean_packet_bytes", k.mean_packet_bytes);
    s.kind = k;
  } else if (kind == "replay") {
    sim::DatasetReplay k;
    const auto path = (base / o.text("file")).lexically_normal();
    auto& ds = cache[path];
    if (!ds) {
      try {
        ds = std::make_shared<const sim::ReplayDataset>(sim::load_replay(path));
      } catch (const ConfigError& e) {
        bad(o.field("file"), e.what());
      }
    }
    k.dataset = ds;
    if (o.has("records_per_second")) k.records_per_second = rate(o, "records_per_second");
    s.kind = k;
  } else {
    bad(o.field("kind"), "unknown traffic kind '" + kind + "' (cbr, poisson, replay)");
  }
  s.start_tti = o.count("start_tti", 0);
  if (o.has("stop_tti")) s.stop_tti = o.count("stop_tti");
  if (o.has("features")) s.profile = parse_features(o.child("features"), s.profile);
  o.done();
  return s;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw InputError("cannot read " + path.string());
  return ss.str();
}

}  // namespace

const std::string& ScenarioConfig::phase_at(Tti t) const {
  static const std::string none;
  const std::string* label = &none;
  for (const auto& p : phases) {
    if (p.start_tti <= t) label = &p.label;
  }
  return *label;
}

std::optional<UeId> ScenarioConfig::ue_with_role(std::string_view role) const {
  for (const auto& [ue, r] : roles) {
    if (r == role) return ue;
  }
  return std::nullopt;
}

ctrl::SlaPolicy ScenarioConfig::sla_policy() const {
  ctrl::SlaPolicy p;
  p.slices = world.slices;
  for (const auto& u : world.ues) p.ue_slices[u.id] = u.slice;
  p.min_cap = controller.min_cap;
  p.release_after = controller.release_after;
  p.reconfig = controller.reconfig;
  return p;
}

ScenarioConfig parse_config(std::string_view text, const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  ScenarioConfig c;
  Obj root(doc, "");
  auto& w = c.world;
  w.seed = root.count("seed", w.seed);
  c.horizon_ttis = root.count("horizon_ttis");
  w.grid_size = root.count32("grid_size", w.grid_size);

  if (root.has("link")) {
    Obj o = root.child("link");
    w.link.bits_per_prb_per_tti = o.number("bits_per_prb_per_tti", w.link.bits_per_prb_per_tti);
    w.link.tti_ms = o.number("tti_ms", w.link.tti_ms);
    w.link.base_rtt_ms = o.number("base_rtt_ms", w.link.base_rtt_ms);
    o.done();
  }
  w.queue_limit_bytes = root.count("queue_limit_bytes", w.queue_limit_bytes);
  if (root.has("scheduler")) {
    Obj o = root.child("scheduler");
    w.nvs_quantum_prbs = o.count32("nvs_quantum_prbs", w.nvs_quantum_prbs);
    w.ema_alpha = o.number("ema_alpha", w.ema_alpha);
    o.done();
  }

  const auto& slices = root.array("slices");
  for (std::size_t i = 0; i < slices.size(); ++i) {
    w.slices.push_back(parse_slice(Obj(slices[i], indexed("slices", i))));
  }

  const auto& ues = root.array("ues");
  for (std::size_t i = 0; i < ues.size(); ++i) {
    Obj o(ues[i], indexed("ues", i));
    sim::UeSpec u;
    u.id = o.count32("id");
    u.slice = o.count32("slice");
    if (o.has("role")) c.roles[u.id] = o.text("role");
    o.done();
    w.ues.push_back(u);
  }

  std::map<std::filesystem::path, std::shared_ptr<const sim::ReplayDataset>> replay_cache;
  if (root.has("traffic")) {
    const auto& traffic = root.array("traffic");
    for (std::size_t i = 0; i < traffic.size(); ++i) {
      w.sources.push_back(
          parse_source(Obj(traffic[i], indexed("traffic", i)), base_dir, replay_cache));
    }
  }

  if (root.has("probes")) {
    Obj o = root.child("probes");
    w.probes.enabled = o.flag("enabled", w.probes.enabled);
    w.probes.interval_ttis = o.count("interval_ttis", w.probes.interval_ttis);
    w.probes.bytes = packet_size(o, "bytes", w.probes.bytes);
    o.done();
  }
  if (root.has("load_proxy")) {
    Obj o = root.child("load_proxy");
    w.load.window_ttis = o.count32("window_ttis", w.load.window_ttis);
    w.load.capacity_pkts_per_tti = o.number("capacity_pkts_per_tti", w.load.capacity_pkts_per_tti);
    w.load.control_weight = o.number("control_weight", w.load.control_weight);
    o.done();
  }

  if (root.has("detector")) {
    Obj o = root.child("detector");
    auto& d = c.detector;
    d.enabled = o.flag("enabled", d.enabled);
    d.report_every = o.count32("report_every", d.report_every);
    if (o.has("model")) d.model_path = (base_dir / o.text("model")).lexically_normal();
    if (d.enabled) {
      if (d.model_path.empty()) bad(o.field("model"), "required when the detector is enabled");
      try {
        d.model = std::make_shared<const detect::TreeEnsembleModel>(
            detect::load_model(d.model_path));
      } catch (const ModelError& e) {
        bad(o.field("model"), e.what());
      }
    }
    o.done();
  }

  if (root.has("controller")) {
    Obj o = root.child("controller");
    auto& k = c.controller;
    k.min_cap = o.number("min_cap", k.min_cap);
    k.release_after = o.count32("release_after", k.release_after);
    k.control_delay_ttis = o.count("control_delay_ttis", k.control_delay_ttis);
    k.indication_period_ttis = o.count("indication_period_ttis", k.indication_period_ttis);
    if (o.has("reconfigure")) {
      Obj r = o.child("reconfigure");
      k.reconfig.enabled = r.flag("enabled", k.reconfig.enabled);
      k.reconfig.violation_ratio = r.number("violation_ratio", k.reconfig.violation_ratio);
      k.reconfig.consecutive = r.count32("consecutive", k.reconfig.consecutive);
      k.reconfig.raise_factor = r.number("raise_factor", k.reconfig.raise_factor);
      r.done();
    }
    o.done();
  }

  if (root.has("phases")) {
    const auto& phases = root.array("phases");
    for (std::size_t i = 0; i < phases.size(); ++i) {
      Obj o(phases[i], indexed("phases", i));
      c.phases.push_back({o.text("label"), o.count("start_tti")});
      o.done();
    }
  } else {
    c.phases.push_back({"baseline", 0});
  }

  if (root.has("output_dir")) c.output_dir = (base_dir / root.text("output_dir")).lexically_normal();
  root.done();
  return c;
}

std::vector<std::string> check_config(const ScenarioConfig& c) {
  std::vector<std::string> out;
  const auto& w = c.world;
  if (c.horizon_ttis < 1) out.push_back("horizon_ttis: must be >= 1");
  if (w.grid_size < 1) out.push_back("grid_size: must be >= 1");
  if (!(w.link.bits_per_prb_per_tti > 0.0)) out.push_back("link.bits_per_prb_per_tti: must be > 0");
  if (!(w.link.tti_ms > 0.0)) out.push_back("link.tti_ms: must be > 0");
  if (!(w.link.base_rtt_ms > 0.0)) out.push_back("link.base_rtt_ms: must be > 0");
  if (w.queue_limit_bytes < 1) out.push_back("queue_limit_bytes: must be >= 1");
  if (w.nvs_quantum_prbs < 1) out.push_back("scheduler.nvs_quantum_prbs: must be >= 1");
  if (!(w.ema_alpha > 0.0 && w.ema_alpha <= 1.0)) {
    out.push_back("scheduler.ema_alpha: must be in (0, 1]");
  }
  if (w.slices.empty()) out.push_back("slices: at least one slice is required");
  if (w.link.tti_ms > 0.0) {
    for (const auto& msg : sched::validate_slices(w.slices, w.grid_size, w.link.tti_ms)) {
      out.push_back("slices: " + msg);
    }
  }

  std::set<SliceId> slice_ids;
  for (const auto& s : w.slices) slice_ids.insert(s.id);
  std::set<UeId> ue_ids;
  if (w.ues.empty()) out.push_back("ues: at least one UE is required");
  for (std::size_t i = 0; i < w.ues.size(); ++i) {
    const auto& u = w.ues[i];
    const auto field = indexed("ues", i);
    if (!ue_ids.insert(u.id).second) {
      out.push_back(field + ".id: duplicate UE id " + std::to_string(u.id));
    }
    if (!slice_ids.contains(u.slice)) {
      out.push_back(field + ".slice: UE " + std::to_string(u.id) +
                    " is bound to slice " + std::to_string(u.slice) +
                    ", which does not exist");
    }
  }

  for (std::size_t i = 0; i < w.sources.size(); ++i) {
    const auto& s = w.sources[i];
    const auto field = indexed("traffic", i);
    if (!ue_ids.contains(s.ue)) {
      out.push_back(field + ".ue: no UE with id " + std::to_string(s.ue));
    }
    if (s.stop_tti && *s.stop_tti <= s.start_tti) {
      out.push_back(field + ".stop_tti: must be after start_tti");
    }
    if (const auto* r = std::get_if<sim::DatasetReplay>(&s.kind)) {
      if (r->dataset && r->dataset->records.empty()) {
        out.push_back(field + ".file: replay file has no records");
      }
      if (r->dataset && c.detector.model) {
        try {
          detect::require_vocab(c.detector.model->schema, r->dataset->vocab_version);
        } catch (const ModelError& e) {
          out.push_back(field + ".file: " + e.what());
        }
      }
    }
  }

  if (w.probes.enabled && w.probes.interval_ttis < 1) {
    out.push_back("probes.interval_ttis: must be >= 1");
  }
  if (w.load.window_ttis < 1) out.push_back("load_proxy.window_ttis: must be >= 1");
  if (!(w.load.capacity_pkts_per_tti > 0.0)) {
    out.push_back("load_proxy.capacity_pkts_per_tti: must be > 0");
  }
  if (w.load.control_weight < 0.0) out.push_back("load_proxy.control_weight: must be >= 0");

  if (c.detector.report_every < 1) out.push_back("detector.report_every: must be >= 1");

  const auto& k = c.controller;
  if (!(k.min_cap > 0.0 && k.min_cap < 1.0)) out.push_back("controller.min_cap: must be in (0, 1)");
  if (k.release_after < 1) out.push_back("controller.release_after: must be >= 1");
  if (k.control_delay_ttis < 1) out.push_back("controller.control_delay_ttis: must be >= 1");
  if (k.indication_period_ttis < 1) {
    out.push_back("controller.indication_period_ttis: must be >= 1");
  }
  if (k.reconfig.consecutive < 1) out.push_back("controller.reconfigure.consecutive: must be >= 1");
  if (!(k.reconfig.raise_factor > 1.0)) {
    out.push_back("controller.reconfigure.raise_factor: must be > 1");
  }

  if (c.phases.empty()) out.push_back("phases: at least one phase is required");
  for (std::size_t i = 0; i < c.phases.size(); ++i) {
    const auto& p = c.phases[i];
    const auto field = indexed("phases", i);
    if (p.label.empty()) out.push_back(field + ".label: must not be empty");
    if (i == 0 && p.start_tti != 0) out.push_back(field + ".start_tti: first phase must start at 0");
    if (i > 0 && p.start_tti <= c.phases[i - 1].start_tti) {
      out.push_back(field + ".start_tti: phases must start in increasing order");
    }
    if (p.start_tti >= c.horizon_ttis && c.horizon_ttis >= 1) {
      out.push_back(field + ".start_tti: starts at or after the horizon");
    }
  }
  return out;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  auto c = parse_config(read_file(path), path.parent_path());
  c.source = path;
  const auto issues = check_config(c);
  if (!issues.empty()) {
    std::string msg = path.string() + ": " + std::to_string(issues.size()) + " violation(s)";
    for (const auto& i : issues) msg += "\n  " + i;
    throw ConfigError(msg);
  }
  return c;
}

std::vector<std::string> validate_config_file(const std::filesystem::path& path) {
  const auto text = read_file(path);
  try {
    auto c = parse_config(text, path.parent_path());
    return check_config(c);
  } catch (const ConfigError& e) {
    return {e.what()};
  }
}

}  // namespace secslice::scenario
