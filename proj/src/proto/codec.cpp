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

#include "secslice/proto/codec.hpp"

#include <cmath>
#include <limits>

#include <json.hpp>

namespace secslice::proto {
namespace {

using nlohmann::json;
using Kind = ProtocolError::Kind;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

[[noreturn]] void malformed(const std::string& field, const std::string& why) {
  throw ProtocolError(Kind::kMalformed, "malformed field '" + field + "': " + why);
}

const json& need(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) malformed(where + "." + key, "missing");
  return obj.at(key);
}

double get_double(const json& obj, const char* key, const std::string& where) {
  const auto& v = need(obj, key, where);
  if (!v.is_number()) malformed(where + "." + key, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) malformed(where + "." + key, "not finite");
  return d;
}

std::uint64_t get_u64(const json& obj, const char* key, const std::string& where) {
  const auto& v = need(obj, key, where);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
    malformed(where + "." + key, "expected a nonnegative integer");
  }
  return v.get<std::uint64_t>();
}

std::uint32_t get_u32(const json& obj, const char* key, const std::string& where) {
  const auto v = get_u64(obj, key, where);
  if (v > std::numeric_limits<std::uint32_t>::max()) {
    malformed(where + "." + key, "out of range");
  }
  return static_cast<std::uint32_t>(v);
}

std::string get_string(const json& obj, const char* key, const std::string& where) {
  const auto& v = need(obj, key, where);
  if (!v.is_string()) malformed(where + "." + key, "expected a string");
  return v.get<std::string>();
}

bool get_bool(const json& obj, const char* key, const std::string& where) {
  const auto& v = need(obj, key, where);
  if (!v.is_boolean()) malformed(where + "." + key, "expected a boolean");
  return v.get<bool>();
}

const json& get_array(const json& obj, const char* key, const std::string& where) {
  const auto& v = need(obj, key, where);
  if (!v.is_array()) malformed(where + "." + key, "expected an array");
  return v;
}

json slice_to_json(const sched::SliceConfig& s) {
  json j;
  j["id"] = s.id;
  j["policy"] = sched::policy_name(s.policy);
  std::visit(overloaded{
                 [&](const sched::StaticPolicy& p) { j["prb_set"] = p.prb_set; },
                 [&](const sched::NvsRatePolicy& p) {
                   j["min_rate_mbps"] = p.min_rate_mbps;
                   j["ref_rate_mbps"] = p.ref_rate_mbps;
                 },
                 [&](const sched::NvsCapacityPolicy& p) { j["share"] = p.share; },
                 [&](const sched::EdfPolicy& p) { j["deadline_ms"] = p.deadline_ms; },
             },
             s.policy);
  return j;
}

sched::SliceConfig slice_from_json(const json& j, const std::string& where) {
  sched::SliceConfig s;
  s.id = get_u32(j, "id", where);
  const auto policy = get_string(j, "policy", where);
  if (policy == "static") {
    sched::StaticPolicy p;
    const auto& arr = get_array(j, "prb_set", where);
    for (std::size_t i = 0; i < arr.size(); ++i) {
      if (!arr[i].is_number_unsigned()) {
        malformed(where + ".prb_set[" + std::to_string(i) + "]", "expected a PRB index");
      }
      p.prb_set.push_back(arr[i].get<std::uint32_t>());
    }
    s.policy = p;
  } else if (policy == "nvs_rate") {
    s.policy = sched::NvsRatePolicy{get_double(j, "min_rate_mbps", where),
                                    get_double(j, "ref_rate_mbps", where)};
  } else if (policy == "nvs_capacity") {
    s.policy = sched::NvsCapacityPolicy{get_double(j, "share", where)};
  } else if (policy == "edf") {
    s.policy = sched::EdfPolicy{get_double(j, "deadline_ms", where)};
  } else {
    malformed(where + ".policy", "unknown policy '" + policy + "'");
  }
  return s;
}

void check_fraction(double v, const std::string& field) {
  if (!(std::isfinite(v) && v >= 0.0 && v <= 1.0)) {
    malformed(field, "must be within [0, 1]");
  }
}

void check_slice(const sched::SliceConfig& s, const std::string& where) {
  std::visit(overloaded{
                 [&](const sched::StaticPolicy& p) {
                   if (p.prb_set.empty()) malformed(where + ".prb_set", "empty");
                 },
                 [&](const sched::NvsRatePolicy& p) {
                   if (!(p.min_rate_mbps > 0.0 && p.min_rate_mbps <= p.ref_rate_mbps)) {
                     malformed(where + ".min_rate_mbps", "need 0 < min <= ref");
                   }
                 },
                 [&](const sched::NvsCapacityPolicy& p) {
                   if (!(p.share > 0.0 && p.share <= 1.0)) {
                     malformed(where + ".share", "must be within (0, 1]");
                   }
                 },
                 [&](const sched::EdfPolicy& p) {
                   if (!(p.deadline_ms > 0.0)) malformed(where + ".deadline_ms", "must be > 0");
                 },
             },
             s.policy);
}

// Body-level invariants shared by encode and decode.
void check_message(const ControlMessage& msg) {
  std::visit(overloaded{
                 [](const ThrottleCmd& m) {
                   check_fraction(m.cap, "ThrottleCmd.cap");
                   check_fraction(m.score, "ThrottleCmd.score");
                 },
                 [](const AnomalyReport& m) {
                   check_fraction(m.report.window_score, "AnomalyReport.window_score");
                 },
                 [](const SliceCreate& m) { check_slice(m.slice, "SliceCreate.slice"); },
                 [](const auto&) {},
             },
             msg);
}

json to_json(const ControlMessage& msg) {
  json j = std::visit(
      overloaded{
          [](const Hello& m) { return json{{"version", m.version}}; },
          [](const SliceCreate& m) { return json{{"slice", slice_to_json(m.slice)}}; },
          [](const SliceDelete& m) { return json{{"slice", m.slice}}; },
          [](const UeAssociate& m) { return json{{"ue", m.ue}, {"slice", m.slice}}; },
          [](const SliceIndication& m) {
            json slices = json::array();
            for (const auto& s : m.slices) {
              slices.push_back({{"slice", s.slice},
                                {"rate_mbps", s.rate_mbps},
                                {"prb_share", s.prb_share},
                                {"backlog_bytes", s.backlog_bytes}});
            }
            json ues = json::array();
            for (const auto& u : m.ues) {
              ues.push_back({{"ue", u.ue},
                             {"slice", u.slice},
                             {"rate_mbps", u.rate_mbps},
                             {"queue_bytes", u.queue_bytes},
                             {"cap", u.cap},
                             {"released", u.released}});
            }
            return json{{"tti", m.tti}, {"slices", slices}, {"ues", ues}};
          },
          [](const AnomalyReport& m) {
            return json{{"ue", m.report.ue},
                        {"window_score", m.report.window_score},
                        {"packets_seen", m.report.packets_seen},
                        {"tti", m.report.tti}};
          },
          [](const ThrottleCmd& m) {
            return json{{"ue", m.ue}, {"cap", m.cap}, {"score", m.score}};
          },
          [](const RrcReleaseCmd& m) { return json{{"ue", m.ue}}; },
          [](const Ack& m) { return json{{"of", m.of}, {"tti", m.tti}}; },
          [](const Error& m) { return json{{"reason", m.reason}}; },
      },
      msg);
  j["type"] = std::string(type_tag(msg));
  return j;
}

ControlMessage from_json(const json& j) {
  if (!j.is_object()) malformed("body", "expected a JSON object");
  const auto type = get_string(j, "type", "body");
  if (type == "Hello") {
    Hello m{get_string(j, "version", type)};
    if (m.version != kProtocolVersion) {
      throw ProtocolError(Kind::kHandshake, "protocol version mismatch: peer speaks '" +
                                                m.version + "', expected '" +
                                                std::string(kProtocolVersion) + "'");
    }
    return m;
  }
  if (type == "SliceCreate") {
    return SliceCreate{slice_from_json(need(j, "slice", type), type + ".slice")};
  }
  if (type == "SliceDelete") return SliceDelete{get_u32(j, "slice", type)};
  if (type == "UeAssociate") return UeAssociate{get_u32(j, "ue", type), get_u32(j, "slice", type)};
  if (type == "SliceIndication") {
    SliceIndication m;
    m.tti = get_u64(j, "tti", type);
    const auto& slices = get_array(j, "slices", type);
    for (std::size_t i = 0; i < slices.size(); ++i) {
      const auto w = type + ".slices[" + std::to_string(i) + "]";
      m.slices.push_back({get_u32(slices[i], "slice", w), get_double(slices[i], "rate_mbps", w),
                          get_double(slices[i], "prb_share", w),
                          get_u64(slices[i], "backlog_bytes", w)});
    }
    const auto& ues = get_array(j, "ues", type);
    for (std::size_t i = 0; i < ues.size(); ++i) {
      const auto w = type + ".ues[" + std::to_string(i) + "]";
      m.ues.push_back({get_u32(ues[i], "ue", w), get_u32(ues[i], "slice", w),
                       get_double(ues[i], "rate_mbps", w), get_u64(ues[i], "queue_bytes", w),
                       get_double(ues[i], "cap", w), get_bool(ues[i], "released", w)});
    }
    return m;
  }
  if (type == "AnomalyReport") {
    return AnomalyReport{{get_u32(j, "ue", type), get_double(j, "window_score", type),
                          get_u64(j, "packets_seen", type), get_u64(j, "tti", type)}};
  }
  if (type == "ThrottleCmd") {
    return ThrottleCmd{get_u32(j, "ue", type), get_double(j, "cap", type),
                       get_double(j, "score", type)};
  }
  if (type == "RrcReleaseCmd") return RrcReleaseCmd{get_u32(j, "ue", type)};
  if (type == "Ack") return Ack{get_string(j, "of", type), get_u64(j, "tti", type)};
  if (type == "Error") return Error{get_string(j, "reason", type)};
  throw ProtocolError(Kind::kUnknownType, "unknown message type '" + type + "'");
}

std::uint32_t read_be32(std::span<const std::uint8_t> b) {
  return (std::uint32_t{b[0]} << 24) | (std::uint32_t{b[1]} << 16) |
         (std::uint32_t{b[2]} << 8) | std::uint32_t{b[3]};
}

}  // namespace

std::string_view type_tag(const ControlMessage& msg) {
  static constexpr std::string_view kTags[] = {
      "Hello",         "SliceCreate", "SliceDelete",   "UeAssociate", "SliceIndication",
      "AnomalyReport", "ThrottleCmd", "RrcReleaseCmd", "Ack",         "Error"};
  return kTags[msg.index()];
}

std::string encode_body(const ControlMessage& msg) { return to_json(msg).dump(); }

ControlMessage decode_body(std::string_view body) {
  json j;
  try {
    j = json::parse(body);
  } catch (const json::parse_error& e) {
    throw ProtocolError(Kind::kMalformed, std::string("body is not valid JSON: ") + e.what());
  }
  auto msg = from_json(j);
  check_message(msg);
  return msg;
}

Bytes frame_payload(std::string_view payload) {
  if (payload.size() > kMaxPayloadBytes) {
    throw ProtocolError(Kind::kEncode, "payload of " + std::to_string(payload.size()) +
                                           " bytes exceeds the 1 MiB frame limit");
  }
  const auto n = static_cast<std::uint32_t>(payload.size());
  Bytes out;
  out.reserve(kFrameHeaderBytes + payload.size());
  out.push_back(static_cast<std::uint8_t>(n >> 24));
  out.push_back(static_cast<std::uint8_t>(n >> 16));
  out.push_back(static_cast<std::uint8_t>(n >> 8));
  out.push_back(static_cast<std::uint8_t>(n));
  out.insert(out.end(), payload.begin(), payload.end());
  return out;
}

Bytes encode_frame(const ControlMessage& msg) {
  try {
    check_message(msg);
  } catch (const ProtocolError& e) {
    throw ProtocolError(Kind::kEncode, e.what());
  }
  return frame_payload(encode_body(msg));
}

std::variant<Decoded<std::string>, NeedMoreData> split_frame(
    std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kFrameHeaderBytes) return NeedMoreData{};
  const auto len = read_be32(bytes.first(kFrameHeaderBytes));
  if (len > kMaxPayloadBytes) {
    throw ProtocolError(Kind::kOversize, "frame declares " + std::to_string(len) +
                                             " bytes, limit is 1 MiB");
  }
  if (bytes.size() < kFrameHeaderBytes + len) return NeedMoreData{};
  const auto* p = reinterpret_cast<const char*>(bytes.data() + kFrameHeaderBytes);
  return Decoded<std::string>{std::string(p, len), kFrameHeaderBytes + len};
}

std::variant<Decoded<ControlMessage>, NeedMoreData> decode_frame(
    std::span<const std::uint8_t> bytes) {
  auto r = split_frame(bytes);
  if (std::holds_alternative<NeedMoreData>(r)) return NeedMoreData{};
  auto& d = std::get<Decoded<std::string>>(r);
  return Decoded<ControlMessage>{decode_body(d.value), d.consumed};
}

void FrameDecoder::feed(std::span<const std::uint8_t> bytes) {
  if (pos_ > 0 && pos_ == buf_.size()) {
    buf_.clear();
    pos_ = 0;
  }
  buf_.insert(buf_.end(), bytes.begin(), bytes.end());
}

std::optional<std::string> FrameDecoder::next_payload() {
  if (failed_) throw ProtocolError(Kind::kClosed, "decoder failed earlier; reconnect");
  try {
    auto r = split_frame(std::span<const std::uint8_t>(buf_).subspan(pos_));
    if (std::holds_alternative<NeedMoreData>(r)) return std::nullopt;
    auto& d = std::get<Decoded<std::string>>(r);
    pos_ += d.consumed;
    if (pos_ > (1u << 16) && pos_ * 2 > buf_.size()) {
      buf_.erase(buf_.begin(), buf_.begin() + static_cast<std::ptrdiff_t>(pos_));
      pos_ = 0;
    }
    return std::move(d.value);
  } catch (...) {
    failed_ = true;
    throw;
  }
}

std::optional<ControlMessage> FrameDecoder::next_message() {
  auto p = next_payload();
  if (!p) return std::nullopt;
  try {
    return decode_body(*p);
  } catch (...) {
    failed_ = true;
    throw;
  }
}

}  // namespace secslice::proto
