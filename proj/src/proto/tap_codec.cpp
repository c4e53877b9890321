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

#include "secslice/proto/tap_codec.hpp"

#include <json.hpp>

#include "secslice/proto/codec.hpp"

namespace secslice::proto {

using nlohmann::json;

std::string encode_tap(const detect::TapBatch& batch) {
  json records = json::array();
  for (const auto& r : batch.records) {
    records.push_back(json::array({r.ue, r.slice, r.features.protocol_type, r.features.service,
                                   r.features.flag, r.features.src_bytes,
                                   r.features.dst_bytes}));
  }
  return json{{"tti", batch.tti}, {"records", std::move(records)}}.dump();
}

detect::TapBatch decode_tap(std::string_view body) {
  auto fail = [](const std::string& what) -> void {
    throw ProtocolError(ProtocolError::Kind::kMalformed, "malformed tap batch: " + what);
  };
  json j;
  try {
    j = json::parse(body);
  } catch (const json::parse_error& e) {
    fail(e.what());
  }
  if (!j.is_object() || !j.contains("tti") || !j.at("tti").is_number_unsigned()) fail("tti");
  if (!j.contains("records") || !j.at("records").is_array()) fail("records");
  detect::TapBatch out;
  out.tti = j.at("tti").get<Tti>();
  const auto& recs = j.at("records");
  out.records.reserve(recs.size());
  for (std::size_t i = 0; i < recs.size(); ++i) {
    const auto& r = recs[i];
    const auto where = "records[" + std::to_string(i) + "]";
    if (!r.is_array() || r.size() != 7) fail(where);
    for (int k : {0, 1, 5, 6}) {
      if (!r[static_cast<std::size_t>(k)].is_number_unsigned()) fail(where);
    }
    for (int k : {2, 3, 4}) {
      if (!r[static_cast<std::size_t>(k)].is_string()) fail(where);
    }
    out.records.push_back({r[0].get<UeId>(), r[1].get<SliceId>(),
                           {r[2].get<std::string>(), r[3].get<std::string>(),
                            r[4].get<std::string>(), r[5].get<std::uint64_t>(),
                            r[6].get<std::uint64_t>()}});
  }
  return out;
}

}  // namespace secslice::proto
