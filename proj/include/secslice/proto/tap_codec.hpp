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

#include <string>
#include <string_view>

#include "secslice/detect/detector.hpp"

namespace secslice::proto {

// The packet mirror from the RAN to the edge server uses the same framing as
// the control protocol but its own body: {"records":[[ue,slice,proto,service,
// flag,src_bytes,dst_bytes],...],"tti":n}.

std::string encode_tap(const detect::TapBatch& batch);

/// Throws ProtocolError(kMalformed) naming the offending record.
detect::TapBatch decode_tap(std::string_view body);

}  // namespace secslice::proto
