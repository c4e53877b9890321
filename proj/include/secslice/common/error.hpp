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

#include <stdexcept>
#include <string>

namespace secslice {

/// Invalid or inconsistent configuration (slices, scenario, policy).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operation applied to a slice whose policy variant does not support it.
class PolicyMismatch : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Model file malformed, or model and input disagree on schema/vocabulary.
class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller handed an input of the wrong shape (e.g. vector length).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace secslice
