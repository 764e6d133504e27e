// Copyright 2026 The MBAPPE Planner Authors
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

namespace mbappe {

enum class ErrorKind {
  kConfig,                 // invalid configuration or unknown key
  kMalformedInput,         // structurally invalid arguments
  kPredictionUnavailable,  // predictor could not serve a request
  kInternalState,          // search tree used out of protocol
  kScenarioInvalid,        // scenario violates its invariants
  kInputData,              // unreadable or unparsable input file
  kEpisodeFailure,         // an episode failed during a batch run
};

/// Single exception type for the library; `kind()` drives CLI exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::kConfig: return "configuration error";
    case ErrorKind::kMalformedInput: return "malformed input";
    case ErrorKind::kPredictionUnavailable: return "prediction unavailable";
    case ErrorKind::kInternalState: return "internal state error";
    case ErrorKind::kScenarioInvalid: return "scenario invalid";
    case ErrorKind::kInputData: return "input data error";
    case ErrorKind::kEpisodeFailure: return "episode failure";
  }
  return "error";
}

}  // namespace mbappe
