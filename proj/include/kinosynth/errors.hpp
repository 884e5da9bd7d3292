// Copyright 2026 The kinosynth Authors
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

#ifndef KINOSYNTH_ERRORS_HPP_
#define KINOSYNTH_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace kinosynth {

enum class ErrorCode {
  kInvalidInput,
  kDegenerateConfiguration,
  kInvalidDuration,
  kInvalidTrajectory,
  kAmbiguousExtremal,
  kNoPathFound,
  kDegenerateLastControl,
  kParse,
};

const char* ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

inline const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidInput: return "invalid-input";
    case ErrorCode::kDegenerateConfiguration: return "degenerate-configuration";
    case ErrorCode::kInvalidDuration: return "invalid-duration";
    case ErrorCode::kInvalidTrajectory: return "invalid-trajectory";
    case ErrorCode::kAmbiguousExtremal: return "ambiguous-extremal";
    case ErrorCode::kNoPathFound: return "no-path-found";
    case ErrorCode::kDegenerateLastControl: return "degenerate-last-control";
    case ErrorCode::kParse: return "parse-error";
  }
  return "unknown";
}

}  // namespace kinosynth

#endif  // KINOSYNTH_ERRORS_HPP_
