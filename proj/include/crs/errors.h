// Copyright 2026 The Authors.
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

#ifndef CRS_ERRORS_H_
#define CRS_ERRORS_H_

#include <stdexcept>
#include <string>

namespace crs {

enum class ErrorCode {
  kLoopEdge,
  kEndpointOutOfRange,
  kMarginalOutOfRange,
  kInvalidEdgeId,
  kInvalidVertex,
  kNotAForest,
  kNotConvexCombination,
  kDuplicateVertex,
  kUnknownVertex,
  kIncompleteLabeling,
  kPolytopeViolation,
  kStreamTooShort,
  kNotAPermutation,
  kUnknownScheme,
  kUnknownStrategy,
  kUnknownFamily,
  kInfeasibleSpec,
  kInvalidArgument,
  kParseError,
  kIoError,
};

const char* error_code_name(ErrorCode code);

// Validation and usage failures. The code distinguishes the failure kind so
// callers (and tests) do not have to match on message text.
class CrsError : public std::runtime_error {
 public:
  CrsError(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// An exact enumeration was requested on an instance larger than its cap.
class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace crs

#endif  // CRS_ERRORS_H_
