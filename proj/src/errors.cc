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

#include "crs/errors.h"

namespace crs {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kLoopEdge: return "loop-edge";
    case ErrorCode::kEndpointOutOfRange: return "endpoint-out-of-range";
    case ErrorCode::kMarginalOutOfRange: return "marginal-out-of-range";
    case ErrorCode::kInvalidEdgeId: return "invalid-edge-id";
    case ErrorCode::kInvalidVertex: return "invalid-vertex";
    case ErrorCode::kNotAForest: return "not-a-forest";
    case ErrorCode::kNotConvexCombination: return "not-convex-combination";
    case ErrorCode::kDuplicateVertex: return "duplicate-vertex";
    case ErrorCode::kUnknownVertex: return "unknown-vertex";
    case ErrorCode::kIncompleteLabeling: return "incomplete-labeling";
    case ErrorCode::kPolytopeViolation: return "polytope-violation";
    case ErrorCode::kStreamTooShort: return "stream-too-short";
    case ErrorCode::kNotAPermutation: return "not-a-permutation";
    case ErrorCode::kUnknownScheme: return "unknown-scheme";
    case ErrorCode::kUnknownStrategy: return "unknown-strategy";
    case ErrorCode::kUnknownFamily: return "unknown-family";
    case ErrorCode::kInfeasibleSpec: return "infeasible-spec";
    case ErrorCode::kInvalidArgument: return "invalid-argument";
    case ErrorCode::kParseError: return "parse-error";
    case ErrorCode::kIoError: return "io-error";
  }
  return "unknown";
}

}  // namespace crs
