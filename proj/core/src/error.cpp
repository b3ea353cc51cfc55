// Copyright 2026 The permflow Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "permflow/error.hpp"

namespace permflow {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidDimension: return "invalid-dimension";
    case ErrorCode::kMismatch: return "mismatch";
    case ErrorCode::kEmptyState: return "empty-state";
    case ErrorCode::kSizeGuard: return "size-guard";
    case ErrorCode::kShape: return "shape";
    case ErrorCode::kRange: return "range";
    case ErrorCode::kNoTransition: return "no-transition";
    case ErrorCode::kExhausted: return "exhausted";
    case ErrorCode::kOverflow: return "overflow";
    case ErrorCode::kBatchShape: return "batch-shape";
    case ErrorCode::kDegenerate: return "numerical-degeneracy";
    case ErrorCode::kNumerical: return "numerical";
    case ErrorCode::kUndefined: return "undefined";
    case ErrorCode::kParse: return "parse";
    case ErrorCode::kInvariant: return "invariant";
  }
  return "unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace permflow
