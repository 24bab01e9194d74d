// Copyright 2026 The LatentProbe Authors
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

#include "latentprobe/error.hpp"

namespace latentprobe {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid_argument";
    case ErrorCode::kIndexOutOfRange: return "index_out_of_range";
    case ErrorCode::kEmptySet: return "empty_set";
    case ErrorCode::kMalformedHeader: return "malformed_header";
    case ErrorCode::kDimensionMismatch: return "dimension_mismatch";
    case ErrorCode::kNonFinite: return "non_finite";
    case ErrorCode::kLabelOutOfRange: return "label_out_of_range";
    case ErrorCode::kTruncatedPayload: return "truncated_payload";
    case ErrorCode::kIo: return "io";
    case ErrorCode::kDegenerateClass: return "degenerate_class";
    case ErrorCode::kSizeMismatch: return "size_mismatch";
    case ErrorCode::kSchema: return "schema";
  }
  return "unknown";
}

}  // namespace latentprobe
