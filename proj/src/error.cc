// Copyright 2026 The RETTA Authors.
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

#include "retta/error.h"

namespace retta {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kIo: return "io";
    case ErrorCode::kParse: return "parse";
    case ErrorCode::kValidation: return "validation";
    case ErrorCode::kLookup: return "lookup";
    case ErrorCode::kIntegrity: return "integrity";
    case ErrorCode::kEmptyInput: return "empty_input";
    case ErrorCode::kParameter: return "parameter";
    case ErrorCode::kTraining: return "training";
    case ErrorCode::kState: return "state";
    case ErrorCode::kEligibility: return "eligibility";
    case ErrorCode::kSchema: return "schema";
    case ErrorCode::kAvailability: return "availability";
    case ErrorCode::kNotFound: return "not_found";
    case ErrorCode::kInternal: return "internal";
  }
  return "internal";
}

}  // namespace retta
