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

#ifndef RETTA_ERROR_H_
#define RETTA_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace retta {

// Failure categories shared by every module. The gateway maps each one onto
// exactly one API error code.
enum class ErrorCode {
  kIo,
  kParse,
  kValidation,
  kLookup,
  kIntegrity,
  kEmptyInput,
  kParameter,
  kTraining,
  kState,
  kEligibility,
  kSchema,
  kAvailability,
  kNotFound,
  kInternal,
};

std::string_view ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string &message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Parse failure with a 1-based line number (0 when not line oriented).
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string &message)
      : Error(ErrorCode::kParse, Format(line, message)), line_(line) {}

  std::size_t line() const { return line_; }

 private:
  static std::string Format(std::size_t line, const std::string &message) {
    if (line == 0) return message;
    return "line " + std::to_string(line) + ": " + message;
  }

  std::size_t line_;
};

}  // namespace retta

#endif  // RETTA_ERROR_H_
