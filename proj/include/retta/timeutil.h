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

#ifndef RETTA_TIMEUTIL_H_
#define RETTA_TIMEUTIL_H_

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace retta {

using Timestamp = std::chrono::sys_seconds;

// Parses "YYYY-MM-DDTHH:MM:SS" followed by "Z" or "+00:00". Fractional
// seconds are truncated. Returns nullopt on anything else.
std::optional<Timestamp> ParseIso8601(std::string_view text);

// Formats as "YYYY-MM-DDTHH:MM:SSZ".
std::string FormatIso8601(Timestamp ts);

Timestamp NowSeconds();

}  // namespace retta

#endif  // RETTA_TIMEUTIL_H_
