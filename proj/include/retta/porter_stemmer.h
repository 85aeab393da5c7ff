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

#ifndef RETTA_PORTER_STEMMER_H_
#define RETTA_PORTER_STEMMER_H_

#include <string>
#include <string_view>

namespace retta::text {

// Porter (1980) suffix-stripping stemmer, following Martin Porter's
// reference implementation (including its "bli" -> "ble" and "logi" -> "log"
// rules in step 2). Expects a lowercase alphabetic term; words of length two
// or less are returned unchanged.
std::string PorterStem(std::string_view term);

}  // namespace retta::text

#endif  // RETTA_PORTER_STEMMER_H_
