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

#ifndef RETTA_TESTS_TEST_UTIL_H_
#define RETTA_TESTS_TEST_UTIL_H_

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "retta/corpus.h"
#include "retta/registry.h"
#include "retta/timeutil.h"

namespace testing_util {

inline std::filesystem::path SourcePath(const std::string &relative) {
  return std::filesystem::path(RETTA_SOURCE_DIR) / relative;
}

// Directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("retta-test-" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir &) = delete;
  TempDir &operator=(const TempDir &) = delete;

  const std::filesystem::path &path() const { return path_; }
  std::filesystem::path operator/(const std::string &name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline void WriteText(const std::filesystem::path &path, const std::string &content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
}

inline std::string ReadText(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

inline retta::Timestamp Ts(const std::string &iso) { return *retta::ParseIso8601(iso); }

inline retta::corpus::RawDocument Doc(
    std::string id, std::string text, const std::string &ts = "2024-03-01T08:00:00Z",
    retta::corpus::SourceKind kind = retta::corpus::SourceKind::kTwitter) {
  retta::corpus::RawDocument doc;
  doc.id = std::move(id);
  doc.text = std::move(text);
  doc.timestamp = Ts(ts);
  doc.source_kind = kind;
  return doc;
}

// Default catalog with sensor data made mandatory for EMS and TST, so that
// sensor-less regions have something to be denied.
inline retta::registry::Catalog SensorCatalog() {
  using retta::corpus::SourceKind;
  auto services = retta::registry::Catalog::Default().services();
  for (auto &service : services) {
    if (service.id == retta::registry::ServiceId::kUTP) continue;
    service.required_source_kinds.insert(SourceKind::kSensorLog);
    service.optional_source_kinds.erase(SourceKind::kSensorLog);
  }
  return retta::registry::Catalog(services, retta::registry::Catalog::Default().sources());
}

}  // namespace testing_util

#endif  // RETTA_TESTS_TEST_UTIL_H_
