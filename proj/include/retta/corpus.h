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

#ifndef RETTA_CORPUS_H_
#define RETTA_CORPUS_H_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "retta/timeutil.h"

namespace retta::corpus {

enum class SourceKind { kTwitter, kHistorical, kCameraLog, kSensorLog, kManual };

inline constexpr SourceKind kAllSourceKinds[] = {
    SourceKind::kTwitter, SourceKind::kHistorical, SourceKind::kCameraLog,
    SourceKind::kSensorLog, SourceKind::kManual};

// Wire names: twitter, historical, camera_log, sensor_log, manual.
std::string_view SourceKindName(SourceKind kind);
std::optional<SourceKind> ParseSourceKind(std::string_view name);

struct GeoPoint {
  double latitude = 0;
  double longitude = 0;

  bool operator==(const GeoPoint &) const = default;
};

// Meta keys written by this module.
inline constexpr char kMetaHashtags[] = "hashtags";      // space separated
inline constexpr char kMetaQueryTerm[] = "query_term";  // set by filtering
inline constexpr char kMetaLanguage[] = "lang";

struct RawDocument {
  std::string id;
  SourceKind source_kind = SourceKind::kTwitter;
  std::string text;
  Timestamp timestamp{};
  std::optional<GeoPoint> geo;
  std::map<std::string, std::string> meta;

  bool operator==(const RawDocument &) const = default;
};

// Lowercased hashtags without the leading '#', in first-seen order.
std::vector<std::string> Hashtags(const RawDocument &doc);

// Throws Error(kValidation) when the document breaks a field invariant.
void ValidateDocument(const RawDocument &doc);

// An ordered, id-unique collection of documents. Immutable once built.
class Corpus {
 public:
  Corpus() = default;

  // Validates every document and rejects duplicate ids.
  explicit Corpus(std::vector<RawDocument> documents);

  const std::vector<RawDocument> &documents() const { return documents_; }
  std::size_t size() const { return documents_.size(); }
  bool empty() const { return documents_.empty(); }

  std::size_t count(SourceKind kind) const;
  const std::map<SourceKind, std::size_t> &counts() const { return counts_; }

  // nullptr when the id is absent.
  const RawDocument *Find(std::string_view id) const;

  bool operator==(const Corpus &other) const {
    return documents_ == other.documents_;
  }

 private:
  std::vector<RawDocument> documents_;
  std::map<SourceKind, std::size_t> counts_;
  std::map<std::string, std::size_t, std::less<>> index_;
};

// Concatenates corpora in order; duplicate ids across inputs are an error.
Corpus Merge(const std::vector<Corpus> &parts);

struct DateRange {
  Timestamp start{};
  Timestamp end{};

  bool operator==(const DateRange &) const = default;
};

struct GeoFilter {
  GeoPoint center;
  double radius_km = 0;

  bool operator==(const GeoFilter &) const = default;
};

// Characterizes which documents of a source are relevant to a project.
struct ContextSpec {
  std::vector<std::string> keywords;
  std::vector<std::string> hashtags;
  std::optional<DateRange> date_range;
  std::string language = "en";
  // Absent means unlimited.
  std::optional<std::size_t> max_documents;
  std::optional<GeoFilter> geo_filter;

  bool operator==(const ContextSpec &) const = default;
};

void ValidateContext(const ContextSpec &spec);

// Line-record corpus format (one JSON object per line). Blank lines are
// skipped. Errors carry the 1-based line number.
Corpus ParseJsonl(std::istream &in);

// One corpus record. `line` only labels errors. Unknown fields are ignored.
RawDocument DocumentFromJson(const nlohmann::json &record, std::size_t line = 0);
nlohmann::json DocumentToJson(const RawDocument &doc);

Corpus LoadJsonl(const std::filesystem::path &path);
void WriteJsonl(const Corpus &corpus, std::ostream &out);

// Keeps documents satisfying every present constraint of `spec`, ordered by
// (timestamp, id) and truncated to the earliest max_documents. Records the
// first matching keyword (or "#tag") under meta "query_term".
Corpus FilterByContext(const Corpus &corpus, const ContextSpec &spec);

struct CorpusStats {
  std::map<SourceKind, std::size_t> counts;  // every kind, zero if unseen
  std::optional<Timestamp> min_timestamp;
  std::optional<Timestamp> max_timestamp;
  std::size_t distinct_hashtags = 0;
};

CorpusStats ComputeStats(const Corpus &corpus);

// Great-circle distance in kilometres.
double HaversineKm(const GeoPoint &a, const GeoPoint &b);

// Source of documents for one source kind. Live feeds would implement this;
// the shipped implementation reads fixture files.
class Connector {
 public:
  virtual ~Connector() = default;
  virtual SourceKind kind() const = 0;
  // All documents of kind() the connector can provide.
  virtual Corpus Fetch() const = 0;
};

class FileConnector : public Connector {
 public:
  FileConnector(SourceKind kind, std::filesystem::path path)
      : kind_(kind), path_(std::move(path)) {}

  SourceKind kind() const override { return kind_; }
  Corpus Fetch() const override;

  const std::filesystem::path &path() const { return path_; }

 private:
  SourceKind kind_;
  std::filesystem::path path_;
};

using ConnectorSet = std::map<SourceKind, std::shared_ptr<const Connector>>;

}  // namespace retta::corpus

#endif  // RETTA_CORPUS_H_
