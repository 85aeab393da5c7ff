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

#include "retta/corpus.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "retta/error.h"

namespace retta::corpus {
namespace {

using nlohmann::json;

std::string AsciiLower(std::string_view text) {
  std::string out(text);
  for (char &c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool IsBlank(std::string_view text) {
  return std::all_of(text.begin(), text.end(), [](char c) {
    return std::isspace(static_cast<unsigned char>(c));
  });
}

std::string NormalizeTag(std::string_view tag) {
  while (!tag.empty() && tag.front() == '#') tag.remove_prefix(1);
  return AsciiLower(tag);
}

bool IsTagChar(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

void AppendUnique(std::vector<std::string> *list, std::string value) {
  if (value.empty()) return;
  if (std::find(list->begin(), list->end(), value) == list->end()) {
    list->push_back(std::move(value));
  }
}

std::vector<std::string> SplitSpaces(std::string_view text) {
  std::vector<std::string> parts;
  std::istringstream in{std::string(text)};
  std::string part;
  while (in >> part) parts.push_back(part);
  return parts;
}

RawDocument ParseRecordImpl(const json &record, std::size_t line) {
  if (!record.is_object()) throw ParseError(line, "record is not an object");
  auto required_string = [&](const char *field) -> std::string {
    auto it = record.find(field);
    if (it == record.end()) {
      throw ParseError(line, std::string("missing field \"") + field + "\"");
    }
    if (!it->is_string()) {
      throw ParseError(line, std::string("field \"") + field + "\" is not a string");
    }
    return it->get<std::string>();
  };

  RawDocument doc;
  doc.id = required_string("id");
  doc.text = required_string("text");
  std::string source = required_string("source");
  auto kind = ParseSourceKind(source);
  if (!kind) throw ParseError(line, "unknown source \"" + source + "\"");
  doc.source_kind = *kind;
  std::string ts = required_string("ts");
  auto parsed_ts = ParseIso8601(ts);
  if (!parsed_ts) throw ParseError(line, "bad timestamp \"" + ts + "\"");
  doc.timestamp = *parsed_ts;

  bool has_lat = record.contains("lat") && !record["lat"].is_null();
  bool has_lon = record.contains("lon") && !record["lon"].is_null();
  if (has_lat != has_lon) throw ParseError(line, "lat and lon must appear together");
  if (has_lat) {
    if (!record["lat"].is_number() || !record["lon"].is_number()) {
      throw ParseError(line, "lat/lon must be numbers");
    }
    doc.geo = GeoPoint{record["lat"].get<double>(), record["lon"].get<double>()};
  }

  if (auto it = record.find("meta"); it != record.end() && !it->is_null()) {
    if (!it->is_object()) throw ParseError(line, "meta must be an object");
    for (const auto &[key, value] : it->items()) {
      if (!value.is_string()) {
        throw ParseError(line, "meta value for \"" + key + "\" is not a string");
      }
      doc.meta[key] = value.get<std::string>();
    }
  }
  if (auto it = record.find("tags"); it != record.end() && !it->is_null()) {
    if (!it->is_array()) throw ParseError(line, "tags must be a list");
    std::vector<std::string> tags;
    for (const auto &tag : *it) {
      if (!tag.is_string()) throw ParseError(line, "tags must be strings");
      AppendUnique(&tags, NormalizeTag(tag.get<std::string>()));
    }
    std::string joined;
    for (const auto &tag : tags) {
      if (!joined.empty()) joined += ' ';
      joined += tag;
    }
    if (!joined.empty()) doc.meta[kMetaHashtags] = joined;
    else doc.meta.erase(kMetaHashtags);
  }

  try {
    ValidateDocument(doc);
  } catch (const Error &e) {
    throw ParseError(line, e.what());
  }
  return doc;
}

bool TextMatches(const RawDocument &doc, const ContextSpec &spec,
                 std::string *matched) {
  if (spec.keywords.empty() && spec.hashtags.empty()) return true;
  std::string lowered = AsciiLower(doc.text);
  for (const auto &keyword : spec.keywords) {
    std::string needle = AsciiLower(keyword);
    if (!needle.empty() && lowered.find(needle) != std::string::npos) {
      *matched = keyword;
      return true;
    }
  }
  if (!spec.hashtags.empty()) {
    std::vector<std::string> tags = Hashtags(doc);
    for (const auto &wanted : spec.hashtags) {
      std::string tag = NormalizeTag(wanted);
      if (std::find(tags.begin(), tags.end(), tag) != tags.end()) {
        *matched = "#" + tag;
        return true;
      }
    }
  }
  return false;
}

}  // namespace

std::string_view SourceKindName(SourceKind kind) {
  switch (kind) {
    case SourceKind::kTwitter: return "twitter";
    case SourceKind::kHistorical: return "historical";
    case SourceKind::kCameraLog: return "camera_log";
    case SourceKind::kSensorLog: return "sensor_log";
    case SourceKind::kManual: return "manual";
  }
  return "manual";
}

std::optional<SourceKind> ParseSourceKind(std::string_view name) {
  for (SourceKind kind : kAllSourceKinds) {
    if (SourceKindName(kind) == name) return kind;
  }
  return std::nullopt;
}

std::vector<std::string> Hashtags(const RawDocument &doc) {
  std::vector<std::string> tags;
  if (auto it = doc.meta.find(kMetaHashtags); it != doc.meta.end()) {
    for (auto &tag : SplitSpaces(it->second)) AppendUnique(&tags, NormalizeTag(tag));
  }
  const std::string &text = doc.text;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '#') continue;
    if (i > 0 && IsTagChar(text[i - 1])) continue;
    std::size_t end = i + 1;
    while (end < text.size() && IsTagChar(text[end])) ++end;
    if (end > i + 1) AppendUnique(&tags, AsciiLower(text.substr(i + 1, end - i - 1)));
    i = end - 1;
  }
  return tags;
}

void ValidateDocument(const RawDocument &doc) {
  if (doc.id.empty()) throw Error(ErrorCode::kValidation, "document id is empty");
  if (IsBlank(doc.text)) {
    throw Error(ErrorCode::kValidation, "document \"" + doc.id + "\" has empty text");
  }
  if (doc.geo) {
    if (!(doc.geo->latitude >= -90 && doc.geo->latitude <= 90) ||
        !(doc.geo->longitude >= -180 && doc.geo->longitude <= 180)) {
      throw Error(ErrorCode::kValidation,
                  "document \"" + doc.id + "\" has coordinates out of range");
    }
  }
}

Corpus::Corpus(std::vector<RawDocument> documents)
    : documents_(std::move(documents)) {
  for (std::size_t i = 0; i < documents_.size(); ++i) {
    const RawDocument &doc = documents_[i];
    ValidateDocument(doc);
    if (!index_.emplace(doc.id, i).second) {
      throw Error(ErrorCode::kValidation, "duplicate document id \"" + doc.id + "\"");
    }
    ++counts_[doc.source_kind];
  }
}

std::size_t Corpus::count(SourceKind kind) const {
  auto it = counts_.find(kind);
  return it == counts_.end() ? 0 : it->second;
}

const RawDocument *Corpus::Find(std::string_view id) const {
  auto it = index_.find(id);
  return it == index_.end() ? nullptr : &documents_[it->second];
}

Corpus Merge(const std::vector<Corpus> &parts) {
  std::vector<RawDocument> all;
  for (const auto &part : parts) {
    all.insert(all.end(), part.documents().begin(), part.documents().end());
  }
  return Corpus(std::move(all));
}

void ValidateContext(const ContextSpec &spec) {
  if (spec.date_range && spec.date_range->start > spec.date_range->end) {
    throw Error(ErrorCode::kValidation, "date_range start is after end");
  }
  if (spec.max_documents && *spec.max_documents < 1) {
    throw Error(ErrorCode::kValidation, "max_documents must be at least 1");
  }
  if (spec.geo_filter) {
    if (!(spec.geo_filter->radius_km > 0)) {
      throw Error(ErrorCode::kValidation, "geo radius must be positive");
    }
    const GeoPoint &c = spec.geo_filter->center;
    if (!(c.latitude >= -90 && c.latitude <= 90) ||
        !(c.longitude >= -180 && c.longitude <= 180)) {
      throw Error(ErrorCode::kValidation, "geo center out of range");
    }
  }
}

Corpus ParseJsonl(std::istream &in) {
  std::vector<RawDocument> docs;
  std::set<std::string> seen;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (IsBlank(line)) continue;
    json record;
    try {
      record = json::parse(line);
    } catch (const json::parse_error &e) {
      throw ParseError(line_number, std::string("malformed record: ") + e.what());
    }
    RawDocument doc = ParseRecordImpl(record, line_number);
    if (!seen.insert(doc.id).second) {
      throw Error(ErrorCode::kValidation, "line " + std::to_string(line_number) +
                                              ": duplicate document id \"" +
                                              doc.id + "\"");
    }
    docs.push_back(std::move(doc));
  }
  return Corpus(std::move(docs));
}

Corpus LoadJsonl(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot read corpus file " + path.string());
  return ParseJsonl(in);
}

RawDocument DocumentFromJson(const json &record, std::size_t line) {
  return ParseRecordImpl(record, line);
}

json DocumentToJson(const RawDocument &doc) {
  json record = json::object();
  record["id"] = doc.id;
  record["source"] = SourceKindName(doc.source_kind);
  record["text"] = doc.text;
  record["ts"] = FormatIso8601(doc.timestamp);
  if (doc.geo) {
    record["lat"] = doc.geo->latitude;
    record["lon"] = doc.geo->longitude;
  }
  json meta = json::object();
  for (const auto &[key, value] : doc.meta) {
    if (key == kMetaHashtags) {
      record["tags"] = SplitSpaces(value);
    } else {
      meta[key] = value;
    }
  }
  if (!meta.empty()) record["meta"] = meta;
  return record;
}

void WriteJsonl(const Corpus &corpus, std::ostream &out) {
  for (const RawDocument &doc : corpus.documents()) {
    out << DocumentToJson(doc).dump() << '\n';
  }
}

Corpus FilterByContext(const Corpus &corpus, const ContextSpec &spec) {
  std::vector<RawDocument> kept;
  for (const RawDocument &doc : corpus.documents()) {
    std::string matched;
    if (!TextMatches(doc, spec, &matched)) continue;
    if (spec.date_range && (doc.timestamp < spec.date_range->start ||
                            doc.timestamp > spec.date_range->end)) {
      continue;
    }
    if (auto it = doc.meta.find(kMetaLanguage);
        it != doc.meta.end() && !spec.language.empty() &&
        AsciiLower(it->second) != AsciiLower(spec.language)) {
      continue;
    }
    if (spec.geo_filter) {
      if (!doc.geo) continue;
      if (HaversineKm(*doc.geo, spec.geo_filter->center) > spec.geo_filter->radius_km) {
        continue;
      }
    }
    RawDocument copy = doc;
    if (!matched.empty()) copy.meta[kMetaQueryTerm] = matched;
    kept.push_back(std::move(copy));
  }
  std::sort(kept.begin(), kept.end(), [](const RawDocument &a, const RawDocument &b) {
    if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
    return a.id < b.id;
  });
  if (spec.max_documents && kept.size() > *spec.max_documents) {
    kept.resize(*spec.max_documents);
  }
  return Corpus(std::move(kept));
}

CorpusStats ComputeStats(const Corpus &corpus) {
  CorpusStats stats;
  for (SourceKind kind : kAllSourceKinds) stats.counts[kind] = corpus.count(kind);
  std::set<std::string> tags;
  for (const RawDocument &doc : corpus.documents()) {
    if (!stats.min_timestamp || doc.timestamp < *stats.min_timestamp) {
      stats.min_timestamp = doc.timestamp;
    }
    if (!stats.max_timestamp || doc.timestamp > *stats.max_timestamp) {
      stats.max_timestamp = doc.timestamp;
    }
    for (auto &tag : Hashtags(doc)) tags.insert(std::move(tag));
  }
  stats.distinct_hashtags = tags.size();
  return stats;
}

double HaversineKm(const GeoPoint &a, const GeoPoint &b) {
  constexpr double kEarthRadiusKm = 6371.0088;
  constexpr double kRadians = 3.14159265358979323846 / 180.0;
  double dlat = (b.latitude - a.latitude) * kRadians;
  double dlon = (b.longitude - a.longitude) * kRadians;
  double h = std::sin(dlat / 2) * std::sin(dlat / 2) +
             std::cos(a.latitude * kRadians) * std::cos(b.latitude * kRadians) *
                 std::sin(dlon / 2) * std::sin(dlon / 2);
  return 2 * kEarthRadiusKm * std::asin(std::min(1.0, std::sqrt(h)));
}

Corpus FileConnector::Fetch() const {
  Corpus all = LoadJsonl(path_);
  std::vector<RawDocument> mine;
  for (const RawDocument &doc : all.documents()) {
    if (doc.source_kind == kind_) mine.push_back(doc);
  }
  return Corpus(std::move(mine));
}

}  // namespace retta::corpus
