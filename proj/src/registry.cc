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

#include "retta/registry.h"

#include <algorithm>
#include <fstream>

#include "retta/error.h"

namespace retta::registry {
namespace {

using nlohmann::json;

SourceKind SourceFromJson(const json &value) {
  if (!value.is_string()) throw Error(ErrorCode::kParse, "source kind must be a string");
  auto kind = corpus::ParseSourceKind(value.get<std::string>());
  if (!kind) {
    throw Error(ErrorCode::kParse, "unknown source kind \"" + value.get<std::string>() + "\"");
  }
  return *kind;
}

std::set<SourceKind> SourceSetFromJson(const json &value) {
  std::set<SourceKind> kinds;
  if (value.is_null()) return kinds;
  if (!value.is_array()) throw Error(ErrorCode::kParse, "source list must be an array");
  for (const auto &item : value) kinds.insert(SourceFromJson(item));
  return kinds;
}

json SourceSetToJson(const std::set<SourceKind> &kinds) {
  json out = json::array();
  for (SourceKind kind : kinds) out.push_back(corpus::SourceKindName(kind));
  return out;
}

FieldDescriptor Field(std::string name, ValueKind kind, bool required) {
  return FieldDescriptor{std::move(name), kind, required};
}

}  // namespace

std::string_view ServiceIdName(ServiceId id) {
  switch (id) {
    case ServiceId::kEMS: return "EMS";
    case ServiceId::kTST: return "TST";
    case ServiceId::kUTP: return "UTP";
  }
  return "TST";
}

std::optional<ServiceId> ParseServiceId(std::string_view name) {
  for (ServiceId id : kAllServices) {
    if (ServiceIdName(id) == name) return id;
  }
  return std::nullopt;
}

std::string_view ValueKindName(ValueKind kind) {
  switch (kind) {
    case ValueKind::kText: return "text";
    case ValueKind::kTextList: return "text_list";
    case ValueKind::kDateRange: return "date_range";
    case ValueKind::kGeoArea: return "geo_area";
    case ValueKind::kPositiveInt: return "positive_int";
  }
  return "text";
}

std::optional<ValueKind> ParseValueKind(std::string_view name) {
  for (ValueKind kind : {ValueKind::kText, ValueKind::kTextList, ValueKind::kDateRange,
                         ValueKind::kGeoArea, ValueKind::kPositiveInt}) {
    if (ValueKindName(kind) == name) return kind;
  }
  return std::nullopt;
}

void ValidateRegion(const RegionSpec &region) {
  const BoundingBox &box = region.bounding_box;
  auto lat_ok = [](double v) { return v >= -90 && v <= 90; };
  auto lon_ok = [](double v) { return v >= -180 && v <= 180; };
  if (!lat_ok(box.min_lat) || !lat_ok(box.max_lat) || !lon_ok(box.min_lon) ||
      !lon_ok(box.max_lon)) {
    throw Error(ErrorCode::kValidation, "bounding box coordinates out of range");
  }
  if (box.min_lat > box.max_lat) {
    throw Error(ErrorCode::kValidation, "bounding box min lat exceeds max lat");
  }
  if (box.min_lon > box.max_lon) {
    throw Error(ErrorCode::kValidation, "bounding box min lon exceeds max lon");
  }
}

Catalog::Catalog(std::vector<ServiceDescriptor> services,
                 std::vector<DataSourceDescriptor> sources)
    : services_(std::move(services)), sources_(std::move(sources)) {
  // Keep catalog order regardless of the order given.
  std::stable_sort(services_.begin(), services_.end(),
                   [](const ServiceDescriptor &a, const ServiceDescriptor &b) {
                     return a.id < b.id;
                   });
  for (std::size_t i = 0; i < services_.size(); ++i) {
    const ServiceDescriptor &s = services_[i];
    if (i > 0 && services_[i - 1].id == s.id) {
      throw Error(ErrorCode::kValidation,
                  "service " + std::string(ServiceIdName(s.id)) + " listed twice");
    }
    if (s.required_source_kinds.empty()) {
      throw Error(ErrorCode::kValidation,
                  "service " + std::string(ServiceIdName(s.id)) + " requires no source");
    }
    if (s.min_documents < 1) {
      throw Error(ErrorCode::kValidation, "min_documents must be at least 1");
    }
  }
  std::set<SourceKind> kinds;
  for (const DataSourceDescriptor &source : sources_) {
    if (!kinds.insert(source.kind).second) {
      throw Error(ErrorCode::kValidation, "source " +
                                              std::string(corpus::SourceKindName(source.kind)) +
                                              " listed twice");
    }
    std::set<std::string> names;
    for (const FieldDescriptor &field : source.context_fields) {
      if (field.name.empty()) throw Error(ErrorCode::kValidation, "empty field name");
      if (!names.insert(field.name).second) {
        throw Error(ErrorCode::kValidation, "duplicate context field \"" + field.name + "\"");
      }
    }
  }
}

Catalog Catalog::Default() {
  using enum SourceKind;
  std::vector<ServiceDescriptor> services = {
      {ServiceId::kEMS, "Emergency Medical Services", {kTwitter, kHistorical},
       {kCameraLog, kSensorLog, kManual}, 100, {"ems-performance"}},
      {ServiceId::kTST, "Traffic Signal Timing", {kTwitter},
       {kHistorical, kCameraLog, kSensorLog, kManual}, 50,
       {"tst-reliability", "tst-performance"}},
      {ServiceId::kUTP, "Urban Transportation Planning", {kHistorical},
       {kTwitter, kCameraLog, kManual}, 100, {"utp-usability"}},
  };
  std::vector<DataSourceDescriptor> sources = {
      {kTwitter, "Social networks (Twitter)", false,
       {Field("keywords", ValueKind::kTextList, true),
        Field("hashtags", ValueKind::kTextList, false),
        Field("date_range", ValueKind::kDateRange, false),
        Field("language", ValueKind::kText, false),
        Field("max_documents", ValueKind::kPositiveInt, true)}},
      {kHistorical, "Historical traffic data", false,
       {Field("date_range", ValueKind::kDateRange, true)}},
      {kCameraLog, "Traffic cameras", false,
       {Field("geo_area", ValueKind::kGeoArea, true),
        Field("date_range", ValueKind::kDateRange, false)}},
      {kSensorLog, "Traffic signal sensors", false,
       {Field("geo_area", ValueKind::kGeoArea, true),
        Field("date_range", ValueKind::kDateRange, false)}},
      {kManual, "Manual entry", false, {}},
  };
  return Catalog(std::move(services), std::move(sources));
}

Catalog Catalog::FromJson(const json &doc) {
  try {
    std::vector<ServiceDescriptor> services;
    for (const json &item : doc.at("services")) {
      ServiceDescriptor s;
      std::string id = item.at("id").get<std::string>();
      auto parsed = ParseServiceId(id);
      if (!parsed) throw Error(ErrorCode::kParse, "unknown service \"" + id + "\"");
      s.id = *parsed;
      s.display_name = item.value("display_name", id);
      s.required_source_kinds = SourceSetFromJson(item.at("required_sources"));
      s.optional_source_kinds = SourceSetFromJson(item.value("optional_sources", json()));
      long long min_docs = item.at("min_documents").get<long long>();
      if (min_docs < 1) throw Error(ErrorCode::kValidation, "min_documents must be at least 1");
      s.min_documents = static_cast<std::size_t>(min_docs);
      s.boost_rule_set =
          item.value("boost_rules", std::vector<std::string>{});
      services.push_back(std::move(s));
    }
    std::vector<DataSourceDescriptor> sources;
    for (const json &item : doc.at("sources")) {
      DataSourceDescriptor d;
      d.kind = SourceFromJson(item.at("kind"));
      d.display_name = item.value("display_name", std::string(corpus::SourceKindName(d.kind)));
      for (const json &f : item.value("context_fields", json::array())) {
        std::string kind_name = f.at("value_kind").get<std::string>();
        auto kind = ParseValueKind(kind_name);
        if (!kind) throw Error(ErrorCode::kParse, "unknown value kind \"" + kind_name + "\"");
        d.context_fields.push_back(
            {f.at("name").get<std::string>(), *kind, f.value("required", false)});
      }
      sources.push_back(std::move(d));
    }
    return Catalog(std::move(services), std::move(sources));
  } catch (const json::exception &e) {
    throw Error(ErrorCode::kParse, std::string("bad catalog: ") + e.what());
  }
}

Catalog Catalog::Load(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot read catalog " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error &e) {
    throw Error(ErrorCode::kParse, "bad catalog " + path.string() + ": " + e.what());
  }
  return FromJson(doc);
}

json Catalog::ToJson() const {
  json doc = json::object();
  doc["services"] = json::array();
  for (const ServiceDescriptor &s : services_) {
    doc["services"].push_back({{"id", ServiceIdName(s.id)},
                               {"display_name", s.display_name},
                               {"required_sources", SourceSetToJson(s.required_source_kinds)},
                               {"optional_sources", SourceSetToJson(s.optional_source_kinds)},
                               {"min_documents", s.min_documents},
                               {"boost_rules", s.boost_rule_set}});
  }
  doc["sources"] = json::array();
  for (const DataSourceDescriptor &d : sources_) {
    json fields = json::array();
    for (const FieldDescriptor &f : d.context_fields) {
      fields.push_back({{"name", f.name},
                        {"value_kind", ValueKindName(f.value_kind)},
                        {"required", f.required}});
    }
    doc["sources"].push_back({{"kind", corpus::SourceKindName(d.kind)},
                              {"display_name", d.display_name},
                              {"context_fields", fields}});
  }
  return doc;
}

const ServiceDescriptor &Catalog::service(ServiceId id) const {
  for (const ServiceDescriptor &s : services_) {
    if (s.id == id) return s;
  }
  throw Error(ErrorCode::kLookup,
              "service " + std::string(ServiceIdName(id)) + " not in catalog");
}

const DataSourceDescriptor &Catalog::source(SourceKind kind) const {
  for (const DataSourceDescriptor &d : sources_) {
    if (d.kind == kind) return d;
  }
  throw Error(ErrorCode::kLookup,
              "source " + std::string(corpus::SourceKindName(kind)) + " not in catalog");
}

bool IsEligible(const ServiceDescriptor &service, const RegionSpec &region,
                const SourceCounts &counts) {
  std::size_t total = 0;
  for (SourceKind kind : service.required_source_kinds) {
    if (!region.declared_available_sources.contains(kind)) return false;
    if (auto it = counts.find(kind); it != counts.end()) total += it->second;
  }
  return total >= service.min_documents;
}

std::vector<ServiceDescriptor> EligibleServices(const Catalog &catalog,
                                                const RegionSpec &region,
                                                const SourceCounts &counts) {
  std::vector<ServiceDescriptor> eligible;
  for (const ServiceDescriptor &service : catalog.services()) {
    if (IsEligible(service, region, counts)) eligible.push_back(service);
  }
  return eligible;
}

std::vector<DataSourceDescriptor> AvailableSources(const Catalog &catalog,
                                                   const RegionSpec &region,
                                                   const ServiceDescriptor &service,
                                                   const SourceCounts &counts) {
  if (!IsEligible(service, region, counts)) {
    throw Error(ErrorCode::kEligibility, "service " +
                                             std::string(ServiceIdName(service.id)) +
                                             " is not offered in region \"" +
                                             region.name + "\"");
  }
  std::vector<DataSourceDescriptor> available;
  for (const DataSourceDescriptor &source : catalog.sources()) {
    bool relevant = service.required_source_kinds.contains(source.kind) ||
                    service.optional_source_kinds.contains(source.kind);
    if (relevant && region.declared_available_sources.contains(source.kind)) {
      DataSourceDescriptor copy = source;
      copy.available_in_region = true;
      available.push_back(std::move(copy));
    }
  }
  return available;
}

const std::vector<FieldDescriptor> &ContextSchema(const Catalog &catalog,
                                                  SourceKind kind) {
  return catalog.source(kind).context_fields;
}

std::optional<std::string> MissingRequiredField(
    const std::vector<FieldDescriptor> &schema, const corpus::ContextSpec &spec) {
  for (const FieldDescriptor &field : schema) {
    if (!field.required) continue;
    bool populated = true;
    if (field.name == "keywords") {
      populated = !spec.keywords.empty();
    } else if (field.name == "hashtags") {
      populated = !spec.hashtags.empty();
    } else if (field.name == "date_range") {
      populated = spec.date_range.has_value();
    } else if (field.name == "language") {
      populated = !spec.language.empty();
    } else if (field.name == "max_documents") {
      populated = spec.max_documents.has_value();
    } else if (field.name == "geo_area") {
      populated = spec.geo_filter.has_value();
    } else {
      // A field the context record cannot carry can never be satisfied.
      populated = false;
    }
    if (!populated) return field.name;
  }
  return std::nullopt;
}

}  // namespace retta::registry
