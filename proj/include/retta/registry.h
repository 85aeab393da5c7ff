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

#ifndef RETTA_REGISTRY_H_
#define RETTA_REGISTRY_H_

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "retta/corpus.h"

namespace retta::registry {

using corpus::SourceKind;

enum class ServiceId { kEMS, kTST, kUTP };

inline constexpr ServiceId kAllServices[] = {ServiceId::kEMS, ServiceId::kTST,
                                             ServiceId::kUTP};

std::string_view ServiceIdName(ServiceId id);
std::optional<ServiceId> ParseServiceId(std::string_view name);

enum class ValueKind { kText, kTextList, kDateRange, kGeoArea, kPositiveInt };

std::string_view ValueKindName(ValueKind kind);
std::optional<ValueKind> ParseValueKind(std::string_view name);

struct FieldDescriptor {
  std::string name;
  ValueKind value_kind = ValueKind::kText;
  bool required = false;

  bool operator==(const FieldDescriptor &) const = default;
};

struct ServiceDescriptor {
  ServiceId id = ServiceId::kTST;
  std::string display_name;
  std::set<SourceKind> required_source_kinds;
  // Sources that may be selected for the service without being required.
  std::set<SourceKind> optional_source_kinds;
  std::size_t min_documents = 1;
  std::vector<std::string> boost_rule_set;

  bool operator==(const ServiceDescriptor &) const = default;
};

struct DataSourceDescriptor {
  SourceKind kind = SourceKind::kTwitter;
  std::string display_name;
  bool available_in_region = false;  // filled in by AvailableSources
  std::vector<FieldDescriptor> context_fields;

  bool operator==(const DataSourceDescriptor &) const = default;
};

struct BoundingBox {
  double min_lat = -90;
  double min_lon = -180;
  double max_lat = 90;
  double max_lon = 180;

  bool operator==(const BoundingBox &) const = default;
};

struct RegionSpec {
  std::string name;
  BoundingBox bounding_box;
  std::set<SourceKind> declared_available_sources;

  bool operator==(const RegionSpec &) const = default;
};

// Throws Error(kValidation) for an inverted or out-of-range bounding box.
void ValidateRegion(const RegionSpec &region);

using SourceCounts = std::map<SourceKind, std::size_t>;

// The service and data-source catalog. Services keep catalog order
// (EMS, TST, UTP); each id appears at most once.
class Catalog {
 public:
  Catalog(std::vector<ServiceDescriptor> services,
          std::vector<DataSourceDescriptor> sources);

  // Built-in defaults, identical to data/catalog.json.
  static Catalog Default();
  static Catalog FromJson(const nlohmann::json &doc);
  static Catalog Load(const std::filesystem::path &path);
  nlohmann::json ToJson() const;

  const std::vector<ServiceDescriptor> &services() const { return services_; }
  const std::vector<DataSourceDescriptor> &sources() const { return sources_; }

  // Throws Error(kLookup) when absent.
  const ServiceDescriptor &service(ServiceId id) const;
  const DataSourceDescriptor &source(SourceKind kind) const;

 private:
  std::vector<ServiceDescriptor> services_;
  std::vector<DataSourceDescriptor> sources_;
};

// A service is offered iff the region declares every required source and
// the required sources together hold at least min_documents documents.
bool IsEligible(const ServiceDescriptor &service, const RegionSpec &region,
                const SourceCounts &counts);

std::vector<ServiceDescriptor> EligibleServices(const Catalog &catalog,
                                                const RegionSpec &region,
                                                const SourceCounts &counts);

// Sources relevant to the service (required or optional) that the region
// declares, in catalog source order. Throws Error(kEligibility) when the
// service is not eligible in the region.
std::vector<DataSourceDescriptor> AvailableSources(const Catalog &catalog,
                                                   const RegionSpec &region,
                                                   const ServiceDescriptor &service,
                                                   const SourceCounts &counts);

// Throws Error(kLookup) for a kind the catalog does not describe.
const std::vector<FieldDescriptor> &ContextSchema(const Catalog &catalog,
                                                  SourceKind kind);

// Name of the first required schema field `spec` leaves unpopulated.
std::optional<std::string> MissingRequiredField(
    const std::vector<FieldDescriptor> &schema, const corpus::ContextSpec &spec);

}  // namespace retta::registry

#endif  // RETTA_REGISTRY_H_
