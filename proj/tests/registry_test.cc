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
#include <random>

#include "doctest.h"
#include "retta/error.h"
#include "test_util.h"

namespace {

using namespace retta;
using namespace retta::registry;
using corpus::SourceKind;

RegionSpec Region(std::set<SourceKind> sources) {
  RegionSpec region;
  region.name = "test";
  region.bounding_box = {50.8, -114.3, 51.2, -113.8};
  region.declared_available_sources = std::move(sources);
  return region;
}

std::vector<ServiceId> Ids(const std::vector<ServiceDescriptor> &services) {
  std::vector<ServiceId> ids;
  for (const auto &s : services) ids.push_back(s.id);
  return ids;
}

std::vector<SourceKind> Kinds(const std::vector<DataSourceDescriptor> &sources) {
  std::vector<SourceKind> kinds;
  for (const auto &s : sources) kinds.push_back(s.kind);
  return kinds;
}

TEST_CASE("default catalog thresholds") {
  Catalog catalog = Catalog::Default();
  CHECK(catalog.service(ServiceId::kTST).required_source_kinds ==
        std::set<SourceKind>{SourceKind::kTwitter});
  CHECK(catalog.service(ServiceId::kTST).min_documents == 50);
  CHECK(catalog.service(ServiceId::kEMS).required_source_kinds ==
        std::set<SourceKind>{SourceKind::kTwitter, SourceKind::kHistorical});
  CHECK(catalog.service(ServiceId::kEMS).min_documents == 100);
  CHECK(catalog.service(ServiceId::kUTP).required_source_kinds ==
        std::set<SourceKind>{SourceKind::kHistorical});
  CHECK(catalog.service(ServiceId::kUTP).min_documents == 100);
}

TEST_CASE("shipped catalog file equals the built-in default") {
  CHECK(Catalog::Load(testing_util::SourcePath("data/catalog.json")).ToJson() ==
        Catalog::Default().ToJson());
}

TEST_CASE("catalog JSON round trip") {
  Catalog catalog = testing_util::SensorCatalog();
  CHECK(Catalog::FromJson(catalog.ToJson()).ToJson() == catalog.ToJson());
}

TEST_CASE("TST is offered with enough tweets") {
  // Hand-applied rule: twitter declared, 120 >= 50.
  Catalog catalog = Catalog::Default();
  RegionSpec region = Region({SourceKind::kTwitter, SourceKind::kSensorLog});
  SourceCounts counts = {{SourceKind::kTwitter, 120}};
  CHECK(Ids(EligibleServices(catalog, region, counts)) == std::vector<ServiceId>{ServiceId::kTST});
  counts[SourceKind::kTwitter] = 49;
  CHECK(EligibleServices(catalog, region, counts).empty());
}

TEST_CASE("a region declaring no sources gets no services") {
  SourceCounts counts = {{SourceKind::kTwitter, 1000}, {SourceKind::kHistorical, 1000}};
  CHECK(EligibleServices(Catalog::Default(), Region({}), counts).empty());
}

TEST_CASE("services come back in catalog order") {
  RegionSpec region = Region({SourceKind::kTwitter, SourceKind::kHistorical});
  SourceCounts counts = {{SourceKind::kTwitter, 100}, {SourceKind::kHistorical, 100}};
  CHECK(Ids(EligibleServices(Catalog::Default(), region, counts)) ==
        std::vector<ServiceId>{ServiceId::kEMS, ServiceId::kTST, ServiceId::kUTP});
}

TEST_CASE("EMS sums counts over its required sources") {
  RegionSpec region = Region({SourceKind::kTwitter, SourceKind::kHistorical});
  SourceCounts counts = {{SourceKind::kTwitter, 60}, {SourceKind::kHistorical, 40}};
  CHECK(IsEligible(Catalog::Default().service(ServiceId::kEMS), region, counts));
  counts[SourceKind::kHistorical] = 39;
  CHECK_FALSE(IsEligible(Catalog::Default().service(ServiceId::kEMS), region, counts));
}

TEST_CASE("a region without sensor data never gets a sensor-requiring service") {
  Catalog catalog = testing_util::SensorCatalog();
  RegionSpec region = Region({SourceKind::kTwitter, SourceKind::kHistorical});
  SourceCounts counts = {{SourceKind::kTwitter, 1000},
                         {SourceKind::kHistorical, 1000},
                         {SourceKind::kSensorLog, 1000}};
  CHECK(Ids(EligibleServices(catalog, region, counts)) == std::vector<ServiceId>{ServiceId::kUTP});
  region.declared_available_sources.insert(SourceKind::kSensorLog);
  CHECK(EligibleServices(catalog, region, counts).size() == 3);
}

TEST_CASE("available sources intersect service relevance with the region") {
  Catalog catalog = Catalog::Default();
  SourceCounts counts = {{SourceKind::kTwitter, 100}};
  RegionSpec region = Region({SourceKind::kTwitter, SourceKind::kHistorical});
  CHECK(Kinds(AvailableSources(catalog, region, catalog.service(ServiceId::kTST), counts)) ==
        std::vector<SourceKind>{SourceKind::kTwitter, SourceKind::kHistorical});
  for (const auto &source :
       AvailableSources(catalog, region, catalog.service(ServiceId::kTST), counts)) {
    CHECK(source.available_in_region);
  }

  region = Region({SourceKind::kTwitter});
  CHECK(AvailableSources(catalog, region, catalog.service(ServiceId::kTST), counts).size() == 1);

  try {
    AvailableSources(catalog, region, catalog.service(ServiceId::kUTP), counts);
    FAIL("expected an eligibility error");
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::kEligibility);
  }
}

TEST_CASE("a region lacking sensor data does not list the sensor source") {
  Catalog catalog = Catalog::Default();
  SourceCounts counts = {{SourceKind::kTwitter, 100}};
  RegionSpec region = Region({SourceKind::kTwitter, SourceKind::kCameraLog});
  auto kinds = Kinds(AvailableSources(catalog, region, catalog.service(ServiceId::kTST), counts));
  CHECK(std::find(kinds.begin(), kinds.end(), SourceKind::kSensorLog) == kinds.end());
  CHECK(std::find(kinds.begin(), kinds.end(), SourceKind::kCameraLog) != kinds.end());
}

const FieldDescriptor *FindField(const std::vector<FieldDescriptor> &schema,
                                 const std::string &name) {
  for (const auto &field : schema) {
    if (field.name == name) return &field;
  }
  return nullptr;
}

TEST_CASE("context schemas per source kind") {
  Catalog catalog = Catalog::Default();
  const auto &twitter = ContextSchema(catalog, SourceKind::kTwitter);
  REQUIRE(FindField(twitter, "keywords"));
  CHECK(FindField(twitter, "keywords")->required);
  CHECK(FindField(twitter, "keywords")->value_kind == ValueKind::kTextList);
  CHECK_FALSE(FindField(twitter, "hashtags")->required);
  CHECK_FALSE(FindField(twitter, "date_range")->required);
  CHECK_FALSE(FindField(twitter, "language")->required);
  CHECK(FindField(twitter, "max_documents")->required);
  CHECK(FindField(twitter, "max_documents")->value_kind == ValueKind::kPositiveInt);

  const auto &camera = ContextSchema(catalog, SourceKind::kCameraLog);
  CHECK(FindField(camera, "geo_area")->required);
  CHECK(FindField(camera, "geo_area")->value_kind == ValueKind::kGeoArea);
  CHECK_FALSE(FindField(camera, "date_range")->required);

  CHECK(FindField(ContextSchema(catalog, SourceKind::kHistorical), "date_range")->required);
  CHECK(FindField(ContextSchema(catalog, SourceKind::kSensorLog), "geo_area")->required);
  CHECK(ContextSchema(catalog, SourceKind::kManual).empty());
}

TEST_CASE("unknown source kind in a sparse catalog is a lookup error") {
  Catalog sparse(Catalog::Default().services(), {Catalog::Default().source(SourceKind::kTwitter)});
  try {
    ContextSchema(sparse, SourceKind::kManual);
    FAIL("expected a lookup error");
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::kLookup);
  }
}

TEST_CASE("missing required field detection") {
  Catalog catalog = Catalog::Default();
  corpus::ContextSpec spec;
  CHECK(MissingRequiredField(ContextSchema(catalog, SourceKind::kCameraLog), spec) == "geo_area");
  spec.geo_filter = corpus::GeoFilter{{51, -114}, 5};
  CHECK_FALSE(MissingRequiredField(ContextSchema(catalog, SourceKind::kCameraLog), spec));
  CHECK(MissingRequiredField(ContextSchema(catalog, SourceKind::kTwitter), spec) == "keywords");
  spec.keywords = {"signal timing"};
  CHECK(MissingRequiredField(ContextSchema(catalog, SourceKind::kTwitter), spec) ==
        "max_documents");
  spec.max_documents = 500;
  CHECK_FALSE(MissingRequiredField(ContextSchema(catalog, SourceKind::kTwitter), spec));
}

TEST_CASE("invalid regions") {
  RegionSpec region = Region({});
  region.bounding_box.min_lat = 52;
  CHECK_THROWS_AS(ValidateRegion(region), Error);
  region = Region({});
  region.bounding_box.min_lon = -113;
  CHECK_THROWS_AS(ValidateRegion(region), Error);
  CHECK_NOTHROW(ValidateRegion(Region({})));
}

TEST_CASE("invalid catalogs are rejected") {
  auto services = Catalog::Default().services();
  services[0].required_source_kinds.clear();
  CHECK_THROWS_AS(Catalog(services, Catalog::Default().sources()), Error);
  services = Catalog::Default().services();
  services[0].min_documents = 0;
  CHECK_THROWS_AS(Catalog(services, Catalog::Default().sources()), Error);
  services = Catalog::Default().services();
  services.push_back(services[0]);
  CHECK_THROWS_AS(Catalog(services, Catalog::Default().sources()), Error);
}

std::set<ServiceId> IdSet(const std::vector<ServiceDescriptor> &services) {
  std::set<ServiceId> ids;
  for (const auto &s : services) ids.insert(s.id);
  return ids;
}

bool Includes(const std::set<ServiceId> &big, const std::set<ServiceId> &small) {
  return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

TEST_CASE("eligibility is monotone in sources and counts") {
  std::mt19937_64 gen(3);
  for (const Catalog &catalog : {Catalog::Default(), testing_util::SensorCatalog()}) {
    for (int trial = 0; trial < 500; ++trial) {
      std::set<SourceKind> declared;
      SourceCounts counts;
      for (SourceKind kind : corpus::kAllSourceKinds) {
        if (gen() % 2) declared.insert(kind);
        counts[kind] = gen() % 150;
      }
      RegionSpec region = Region(declared);
      auto base = IdSet(EligibleServices(catalog, region, counts));
      CHECK(base.size() <= 3);

      SourceKind extra = corpus::kAllSourceKinds[gen() % 5];
      RegionSpec more = region;
      more.declared_available_sources.insert(extra);
      REQUIRE(Includes(IdSet(EligibleServices(catalog, more, counts)), base));

      SourceCounts bigger = counts;
      bigger[extra] += 1 + gen() % 100;
      REQUIRE(Includes(IdSet(EligibleServices(catalog, region, bigger)), base));
    }
  }
}

}  // namespace
