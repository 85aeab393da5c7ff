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

// In-memory pipeline world and the random operation-sequence property
// shared by the unit and acceptance tests.

#ifndef RETTA_TESTS_PIPELINE_FIXTURES_H_
#define RETTA_TESTS_PIPELINE_FIXTURES_H_

#include <cstdint>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "classify_fixtures.h"
#include "retta/error.h"
#include "retta/pipeline.h"
#include "test_util.h"

namespace fixtures {

class MemoryConnector : public retta::corpus::Connector {
 public:
  MemoryConnector(retta::corpus::SourceKind kind, retta::corpus::Corpus corpus)
      : kind_(kind), corpus_(std::move(corpus)) {}
  retta::corpus::SourceKind kind() const override { return kind_; }
  retta::corpus::Corpus Fetch() const override { return corpus_; }

 private:
  retta::corpus::SourceKind kind_;
  retta::corpus::Corpus corpus_;
};

struct World {
  retta::registry::Catalog catalog = retta::registry::Catalog::Default();
  retta::corpus::ConnectorSet connectors;
  ShippedModels shipped;
  retta::pipeline::RunConfig config;
  retta::registry::SourceCounts counts;

  retta::pipeline::RunInputs Inputs() const {
    return {&catalog, &connectors, &shipped.models, &shipped.rules, &shipped.stopwords, config};
  }
};

inline const char *const kPhrases[] = {
    "signal light broken at the intersection",
    "traffic light malfunction again downtown",
    "bus delayed twenty minutes waiting",
    "congestion on the ring road this morning",
    "accident near the bridge slow traffic",
    "new bike lane map for cyclists",
    "signal timing too short for pedestrians",
    "transit app crashed during commute",
};

inline retta::registry::BoundingBox CalgaryBox() { return {50.84, -114.32, 51.21, -113.86}; }

// Small corpora for twitter, historical and camera_log, and a catalog whose
// thresholds those corpora can meet.
inline World MakeSmallWorld() {
  using retta::corpus::SourceKind;
  World world;
  world.shipped = LoadShippedModels();
  auto make = [](SourceKind kind, const std::string &prefix, int count, bool geo) {
    std::vector<retta::corpus::RawDocument> docs;
    for (int i = 0; i < count; ++i) {
      char ts[32];
      std::snprintf(ts, sizeof(ts), "2024-03-%02dT%02d:00:00Z", 1 + i % 20, i % 24);
      auto doc = testing_util::Doc(prefix + std::to_string(i),
                                   kPhrases[i % std::size(kPhrases)], ts, kind);
      if (kind == SourceKind::kTwitter) {
        doc.meta[retta::corpus::kMetaHashtags] = i % 2 ? "yyctraffic" : "signalfail";
      }
      if (geo) doc.geo = retta::corpus::GeoPoint{51.04 + 0.001 * i, -114.07};
      docs.push_back(doc);
    }
    return std::make_shared<MemoryConnector>(kind, retta::corpus::Corpus(docs));
  };
  world.connectors[SourceKind::kTwitter] = make(SourceKind::kTwitter, "tw-", 24, false);
  world.connectors[SourceKind::kHistorical] = make(SourceKind::kHistorical, "hi-", 12, false);
  world.connectors[SourceKind::kCameraLog] = make(SourceKind::kCameraLog, "cam-", 6, true);
  for (const auto &[kind, connector] : world.connectors) {
    world.counts[kind] = connector->Fetch().size();
  }

  auto services = retta::registry::Catalog::Default().services();
  for (auto &service : services) service.min_documents = 10;
  world.catalog =
      retta::registry::Catalog(services, retta::registry::Catalog::Default().sources());

  world.config.num_topics = 2;
  world.config.iterations = 10;
  world.config.candidates_per_topic = 3;
  world.config.top_terms = 5;
  world.config.mining = {0.2, 0.6, 3};
  return world;
}

struct SequenceReport {
  std::size_t sequences = 0;
  std::size_t operations = 0;
  std::size_t completed = 0;
  std::size_t failed = 0;
  std::size_t rejected = 0;  // operations refused with an error
  std::optional<std::string> violation;
};

namespace detail {

using retta::pipeline::ProjectState;

inline std::string Describe(const retta::pipeline::Project &p) {
  return std::string(retta::pipeline::StateName(p.state));
}

inline bool PathDeclared(const std::vector<ProjectState> &path) {
  for (std::size_t i = 1; i < path.size(); ++i) {
    if (!retta::pipeline::IsDeclaredTransition(path[i - 1], path[i])) return false;
  }
  return true;
}

inline std::optional<std::string> CheckClosure(const retta::pipeline::Project &project,
                                               const retta::pipeline::RunOutput &output) {
  if (!project.result) return "Complete without result";
  for (const auto &req : project.result->requirements) {
    for (const auto &id : req.provenance.doc_ids) {
      if (!output.corpus.Find(id)) return "requirement cites unknown doc " + id;
    }
    if (req.provenance.doc_ids.empty()) return "requirement without provenance";
    if (req.service_id != *project.service_id) return "requirement for another service";
  }
  for (const auto &topic : project.result->topics) {
    for (const auto &id : topic.representative_doc_ids) {
      if (!output.corpus.Find(id)) return "topic cites unknown doc " + id;
    }
  }
  return std::nullopt;
}

}  // namespace detail

// Runs `count` random operation sequences against fresh projects and stops
// at the first violation of the declared state graph, the project
// invariants, the no-partial-update rule for refused operations, or
// provenance closure.
inline SequenceReport RunRandomSequences(const World &world, std::size_t count,
                                         std::uint64_t seed,
                                         const retta::pipeline::ProjectStore *store = nullptr) {
  using namespace retta;
  using namespace retta::pipeline;
  using corpus::SourceKind;
  using detail::ProjectState;

  SequenceReport report;
  std::mt19937_64 gen(seed);
  auto coin = [&](int percent) { return static_cast<int>(gen() % 100) < percent; };
  const Timestamp now = testing_util::Ts("2026-01-01T00:00:00Z");
  const RunInputs inputs = world.Inputs();
  const SourceKind all_kinds[] = {SourceKind::kTwitter, SourceKind::kHistorical,
                                  SourceKind::kCameraLog, SourceKind::kSensorLog,
                                  SourceKind::kManual};
  const ServiceId services[] = {ServiceId::kEMS, ServiceId::kTST, ServiceId::kUTP};

  auto random_context = [&](SourceKind kind) {
    corpus::ContextSpec spec;
    if (kind == SourceKind::kTwitter) {
      if (coin(90)) {
        const char *words[] = {"signal", "bus", "traffic", "nomatchword"};
        spec.keywords.push_back(words[gen() % 4]);
      }
      if (coin(85)) spec.max_documents = 1 + gen() % 30;
    }
    if (coin(50) || kind == SourceKind::kHistorical) {
      if (coin(90)) {
        spec.date_range = corpus::DateRange{testing_util::Ts("2024-03-01T00:00:00Z"),
                                            testing_util::Ts("2024-03-31T00:00:00Z")};
      }
    }
    if (kind == SourceKind::kCameraLog || kind == SourceKind::kSensorLog) {
      if (coin(85)) {
        spec.geo_filter = corpus::GeoFilter{{51.04, -114.07}, coin(95) ? 20.0 : -1.0};
      }
    }
    return spec;
  };

  for (std::size_t s = 0; s < count && !report.violation; ++s) {
    ++report.sequences;
    registry::RegionSpec region;
    region.name = "r" + std::to_string(s);
    region.bounding_box = CalgaryBox();
    if (coin(5)) std::swap(region.bounding_box.min_lat, region.bounding_box.max_lat);
    for (SourceKind kind : all_kinds) {
      if (coin(60)) region.declared_available_sources.insert(kind);
    }
    std::optional<Project> created;
    try {
      created = CreateProject(region, now);
    } catch (const Error &e) {
      if (e.code() != ErrorCode::kValidation) report.violation = "create: " + std::string(e.what());
      ++report.rejected;
      continue;
    }
    Project project = *created;
    if (project.state != ProjectState::kCreated) report.violation = "create: not Created";

    std::size_t length = 1 + gen() % 12;
    for (std::size_t op = 0; op < length && !report.violation; ++op) {
      ++report.operations;
      const Project before = project;
      std::vector<ProjectState> path{before.state};
      std::optional<RunOutput> output;
      std::string name;
      bool refused = false;
      try {
        // Mostly the next wizard step, so runs are reached often; otherwise
        // any operation, valid or not.
        int choice = static_cast<int>(gen() % 6);
        if (coin(60)) {
          switch (project.state) {
            case ProjectState::kCreated: choice = 0; break;
            case ProjectState::kServiceSelected:
            case ProjectState::kSourcesSelected: choice = 1; break;
            case ProjectState::kContextSet: choice = 2; break;
            case ProjectState::kRunning: choice = 4; break;
            case ProjectState::kComplete:
            case ProjectState::kFailed: choice = coin(50) ? 2 : 5; break;
          }
        }
        switch (choice) {
          case 0: {
            name = "select";
            SelectService(project, services[gen() % 3], world.catalog, world.counts, now);
            path.push_back(ProjectState::kServiceSelected);
            break;
          }
          case 1: {
            name = "context";
            std::vector<SourceKind> sources;
            std::map<SourceKind, corpus::ContextSpec> contexts;
            std::size_t n = gen() % 3;
            for (std::size_t i = 0; i < n; ++i) {
              SourceKind kind = coin(80) ? all_kinds[gen() % 3] : all_kinds[gen() % 5];
              sources.push_back(kind);
              contexts[kind] = random_context(kind);
            }
            SetSourcesAndContext(project, sources, contexts, world.catalog, world.counts, now);
            path.push_back(ProjectState::kSourcesSelected);
            path.push_back(ProjectState::kContextSet);
            break;
          }
          case 2:
          case 3: {
            name = "begin";
            bool reset = coin(50);
            BeginRun(project, reset, now);
            if (before.state != ProjectState::kContextSet) path.push_back(ProjectState::kContextSet);
            path.push_back(ProjectState::kRunning);
            break;
          }
          case 4: {
            name = "finish";
            output = FinishRun(project, inputs, now);
            path.push_back(project.state);
            if (project.state != ProjectState::kComplete && project.state != ProjectState::kFailed) {
              report.violation = "finish ended in " + detail::Describe(project);
            }
            if (before.state != ProjectState::kRunning) {
              report.violation = "finish accepted from " + detail::Describe(before);
            }
            break;
          }
          default: {
            name = "roundtrip";
            if (store) {
              store->Save(project, nullptr);
              Project loaded = store->Load(project.id);
              if (!(loaded == project)) report.violation = "store round trip changed the project";
            }
            break;
          }
        }
      } catch (const Error &e) {
        refused = true;
        ++report.rejected;
        switch (e.code()) {
          case ErrorCode::kState:
          case ErrorCode::kEligibility:
          case ErrorCode::kAvailability:
          case ErrorCode::kSchema:
          case ErrorCode::kValidation:
            break;
          default:
            report.violation = name + " raised " + e.what();
        }
        if (!(project == before)) report.violation = name + " changed a project it refused";
      } catch (const std::exception &e) {
        report.violation = name + " threw " + e.what();
      }
      if (report.violation) break;

      if (!ParseState(StateName(project.state)) ||
          *ParseState(StateName(project.state)) != project.state) {
        report.violation = "undeclared state";
        break;
      }
      if (!refused && project.state != before.state && path.back() != project.state) {
        report.violation = name + " ended in unexpected state " + detail::Describe(project);
        break;
      }
      if (!refused && project.state != before.state && !detail::PathDeclared(path)) {
        report.violation = name + " took an undeclared transition from " +
                           detail::Describe(before);
        break;
      }
      try {
        CheckProjectInvariants(project);
      } catch (const Error &e) {
        report.violation = name + ": " + e.what();
        break;
      }
      if (name == "finish" && !refused) {
        if (project.state == ProjectState::kComplete) {
          ++report.completed;
          if (!output) {
            report.violation = "Complete without output";
          } else if (auto problem = detail::CheckClosure(project, *output)) {
            report.violation = *problem;
          }
        } else {
          ++report.failed;
          if (output) report.violation = "Failed with output";
        }
      }
    }
  }
  return report;
}

}  // namespace fixtures

#endif  // RETTA_TESTS_PIPELINE_FIXTURES_H_
