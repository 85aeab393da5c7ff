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

#ifndef RETTA_PIPELINE_H_
#define RETTA_PIPELINE_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "retta/classify.h"
#include "retta/corpus.h"
#include "retta/preprocess.h"
#include "retta/registry.h"
#include "retta/rules.h"
#include "retta/timeutil.h"
#include "retta/topics.h"

namespace retta::pipeline {

using corpus::SourceKind;
using registry::ServiceId;

enum class ProjectState {
  kCreated,
  kServiceSelected,
  kSourcesSelected,
  kContextSet,
  kRunning,
  kComplete,
  kFailed,
};

std::string_view StateName(ProjectState state);
std::optional<ProjectState> ParseState(std::string_view name);

// Forward edges Created -> ServiceSelected -> SourcesSelected -> ContextSet
// -> Running -> {Complete, Failed}, plus the explicit reset edge from
// Complete or Failed back to ContextSet.
bool IsDeclaredTransition(ProjectState from, ProjectState to);

struct RunConfig {
  std::uint64_t seed = 42;
  std::size_t num_topics = 5;
  std::optional<double> alpha;  // 50 / K when absent
  double beta = 0.01;
  std::size_t iterations = 1000;
  double smoothing = 1.0;
  double default_gamma = 2.0;  // for boost rules that omit gamma
  rules::MiningParams mining;
  // Absent: hashtag pooling with a one-hour-window fallback.
  std::optional<topics::PoolingStrategy> pooling;
  std::size_t candidates_per_topic = 10;
  std::size_t top_terms = 10;
  std::size_t min_term_frequency = 1;

  double effective_alpha() const {
    return alpha ? *alpha : topics::DefaultAlpha(num_topics);
  }

  bool operator==(const RunConfig &) const = default;
};

struct StageTiming {
  std::string stage;
  double millis = 0;

  bool operator==(const StageTiming &) const = default;
};

struct ElicitationResult {
  std::vector<classify::Requirement> requirements;
  std::vector<topics::TopicSummary> topics;
  std::vector<rules::AssociationRule> rules;
  std::vector<classify::Rejection> rejected;
  RunConfig run_config;
  std::vector<StageTiming> timings;

  bool operator==(const ElicitationResult &) const = default;
};

// Equality ignoring stage timings.
bool SameOutcome(const ElicitationResult &a, const ElicitationResult &b);

struct Project {
  std::string id;
  registry::RegionSpec region;
  ProjectState state = ProjectState::kCreated;
  std::optional<ServiceId> service_id;
  std::vector<SourceKind> selected_sources;
  std::map<SourceKind, corpus::ContextSpec> context;
  Timestamp created_at{};
  Timestamp updated_at{};
  std::optional<ElicitationResult> result;
  std::optional<std::string> failure_reason;

  bool operator==(const Project &) const = default;
};

// Throws Error(kInternal) if the project breaks a state invariant.
void CheckProjectInvariants(const Project &project);

// Everything a run needs besides the project itself.
struct RunInputs {
  const registry::Catalog *catalog = nullptr;
  const corpus::ConnectorSet *connectors = nullptr;
  const classify::TwoStageModels *models = nullptr;
  const std::vector<classify::BoostRule> *boost_rules = nullptr;
  const text::StopWords *stopwords = nullptr;
  RunConfig config;
};

// Output of one elicitation run, including artifacts stored next to it.
struct RunOutput {
  ElicitationResult result;
  corpus::Corpus corpus;          // merged, filtered documents of the run
  nlohmann::json model_dump;      // LDA topic-term counts and vocabulary
};

// Thrown by Elicit; `stage` names the failing step.
class StageError : public std::runtime_error {
 public:
  StageError(std::string stage, const std::string &message)
      : std::runtime_error(message), stage_(std::move(stage)) {}
  const std::string &stage() const { return stage_; }

 private:
  std::string stage_;
};

inline constexpr char kEmptyCorpusReason[] = "empty corpus";

// Load, filter, preprocess, model topics, classify candidates, mine rules
// and expand keywords. Deterministic given inputs.config.seed.
RunOutput Elicit(const Project &project, const RunInputs &inputs);

// Throws Error(kValidation) for an invalid region.
Project CreateProject(const registry::RegionSpec &region, Timestamp now = NowSeconds());

// Throws Error(kState) or Error(kEligibility).
void SelectService(Project &project, ServiceId service, const registry::Catalog &catalog,
                   const registry::SourceCounts &counts, Timestamp now = NowSeconds());

// Selects sources and their contexts in one step. Throws Error(kState),
// Error(kAvailability) or Error(kSchema) naming the field and source.
void SetSourcesAndContext(Project &project, const std::vector<SourceKind> &sources,
                          const std::map<SourceKind, corpus::ContextSpec> &contexts,
                          const registry::Catalog &catalog,
                          const registry::SourceCounts &counts, Timestamp now = NowSeconds());

// Moves a ContextSet project (or, with reset, a Complete/Failed one) to
// Running. Throws Error(kState) otherwise.
void BeginRun(Project &project, bool reset, Timestamp now = NowSeconds());

// Runs a Running project to Complete or Failed. Returns the run output when
// it completed.
std::optional<RunOutput> FinishRun(Project &project, const RunInputs &inputs,
                                   Timestamp now = NowSeconds());

// BeginRun + FinishRun, calling `persist` at every state change.
std::optional<RunOutput> RunElicitation(
    Project &project, const RunInputs &inputs, bool reset,
    const std::function<void(const Project &, const RunOutput *)> &persist = {});

// One directory per project: project.json, result.json, timings.json and
// model.json, each versioned. Writes go through a temp file and rename.
class ProjectStore {
 public:
  explicit ProjectStore(std::filesystem::path root);

  const std::filesystem::path &root() const { return root_; }

  void Save(const Project &project, const RunOutput *output = nullptr) const;
  // Throws Error(kNotFound) for an unknown id, Error(kIntegrity) for an
  // unreadable, truncated or unknown-version record.
  Project Load(std::string_view id) const;
  bool Exists(std::string_view id) const;
  std::vector<std::string> List() const;
  std::filesystem::path ProjectDir(std::string_view id) const;

 private:
  std::filesystem::path root_;
};

// Project operations over a store, with per-project mutual exclusion.
class Engine {
 public:
  struct Resources {
    registry::Catalog catalog = registry::Catalog::Default();
    corpus::ConnectorSet connectors;
    classify::TwoStageModels models;
    std::vector<classify::BoostRule> boost_rules;
    text::StopWords stopwords;
    RunConfig config;
  };

  Engine(std::shared_ptr<const Resources> resources, ProjectStore store);

  const Resources &resources() const { return *resources_; }
  const ProjectStore &store() const { return store_; }

  // Unfiltered document counts per source kind across all connectors.
  registry::SourceCounts SourceCounts() const;

  std::vector<registry::ServiceDescriptor> EligibleServices(const Project &project) const;

  Project Create(const registry::RegionSpec &region);
  Project Get(std::string_view id) const;
  Project SelectService(std::string_view id, ServiceId service);
  Project SetSourcesAndContext(std::string_view id, const std::vector<SourceKind> &sources,
                               const std::map<SourceKind, corpus::ContextSpec> &contexts);
  // Marks the project Running; pair with Finish.
  Project Begin(std::string_view id, bool reset);
  Project Finish(std::string_view id);
  Project Run(std::string_view id, bool reset);

 private:
  std::shared_ptr<std::mutex> LockFor(std::string_view id) const;
  RunInputs Inputs() const;

  std::shared_ptr<const Resources> resources_;
  ProjectStore store_;
  mutable std::mutex counts_mutex_;
  mutable std::optional<registry::SourceCounts> counts_;
  mutable std::mutex locks_mutex_;
  mutable std::map<std::string, std::shared_ptr<std::mutex>, std::less<>> locks_;
};

}  // namespace retta::pipeline

#endif  // RETTA_PIPELINE_H_
