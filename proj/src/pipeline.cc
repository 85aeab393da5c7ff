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

#include "retta/pipeline.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "retta/error.h"
#include "retta/serialization.h"

namespace retta::pipeline {
namespace {

using nlohmann::json;

constexpr int kStoreVersion = 1;
constexpr char kProjectFile[] = "project.json";
constexpr char kResultFile[] = "result.json";
constexpr char kTimingsFile[] = "timings.json";
constexpr char kModelFile[] = "model.json";

std::string NewProjectId() {
  static std::mutex mutex;
  static std::mt19937_64 gen{std::random_device{}()};
  static std::atomic<std::uint64_t> counter{0};
  std::uint64_t bits;
  {
    std::lock_guard<std::mutex> lock(mutex);
    bits = gen();
  }
  bits ^= counter.fetch_add(1) * 0x9E3779B97F4A7C15ULL;
  char buf[24];
  std::snprintf(buf, sizeof(buf), "p-%016llx", static_cast<unsigned long long>(bits));
  return buf;
}

bool IsSafeId(std::string_view id) {
  if (id.empty() || id.size() > 64) return false;
  return std::all_of(id.begin(), id.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
           c == '-' || c == '_';
  });
}

void Transition(Project &project, ProjectState to, Timestamp now) {
  if (!IsDeclaredTransition(project.state, to)) {
    throw Error(ErrorCode::kState, "cannot move project from " +
                                       std::string(StateName(project.state)) + " to " +
                                       std::string(StateName(to)));
  }
  project.state = to;
  project.updated_at = now;
}

void RequireState(const Project &project, ProjectState expected, const char *operation) {
  if (project.state != expected) {
    throw Error(ErrorCode::kState, std::string(operation) + " requires state " +
                                       std::string(StateName(expected)) + ", project is " +
                                       std::string(StateName(project.state)));
  }
}

class StageClock {
 public:
  explicit StageClock(std::vector<StageTiming> *timings) : timings_(timings) {}

  template <typename Fn>
  auto Run(const char *stage, Fn &&fn) {
    auto start = std::chrono::steady_clock::now();
    auto record = [&] {
      std::chrono::duration<double, std::milli> elapsed =
          std::chrono::steady_clock::now() - start;
      timings_->push_back({stage, elapsed.count()});
    };
    try {
      if constexpr (std::is_void_v<decltype(fn())>) {
        fn();
        record();
      } else {
        auto value = fn();
        record();
        return value;
      }
    } catch (const StageError &) {
      throw;
    } catch (const std::exception &e) {
      throw StageError(stage, e.what());
    }
  }

 private:
  std::vector<StageTiming> *timings_;
};

void WriteFileAtomically(const std::filesystem::path &path, const std::string &content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIo, "cannot write " + tmp.string());
    out << content;
    if (!out) throw Error(ErrorCode::kIo, "cannot write " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot replace " + path.string() + ": " + ec.message());
}

json ReadJsonFile(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIntegrity, "cannot read " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return json::parse(buffer.str());
  } catch (const json::parse_error &e) {
    throw Error(ErrorCode::kIntegrity, "corrupt file " + path.string() + ": " + e.what());
  }
}

void CheckEnvelope(const json &doc, const char *format, const std::filesystem::path &path) {
  if (!doc.is_object() || doc.value("format", "") != format ||
      !doc.contains("version") || doc["version"] != kStoreVersion) {
    throw Error(ErrorCode::kIntegrity, "unknown format or version in " + path.string());
  }
}

}  // namespace

std::string_view StateName(ProjectState state) {
  switch (state) {
    case ProjectState::kCreated: return "Created";
    case ProjectState::kServiceSelected: return "ServiceSelected";
    case ProjectState::kSourcesSelected: return "SourcesSelected";
    case ProjectState::kContextSet: return "ContextSet";
    case ProjectState::kRunning: return "Running";
    case ProjectState::kComplete: return "Complete";
    case ProjectState::kFailed: return "Failed";
  }
  return "Failed";
}

std::optional<ProjectState> ParseState(std::string_view name) {
  for (ProjectState state :
       {ProjectState::kCreated, ProjectState::kServiceSelected, ProjectState::kSourcesSelected,
        ProjectState::kContextSet, ProjectState::kRunning, ProjectState::kComplete,
        ProjectState::kFailed}) {
    if (StateName(state) == name) return state;
  }
  return std::nullopt;
}

bool IsDeclaredTransition(ProjectState from, ProjectState to) {
  using enum ProjectState;
  switch (from) {
    case kCreated: return to == kServiceSelected;
    case kServiceSelected: return to == kSourcesSelected;
    case kSourcesSelected: return to == kContextSet;
    case kContextSet: return to == kRunning;
    case kRunning: return to == kComplete || to == kFailed;
    case kComplete:
    case kFailed: return to == kContextSet;
  }
  return false;
}

bool SameOutcome(const ElicitationResult &a, const ElicitationResult &b) {
  return a.requirements == b.requirements && a.topics == b.topics && a.rules == b.rules &&
         a.rejected == b.rejected && a.run_config == b.run_config;
}

void CheckProjectInvariants(const Project &project) {
  auto fail = [&](const std::string &what) {
    throw Error(ErrorCode::kInternal, "project " + project.id + ": " + what);
  };
  const bool past_service = project.state != ProjectState::kCreated;
  const bool past_sources = past_service && project.state != ProjectState::kServiceSelected;
  if (project.service_id.has_value() != past_service) fail("service_id does not match state");
  if (past_sources == project.selected_sources.empty()) {
    fail("selected sources do not match state");
  }
  if (project.result.has_value() != (project.state == ProjectState::kComplete)) {
    fail("result present outside Complete");
  }
  if (project.failure_reason.has_value() != (project.state == ProjectState::kFailed)) {
    fail("failure reason present outside Failed");
  }
}

RunOutput Elicit(const Project &project, const RunInputs &inputs) {
  if (!inputs.catalog || !inputs.connectors || !inputs.models || !inputs.boost_rules ||
      !inputs.stopwords) {
    throw StageError("setup", "run inputs are incomplete");
  }
  if (!project.service_id) throw StageError("setup", "no service selected");
  const RunConfig &config = inputs.config;
  const ServiceId service = *project.service_id;

  RunOutput output;
  ElicitationResult &result = output.result;
  result.run_config = config;
  StageClock clock(&result.timings);

  output.corpus = clock.Run("load", [&] {
    std::vector<corpus::Corpus> parts;
    for (SourceKind kind : project.selected_sources) {
      auto it = inputs.connectors->find(kind);
      if (it == inputs.connectors->end() || !it->second) {
        throw Error(ErrorCode::kLookup, "no connector for source " +
                                            std::string(corpus::SourceKindName(kind)));
      }
      auto context = project.context.find(kind);
      corpus::ContextSpec spec =
          context == project.context.end() ? corpus::ContextSpec{} : context->second;
      parts.push_back(corpus::FilterByContext(it->second->Fetch(), spec));
    }
    return corpus::Merge(parts);
  });
  if (output.corpus.empty()) throw StageError("load", kEmptyCorpusReason);
  const corpus::Corpus &merged = output.corpus;

  auto docs = clock.Run("preprocess",
                        [&] { return text::PreprocessCorpus(merged, *inputs.stopwords); });
  auto vocab = clock.Run("vocabulary", [&] {
    text::Vocabulary v = text::BuildVocabulary(docs, config.min_term_frequency);
    if (v.empty()) throw Error(ErrorCode::kEmptyInput, "vocabulary is empty");
    return v;
  });
  auto pools = clock.Run("pool", [&] {
    return config.pooling ? topics::Pool(docs, vocab, merged, *config.pooling)
                          : topics::PoolWithFallback(docs, vocab, merged);
  });
  auto model = clock.Run("lda", [&] {
    topics::LdaParams params;
    params.num_topics = config.num_topics;
    params.alpha = config.effective_alpha();
    params.beta = config.beta;
    params.iterations = config.iterations;
    params.seed = config.seed;
    return topics::TopicModel::Fit(pools, vocab.size(), params);
  });
  output.model_dump = topics::DumpModel(model, vocab);

  std::vector<classify::Candidate> candidates;
  clock.Run("topics", [&] {
    std::map<std::string, const text::TokenizedDocument *> by_id;
    for (const auto &doc : docs) by_id[doc.doc_id] = &doc;
    std::set<std::string> chosen;
    for (std::size_t k = 0; k < model.num_topics(); ++k) {
      topics::TopicSummary summary;
      summary.topic_index = k;
      summary.top_terms = topics::TopTerms(model, vocab, k, config.top_terms);
      summary.representative_doc_ids =
          topics::RepresentativeDocs(model, pools, merged, k, config.candidates_per_topic);
      std::vector<std::string> terms;
      for (const auto &[term, weight] : summary.top_terms) terms.push_back(term);
      summary.coherence = topics::UMassCoherence(terms, docs);
      for (const std::string &id : summary.representative_doc_ids) {
        if (!chosen.insert(id).second) continue;
        candidates.push_back({*merged.Find(id), *by_id.at(id), k});
      }
      result.topics.push_back(std::move(summary));
    }
  });

  classify::ClassificationResult classified = clock.Run("classify", [&] {
    std::vector<classify::BoostRule> active;
    const auto &wanted = inputs.catalog->service(service).boost_rule_set;
    for (const auto &rule : *inputs.boost_rules) {
      if (std::find(wanted.begin(), wanted.end(), rule.id()) != wanted.end()) {
        active.push_back(rule);
      }
    }
    return classify::ClassifyCandidates(candidates, *inputs.models, active, service);
  });
  result.requirements = std::move(classified.requirements);
  result.rejected = std::move(classified.rejected);

  result.rules = clock.Run("rules", [&] {
    std::vector<rules::Transaction> transactions;
    for (const auto &candidate : candidates) {
      transactions.push_back(rules::MakeTransaction(candidate.tokens));
    }
    if (transactions.empty()) return std::vector<rules::AssociationRule>{};
    return rules::MineRules(transactions, config.mining);
  });

  clock.Run("expand", [&] {
    for (auto &req : result.requirements) {
      std::set<std::string> seeds(req.keywords.begin(), req.keywords.end());
      std::set<std::string> expanded = rules::ExpandTerms(result.rules, seeds);
      req.keywords.assign(expanded.begin(), expanded.end());
    }
  });
  return output;
}

Project CreateProject(const registry::RegionSpec &region, Timestamp now) {
  registry::ValidateRegion(region);
  Project project;
  project.id = NewProjectId();
  project.region = region;
  project.state = ProjectState::kCreated;
  project.created_at = now;
  project.updated_at = now;
  return project;
}

void SelectService(Project &project, ServiceId service, const registry::Catalog &catalog,
                   const registry::SourceCounts &counts, Timestamp now) {
  RequireState(project, ProjectState::kCreated, "select_service");
  bool eligible = false;
  for (const auto &descriptor : registry::EligibleServices(catalog, project.region, counts)) {
    eligible = eligible || descriptor.id == service;
  }
  if (!eligible) {
    throw Error(ErrorCode::kEligibility, "service " +
                                             std::string(registry::ServiceIdName(service)) +
                                             " is not offered for region \"" +
                                             project.region.name + "\"");
  }
  Transition(project, ProjectState::kServiceSelected, now);
  project.service_id = service;
}

void SetSourcesAndContext(Project &project, const std::vector<SourceKind> &sources,
                          const std::map<SourceKind, corpus::ContextSpec> &contexts,
                          const registry::Catalog &catalog,
                          const registry::SourceCounts &counts, Timestamp now) {
  RequireState(project, ProjectState::kServiceSelected, "set_sources_and_context");
  if (sources.empty()) throw Error(ErrorCode::kAvailability, "no data source selected");
  const auto &service = catalog.service(*project.service_id);
  auto available = registry::AvailableSources(catalog, project.region, service, counts);

  std::set<SourceKind> seen;
  std::map<SourceKind, corpus::ContextSpec> accepted;
  for (SourceKind kind : sources) {
    const std::string name(corpus::SourceKindName(kind));
    if (!seen.insert(kind).second) {
      throw Error(ErrorCode::kValidation, "source " + name + " selected twice");
    }
    bool offered = std::any_of(available.begin(), available.end(),
                               [&](const auto &d) { return d.kind == kind; });
    if (!offered) {
      throw Error(ErrorCode::kAvailability, "source " + name + " is not available");
    }
    auto it = contexts.find(kind);
    corpus::ContextSpec spec = it == contexts.end() ? corpus::ContextSpec{} : it->second;
    try {
      corpus::ValidateContext(spec);
    } catch (const Error &e) {
      throw Error(ErrorCode::kSchema, std::string(e.what()) + " (source " + name + ")");
    }
    if (auto missing = registry::MissingRequiredField(registry::ContextSchema(catalog, kind),
                                                      spec)) {
      throw Error(ErrorCode::kSchema, *missing + " required for source " + name);
    }
    accepted.emplace(kind, std::move(spec));
  }
  Transition(project, ProjectState::kSourcesSelected, now);
  project.selected_sources = sources;
  Transition(project, ProjectState::kContextSet, now);
  project.context = std::move(accepted);
}

void BeginRun(Project &project, bool reset, Timestamp now) {
  if (project.state == ProjectState::kComplete || project.state == ProjectState::kFailed) {
    if (!reset) {
      throw Error(ErrorCode::kState, "project already ran; pass reset to run it again");
    }
    Transition(project, ProjectState::kContextSet, now);
    project.result.reset();
    project.failure_reason.reset();
  }
  RequireState(project, ProjectState::kContextSet, "run");
  Transition(project, ProjectState::kRunning, now);
}

std::optional<RunOutput> FinishRun(Project &project, const RunInputs &inputs, Timestamp now) {
  RequireState(project, ProjectState::kRunning, "finish run");
  try {
    RunOutput output = Elicit(project, inputs);
    Transition(project, ProjectState::kComplete, now);
    project.result = output.result;
    return output;
  } catch (const StageError &e) {
    Transition(project, ProjectState::kFailed, now);
    project.failure_reason = std::string(e.what()) == kEmptyCorpusReason
                                 ? std::string(kEmptyCorpusReason)
                                 : e.stage() + ": " + e.what();
    return std::nullopt;
  }
}

std::optional<RunOutput> RunElicitation(
    Project &project, const RunInputs &inputs, bool reset,
    const std::function<void(const Project &, const RunOutput *)> &persist) {
  BeginRun(project, reset);
  if (persist) persist(project, nullptr);
  std::optional<RunOutput> output = FinishRun(project, inputs);
  if (persist) persist(project, output ? &*output : nullptr);
  return output;
}

ProjectStore::ProjectStore(std::filesystem::path root) : root_(std::move(root)) {
  std::error_code ec;
  std::filesystem::create_directories(root_, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create store " + root_.string());
}

std::filesystem::path ProjectStore::ProjectDir(std::string_view id) const {
  if (!IsSafeId(id)) throw Error(ErrorCode::kNotFound, "no project \"" + std::string(id) + "\"");
  return root_ / std::string(id);
}

bool ProjectStore::Exists(std::string_view id) const {
  if (!IsSafeId(id)) return false;
  return std::filesystem::exists(root_ / std::string(id) / kProjectFile);
}

std::vector<std::string> ProjectStore::List() const {
  std::vector<std::string> ids;
  for (const auto &entry : std::filesystem::directory_iterator(root_)) {
    std::string name = entry.path().filename().string();
    if (entry.is_directory() && Exists(name)) ids.push_back(name);
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

void ProjectStore::Save(const Project &project, const RunOutput *output) const {
  CheckProjectInvariants(project);
  std::filesystem::path dir = ProjectDir(project.id);
  std::filesystem::create_directories(dir);

  json record = serialization::ProjectToJson(project);
  record["format"] = "retta-project";
  record["version"] = kStoreVersion;
  if (project.result) {
    json result = serialization::ResultToJson(*project.result);
    result["format"] = "retta-result";
    result["version"] = kStoreVersion;
    WriteFileAtomically(dir / kResultFile, result.dump(2) + "\n");
    WriteFileAtomically(dir / kTimingsFile,
                        serialization::TimingsToJson(project.result->timings).dump(2) + "\n");
    if (output) WriteFileAtomically(dir / kModelFile, output->model_dump.dump() + "\n");
  } else {
    for (const char *file : {kResultFile, kTimingsFile, kModelFile}) {
      std::filesystem::remove(dir / file);
    }
  }
  // The project record goes last so a reader never sees Complete without
  // its result file.
  WriteFileAtomically(dir / kProjectFile, record.dump(2) + "\n");
}

Project ProjectStore::Load(std::string_view id) const {
  if (!Exists(id)) throw Error(ErrorCode::kNotFound, "no project \"" + std::string(id) + "\"");
  std::filesystem::path dir = ProjectDir(id);
  json record = ReadJsonFile(dir / kProjectFile);
  CheckEnvelope(record, "retta-project", dir / kProjectFile);
  Project project;
  try {
    project = serialization::ProjectFromJson(record);
    if (project.state == ProjectState::kComplete) {
      json result = ReadJsonFile(dir / kResultFile);
      CheckEnvelope(result, "retta-result", dir / kResultFile);
      project.result = serialization::ResultFromJson(result);
      if (std::filesystem::exists(dir / kTimingsFile)) {
        project.result->timings =
            serialization::TimingsFromJson(ReadJsonFile(dir / kTimingsFile));
      }
    }
    CheckProjectInvariants(project);
  } catch (const Error &e) {
    if (e.code() == ErrorCode::kIntegrity) throw;
    throw Error(ErrorCode::kIntegrity, "corrupt project " + std::string(id) + ": " + e.what());
  }
  if (project.id != id) {
    throw Error(ErrorCode::kIntegrity, "project file id does not match its directory");
  }
  return project;
}

Engine::Engine(std::shared_ptr<const Resources> resources, ProjectStore store)
    : resources_(std::move(resources)), store_(std::move(store)) {}

registry::SourceCounts Engine::SourceCounts() const {
  std::lock_guard<std::mutex> lock(counts_mutex_);
  if (!counts_) {
    registry::SourceCounts counts;
    for (SourceKind kind : corpus::kAllSourceKinds) counts[kind] = 0;
    for (const auto &[kind, connector] : resources_->connectors) {
      if (connector) counts[kind] += connector->Fetch().size();
    }
    counts_ = std::move(counts);
  }
  return *counts_;
}

std::vector<registry::ServiceDescriptor> Engine::EligibleServices(const Project &project) const {
  return registry::EligibleServices(resources_->catalog, project.region, SourceCounts());
}

std::shared_ptr<std::mutex> Engine::LockFor(std::string_view id) const {
  std::lock_guard<std::mutex> lock(locks_mutex_);
  auto it = locks_.find(id);
  if (it == locks_.end()) {
    it = locks_.emplace(std::string(id), std::make_shared<std::mutex>()).first;
  }
  return it->second;
}

RunInputs Engine::Inputs() const {
  return RunInputs{&resources_->catalog, &resources_->connectors, &resources_->models,
                   &resources_->boost_rules, &resources_->stopwords, resources_->config};
}

Project Engine::Create(const registry::RegionSpec &region) {
  Project project = CreateProject(region);
  auto mutex = LockFor(project.id);
  std::lock_guard<std::mutex> lock(*mutex);
  store_.Save(project);
  return project;
}

Project Engine::Get(std::string_view id) const { return store_.Load(id); }

Project Engine::SelectService(std::string_view id, ServiceId service) {
  auto mutex = LockFor(id);
  std::lock_guard<std::mutex> lock(*mutex);
  Project project = store_.Load(id);
  pipeline::SelectService(project, service, resources_->catalog, SourceCounts());
  store_.Save(project);
  return project;
}

Project Engine::SetSourcesAndContext(std::string_view id, const std::vector<SourceKind> &sources,
                                     const std::map<SourceKind, corpus::ContextSpec> &contexts) {
  auto mutex = LockFor(id);
  std::lock_guard<std::mutex> lock(*mutex);
  Project project = store_.Load(id);
  pipeline::SetSourcesAndContext(project, sources, contexts, resources_->catalog,
                                 SourceCounts());
  store_.Save(project);
  return project;
}

Project Engine::Begin(std::string_view id, bool reset) {
  auto mutex = LockFor(id);
  std::lock_guard<std::mutex> lock(*mutex);
  Project project = store_.Load(id);
  BeginRun(project, reset);
  store_.Save(project);
  return project;
}

Project Engine::Finish(std::string_view id) {
  auto mutex = LockFor(id);
  Project project;
  {
    std::lock_guard<std::mutex> lock(*mutex);
    project = store_.Load(id);
    RequireState(project, ProjectState::kRunning, "finish run");
  }
  // Running blocks every other transition, so the computation needs no lock.
  std::optional<RunOutput> output = FinishRun(project, Inputs());
  std::lock_guard<std::mutex> lock(*mutex);
  store_.Save(project, output ? &*output : nullptr);
  return project;
}

Project Engine::Run(std::string_view id, bool reset) {
  Begin(id, reset);
  return Finish(id);
}

}  // namespace retta::pipeline
