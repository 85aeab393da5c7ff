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

#include "retta/config.h"

#include <cstdlib>
#include <fstream>

#include "retta/classify.h"
#include "retta/error.h"
#include "retta/preprocess.h"
#include "retta/serialization.h"

#ifndef RETTA_DATA_DIR
#define RETTA_DATA_DIR "data"
#endif

namespace retta::config {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

[[noreturn]] void Invalid(const std::string &message) {
  throw Error(ErrorCode::kValidation, message);
}

fs::path Resolve(const fs::path &base_dir, const json &value, const char *key) {
  if (!value.is_string()) Invalid(std::string(key) + " must be a path string");
  fs::path path = value.get<std::string>();
  return path.is_absolute() ? path : base_dir / path;
}

corpus::SourceKind SourceKey(const std::string &name) {
  auto kind = corpus::ParseSourceKind(name);
  if (!kind) Invalid("unknown source kind \"" + name + "\"");
  return *kind;
}

json ReadJson(const fs::path &path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error &e) {
    throw Error(ErrorCode::kParse, path.string() + ": " + e.what());
  }
}

}  // namespace

ResourceConfig ParseResourceConfig(const json &doc, const fs::path &base_dir) {
  if (!doc.is_object()) Invalid("configuration must be an object");
  ResourceConfig config;
  if (doc.contains("catalog")) config.catalog = Resolve(base_dir, doc["catalog"], "catalog");
  if (doc.contains("corpora")) {
    if (!doc["corpora"].is_object()) Invalid("corpora must map source kinds to files");
    for (const auto &[name, path] : doc["corpora"].items()) {
      config.corpora[SourceKey(name)] = Resolve(base_dir, path, "corpora");
    }
  }
  if (!doc.contains("training")) Invalid("training file is required");
  config.training = Resolve(base_dir, doc["training"], "training");
  if (!doc.contains("boost_rules")) Invalid("boost_rules file is required");
  config.boost_rules = Resolve(base_dir, doc["boost_rules"], "boost_rules");
  if (doc.contains("stopwords")) {
    config.stopwords = Resolve(base_dir, doc["stopwords"], "stopwords");
  }
  if (doc.contains("run_config")) {
    config.run_config = serialization::RunConfigFromJson(doc["run_config"]);
  }
  return config;
}

ResourceConfig LoadResourceConfig(const fs::path &path) {
  return ParseResourceConfig(ReadJson(path), path.parent_path());
}

ProjectConfig ParseProjectConfig(const json &doc, const fs::path &base_dir) {
  ProjectConfig config;
  config.resources = ParseResourceConfig(doc, base_dir);
  if (!doc.contains("region")) Invalid("region is required");
  config.region = serialization::RegionFromJson(doc["region"]);
  if (!doc.contains("service") || !doc["service"].is_string()) Invalid("service is required");
  auto service = registry::ParseServiceId(doc["service"].get<std::string>());
  if (!service) Invalid("unknown service \"" + doc["service"].get<std::string>() + "\"");
  config.service = *service;
  if (!doc.contains("sources") || !doc["sources"].is_array()) Invalid("sources list is required");
  for (const json &name : doc["sources"]) {
    if (!name.is_string()) Invalid("sources must be strings");
    config.sources.push_back(SourceKey(name.get<std::string>()));
  }
  if (doc.contains("context")) {
    if (!doc["context"].is_object()) Invalid("context must map source kinds to specs");
    for (const auto &[name, spec] : doc["context"].items()) {
      config.context[SourceKey(name)] = serialization::ContextFromJson(spec);
    }
  }
  return config;
}

ProjectConfig LoadProjectConfig(const fs::path &path) {
  return ParseProjectConfig(ReadJson(path), path.parent_path());
}

std::optional<fs::path> DefaultStopWordsPath() {
  const char *env = std::getenv("RETTA_DATA");
  for (const char *dir : {env, RETTA_DATA_DIR}) {
    if (dir == nullptr) continue;
    fs::path candidate = fs::path(dir) / "stopwords_en.txt";
    if (fs::exists(candidate)) return candidate;
  }
  return std::nullopt;
}

std::shared_ptr<pipeline::Engine::Resources> LoadResources(const ResourceConfig &config) {
  auto resources = std::make_shared<pipeline::Engine::Resources>();
  if (config.catalog) resources->catalog = registry::Catalog::Load(*config.catalog);
  for (const auto &[kind, path] : config.corpora) {
    resources->connectors[kind] = std::make_shared<corpus::FileConnector>(kind, path);
  }
  auto stopwords_path = config.stopwords ? config.stopwords : DefaultStopWordsPath();
  if (!stopwords_path) throw Error(ErrorCode::kIo, "no stop-word list configured or found");
  resources->stopwords = text::LoadStopWords(*stopwords_path);
  resources->config = config.run_config;
  resources->boost_rules =
      classify::LoadBoostRules(config.boost_rules, config.run_config.default_gamma);

  std::vector<classify::LabeledDocument> labeled;
  for (const auto &record : classify::LoadLabeled(config.training)) {
    labeled.push_back(
        {text::PreprocessDocument(record.doc, resources->stopwords), record.label});
  }
  resources->models = classify::TrainTwoStage(labeled, config.run_config.smoothing);
  return resources;
}

}  // namespace retta::config
