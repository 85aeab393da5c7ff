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

#ifndef RETTA_CONFIG_H_
#define RETTA_CONFIG_H_

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "json.hpp"
#include "retta/corpus.h"
#include "retta/pipeline.h"
#include "retta/registry.h"

// Configuration files for the engine. Relative paths resolve against the
// directory of the file that names them.
namespace retta::config {

// Resource file:
//   {"catalog": "catalog.json",            optional, built-in default
//    "corpora": {"twitter": "tweets.jsonl", ...},
//    "training": "labeled.jsonl",
//    "boost_rules": "boost_rules.jsonl",
//    "stopwords": "stopwords_en.txt",      optional, shipped list
//    "run_config": {...}}                  optional, RunConfig fields
struct ResourceConfig {
  std::optional<std::filesystem::path> catalog;
  std::map<corpus::SourceKind, std::filesystem::path> corpora;
  std::filesystem::path training;
  std::filesystem::path boost_rules;
  std::optional<std::filesystem::path> stopwords;
  pipeline::RunConfig run_config;
};

// A resource file plus the region, service, sources and contexts:
//   {"region": {...}, "service": "TST", "sources": ["twitter"],
//    "context": {"twitter": {...}}, ...resource keys}
struct ProjectConfig {
  ResourceConfig resources;
  registry::RegionSpec region;
  registry::ServiceId service = registry::ServiceId::kTST;
  std::vector<corpus::SourceKind> sources;
  std::map<corpus::SourceKind, corpus::ContextSpec> context;
};

// Throw Error(kValidation) on bad content, Error(kIo) on unreadable files.
ResourceConfig ParseResourceConfig(const nlohmann::json &doc,
                                   const std::filesystem::path &base_dir);
ResourceConfig LoadResourceConfig(const std::filesystem::path &path);
ProjectConfig ParseProjectConfig(const nlohmann::json &doc, const std::filesystem::path &base_dir);
ProjectConfig LoadProjectConfig(const std::filesystem::path &path);

// Reads the catalog, corpora, training set, boost rules and stop words and
// trains the classifiers.
std::shared_ptr<pipeline::Engine::Resources> LoadResources(const ResourceConfig &config);

// Location of the shipped stop-word list, if it can be found next to the
// executable's data directory or under RETTA_DATA.
std::optional<std::filesystem::path> DefaultStopWordsPath();

}  // namespace retta::config

#endif  // RETTA_CONFIG_H_
