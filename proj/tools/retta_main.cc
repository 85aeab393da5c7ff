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

// Command-line front end: retta <subcommand> ...
// Machine output goes to stdout as one JSON record per line; diagnostics go
// to stderr. Exit codes: 0 success, 1 domain error, 2 usage error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "retta/classify.h"
#include "retta/config.h"
#include "retta/corpus.h"
#include "retta/error.h"
#include "retta/gateway.h"
#include "retta/pipeline.h"
#include "retta/porter_stemmer.h"
#include "retta/preprocess.h"
#include "retta/rules.h"
#include "retta/serialization.h"
#include "retta/timeutil.h"
#include "retta/topics.h"

namespace {

using nlohmann::json;
namespace fs = std::filesystem;
using namespace retta;

constexpr int kExitDomain = 1;
constexpr int kExitUsage = 2;

text::StopWords LoadStopWordsOrDefault(const std::string &path) {
  if (!path.empty()) return text::LoadStopWords(path);
  auto fallback = config::DefaultStopWordsPath();
  if (!fallback) throw Error(ErrorCode::kIo, "no stop-word list found; pass --stopwords");
  return text::LoadStopWords(*fallback);
}

void WriteFile(const fs::path &path, const std::string &content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << content;
}

int Ingest(const std::string &path) {
  corpus::Corpus corpus = corpus::LoadJsonl(path);
  corpus::CorpusStats stats = corpus::ComputeStats(corpus);
  json counts = json::object();
  for (const auto &[kind, count] : stats.counts) counts[corpus::SourceKindName(kind)] = count;
  json line = {{"documents", corpus.size()},
               {"counts", counts},
               {"distinct_hashtags", stats.distinct_hashtags}};
  if (stats.min_timestamp) line["min_timestamp"] = FormatIso8601(*stats.min_timestamp);
  if (stats.max_timestamp) line["max_timestamp"] = FormatIso8601(*stats.max_timestamp);
  std::cout << line.dump() << "\n";
  return 0;
}

int Preprocess(const std::string &path, const std::string &stopwords_path) {
  text::StopWords stopwords = LoadStopWordsOrDefault(stopwords_path);
  corpus::Corpus corpus = corpus::LoadJsonl(path);
  for (const auto &doc : text::PreprocessCorpus(corpus, stopwords)) {
    std::cout << json{{"id", doc.doc_id}, {"tokens", doc.tokens}}.dump() << "\n";
  }
  return 0;
}

struct TopicsOptions {
  std::string corpus;
  std::string stopwords;
  std::size_t k = 5;
  double alpha = 0;  // 0 selects 50 / K
  double beta = 0.01;
  std::size_t iterations = 1000;
  std::uint64_t seed = 42;
  std::size_t top = 10;
  std::string pooling = "auto";
};

int Topics(const TopicsOptions &opts) {
  text::StopWords stopwords = LoadStopWordsOrDefault(opts.stopwords);
  corpus::Corpus corpus = corpus::LoadJsonl(opts.corpus);
  auto docs = text::PreprocessCorpus(corpus, stopwords);
  text::Vocabulary vocab = text::BuildVocabulary(docs, 1);
  std::vector<topics::PooledDocument> pools;
  if (opts.pooling == "auto") {
    pools = topics::PoolWithFallback(docs, vocab, corpus);
  } else {
    auto strategy = topics::ParsePooling(opts.pooling);
    if (!strategy) throw Error(ErrorCode::kParameter, "unknown pooling " + opts.pooling);
    pools = topics::Pool(docs, vocab, corpus, *strategy);
  }
  topics::LdaParams params;
  params.num_topics = opts.k;
  params.alpha = opts.alpha > 0 ? opts.alpha : topics::DefaultAlpha(opts.k);
  params.beta = opts.beta;
  params.iterations = opts.iterations;
  params.seed = opts.seed;
  topics::TopicModel model = topics::TopicModel::Fit(pools, vocab.size(), params);
  for (std::size_t k = 0; k < model.num_topics(); ++k) {
    json terms = json::array();
    for (const auto &[term, phi] : topics::TopTerms(model, vocab, k, opts.top)) {
      terms.push_back({term, phi});
    }
    std::cout << json{{"topic", k}, {"top_terms", terms}}.dump() << "\n";
  }
  return 0;
}

struct ClassifyOptions {
  std::string training;
  std::string rules;
  std::string service = "TST";
  std::string input;
  std::vector<std::string> texts;
  std::string stopwords;
  double smoothing = 1.0;
};

int Classify(const ClassifyOptions &opts) {
  auto service = registry::ParseServiceId(opts.service);
  if (!service) throw Error(ErrorCode::kParameter, "unknown service " + opts.service);
  text::StopWords stopwords = LoadStopWordsOrDefault(opts.stopwords);
  std::vector<classify::LabeledDocument> labeled;
  for (const auto &record : classify::LoadLabeled(opts.training)) {
    labeled.push_back({text::PreprocessDocument(record.doc, stopwords), record.label});
  }
  classify::TwoStageModels models = classify::TrainTwoStage(labeled, opts.smoothing);
  std::vector<classify::BoostRule> rules;
  if (!opts.rules.empty()) rules = classify::LoadBoostRules(opts.rules);

  std::vector<corpus::RawDocument> raw;
  if (!opts.input.empty()) {
    corpus::Corpus corpus = corpus::LoadJsonl(opts.input);
    raw = corpus.documents();
  }
  for (std::size_t i = 0; i < opts.texts.size(); ++i) {
    corpus::RawDocument doc;
    doc.id = "text-" + std::to_string(i + 1);
    doc.source_kind = corpus::SourceKind::kManual;
    doc.text = opts.texts[i];
    doc.timestamp = NowSeconds();
    raw.push_back(std::move(doc));
  }
  std::vector<classify::Candidate> candidates;
  for (const auto &doc : raw) {
    candidates.push_back({doc, text::PreprocessDocument(doc, stopwords), std::nullopt});
  }
  auto result = classify::ClassifyCandidates(candidates, models, rules, *service);
  for (const auto &req : result.requirements) {
    json line = serialization::RequirementToJson(req);
    std::cout << line.dump() << "\n";
  }
  for (const auto &rejected : result.rejected) {
    std::cout << json{{"rejected", rejected.doc_id}, {"reason", rejected.reason}}.dump()
              << "\n";
  }
  return 0;
}

int Rules(const std::string &path, const std::string &stopwords_path,
          const rules::MiningParams &params) {
  text::StopWords stopwords = LoadStopWordsOrDefault(stopwords_path);
  corpus::Corpus corpus = corpus::LoadJsonl(path);
  std::vector<rules::Transaction> transactions;
  for (const auto &doc : text::PreprocessCorpus(corpus, stopwords)) {
    transactions.push_back(rules::MakeTransaction(doc));
  }
  for (const auto &rule : rules::MineRules(transactions, params)) {
    std::cout << rules::FormatRule(rule) << "\n";
  }
  return 0;
}

struct RunOptions {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string store;
  std::string out;
  std::string catalog;
};

int Run(const RunOptions &opts) {
  config::ProjectConfig project_config = config::LoadProjectConfig(opts.config);
  if (!opts.catalog.empty()) project_config.resources.catalog = fs::path(opts.catalog);
  if (opts.seed) project_config.resources.run_config.seed = *opts.seed;
  auto resources = config::LoadResources(project_config.resources);
  pipeline::Engine engine(resources, pipeline::ProjectStore(opts.store));

  pipeline::Project project = engine.Create(project_config.region);
  engine.SelectService(project.id, project_config.service);
  engine.SetSourcesAndContext(project.id, project_config.sources, project_config.context);
  project = engine.Run(project.id, false);

  json summary = {{"project_id", project.id},
                  {"state", pipeline::StateName(project.state)},
                  {"store", engine.store().ProjectDir(project.id).string()}};
  if (project.failure_reason) summary["failure_reason"] = *project.failure_reason;
  if (project.result) {
    std::size_t nfr = 0;
    for (const auto &req : project.result->requirements) {
      nfr += req.kind == classify::RequirementKind::kNFR;
    }
    summary["requirements"] = project.result->requirements.size();
    summary["nfr"] = nfr;
    summary["rules"] = project.result->rules.size();
    if (!opts.out.empty()) {
      fs::create_directories(opts.out);
      fs::path result_path = fs::path(opts.out) / "result.json";
      WriteFile(result_path,
                serialization::ResultToJson(*project.result).dump(2) + "\n");
      WriteFile(fs::path(opts.out) / "timings.json",
                serialization::TimingsToJson(project.result->timings).dump(2) + "\n");
      summary["result"] = result_path.string();
    }
  }
  std::cout << summary.dump() << "\n";
  return project.state == pipeline::ProjectState::kComplete ? 0 : kExitDomain;
}

struct ServeOptions {
  std::string resources;
  std::string store;
  std::string catalog;
  std::string host = "0.0.0.0";
  int port = 8080;
  std::string cors_origin;
};

int Serve(const ServeOptions &opts) {
  config::ResourceConfig resource_config = config::LoadResourceConfig(opts.resources);
  if (!opts.catalog.empty()) resource_config.catalog = fs::path(opts.catalog);
  auto engine = std::make_shared<pipeline::Engine>(config::LoadResources(resource_config),
                                                   pipeline::ProjectStore(opts.store));
  gateway::GatewayOptions options;
  if (const char *token = std::getenv("RETTA_TOKEN"); token != nullptr && *token != '\0') {
    options.bearer_token = token;
  }
  if (!opts.cors_origin.empty()) options.cors_origin = opts.cors_origin;
  gateway::Gateway gateway(engine, options);
  gateway.ResumeInterrupted();
  gateway::HttpServer server(gateway);
  std::cerr << "listening on " << opts.host << ":" << opts.port << "\n";
  if (!server.Listen(opts.host, opts.port)) {
    throw Error(ErrorCode::kIo, "cannot listen on port " + std::to_string(opts.port));
  }
  return 0;
}

int StemPreview(const std::vector<std::string> &words, const std::string &rules_path,
                const std::string &stopwords_path) {
  text::StopWords stopwords = LoadStopWordsOrDefault(stopwords_path);
  std::vector<classify::BoostRule> rules;
  if (!rules_path.empty()) rules = classify::LoadBoostRules(rules_path);
  std::vector<std::string> inputs = words;
  if (inputs.empty()) {
    for (std::string line; std::getline(std::cin, line);) inputs.push_back(line);
  }
  for (const std::string &input : inputs) {
    for (const std::string &token : text::Tokenize(text::Normalize(input), stopwords)) {
      std::string stem = text::PorterStem(token);
      json matched = json::array();
      for (const auto &rule : rules) {
        if (rule.Matches(stem)) matched.push_back(rule.id());
      }
      json line = {{"token", token}, {"stem", stem}};
      if (!rules.empty()) line["rules"] = matched;
      std::cout << line.dump() << "\n";
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Requirements elicitation engine for traffic-management services", "retta"};
  app.require_subcommand(1);

  std::string stopwords;
  auto add_stopwords = [&](CLI::App *cmd) {
    cmd->add_option("--stopwords", stopwords, "Stop-word list (one term per line)");
  };

  std::string corpus_path;
  auto *ingest = app.add_subcommand("ingest", "Validate a corpus file and print its statistics");
  ingest->add_option("corpus", corpus_path, "Corpus file (JSON lines)")->required();

  auto *preprocess = app.add_subcommand("preprocess", "Print the stemmed tokens of each document");
  preprocess->add_option("corpus", corpus_path, "Corpus file")->required();
  add_stopwords(preprocess);

  TopicsOptions topics_opts;
  auto *topics = app.add_subcommand("topics", "Fit LDA and print the top terms of each topic");
  topics->add_option("corpus", topics_opts.corpus, "Corpus file")->required();
  topics->add_option("-k,--topics", topics_opts.k, "Number of topics")->check(CLI::PositiveNumber);
  topics->add_option("--alpha", topics_opts.alpha, "Document-topic prior (default 50/K)");
  topics->add_option("--beta", topics_opts.beta, "Topic-term prior");
  topics->add_option("--iterations", topics_opts.iterations, "Gibbs sweeps");
  topics->add_option("--seed", topics_opts.seed, "Random seed");
  topics->add_option("--top", topics_opts.top, "Terms per topic");
  topics->add_option("--pooling", topics_opts.pooling,
                     "auto, by_hashtag, by_time_window(N), by_query_term or single_pool");
  add_stopwords(topics);

  ClassifyOptions classify_opts;
  auto *classify = app.add_subcommand("classify", "Train on a labeled file and classify texts");
  classify->add_option("--training", classify_opts.training, "Labeled training file")
      ->required();
  classify->add_option("--rules", classify_opts.rules, "Boost-rule file");
  classify->add_option("--service", classify_opts.service, "EMS, TST or UTP");
  classify->add_option("--input", classify_opts.input, "Corpus file to classify");
  classify->add_option("--text", classify_opts.texts, "Text to classify (repeatable)");
  classify->add_option("--smoothing", classify_opts.smoothing, "Additive smoothing");
  add_stopwords(classify);

  rules::MiningParams mining;
  auto *rules_cmd = app.add_subcommand("rules", "Mine association rules over document terms");
  rules_cmd->add_option("corpus", corpus_path, "Corpus file")->required();
  rules_cmd->add_option("--min-support", mining.min_support, "Minimum support");
  rules_cmd->add_option("--min-confidence", mining.min_confidence, "Minimum confidence");
  rules_cmd->add_option("--max-size", mining.max_itemset_size, "Largest itemset size");
  add_stopwords(rules_cmd);

  RunOptions run_opts;
  std::uint64_t seed = 0;
  auto *run = app.add_subcommand("run", "Create, configure and run a project from a configuration file");
  run->add_option("--config", run_opts.config, "Project configuration file")->required();
  auto *seed_opt = run->add_option("--seed", seed, "Override the configured seed");
  run->add_option("--store", run_opts.store, "Project store directory")
      ->envname("RETTA_STORE")
      ->default_val("retta-store");
  run->add_option("--out", run_opts.out, "Directory for result.json and timings.json");
  run->add_option("--catalog", run_opts.catalog, "Service catalog file")->envname("RETTA_CATALOG");

  ServeOptions serve_opts;
  auto *serve = app.add_subcommand("serve", "Start the HTTP API");
  serve->add_option("--resources", serve_opts.resources, "Resource configuration file")
      ->required();
  serve->add_option("--store", serve_opts.store, "Project store directory")
      ->envname("RETTA_STORE")
      ->default_val("retta-store");
  serve->add_option("--catalog", serve_opts.catalog, "Service catalog file")
      ->envname("RETTA_CATALOG");
  serve->add_option("--host", serve_opts.host, "Listen address");
  serve->add_option("--port", serve_opts.port, "Listen port")->check(CLI::Range(1, 65535));
  serve->add_option("--cors-origin", serve_opts.cors_origin, "Origin allowed by CORS");

  std::vector<std::string> words;
  std::string rules_path;
  auto *stem = app.add_subcommand("stem-preview",
                                  "Show the stems boost-rule patterns will see");
  stem->add_option("words", words, "Words or phrases (default: lines of stdin)");
  stem->add_option("--rules", rules_path, "Boost-rule file to test against the stems");
  add_stopwords(stem);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    std::cerr << app.help();
    return kExitUsage;
  }

  try {
    if (*ingest) return Ingest(corpus_path);
    if (*preprocess) return Preprocess(corpus_path, stopwords);
    if (*topics) {
      topics_opts.stopwords = stopwords;
      return Topics(topics_opts);
    }
    if (*classify) {
      classify_opts.stopwords = stopwords;
      return Classify(classify_opts);
    }
    if (*rules_cmd) return Rules(corpus_path, stopwords, mining);
    if (*run) {
      if (*seed_opt) run_opts.seed = seed;
      return Run(run_opts);
    }
    if (*serve) return Serve(serve_opts);
    if (*stem) return StemPreview(words, rules_path, stopwords);
  } catch (const Error &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDomain;
  }
  std::cerr << app.help();
  return kExitUsage;
}
