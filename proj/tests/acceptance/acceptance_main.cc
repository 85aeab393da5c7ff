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

// Acceptance suite: one PASS/FAIL line per primary criterion.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "classify_fixtures.h"
#include "oracles.h"
#include "pipeline_fixtures.h"
#include "retta/corpus.h"
#include "retta/porter_stemmer.h"
#include "retta/preprocess.h"
#include "retta/registry.h"
#include "retta/rules.h"
#include "retta/topics.h"
#include "test_util.h"

namespace {

using namespace retta;
using Clock = std::chrono::steady_clock;

double SecondsSince(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string Fixed(double value, int digits = 3) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.*f", digits, value);
  return buffer;
}

std::string Sci(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.2e", value);
  return buffer;
}

// 1. Stemmer agrees with the reference vocabulary; < 1 s.
Verdict StemmerFidelity() {
  std::ifstream voc(testing_util::SourcePath("tests/data/porter/voc.txt"));
  std::ifstream out(testing_util::SourcePath("tests/data/porter/output.txt"));
  std::vector<std::pair<std::string, std::string>> pairs;
  for (std::string word, stem; std::getline(voc, word) && std::getline(out, stem);) {
    pairs.emplace_back(word, stem);
  }
  if (pairs.size() < 20000) return {false, "reference data missing"};
  auto start = Clock::now();
  std::size_t mismatches = 0;
  for (const auto &[word, stem] : pairs) mismatches += text::PorterStem(word) != stem;
  double seconds = SecondsSince(start);
  return {mismatches == 0 && seconds < 1.0,
          std::to_string(pairs.size() - mismatches) + "/" + std::to_string(pairs.size()) +
              " agree, " + Fixed(seconds) + " s"};
}

// 2. Naive Bayes matches the textbook evaluator on 50 random instances.
Verdict NaiveBayesOracle() {
  std::mt19937_64 gen(20240302);
  double worst = 0;
  std::size_t label_mismatches = 0;
  std::size_t normalization_failures = 0;
  for (int i = 0; i < 50; ++i) {
    auto cmp = fixtures::CompareWithOracle(gen, i % 2 == 1);
    worst = std::max(worst, cmp.max_error);
    label_mismatches += !cmp.label_match;
    normalization_failures += std::abs(cmp.posterior_sum - 1.0) > 1e-9;
  }
  return {worst <= 1e-9 && label_mismatches == 0 && normalization_failures == 0,
          "50 instances, max |dlog| " + Sci(worst) + ", label mismatches " +
              std::to_string(label_mismatches)};
}

// 3. Apriori equals brute-force enumeration on 100 random sets; < 1 s.
Verdict AprioriOracle() {
  std::mt19937_64 gen(20240303);
  std::size_t mismatched_sets = 0;
  std::size_t total_rules = 0;
  double worst = 0;
  double mining_seconds = 0;
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t items = 1 + gen() % 12;
    std::size_t count = 1 + gen() % 30;
    std::vector<std::set<std::string>> sets(count);
    std::vector<rules::Transaction> transactions;
    for (std::size_t t = 0; t < count; ++t) {
      for (std::size_t i = 0; i < items; ++i) {
        if (gen() % 3 == 0) sets[t].insert(std::string(1, static_cast<char>('a' + i)));
      }
      transactions.push_back({"t" + std::to_string(t), sets[t]});
    }
    rules::MiningParams params{0.05 + (gen() % 40) / 100.0 + 0.0013,
                               0.1 + (gen() % 80) / 100.0 + 0.0017, 2 + gen() % 4};
    auto start = Clock::now();
    auto mined = rules::MineRules(transactions, params);
    mining_seconds += SecondsSince(start);
    auto expected = oracle::BruteForceRules(sets, params.min_support, params.min_confidence,
                                            params.max_itemset_size);
    total_rules += expected.size();
    std::map<std::pair<rules::ItemSet, rules::ItemSet>, oracle::Rule> by_key;
    for (const auto &rule : expected) by_key[{rule.antecedent, rule.consequent}] = rule;
    bool same = mined.size() == expected.size();
    for (const auto &rule : mined) {
      auto it = by_key.find({rule.antecedent, rule.consequent});
      if (it == by_key.end()) {
        same = false;
        continue;
      }
      worst = std::max({worst, std::abs(rule.support - it->second.support),
                        std::abs(rule.confidence - it->second.confidence),
                        std::abs(rule.lift - it->second.lift)});
    }
    mismatched_sets += !same;
  }
  return {mismatched_sets == 0 && worst <= 1e-12 && mining_seconds < 1.0,
          "100 sets, " + std::to_string(total_rules) + " rules, max diff " + Sci(worst) +
              ", differing sets " + std::to_string(mismatched_sets) + ", mining " +
              Fixed(mining_seconds) + " s"};
}

struct FixtureCorpus {
  corpus::Corpus raw;
  std::vector<text::TokenizedDocument> docs;
  text::Vocabulary vocab;
  std::vector<topics::PooledDocument> pools;
};

FixtureCorpus LoadFixtureCorpus() {
  FixtureCorpus f;
  f.raw = corpus::LoadJsonl(testing_util::SourcePath("data/fixtures/tst_tweets.jsonl"));
  auto stopwords = text::LoadStopWords(testing_util::SourcePath("data/stopwords_en.txt"));
  f.docs = text::PreprocessCorpus(f.raw, stopwords);
  f.vocab = text::BuildVocabulary(f.docs);
  f.pools = topics::PoolWithFallback(f.docs, f.vocab, f.raw);
  return f;
}

// Recounts every matrix from the assignments and compares exactly.
bool CountsConserved(const topics::TopicModel &model,
                     const std::vector<topics::PooledDocument> &pools) {
  const std::size_t K = model.num_topics();
  const std::size_t V = model.vocab_size();
  std::vector<std::int64_t> nkw(K * V, 0), nk(K, 0);
  std::int64_t tokens = 0;
  for (std::size_t d = 0; d < pools.size(); ++d) {
    std::vector<std::int64_t> ndk(K, 0);
    const auto &z = model.assignments()[d];
    if (z.size() != pools[d].tokens.size()) return false;
    for (std::size_t i = 0; i < z.size(); ++i) {
      ++ndk[z[i]];
      ++nkw[z[i] * V + pools[d].tokens[i]];
      ++nk[z[i]];
    }
    std::int64_t row = 0;
    for (std::size_t k = 0; k < K; ++k) {
      if (model.doc_topic(d, k) != ndk[k]) return false;
      row += model.doc_topic(d, k);
    }
    // sum_k n_dk = N_d
    if (row != static_cast<std::int64_t>(pools[d].tokens.size())) return false;
    tokens += row;
  }
  std::int64_t total = 0;
  for (std::size_t k = 0; k < K; ++k) {
    std::int64_t row = 0;
    for (std::size_t w = 0; w < V; ++w) {
      if (model.topic_word(k, w) != nkw[k * V + w]) return false;
      row += model.topic_word(k, w);
    }
    // sum_w n_kw = n_k
    if (row != model.topic_total(k) || model.topic_total(k) != nk[k]) return false;
    total += model.topic_total(k);
  }
  // sum_k n_k = total tokens
  return total == tokens;
}

double WorstRowSumError(const topics::TopicModel &model) {
  double worst = 0;
  for (std::size_t d = 0; d < model.num_docs(); ++d) {
    double sum = 0;
    for (double v : model.Theta(d)) sum += v;
    worst = std::max(worst, std::abs(sum - 1.0));
  }
  for (std::size_t k = 0; k < model.num_topics(); ++k) {
    double sum = 0;
    for (double v : model.Phi(k)) sum += v;
    worst = std::max(worst, std::abs(sum - 1.0));
  }
  return worst;
}

// 4. LDA invariants on the fixture corpus, K=5, 500 sweeps; < 10 s each.
Verdict LdaInvariants() {
  FixtureCorpus f = LoadFixtureCorpus();
  bool ok = f.raw.size() == 200;
  double slowest = 0;
  double worst_sum = 0;
  for (std::uint64_t seed : {42, 7, 2024}) {
    topics::LdaParams params;
    params.num_topics = 5;
    params.alpha = topics::DefaultAlpha(5);
    params.beta = 0.01;
    params.iterations = 500;
    params.seed = seed;
    auto start = Clock::now();
    auto model = topics::TopicModel::Fit(f.pools, f.vocab.size(), params);
    double seconds = SecondsSince(start);
    slowest = std::max(slowest, seconds);
    ok = ok && seconds < 10.0 && CountsConserved(model, f.pools);
    worst_sum = std::max(worst_sum, WorstRowSumError(model));
  }
  ok = ok && worst_sum <= 1e-9;
  return {ok, std::to_string(f.raw.size()) + " docs, V=" + std::to_string(f.vocab.size()) +
                  ", 3 fits, counts exact, max |row sum - 1| " + Sci(worst_sum) + ", slowest " +
                  Fixed(slowest) + " s"};
}

// 5. Two disjoint pools separate; repeated fits are bit-identical.
Verdict LdaSeparation() {
  auto pool = [](std::string key, std::size_t word) {
    topics::PooledDocument p;
    p.pool_key = key;
    p.member_doc_ids = {key};
    p.member_offsets = {0};
    p.tokens.assign(5, word);
    return p;
  };
  std::vector<topics::PooledDocument> pools = {pool("a", 0), pool("b", 1)};
  topics::LdaParams params;
  params.num_topics = 2;
  params.alpha = 0.1;
  params.beta = 0.01;
  params.iterations = 500;
  params.seed = 42;
  auto first = topics::TopicModel::Fit(pools, 2, params);
  auto second = topics::TopicModel::Fit(pools, 2, params);
  bool identical = first.topic_word_counts() == second.topic_word_counts() &&
                   first.doc_topic_counts() == second.doc_topic_counts() &&
                   first.topic_totals() == second.topic_totals() &&
                   first.assignments() == second.assignments();
  auto reference = oracle::ReferenceGibbs({{0, 0, 0, 0, 0}, {1, 1, 1, 1, 1}}, 2, 2, 0.1, 0.01,
                                          500, 42);
  bool matches_reference = true;
  for (int k = 0; k < 2; ++k) {
    for (int w = 0; w < 2; ++w) matches_reference &= first.topic_word(k, w) == reference.nkw[k][w];
  }
  double min_mass = 1;
  std::vector<std::size_t> dominant;
  for (std::size_t d = 0; d < 2; ++d) {
    auto theta = first.Theta(d);
    std::size_t k = theta[0] >= theta[1] ? 0 : 1;
    dominant.push_back(k);
    min_mass = std::min(min_mass, theta[k]);
  }
  bool ok = identical && matches_reference && min_mass > 0.9 && dominant[0] != dominant[1];
  return {ok, "dominant mass " + Fixed(min_mass, 4) + ", topics " +
                  std::to_string(dominant[0]) + "/" + std::to_string(dominant[1]) +
                  (identical ? ", runs identical" : ", runs differ") +
                  (matches_reference ? ", matches reference sampler" : ", differs from reference")};
}

// 6. Reliability-vs-runner-up gap is non-decreasing over gamma 1, 2, 4.
Verdict BoostMonotonicity() {
  auto fixture = fixtures::MakeBoostFixture();
  const auto &model = fixture.model;
  std::size_t rel = *model.class_index("reliability");
  bool condition = true;
  for (const auto &term : fixture.doc.tokens) {
    if (!fixtures::BoostFixture::Rule(2).Matches(term)) continue;
    std::size_t w = *model.vocabulary().index(term);
    for (std::size_t c = 0; c < model.classes().size(); ++c) {
      condition &= model.log_likelihood(rel, w) >= model.log_likelihood(c, w);
    }
  }
  std::vector<double> gaps;
  for (double gamma : {1.0, 2.0, 4.0}) {
    auto p = classify::Predict(model, fixture.doc, {fixtures::BoostFixture::Rule(gamma)});
    gaps.push_back(fixtures::Gap(p, model, "reliability"));
  }
  bool ok = condition && gaps[0] <= gaps[1] && gaps[1] <= gaps[2];
  return {ok, std::string(condition ? "" : "fixture condition broken, ") + "gaps " +
                  Fixed(gaps[0]) + " <= " + Fixed(gaps[1]) + " <= " + Fixed(gaps[2])};
}

// 7. The reliability keywords classify as NFR/reliability.
Verdict KeywordSemantics() {
  auto shipped = fixtures::LoadShippedModels();
  classify::Candidate candidate;
  candidate.raw = testing_util::Doc("keywords", fixtures::kKeywordText);
  candidate.tokens = text::PreprocessDocument(candidate.raw, shipped.stopwords);
  auto result = classify::ClassifyCandidates({candidate}, shipped.models, shipped.rules,
                                             registry::ServiceId::kTST);
  if (result.requirements.size() != 1) return {false, "candidate rejected"};
  const auto &req = result.requirements[0];
  bool ok = req.kind == classify::RequirementKind::kNFR &&
            req.nfr_category == classify::NfrCategory::kReliability;
  std::string stems;
  for (const auto &t : candidate.tokens.tokens) stems += (stems.empty() ? "" : " ") + t;
  return {ok, "[" + stems + "] -> " +
                  std::string(classify::RequirementKindName(req.kind)) +
                  (req.nfr_category ? "/" + std::string(classify::CategoryName(*req.nfr_category))
                                    : "") +
                  ", confidence " + Fixed(req.confidence, 4)};
}

// 8. Regions without sensor data never get a sensor-requiring service.
Verdict Eligibility() {
  using corpus::SourceKind;
  std::mt19937_64 gen(20240308);
  std::size_t sensorless = 0;
  std::size_t excluded = 0;
  std::size_t violations = 0;
  const registry::Catalog catalogs[] = {registry::Catalog::Default(),
                                        testing_util::SensorCatalog()};
  for (int i = 0; i < 1000; ++i) {
    registry::RegionSpec region;
    region.name = "region-" + std::to_string(i);
    for (SourceKind kind : corpus::kAllSourceKinds) {
      if (gen() % 2) region.declared_available_sources.insert(kind);
    }
    registry::SourceCounts counts;
    for (SourceKind kind : corpus::kAllSourceKinds) {
      counts[kind] = gen() % 4 == 0 ? 0 : gen() % 400;
    }
    bool has_sensor = region.declared_available_sources.count(SourceKind::kSensorLog) > 0;
    sensorless += !has_sensor;
    for (const auto &catalog : catalogs) {
      auto offered = registry::EligibleServices(catalog, region, counts);
      for (const auto &service : catalog.services()) {
        if (!service.required_source_kinds.count(SourceKind::kSensorLog)) continue;
        bool listed = std::any_of(offered.begin(), offered.end(),
                                  [&](const auto &s) { return s.id == service.id; });
        if (!has_sensor) {
          violations += listed;
          excluded += !listed;
        }
      }
    }
  }
  return {violations == 0 && excluded > 0,
          "1000 regions x 2 catalogs, " + std::to_string(sensorless) + " without sensor data, " +
              std::to_string(excluded) + " exclusions, violations " + std::to_string(violations)};
}

int RunCli(const std::string &args) {
  std::string command = std::string(RETTA_CLI) + " " + args + " >/dev/null 2>&1";
  int raw = std::system(command.c_str());
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

// 9. `run --seed 42` twice gives byte-identical results; each < 30 s.
Verdict EndToEndDeterminism() {
  testing_util::TempDir dir;
  std::string config = "'" + testing_util::SourcePath("data/fixtures/tst_project.cfg").string() + "'";
  std::vector<std::string> results;
  double slowest = 0;
  for (const char *out : {"first", "second"}) {
    auto start = Clock::now();
    int status = RunCli("run --config " + config + " --seed 42 --store '" +
                        (dir / "store").string() + "' --out '" + (dir / out).string() + "'");
    slowest = std::max(slowest, SecondsSince(start));
    if (status != 0) return {false, "run exited with " + std::to_string(status)};
    results.push_back(testing_util::ReadText(dir / out / "result.json"));
  }
  bool identical = !results[0].empty() && results[0] == results[1];
  return {identical && slowest < 30.0,
          std::string(identical ? "result.json identical" : "result.json differs") + " (" +
              std::to_string(results[0].size()) + " bytes), slowest run " + Fixed(slowest) +
              " s"};
}

// 10. 10,000 random operation sequences stay within the declared graph.
Verdict StateMachine() {
  auto world = fixtures::MakeSmallWorld();
  testing_util::TempDir dir;
  pipeline::ProjectStore store(dir.path());
  auto start = Clock::now();
  auto report = fixtures::RunRandomSequences(world, 10000, 20240310, &store);
  double seconds = SecondsSince(start);
  bool ok = !report.violation && report.sequences == 10000 && report.completed > 0;
  return {ok, std::to_string(report.sequences) + " sequences, " +
                  std::to_string(report.operations) + " operations, " +
                  std::to_string(report.completed) + " complete, " +
                  std::to_string(report.failed) + " failed, " + std::to_string(report.rejected) +
                  " refused" + (report.violation ? ", violation: " + *report.violation : "") +
                  ", " + Fixed(seconds) + " s"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"stemmer fidelity", StemmerFidelity},
      {"naive Bayes oracle equivalence", NaiveBayesOracle},
      {"Apriori oracle equivalence", AprioriOracle},
      {"LDA invariants", LdaInvariants},
      {"LDA determinism and separation", LdaSeparation},
      {"boost monotonicity", BoostMonotonicity},
      {"keyword semantics", KeywordSemantics},
      {"eligibility behavior", Eligibility},
      {"end-to-end determinism", EndToEndDeterminism},
      {"pipeline state machine", StateMachine},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict verdict;
    try {
      verdict = criteria[i].second();
    } catch (const std::exception &e) {
      verdict = {false, std::string("threw: ") + e.what()};
    }
    failures += !verdict.pass;
    std::cout << (verdict.pass ? "PASS" : "FAIL") << " " << (i + 1) << " "
              << criteria[i].first << ": " << verdict.detail << std::endl;
  }
  std::cout << (criteria.size() - failures) << "/" << criteria.size() << " criteria passed"
            << std::endl;
  return failures == 0 ? 0 : 1;
}
