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

#include "retta/classify.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <set>

#include "json.hpp"
#include "retta/error.h"

namespace retta::classify {
namespace {

using nlohmann::json;

bool IsBlankLine(const std::string &line) {
  return line.find_first_not_of(" \t\r") == std::string::npos;
}

// Largest multiplier among rules for `target_class` matching `term`, or 1.
double MaxGamma(const std::string &term, const std::vector<BoostRule> &rules,
                std::string_view target_class) {
  double gamma = 1.0;
  bool matched = false;
  for (const BoostRule &rule : rules) {
    if (rule.target_class() != target_class || !rule.Matches(term)) continue;
    gamma = matched ? std::max(gamma, rule.gamma()) : rule.gamma();
    matched = true;
  }
  return gamma;
}

std::vector<double> Softmax(const std::vector<double> &scores) {
  double top = *std::max_element(scores.begin(), scores.end());
  std::vector<double> out(scores.size());
  double sum = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    out[i] = std::exp(scores[i] - top);
    sum += out[i];
  }
  for (double &p : out) p /= sum;
  return out;
}

// Scores within rounding noise of the maximum count as tied, and ties go to
// the first class. Summation order alone must not decide a label.
std::size_t ArgMax(const std::vector<double> &values) {
  double top = *std::max_element(values.begin(), values.end());
  double tolerance = 1e-9 * std::max(1.0, std::abs(top));
  std::size_t i = 0;
  while (values[i] < top - tolerance) ++i;
  return i;
}

}  // namespace

std::string_view RequirementKindName(RequirementKind kind) {
  return kind == RequirementKind::kFR ? kFunctional : kNonFunctional;
}

std::optional<RequirementKind> ParseRequirementKind(std::string_view name) {
  if (name == kFunctional) return RequirementKind::kFR;
  if (name == kNonFunctional) return RequirementKind::kNFR;
  return std::nullopt;
}

std::string_view CategoryName(NfrCategory category) {
  switch (category) {
    case NfrCategory::kReliability: return "reliability";
    case NfrCategory::kPerformance: return "performance";
    case NfrCategory::kSecurity: return "security";
    case NfrCategory::kUsability: return "usability";
    case NfrCategory::kMaintainability: return "maintainability";
    case NfrCategory::kPortability: return "portability";
    case NfrCategory::kOther: return "other";
  }
  return "other";
}

std::optional<NfrCategory> ParseCategory(std::string_view name) {
  for (NfrCategory category : kAllCategories) {
    if (CategoryName(category) == name) return category;
  }
  return std::nullopt;
}

BoostRule::BoostRule(std::string id, std::string pattern, std::string target_class,
                     double gamma, registry::ServiceId service)
    : id_(std::move(id)),
      pattern_(std::move(pattern)),
      target_class_(std::move(target_class)),
      gamma_(gamma),
      service_(service) {
  if (id_.empty()) throw Error(ErrorCode::kValidation, "boost rule without id");
  if (!(gamma_ >= 1.0)) {
    throw Error(ErrorCode::kValidation, "boost rule \"" + id_ + "\" has gamma below 1");
  }
  try {
    regex_ = std::make_shared<const std::regex>(pattern_, std::regex::ECMAScript);
  } catch (const std::regex_error &e) {
    throw Error(ErrorCode::kValidation,
                "boost rule \"" + id_ + "\" pattern does not compile: " + e.what());
  }
}

std::vector<BoostRule> ParseBoostRules(std::istream &in, double default_gamma) {
  std::vector<BoostRule> rules;
  std::set<std::string> ids;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (IsBlankLine(line)) continue;
    try {
      json record = json::parse(line);
      std::string service_name = record.at("service").get<std::string>();
      auto service = registry::ParseServiceId(service_name);
      if (!service) throw ParseError(line_number, "unknown service \"" + service_name + "\"");
      BoostRule rule(record.at("id").get<std::string>(),
                     record.at("pattern").get<std::string>(),
                     record.at("target_class").get<std::string>(),
                     record.value("gamma", default_gamma), *service);
      if (!ids.insert(rule.id()).second) {
        throw ParseError(line_number, "duplicate rule id \"" + rule.id() + "\"");
      }
      rules.push_back(std::move(rule));
    } catch (const json::exception &e) {
      throw ParseError(line_number, std::string("malformed boost rule: ") + e.what());
    } catch (const ParseError &) {
      throw;
    } catch (const Error &e) {
      throw ParseError(line_number, e.what());
    }
  }
  return rules;
}

std::vector<BoostRule> LoadBoostRules(const std::filesystem::path &path, double default_gamma) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot read boost rules " + path.string());
  return ParseBoostRules(in, default_gamma);
}

std::vector<LabeledRecord> ParseLabeled(std::istream &in) {
  std::vector<LabeledRecord> records;
  std::set<std::string> ids;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (IsBlankLine(line)) continue;
    json record;
    try {
      record = json::parse(line);
    } catch (const json::parse_error &e) {
      throw ParseError(line_number, std::string("malformed record: ") + e.what());
    }
    if (!record.is_object() || !record.contains("label") || !record["label"].is_string()) {
      throw ParseError(line_number, "missing field \"label\"");
    }
    LabeledRecord labeled{corpus::DocumentFromJson(record, line_number),
                          record["label"].get<std::string>()};
    if (!ids.insert(labeled.doc.id).second) {
      throw Error(ErrorCode::kValidation, "line " + std::to_string(line_number) +
                                              ": duplicate document id \"" +
                                              labeled.doc.id + "\"");
    }
    records.push_back(std::move(labeled));
  }
  return records;
}

std::vector<LabeledRecord> LoadLabeled(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot read training file " + path.string());
  return ParseLabeled(in);
}

std::optional<std::size_t> NBModel::class_index(std::string_view label) const {
  for (std::size_t c = 0; c < classes_.size(); ++c) {
    if (classes_[c] == label) return c;
  }
  return std::nullopt;
}

NBModel TrainNaiveBayes(const std::vector<LabeledDocument> &labeled,
                        std::shared_ptr<const text::Vocabulary> vocab, double smoothing,
                        std::vector<std::string> classes) {
  if (!vocab || vocab->empty()) throw Error(ErrorCode::kTraining, "vocabulary is empty");
  if (!(smoothing > 0)) throw Error(ErrorCode::kParameter, "smoothing must be positive");
  if (classes.empty()) {
    for (const LabeledDocument &item : labeled) {
      if (std::find(classes.begin(), classes.end(), item.label) == classes.end()) {
        classes.push_back(item.label);
      }
    }
  }
  if (classes.empty()) throw Error(ErrorCode::kTraining, "no training documents");

  NBModel model;
  model.classes_ = std::move(classes);
  model.vocab_ = std::move(vocab);
  model.smoothing_ = smoothing;
  model.trained_on_ = labeled.size();

  const std::size_t C = model.classes_.size();
  const std::size_t V = model.vocab_->size();
  std::vector<double> doc_count(C, 0);
  std::vector<double> term_count(C * V, 0);
  std::vector<double> token_total(C, 0);
  for (const LabeledDocument &item : labeled) {
    auto c = model.class_index(item.label);
    if (!c) throw Error(ErrorCode::kTraining, "undeclared label \"" + item.label + "\"");
    doc_count[*c] += 1;
    for (std::size_t w : text::ToIndices(item.doc, *model.vocab_)) {
      term_count[*c * V + w] += 1;
      token_total[*c] += 1;
    }
  }
  model.log_prior_.resize(C);
  model.log_likelihood_.resize(C * V);
  const double n = static_cast<double>(labeled.size());
  for (std::size_t c = 0; c < C; ++c) {
    if (doc_count[c] == 0) {
      throw Error(ErrorCode::kTraining,
                  "class \"" + model.classes_[c] + "\" has no training documents");
    }
    model.log_prior_[c] = std::log(doc_count[c] / n);
    double denom = token_total[c] + smoothing * static_cast<double>(V);
    for (std::size_t w = 0; w < V; ++w) {
      model.log_likelihood_[c * V + w] = std::log((term_count[c * V + w] + smoothing) / denom);
    }
  }
  return model;
}

std::map<std::string, double> ApplyBoosts(const text::TokenizedDocument &doc,
                                          const std::vector<BoostRule> &rules,
                                          std::string_view target_class) {
  std::map<std::string, double> counts;
  for (const std::string &token : doc.tokens) counts[token] += 1;
  for (auto &[term, count] : counts) count *= MaxGamma(term, rules, target_class);
  return counts;
}

double Prediction::posterior_of(std::string_view wanted, const NBModel &model) const {
  auto c = model.class_index(wanted);
  return c ? posterior[*c] : 0.0;
}

Prediction Predict(const NBModel &model, const text::TokenizedDocument &doc,
                   const std::vector<BoostRule> &rules) {
  const std::size_t C = model.classes().size();
  const text::Vocabulary &vocab = model.vocabulary();

  text::TokenizedDocument in_vocab{doc.doc_id, {}};
  for (const std::string &token : doc.tokens) {
    if (vocab.index(token)) in_vocab.tokens.push_back(token);
  }

  Prediction prediction;
  prediction.scores.resize(C);
  for (std::size_t c = 0; c < C; ++c) prediction.scores[c] = model.log_prior(c);
  prediction.unclassifiable = in_vocab.tokens.empty();
  if (!prediction.unclassifiable) {
    // Every class is scored against the same weighted counts, so a boost
    // widens the target's lead exactly where its likelihood is higher.
    std::map<std::string, double> weights;
    for (const std::string &label : model.classes()) {
      for (const auto &[term, count] : ApplyBoosts(in_vocab, rules, label)) {
        weights[term] = std::max(weights[term], count);
      }
    }
    for (std::size_t c = 0; c < C; ++c) {
      for (const auto &[term, count] : weights) {
        prediction.scores[c] += count * model.log_likelihood(c, *vocab.index(term));
      }
    }
  }
  prediction.posterior = Softmax(prediction.scores);
  prediction.label = model.classes()[ArgMax(prediction.scores)];
  return prediction;
}

TwoStageModels TrainTwoStage(const std::vector<LabeledDocument> &labeled,
                             double smoothing) {
  std::vector<text::TokenizedDocument> docs;
  std::vector<LabeledDocument> stage1;
  std::vector<LabeledDocument> stage2;
  std::set<NfrCategory> present;
  for (const LabeledDocument &item : labeled) {
    docs.push_back(item.doc);
    if (item.label == kFunctional) {
      stage1.push_back({item.doc, kFunctional});
      continue;
    }
    auto category = ParseCategory(item.label);
    if (!category) {
      throw Error(ErrorCode::kTraining, "unknown training label \"" + item.label + "\"");
    }
    present.insert(*category);
    stage1.push_back({item.doc, kNonFunctional});
    stage2.push_back(item);
  }
  auto vocab = std::make_shared<const text::Vocabulary>(text::BuildVocabulary(docs, 1));
  std::vector<std::string> categories;
  for (NfrCategory category : kAllCategories) {
    if (present.contains(category)) categories.emplace_back(CategoryName(category));
  }
  return TwoStageModels{
      TrainNaiveBayes(stage1, vocab, smoothing, {kFunctional, kNonFunctional}),
      TrainNaiveBayes(stage2, vocab, smoothing, categories)};
}

ClassificationResult ClassifyCandidates(const std::vector<Candidate> &candidates,
                                        const TwoStageModels &models,
                                        const std::vector<BoostRule> &rules,
                                        registry::ServiceId service) {
  if (models.fr_nfr.vocabulary() != models.nfr.vocabulary()) {
    throw Error(ErrorCode::kParameter, "stage models use different vocabularies");
  }
  if (!models.fr_nfr.class_index(kFunctional) || !models.fr_nfr.class_index(kNonFunctional)) {
    throw Error(ErrorCode::kParameter, "first stage must have classes FR and NFR");
  }
  std::vector<BoostRule> active;
  for (const BoostRule &rule : rules) {
    if (rule.service() == service) active.push_back(rule);
  }

  ClassificationResult result;
  for (const Candidate &candidate : candidates) {
    Prediction stage1 = Predict(models.fr_nfr, candidate.tokens, active);
    if (stage1.unclassifiable) {
      result.rejected.push_back({candidate.raw.id, "no in-vocabulary tokens"});
      continue;
    }
    Requirement req;
    char id[16];
    std::snprintf(id, sizeof(id), "REQ-%04zu", result.requirements.size() + 1);
    req.id = id;
    req.text = candidate.raw.text;
    req.service_id = service;
    req.provenance = {{candidate.raw.id}, candidate.topic_index};
    req.keywords = candidate.tokens.tokens;
    std::sort(req.keywords.begin(), req.keywords.end());
    req.keywords.erase(std::unique(req.keywords.begin(), req.keywords.end()),
                       req.keywords.end());

    double stage1_confidence = stage1.posterior_of(stage1.label, models.fr_nfr);
    if (stage1.label == kFunctional) {
      req.kind = RequirementKind::kFR;
      req.confidence = stage1_confidence;
    } else {
      Prediction stage2 = Predict(models.nfr, candidate.tokens, active);
      auto category = ParseCategory(stage2.label);
      if (!category) {
        throw Error(ErrorCode::kTraining, "unknown NFR category \"" + stage2.label + "\"");
      }
      req.kind = RequirementKind::kNFR;
      req.nfr_category = *category;
      req.confidence = stage1_confidence * stage2.posterior_of(stage2.label, models.nfr);
    }
    result.requirements.push_back(std::move(req));
  }
  return result;
}

}  // namespace retta::classify
