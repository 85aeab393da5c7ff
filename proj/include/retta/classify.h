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

#ifndef RETTA_CLASSIFY_H_
#define RETTA_CLASSIFY_H_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <regex>
#include <string>
#include <string_view>
#include <vector>

#include "retta/corpus.h"
#include "retta/preprocess.h"
#include "retta/registry.h"

namespace retta::classify {

inline constexpr char kFunctional[] = "FR";
inline constexpr char kNonFunctional[] = "NFR";

enum class RequirementKind { kFR, kNFR };

enum class NfrCategory {
  kReliability,
  kPerformance,
  kSecurity,
  kUsability,
  kMaintainability,
  kPortability,
  kOther,
};

inline constexpr NfrCategory kAllCategories[] = {
    NfrCategory::kReliability,     NfrCategory::kPerformance, NfrCategory::kSecurity,
    NfrCategory::kUsability,       NfrCategory::kMaintainability,
    NfrCategory::kPortability,     NfrCategory::kOther};

std::string_view RequirementKindName(RequirementKind kind);
std::optional<RequirementKind> ParseRequirementKind(std::string_view name);
std::string_view CategoryName(NfrCategory category);
std::optional<NfrCategory> ParseCategory(std::string_view name);

// Multiplies the counts of matching stemmed terms when scoring
// `target_class`. The pattern must match the whole term.
class BoostRule {
 public:
  // Throws Error(kValidation) if gamma < 1 or the pattern does not compile.
  BoostRule(std::string id, std::string pattern, std::string target_class, double gamma,
            registry::ServiceId service);

  const std::string &id() const { return id_; }
  const std::string &pattern() const { return pattern_; }
  const std::string &target_class() const { return target_class_; }
  double gamma() const { return gamma_; }
  registry::ServiceId service() const { return service_; }

  bool Matches(const std::string &term) const { return std::regex_match(term, *regex_); }

 private:
  std::string id_;
  std::string pattern_;
  std::string target_class_;
  double gamma_;
  registry::ServiceId service_;
  std::shared_ptr<const std::regex> regex_;
};

// Boost-rule file: one JSON object per line with id, pattern, target_class,
// gamma and service. Rules without gamma get `default_gamma`.
std::vector<BoostRule> ParseBoostRules(std::istream &in, double default_gamma = 2.0);
std::vector<BoostRule> LoadBoostRules(const std::filesystem::path &path,
                                      double default_gamma = 2.0);

struct LabeledDocument {
  text::TokenizedDocument doc;
  std::string label;
};

// Labeled training file: corpus records with an extra "label" field.
struct LabeledRecord {
  corpus::RawDocument doc;
  std::string label;
};
std::vector<LabeledRecord> ParseLabeled(std::istream &in);
std::vector<LabeledRecord> LoadLabeled(const std::filesystem::path &path);

// Multinomial naive Bayes with additive smoothing.
class NBModel {
 public:
  const std::vector<std::string> &classes() const { return classes_; }
  const text::Vocabulary &vocabulary() const { return *vocab_; }
  std::shared_ptr<const text::Vocabulary> shared_vocabulary() const { return vocab_; }
  double log_prior(std::size_t c) const { return log_prior_[c]; }
  double log_likelihood(std::size_t c, std::size_t w) const {
    return log_likelihood_[c * vocab_->size() + w];
  }
  double smoothing() const { return smoothing_; }
  std::size_t trained_on() const { return trained_on_; }
  std::optional<std::size_t> class_index(std::string_view label) const;

 private:
  friend NBModel TrainNaiveBayes(const std::vector<LabeledDocument> &,
                                 std::shared_ptr<const text::Vocabulary>, double,
                                 std::vector<std::string>);

  std::vector<std::string> classes_;
  std::vector<double> log_prior_;
  std::vector<double> log_likelihood_;  // classes x V, row major
  std::shared_ptr<const text::Vocabulary> vocab_;
  double smoothing_ = 1.0;
  std::size_t trained_on_ = 0;
};

// log_prior[c] = log(N_c / N); log_likelihood[c][w] =
// log((count(w, c) + smoothing) / (tokens(c) + smoothing * V)). Classes keep
// the order of `classes`, or first-seen label order when it is empty.
// Out-of-vocabulary tokens are ignored. Throws Error(kTraining) for a class
// without documents, an undeclared label or an empty vocabulary.
NBModel TrainNaiveBayes(const std::vector<LabeledDocument> &labeled,
                        std::shared_ptr<const text::Vocabulary> vocab,
                        double smoothing = 1.0, std::vector<std::string> classes = {});

// Per-term counts of `doc` as seen when scoring `target_class`.
std::map<std::string, double> ApplyBoosts(const text::TokenizedDocument &doc,
                                          const std::vector<BoostRule> &rules,
                                          std::string_view target_class);

struct Prediction {
  std::string label;
  std::vector<double> scores;     // log-space, model class order
  std::vector<double> posterior;  // softmax of scores
  bool unclassifiable = false;    // no in-vocabulary tokens; label is the prior argmax

  double posterior_of(std::string_view label, const NBModel &model) const;
};

// score(c) = log_prior[c] + sum_w n'(w) * log_likelihood[c][w], where n'(w)
// is the count of w multiplied by the largest gamma among rules that target
// one of the model's classes and match w. Out-of-vocabulary tokens are
// dropped. Scores within 1e-9 (relative) of the best are ties, which go to
// the first class in model order.
Prediction Predict(const NBModel &model, const text::TokenizedDocument &doc,
                   const std::vector<BoostRule> &rules = {});

struct Provenance {
  std::vector<std::string> doc_ids;
  std::optional<std::size_t> topic_index;

  bool operator==(const Provenance &) const = default;
};

struct Requirement {
  std::string id;
  std::string text;
  RequirementKind kind = RequirementKind::kFR;
  std::optional<NfrCategory> nfr_category;
  double confidence = 0;
  Provenance provenance;
  registry::ServiceId service_id = registry::ServiceId::kTST;
  // Stemmed terms of the source document plus association-rule expansions.
  std::vector<std::string> keywords;

  bool operator==(const Requirement &) const = default;
};

struct Candidate {
  corpus::RawDocument raw;
  text::TokenizedDocument tokens;
  std::optional<std::size_t> topic_index;
};

struct Rejection {
  std::string doc_id;
  std::string reason;

  bool operator==(const Rejection &) const = default;
};

struct ClassificationResult {
  std::vector<Requirement> requirements;
  std::vector<Rejection> rejected;
};

struct TwoStageModels {
  NBModel fr_nfr;  // classes FR, NFR
  NBModel nfr;     // NFR categories present in training, taxonomy order
};

// Trains both stages from labels "FR" or an NFR category name, sharing one
// vocabulary built from the training documents.
TwoStageModels TrainTwoStage(const std::vector<LabeledDocument> &labeled,
                             double smoothing = 1.0);

// Stage 1 labels FR vs NFR; stage 2 assigns a category to NFR candidates.
// Only rules for `service` are applied. Candidates without in-vocabulary
// tokens are rejected rather than emitted.
ClassificationResult ClassifyCandidates(const std::vector<Candidate> &candidates,
                                        const TwoStageModels &models,
                                        const std::vector<BoostRule> &rules,
                                        registry::ServiceId service);

}  // namespace retta::classify

#endif  // RETTA_CLASSIFY_H_
