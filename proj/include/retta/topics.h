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

#ifndef RETTA_TOPICS_H_
#define RETTA_TOPICS_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "retta/corpus.h"
#include "retta/preprocess.h"

namespace retta::topics {

// A pseudo-document built by concatenating short texts that share a key.
struct PooledDocument {
  std::string pool_key;
  std::vector<std::string> member_doc_ids;
  // member_offsets[i] is where member i's tokens start in `tokens`.
  std::vector<std::size_t> member_offsets;
  std::vector<std::size_t> tokens;  // vocabulary indices

  std::size_t member_token_count(std::size_t member) const {
    std::size_t end = member + 1 < member_offsets.size() ? member_offsets[member + 1]
                                                         : tokens.size();
    return end - member_offsets[member];
  }

  bool operator==(const PooledDocument &) const = default;
};

enum class PoolingKind { kByHashtag, kByTimeWindow, kByQueryTerm, kSinglePool };

struct PoolingStrategy {
  PoolingKind kind = PoolingKind::kByHashtag;
  int window_minutes = 60;  // kByTimeWindow only

  bool operator==(const PoolingStrategy &) const = default;
};

// "by_hashtag", "by_time_window(60)", "by_query_term", "single_pool".
std::string PoolingName(const PoolingStrategy &strategy);
std::optional<PoolingStrategy> ParsePooling(std::string_view name);

inline constexpr char kNoKeyPool[] = "_none";
inline constexpr char kSinglePoolKey[] = "_all";

// Groups documents into pools keyed by the strategy and sorted by key.
// A document with several hashtags joins each of their pools. Tokens outside
// `vocab` are dropped and pools left without tokens are removed. Throws
// Error(kIntegrity) when a doc_id is missing from `raw`.
std::vector<PooledDocument> Pool(const std::vector<text::TokenizedDocument> &docs,
                                 const text::Vocabulary &vocab,
                                 const corpus::Corpus &raw,
                                 const PoolingStrategy &strategy);

// Hashtag pooling, falling back to one-hour windows when it yields fewer
// than two pools.
std::vector<PooledDocument> PoolWithFallback(
    const std::vector<text::TokenizedDocument> &docs, const text::Vocabulary &vocab,
    const corpus::Corpus &raw);

struct LdaParams {
  std::size_t num_topics = 5;
  double alpha = 10.0;  // 50 / num_topics
  double beta = 0.01;
  std::size_t iterations = 1000;
  std::uint64_t seed = 42;
};

inline double DefaultAlpha(std::size_t num_topics) {
  return 50.0 / static_cast<double>(num_topics);
}

// Fitted LDA state. The sampler draws from std::mt19937_64 seeded with
// `seed`; uniforms use the top 53 bits of each draw, so fits reproduce
// bit-for-bit on any conforming standard library.
class TopicModel {
 public:
  // Collapsed Gibbs sampling over `pools`. Throws Error(kParameter) for bad
  // parameters and Error(kEmptyInput) when the pools hold no tokens.
  static TopicModel Fit(const std::vector<PooledDocument> &pools,
                        std::size_t vocab_size, const LdaParams &params);

  std::size_t num_topics() const { return params_.num_topics; }
  std::size_t vocab_size() const { return vocab_size_; }
  std::size_t num_docs() const { return words_.size(); }
  const LdaParams &params() const { return params_; }
  double alpha() const { return params_.alpha; }
  double beta() const { return params_.beta; }

  const std::vector<std::vector<std::size_t>> &assignments() const { return z_; }
  std::int64_t doc_topic(std::size_t d, std::size_t k) const {
    return n_dk_[d * num_topics() + k];
  }
  std::int64_t topic_word(std::size_t k, std::size_t w) const {
    return n_kw_[k * vocab_size_ + w];
  }
  std::int64_t topic_total(std::size_t k) const { return n_k_[k]; }
  const std::vector<std::int64_t> &topic_word_counts() const { return n_kw_; }
  const std::vector<std::int64_t> &doc_topic_counts() const { return n_dk_; }
  const std::vector<std::int64_t> &topic_totals() const { return n_k_; }

  // (n_dk + alpha) / (N_d + K alpha)
  std::vector<double> Theta(std::size_t d) const;
  // (n_kw + beta) / (n_k + V beta)
  std::vector<double> Phi(std::size_t k) const;

  // Throws Error(kInternal) when a count identity fails.
  void CheckInvariants() const;

 private:
  TopicModel() = default;

  LdaParams params_;
  std::size_t vocab_size_ = 0;
  std::vector<std::vector<std::size_t>> words_;
  std::vector<std::vector<std::size_t>> z_;
  std::vector<std::int64_t> n_dk_;
  std::vector<std::int64_t> n_kw_;
  std::vector<std::int64_t> n_k_;
};

using TermWeight = std::pair<std::string, double>;

// The m highest-phi terms of topic k (ties by term). Throws
// Error(kParameter) when k is out of range or m is zero.
std::vector<TermWeight> TopTerms(const TopicModel &model, const text::Vocabulary &vocab,
                                 std::size_t k, std::size_t m);

// Member documents ranked by the share of their tokens assigned to topic k
// (ties by id). Members without in-vocabulary tokens are not ranked.
std::vector<std::string> RepresentativeDocs(const TopicModel &model,
                                            const std::vector<PooledDocument> &pools,
                                            const corpus::Corpus &raw, std::size_t k,
                                            std::size_t n);

struct TopicSummary {
  std::size_t topic_index = 0;
  std::vector<TermWeight> top_terms;
  std::vector<std::string> representative_doc_ids;
  std::optional<double> coherence;  // UMass over top_terms

  bool operator==(const TopicSummary &) const = default;
};

// UMass coherence of `terms` using document co-occurrence in `docs`.
double UMassCoherence(const std::vector<std::string> &terms,
                      const std::vector<text::TokenizedDocument> &docs);

// Model dump: K, alpha, beta, seed, iterations, vocabulary and n_kw.
nlohmann::json DumpModel(const TopicModel &model, const text::Vocabulary &vocab);

struct ModelDump {
  LdaParams params;
  std::vector<std::string> vocabulary;
  std::vector<std::vector<std::int64_t>> topic_word;

  bool operator==(const ModelDump &) const = default;
};

// Throws Error(kIntegrity) on a malformed or unknown-version dump.
ModelDump ParseModelDump(const nlohmann::json &doc);

}  // namespace retta::topics

#endif  // RETTA_TOPICS_H_
