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

#include "retta/topics.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <unordered_map>

#include "retta/error.h"

namespace retta::topics {
namespace {

using nlohmann::json;

constexpr int kDumpVersion = 1;

double UniformDouble(std::mt19937_64 &gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

struct PoolBuilder {
  PooledDocument pool;

  void Add(const std::string &doc_id, const std::vector<std::size_t> &indices) {
    pool.member_doc_ids.push_back(doc_id);
    pool.member_offsets.push_back(pool.tokens.size());
    pool.tokens.insert(pool.tokens.end(), indices.begin(), indices.end());
  }
};

std::string TimeBucketKey(Timestamp ts, int window_minutes) {
  std::int64_t width = static_cast<std::int64_t>(window_minutes) * 60;
  std::int64_t secs = ts.time_since_epoch().count();
  std::int64_t bucket = secs >= 0 ? secs / width : -((-secs + width - 1) / width);
  return FormatIso8601(Timestamp{std::chrono::seconds{bucket * width}});
}

}  // namespace

std::string PoolingName(const PoolingStrategy &strategy) {
  switch (strategy.kind) {
    case PoolingKind::kByHashtag: return "by_hashtag";
    case PoolingKind::kByTimeWindow:
      return "by_time_window(" + std::to_string(strategy.window_minutes) + ")";
    case PoolingKind::kByQueryTerm: return "by_query_term";
    case PoolingKind::kSinglePool: return "single_pool";
  }
  return "by_hashtag";
}

std::optional<PoolingStrategy> ParsePooling(std::string_view name) {
  if (name == "by_hashtag") return PoolingStrategy{PoolingKind::kByHashtag};
  if (name == "by_query_term") return PoolingStrategy{PoolingKind::kByQueryTerm};
  if (name == "single_pool") return PoolingStrategy{PoolingKind::kSinglePool};
  constexpr std::string_view kWindow = "by_time_window";
  if (name.substr(0, kWindow.size()) == kWindow) {
    std::string_view rest = name.substr(kWindow.size());
    if (rest.empty()) return PoolingStrategy{PoolingKind::kByTimeWindow, 60};
    if (rest.size() < 3 || rest.front() != '(' || rest.back() != ')') return std::nullopt;
    rest = rest.substr(1, rest.size() - 2);
    int minutes = 0;
    auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), minutes);
    if (ec != std::errc() || ptr != rest.data() + rest.size() || minutes < 1) {
      return std::nullopt;
    }
    return PoolingStrategy{PoolingKind::kByTimeWindow, minutes};
  }
  return std::nullopt;
}

std::vector<PooledDocument> Pool(const std::vector<text::TokenizedDocument> &docs,
                                 const text::Vocabulary &vocab,
                                 const corpus::Corpus &raw,
                                 const PoolingStrategy &strategy) {
  if (strategy.kind == PoolingKind::kByTimeWindow && strategy.window_minutes < 1) {
    throw Error(ErrorCode::kParameter, "time window must be at least one minute");
  }
  std::map<std::string, PoolBuilder> builders;
  for (const text::TokenizedDocument &doc : docs) {
    const corpus::RawDocument *source = raw.Find(doc.doc_id);
    if (source == nullptr) {
      throw Error(ErrorCode::kIntegrity,
                  "document \"" + doc.doc_id + "\" is not in the corpus");
    }
    std::vector<std::size_t> indices = text::ToIndices(doc, vocab);
    std::vector<std::string> keys;
    switch (strategy.kind) {
      case PoolingKind::kByHashtag:
        keys = corpus::Hashtags(*source);
        break;
      case PoolingKind::kByTimeWindow:
        keys.push_back(TimeBucketKey(source->timestamp, strategy.window_minutes));
        break;
      case PoolingKind::kByQueryTerm:
        if (auto it = source->meta.find(corpus::kMetaQueryTerm); it != source->meta.end()) {
          keys.push_back(it->second);
        }
        break;
      case PoolingKind::kSinglePool:
        keys.push_back(kSinglePoolKey);
        break;
    }
    if (keys.empty()) keys.push_back(kNoKeyPool);
    for (const std::string &key : keys) {
      PoolBuilder &builder = builders[key];
      builder.pool.pool_key = key;
      builder.Add(doc.doc_id, indices);
    }
  }
  std::vector<PooledDocument> pools;
  for (auto &[key, builder] : builders) {
    if (!builder.pool.tokens.empty()) pools.push_back(std::move(builder.pool));
  }
  return pools;
}

std::vector<PooledDocument> PoolWithFallback(
    const std::vector<text::TokenizedDocument> &docs, const text::Vocabulary &vocab,
    const corpus::Corpus &raw) {
  auto pools = Pool(docs, vocab, raw, {PoolingKind::kByHashtag});
  if (pools.size() >= 2) return pools;
  return Pool(docs, vocab, raw, {PoolingKind::kByTimeWindow, 60});
}

TopicModel TopicModel::Fit(const std::vector<PooledDocument> &pools,
                           std::size_t vocab_size, const LdaParams &params) {
  if (params.num_topics < 1) throw Error(ErrorCode::kParameter, "K must be at least 1");
  if (params.iterations < 1) {
    throw Error(ErrorCode::kParameter, "iterations must be at least 1");
  }
  if (!(params.alpha > 0) || !(params.beta > 0)) {
    throw Error(ErrorCode::kParameter, "alpha and beta must be positive");
  }
  if (vocab_size < 1) throw Error(ErrorCode::kEmptyInput, "vocabulary is empty");
  std::size_t total_tokens = 0;
  for (const PooledDocument &pool : pools) {
    for (std::size_t w : pool.tokens) {
      if (w >= vocab_size) {
        throw Error(ErrorCode::kParameter, "token index outside the vocabulary");
      }
    }
    total_tokens += pool.tokens.size();
  }
  if (total_tokens == 0) throw Error(ErrorCode::kEmptyInput, "no tokens to model");

  const std::size_t K = params.num_topics;
  const std::size_t V = vocab_size;
  TopicModel model;
  model.params_ = params;
  model.vocab_size_ = V;
  model.n_dk_.assign(pools.size() * K, 0);
  model.n_kw_.assign(K * V, 0);
  model.n_k_.assign(K, 0);
  model.words_.reserve(pools.size());
  model.z_.reserve(pools.size());

  std::mt19937_64 gen(params.seed);
  for (std::size_t d = 0; d < pools.size(); ++d) {
    model.words_.push_back(pools[d].tokens);
    std::vector<std::size_t> &z = model.z_.emplace_back(pools[d].tokens.size());
    for (std::size_t i = 0; i < z.size(); ++i) {
      std::size_t k = std::min(K - 1, static_cast<std::size_t>(UniformDouble(gen) * K));
      z[i] = k;
      std::size_t w = pools[d].tokens[i];
      ++model.n_dk_[d * K + k];
      ++model.n_kw_[k * V + w];
      ++model.n_k_[k];
    }
  }

  const double alpha = params.alpha;
  const double beta = params.beta;
  const double v_beta = static_cast<double>(V) * beta;
  std::vector<double> cumulative(K);
  for (std::size_t iter = 0; iter < params.iterations; ++iter) {
    for (std::size_t d = 0; d < model.words_.size(); ++d) {
      const std::vector<std::size_t> &words = model.words_[d];
      std::vector<std::size_t> &z = model.z_[d];
      std::int64_t *doc_row = &model.n_dk_[d * K];
      for (std::size_t i = 0; i < words.size(); ++i) {
        std::size_t w = words[i];
        std::size_t old = z[i];
        --doc_row[old];
        --model.n_kw_[old * V + w];
        --model.n_k_[old];

        double total = 0;
        for (std::size_t k = 0; k < K; ++k) {
          total += (static_cast<double>(doc_row[k]) + alpha) *
                   (static_cast<double>(model.n_kw_[k * V + w]) + beta) /
                   (static_cast<double>(model.n_k_[k]) + v_beta);
          cumulative[k] = total;
        }
        double u = UniformDouble(gen) * total;
        std::size_t chosen = K - 1;
        for (std::size_t k = 0; k < K; ++k) {
          if (u < cumulative[k]) {
            chosen = k;
            break;
          }
        }

        z[i] = chosen;
        ++doc_row[chosen];
        ++model.n_kw_[chosen * V + w];
        ++model.n_k_[chosen];
      }
    }
#ifndef NDEBUG
    model.CheckInvariants();
#endif
  }
  model.CheckInvariants();
  return model;
}

std::vector<double> TopicModel::Theta(std::size_t d) const {
  if (d >= num_docs()) throw Error(ErrorCode::kParameter, "document index out of range");
  const std::size_t K = num_topics();
  double length = static_cast<double>(words_[d].size());
  std::vector<double> theta(K);
  for (std::size_t k = 0; k < K; ++k) {
    theta[k] = (static_cast<double>(doc_topic(d, k)) + alpha()) /
               (length + static_cast<double>(K) * alpha());
  }
  return theta;
}

std::vector<double> TopicModel::Phi(std::size_t k) const {
  if (k >= num_topics()) throw Error(ErrorCode::kParameter, "topic index out of range");
  std::vector<double> phi(vocab_size_);
  double denom = static_cast<double>(n_k_[k]) + static_cast<double>(vocab_size_) * beta();
  for (std::size_t w = 0; w < vocab_size_; ++w) {
    phi[w] = (static_cast<double>(topic_word(k, w)) + beta()) / denom;
  }
  return phi;
}

void TopicModel::CheckInvariants() const {
  const std::size_t K = num_topics();
  const std::size_t V = vocab_size_;
  std::vector<std::int64_t> expected_kw(K * V, 0);
  std::vector<std::int64_t> expected_k(K, 0);
  std::int64_t total = 0;
  for (std::size_t d = 0; d < words_.size(); ++d) {
    std::int64_t row_sum = 0;
    for (std::size_t k = 0; k < K; ++k) {
      if (doc_topic(d, k) < 0) throw Error(ErrorCode::kInternal, "negative n_dk");
      row_sum += doc_topic(d, k);
    }
    if (row_sum != static_cast<std::int64_t>(words_[d].size())) {
      throw Error(ErrorCode::kInternal, "n_dk row does not match document length");
    }
    std::vector<std::int64_t> row(K, 0);
    for (std::size_t i = 0; i < words_[d].size(); ++i) {
      ++row[z_[d][i]];
      ++expected_kw[z_[d][i] * V + words_[d][i]];
      ++expected_k[z_[d][i]];
    }
    for (std::size_t k = 0; k < K; ++k) {
      if (row[k] != doc_topic(d, k)) {
        throw Error(ErrorCode::kInternal, "n_dk disagrees with assignments");
      }
    }
    total += row_sum;
  }
  if (expected_kw != n_kw_) throw Error(ErrorCode::kInternal, "n_kw disagrees with assignments");
  std::int64_t topic_sum = 0;
  for (std::size_t k = 0; k < K; ++k) {
    std::int64_t row_sum = 0;
    for (std::size_t w = 0; w < V; ++w) row_sum += topic_word(k, w);
    if (row_sum != n_k_[k] || n_k_[k] != expected_k[k]) {
      throw Error(ErrorCode::kInternal, "n_k does not match n_kw row sum");
    }
    topic_sum += n_k_[k];
  }
  if (topic_sum != total) throw Error(ErrorCode::kInternal, "n_k does not sum to token count");
}

std::vector<TermWeight> TopTerms(const TopicModel &model, const text::Vocabulary &vocab,
                                 std::size_t k, std::size_t m) {
  if (k >= model.num_topics()) throw Error(ErrorCode::kParameter, "topic index out of range");
  if (m < 1) throw Error(ErrorCode::kParameter, "term count must be at least 1");
  if (vocab.size() != model.vocab_size()) {
    throw Error(ErrorCode::kParameter, "vocabulary does not match the model");
  }
  std::vector<double> phi = model.Phi(k);
  std::vector<std::size_t> order(phi.size());
  for (std::size_t w = 0; w < order.size(); ++w) order[w] = w;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (phi[a] != phi[b]) return phi[a] > phi[b];
    return vocab.term(a) < vocab.term(b);
  });
  order.resize(std::min(m, order.size()));
  std::vector<TermWeight> top;
  top.reserve(order.size());
  for (std::size_t w : order) top.emplace_back(vocab.term(w), phi[w]);
  return top;
}

std::vector<std::string> RepresentativeDocs(const TopicModel &model,
                                            const std::vector<PooledDocument> &pools,
                                            const corpus::Corpus &raw, std::size_t k,
                                            std::size_t n) {
  if (k >= model.num_topics()) throw Error(ErrorCode::kParameter, "topic index out of range");
  if (pools.size() != model.num_docs()) {
    throw Error(ErrorCode::kParameter, "pools do not match the model");
  }
  struct Share {
    std::int64_t on_topic = 0;
    std::int64_t total = 0;
  };
  std::map<std::string, Share> shares;
  for (std::size_t d = 0; d < pools.size(); ++d) {
    const PooledDocument &pool = pools[d];
    const std::vector<std::size_t> &z = model.assignments()[d];
    if (z.size() != pool.tokens.size()) {
      throw Error(ErrorCode::kParameter, "pools do not match the model");
    }
    for (std::size_t m = 0; m < pool.member_doc_ids.size(); ++m) {
      const std::string &id = pool.member_doc_ids[m];
      if (raw.Find(id) == nullptr) {
        throw Error(ErrorCode::kIntegrity, "document \"" + id + "\" is not in the corpus");
      }
      std::size_t begin = pool.member_offsets[m];
      std::size_t end = begin + pool.member_token_count(m);
      Share &share = shares[id];
      for (std::size_t i = begin; i < end; ++i) {
        ++share.total;
        if (z[i] == k) ++share.on_topic;
      }
    }
  }
  std::vector<std::pair<std::string, Share>> ranked;
  for (auto &[id, share] : shares) {
    if (share.total > 0) ranked.emplace_back(id, share);
  }
  // Exact comparison of on_topic / total via cross-multiplication.
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto &a, const auto &b) {
    std::int64_t lhs = a.second.on_topic * b.second.total;
    std::int64_t rhs = b.second.on_topic * a.second.total;
    if (lhs != rhs) return lhs > rhs;
    return a.first < b.first;
  });
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < ranked.size() && i < n; ++i) ids.push_back(ranked[i].first);
  return ids;
}

double UMassCoherence(const std::vector<std::string> &terms,
                      const std::vector<text::TokenizedDocument> &docs) {
  std::unordered_map<std::string, std::size_t> position;
  for (std::size_t i = 0; i < terms.size(); ++i) position.emplace(terms[i], i);
  const std::size_t m = terms.size();
  std::vector<double> df(m, 0);
  std::vector<double> co(m * m, 0);
  for (const text::TokenizedDocument &doc : docs) {
    std::set<std::size_t> present;
    for (const std::string &token : doc.tokens) {
      if (auto it = position.find(token); it != position.end()) present.insert(it->second);
    }
    for (std::size_t a : present) {
      df[a] += 1;
      for (std::size_t b : present) co[a * m + b] += 1;
    }
  }
  double score = 0;
  for (std::size_t i = 1; i < m; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (df[j] > 0) score += std::log((co[i * m + j] + 1.0) / df[j]);
    }
  }
  return score;
}

json DumpModel(const TopicModel &model, const text::Vocabulary &vocab) {
  if (vocab.size() != model.vocab_size()) {
    throw Error(ErrorCode::kParameter, "vocabulary does not match the model");
  }
  json matrix = json::array();
  for (std::size_t k = 0; k < model.num_topics(); ++k) {
    json row = json::array();
    for (std::size_t w = 0; w < model.vocab_size(); ++w) row.push_back(model.topic_word(k, w));
    matrix.push_back(std::move(row));
  }
  return json{{"format", "retta-lda"},
              {"version", kDumpVersion},
              {"K", model.num_topics()},
              {"alpha", model.alpha()},
              {"beta", model.beta()},
              {"seed", model.params().seed},
              {"iterations", model.params().iterations},
              {"vocabulary", vocab.terms()},
              {"n_kw", std::move(matrix)}};
}

ModelDump ParseModelDump(const json &doc) {
  try {
    if (doc.at("format") != "retta-lda" || doc.at("version") != kDumpVersion) {
      throw Error(ErrorCode::kIntegrity, "unsupported model dump version");
    }
    ModelDump dump;
    dump.params.num_topics = doc.at("K").get<std::size_t>();
    dump.params.alpha = doc.at("alpha").get<double>();
    dump.params.beta = doc.at("beta").get<double>();
    dump.params.seed = doc.at("seed").get<std::uint64_t>();
    dump.params.iterations = doc.at("iterations").get<std::size_t>();
    dump.vocabulary = doc.at("vocabulary").get<std::vector<std::string>>();
    dump.topic_word = doc.at("n_kw").get<std::vector<std::vector<std::int64_t>>>();
    if (dump.topic_word.size() != dump.params.num_topics) {
      throw Error(ErrorCode::kIntegrity, "n_kw row count differs from K");
    }
    for (const auto &row : dump.topic_word) {
      if (row.size() != dump.vocabulary.size()) {
        throw Error(ErrorCode::kIntegrity, "n_kw row length differs from vocabulary size");
      }
    }
    return dump;
  } catch (const json::exception &e) {
    throw Error(ErrorCode::kIntegrity, std::string("malformed model dump: ") + e.what());
  }
}

}  // namespace retta::topics
