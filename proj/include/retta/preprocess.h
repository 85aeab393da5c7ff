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

#ifndef RETTA_PREPROCESS_H_
#define RETTA_PREPROCESS_H_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "retta/corpus.h"

namespace retta::text {

using StopWords = std::unordered_set<std::string>;

// Stop-word file: one term per line, '#' comment lines and blanks ignored.
StopWords ParseStopWords(std::istream &in);
StopWords LoadStopWords(const std::filesystem::path &path);

// Strips <...> markup and http(s) URLs, lowercases ASCII letters, collapses
// runs of (Unicode) whitespace to one space and trims. Idempotent.
std::string Normalize(std::string_view text);

struct TokenizerOptions {
  // Tokens shorter than this are dropped.
  std::size_t min_length = 2;
};

// Splits on non-alphanumeric ASCII characters (bytes outside ASCII are
// separators too). Drops tokens containing a digit, short tokens and
// stop words. Order is preserved.
std::vector<std::string> Tokenize(std::string_view normalized,
                                  const StopWords &stopwords,
                                  const TokenizerOptions &options = {});

struct TokenizedDocument {
  std::string doc_id;
  std::vector<std::string> tokens;

  std::size_t token_count() const { return tokens.size(); }
  bool operator==(const TokenizedDocument &) const = default;
};

// Normalize, tokenize against the unstemmed stop list, then stem.
TokenizedDocument PreprocessDocument(const corpus::RawDocument &doc,
                                     const StopWords &stopwords,
                                     const TokenizerOptions &options = {});

std::vector<TokenizedDocument> PreprocessCorpus(const corpus::Corpus &corpus,
                                                const StopWords &stopwords,
                                                const TokenizerOptions &options = {});

// Dense term <-> index map. Index 0 is the most frequent term.
class Vocabulary {
 public:
  Vocabulary() = default;
  // Terms in index order; must be distinct.
  explicit Vocabulary(std::vector<std::string> terms);

  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }
  const std::string &term(std::size_t index) const { return terms_.at(index); }
  const std::vector<std::string> &terms() const { return terms_; }
  std::optional<std::size_t> index(std::string_view term) const;

  bool operator==(const Vocabulary &other) const { return terms_ == other.terms_; }

 private:
  std::vector<std::string> terms_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Terms with corpus frequency >= min_frequency, ordered by descending
// frequency and then lexicographically.
Vocabulary BuildVocabulary(const std::vector<TokenizedDocument> &docs,
                           std::size_t min_frequency = 1);

// In-vocabulary token indices of `doc`, in order.
std::vector<std::size_t> ToIndices(const TokenizedDocument &doc,
                                   const Vocabulary &vocab);

}  // namespace retta::text

#endif  // RETTA_PREPROCESS_H_
