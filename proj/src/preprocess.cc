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

#include "retta/preprocess.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <map>

#include "retta/error.h"
#include "retta/porter_stemmer.h"

namespace retta::text {
namespace {

// Length in bytes of a Unicode whitespace sequence starting at `pos`, or 0.
std::size_t WhitespaceAt(std::string_view s, std::size_t pos) {
  unsigned char c = static_cast<unsigned char>(s[pos]);
  if (c == ' ' || (c >= '\t' && c <= '\r')) return 1;
  auto byte = [&](std::size_t i) -> unsigned char {
    return pos + i < s.size() ? static_cast<unsigned char>(s[pos + i]) : 0;
  };
  if (c == 0xC2 && (byte(1) == 0x85 || byte(1) == 0xA0)) return 2;
  if (c == 0xE1 && byte(1) == 0x9A && byte(2) == 0x80) return 3;
  if (c == 0xE2 && byte(1) == 0x80 &&
      ((byte(2) >= 0x80 && byte(2) <= 0x8A) || byte(2) == 0xA8 ||
       byte(2) == 0xA9 || byte(2) == 0xAF)) {
    return 3;
  }
  if (c == 0xE2 && byte(1) == 0x81 && byte(2) == 0x9F) return 3;
  if (c == 0xE3 && byte(1) == 0x80 && byte(2) == 0x80) return 3;
  return 0;
}

// Every Unicode whitespace sequence becomes a single ASCII space.
std::string UnifyWhitespace(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size();) {
    if (std::size_t n = WhitespaceAt(s, i)) {
      out += ' ';
      i += n;
    } else {
      out += s[i++];
    }
  }
  return out;
}

// Replaces each <...> (no nested angle brackets) with a space.
bool StripTags(std::string *s) {
  std::string out;
  out.reserve(s->size());
  bool changed = false;
  std::size_t i = 0;
  while (i < s->size()) {
    if ((*s)[i] == '<') {
      std::size_t close = s->find_first_of("<>", i + 1);
      if (close != std::string::npos && (*s)[close] == '>') {
        out += ' ';
        i = close + 1;
        changed = true;
        continue;
      }
    }
    out += (*s)[i++];
  }
  s->swap(out);
  return changed;
}

bool StartsWithUrlScheme(std::string_view s, std::size_t pos) {
  auto matches = [&](std::string_view scheme) {
    if (pos + scheme.size() > s.size()) return false;
    for (std::size_t k = 0; k < scheme.size(); ++k) {
      if (std::tolower(static_cast<unsigned char>(s[pos + k])) != scheme[k]) return false;
    }
    return true;
  };
  return matches("http://") || matches("https://");
}

// Replaces each http(s) URL, up to the next space, with a space.
bool StripUrls(std::string *s) {
  std::string out;
  out.reserve(s->size());
  bool changed = false;
  std::size_t i = 0;
  while (i < s->size()) {
    if (StartsWithUrlScheme(*s, i)) {
      std::size_t end = s->find(' ', i);
      if (end == std::string::npos) end = s->size();
      out += ' ';
      i = end;
      changed = true;
      continue;
    }
    out += (*s)[i++];
  }
  s->swap(out);
  return changed;
}

bool IsAsciiAlnum(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
}

}  // namespace

StopWords ParseStopWords(std::istream &in) {
  StopWords words;
  std::string line;
  while (std::getline(in, line)) {
    std::size_t begin = line.find_first_not_of(" \t\r");
    if (begin == std::string::npos || line[begin] == '#') continue;
    std::size_t end = line.find_last_not_of(" \t\r");
    std::string word = line.substr(begin, end - begin + 1);
    for (char &c : word) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    words.insert(std::move(word));
  }
  return words;
}

StopWords LoadStopWords(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot read stop-word file " + path.string());
  return ParseStopWords(in);
}

std::string Normalize(std::string_view text) {
  std::string s = UnifyWhitespace(text);
  // Removing one construct can expose another ("<<b>a>"), so iterate.
  while (true) {
    bool changed = StripTags(&s);
    changed = StripUrls(&s) || changed;
    if (!changed) break;
  }
  std::string out;
  out.reserve(s.size());
  bool pending_space = false;
  for (char c : s) {
    if (c == ' ') {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out += ' ';
      pending_space = false;
    }
    out += (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
  }
  return out;
}

std::vector<std::string> Tokenize(std::string_view normalized,
                                  const StopWords &stopwords,
                                  const TokenizerOptions &options) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < normalized.size()) {
    while (i < normalized.size() && !IsAsciiAlnum(normalized[i])) ++i;
    std::size_t start = i;
    bool has_digit = false;
    while (i < normalized.size() && IsAsciiAlnum(normalized[i])) {
      has_digit = has_digit || (normalized[i] >= '0' && normalized[i] <= '9');
      ++i;
    }
    if (i == start || has_digit) continue;
    std::string token(normalized.substr(start, i - start));
    if (token.size() < options.min_length) continue;
    for (char &c : token) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (stopwords.contains(token)) continue;
    tokens.push_back(std::move(token));
  }
  return tokens;
}

TokenizedDocument PreprocessDocument(const corpus::RawDocument &doc,
                                     const StopWords &stopwords,
                                     const TokenizerOptions &options) {
  TokenizedDocument out;
  out.doc_id = doc.id;
  for (const std::string &token : Tokenize(Normalize(doc.text), stopwords, options)) {
    out.tokens.push_back(PorterStem(token));
  }
  return out;
}

std::vector<TokenizedDocument> PreprocessCorpus(const corpus::Corpus &corpus,
                                                const StopWords &stopwords,
                                                const TokenizerOptions &options) {
  std::vector<TokenizedDocument> docs;
  docs.reserve(corpus.size());
  for (const corpus::RawDocument &doc : corpus.documents()) {
    docs.push_back(PreprocessDocument(doc, stopwords, options));
  }
  return docs;
}

Vocabulary::Vocabulary(std::vector<std::string> terms) : terms_(std::move(terms)) {
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (!index_.emplace(terms_[i], i).second) {
      throw Error(ErrorCode::kValidation, "duplicate vocabulary term \"" + terms_[i] + "\"");
    }
  }
}

std::optional<std::size_t> Vocabulary::index(std::string_view term) const {
  auto it = index_.find(std::string(term));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Vocabulary BuildVocabulary(const std::vector<TokenizedDocument> &docs,
                           std::size_t min_frequency) {
  std::map<std::string, std::size_t> frequency;
  for (const TokenizedDocument &doc : docs) {
    for (const std::string &token : doc.tokens) ++frequency[token];
  }
  std::vector<std::pair<std::string, std::size_t>> kept;
  for (auto &[term, count] : frequency) {
    if (count >= min_frequency) kept.emplace_back(term, count);
  }
  std::stable_sort(kept.begin(), kept.end(), [](const auto &a, const auto &b) {
    return a.second > b.second;
  });
  std::vector<std::string> terms;
  terms.reserve(kept.size());
  for (auto &entry : kept) terms.push_back(std::move(entry.first));
  return Vocabulary(std::move(terms));
}

std::vector<std::size_t> ToIndices(const TokenizedDocument &doc,
                                   const Vocabulary &vocab) {
  std::vector<std::size_t> indices;
  indices.reserve(doc.tokens.size());
  for (const std::string &token : doc.tokens) {
    if (auto index = vocab.index(token)) indices.push_back(*index);
  }
  return indices;
}

}  // namespace retta::text
