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
#include <random>
#include <sstream>

#include "doctest.h"
#include "retta/porter_stemmer.h"
#include "test_util.h"

namespace {

using namespace retta;
using namespace retta::text;

StopWords Words(std::initializer_list<const char *> words) {
  StopWords set;
  for (const char *w : words) set.insert(w);
  return set;
}

const StopWords &Shipped() {
  static const StopWords words = LoadStopWords(testing_util::SourcePath("data/stopwords_en.txt"));
  return words;
}

TEST_CASE("normalize examples") {
  CHECK(Normalize("Signal <b>BROKEN</b> again") == "signal broken again");
  CHECK(Normalize("") == "");
  CHECK(Normalize("see https://x.co/a now") == "see now");
  CHECK(Normalize("  tabs\tand\nnewlines  ") == "tabs and newlines");
  CHECK(Normalize("HTTP://X.CO/A done") == "done");
  CHECK(Normalize("no\xC2\xA0" "break") == "no break");  // U+00A0
  CHECK(Normalize("ideo\xE3\x80\x80space") == "ideo space");  // U+3000
  CHECK(Normalize("a<br/>b") == "a b");
  CHECK(Normalize("Café") == "café");
}

TEST_CASE("normalize is idempotent") {
  const std::vector<std::string> pieces = {
      "<", ">", "<b>", "</i>", "http", "https://", "://", "x.co/", " ", "\t", "\n", "A", "b",
      "Z", "9", "#", "\xC2\xA0", "\xE2\x80\x83", "é", "<http://a>", "h", "ttp", "s"};
  std::mt19937_64 gen(5);
  for (int trial = 0; trial < 5000; ++trial) {
    std::string text;
    int n = static_cast<int>(gen() % 12);
    for (int i = 0; i < n; ++i) text += pieces[gen() % pieces.size()];
    std::string once = Normalize(text);
    INFO("input: ", text);
    REQUIRE(Normalize(once) == once);
  }
}

TEST_CASE("tokenize examples") {
  CHECK(Tokenize("the signal at 5th is red", Words({"the", "at", "is"})) ==
        std::vector<std::string>{"signal", "red"});
  CHECK(Tokenize("the of and", Words({"the", "of", "and"})).empty());
  CHECK(Tokenize("", {}).empty());
  CHECK(Tokenize("a b cd", {}) == std::vector<std::string>{"cd"});
  CHECK(Tokenize("wait-time, left_turn!", {}) ==
        std::vector<std::string>{"wait", "time", "left", "turn"});
  CHECK(Tokenize("a b cd", {}, TokenizerOptions{1}) == std::vector<std::string>{"a", "b", "cd"});
}

TEST_CASE("tokenize never emits stop words, digits or short tokens") {
  const StopWords &stop = Shipped();
  const std::string alphabet = "abcdefghijklmnopqrstuvwxyz0123456789 .,-#'_/";
  std::mt19937_64 gen(9);
  std::vector<std::string> stop_list(stop.begin(), stop.end());
  for (int trial = 0; trial < 3000; ++trial) {
    std::string text;
    int n = static_cast<int>(gen() % 60);
    for (int i = 0; i < n; ++i) {
      if (gen() % 8 == 0) {
        text += " " + stop_list[gen() % stop_list.size()] + " ";
      } else {
        text += alphabet[gen() % alphabet.size()];
      }
    }
    for (const std::string &token : Tokenize(Normalize(text), stop)) {
      REQUIRE(token.size() >= 2);
      REQUIRE_FALSE(stop.count(token));
      REQUIRE(std::none_of(token.begin(), token.end(), ::isdigit));
      REQUIRE(std::all_of(token.begin(), token.end(), ::islower));
    }
  }
}

TEST_CASE("shipped stop-word list has 175 entries") {
  CHECK(Shipped().size() == 175);
  CHECK(Shipped().count("the"));
  CHECK_FALSE(Shipped().count("signal"));
}

TEST_CASE("stop-word files skip comments and blanks") {
  std::istringstream in("# comment\nthe\n\n  of \n#also\n");
  CHECK(ParseStopWords(in) == Words({"the", "of"}));
}

TEST_CASE("stem examples") {
  CHECK(PorterStem("caresses") == "caress");
  CHECK(PorterStem("ponies") == "poni");
  CHECK(PorterStem("run") == "run");
  CHECK(PorterStem("malfunctioning") == "malfunct");
  CHECK(PorterStem("accident") == "accid");
  CHECK(PorterStem("lights") == "light");
  CHECK(PorterStem("a") == "a");
  CHECK(PorterStem("") == "");
}

TEST_CASE("stem agrees with the reference vocabulary") {
  std::ifstream voc(testing_util::SourcePath("tests/data/porter/voc.txt"));
  std::ifstream out(testing_util::SourcePath("tests/data/porter/output.txt"));
  REQUIRE(voc);
  REQUIRE(out);
  std::string word;
  std::string expected;
  std::size_t total = 0;
  std::size_t mismatches = 0;
  while (std::getline(voc, word) && std::getline(out, expected)) {
    ++total;
    if (PorterStem(word) != expected) {
      if (++mismatches < 10) MESSAGE(word, " -> ", PorterStem(word), " expected ", expected);
    }
  }
  CHECK(total == 23531);
  CHECK(mismatches == 0);
}

TEST_CASE("preprocess_document composes the stages") {
  corpus::RawDocument doc =
      testing_util::Doc("t1", "Traffic lights MALFUNCTIONING <b>again</b>!!");
  TokenizedDocument tokens = PreprocessDocument(doc, Shipped());
  CHECK(tokens.doc_id == "t1");
  REQUIRE(tokens.tokens.size() >= 3);
  CHECK(tokens.tokens[0] == "traffic");
  CHECK(tokens.tokens[1] == "light");
  CHECK(tokens.tokens[2] == PorterStem("malfunctioning"));
  CHECK(tokens.token_count() == tokens.tokens.size());
  CHECK(PreprocessDocument(doc, Shipped()) == tokens);

  CHECK(PreprocessDocument(testing_util::Doc("t2", "the of and it"), Shipped()).tokens.empty());
}

TEST_CASE("stop words are removed before stemming") {
  // Stemming first would turn "does" into "doe", which is not on the list.
  auto tokens = PreprocessDocument(testing_util::Doc("x", "does doing signals"), Shipped());
  CHECK(tokens.tokens == std::vector<std::string>{"signal"});
}

TEST_CASE("hashtags lose their marker but keep their text") {
  auto tokens = PreprocessDocument(testing_util::Doc("x", "#SignalFail lights"), Shipped());
  CHECK(tokens.tokens == std::vector<std::string>{"signalfail", "light"});
}

TokenizedDocument Tokens(std::vector<std::string> tokens) { return {"d", std::move(tokens)}; }

TEST_CASE("build_vocabulary orders by frequency then term") {
  std::vector<TokenizedDocument> docs = {Tokens({"a", "b", "a", "c"}), Tokens({"a", "b", "a"}),
                                         Tokens({"a"})};
  Vocabulary vocab = BuildVocabulary(docs, 2);
  REQUIRE(vocab.size() == 2);
  CHECK(vocab.term(0) == "a");
  CHECK(vocab.term(1) == "b");
  CHECK_FALSE(vocab.index("c"));

  CHECK(BuildVocabulary({}, 1).size() == 0);
  CHECK(BuildVocabulary(docs, 1).size() == 3);
  Vocabulary ties = BuildVocabulary({Tokens({"z", "y", "x"})}, 1);
  CHECK(ties.terms() == std::vector<std::string>{"x", "y", "z"});
}

TEST_CASE("vocabulary is a bijection") {
  std::mt19937_64 gen(13);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<TokenizedDocument> docs;
    for (int d = 0; d < 5; ++d) {
      std::vector<std::string> tokens;
      for (int i = 0; i < 20; ++i) tokens.push_back(std::string(1 + gen() % 2, 'a' + gen() % 8));
      docs.push_back(Tokens(tokens));
    }
    Vocabulary vocab = BuildVocabulary(docs, 1 + gen() % 3);
    for (std::size_t i = 0; i < vocab.size(); ++i) REQUIRE(*vocab.index(vocab.term(i)) == i);
  }
}

TEST_CASE("ToIndices drops out-of-vocabulary tokens") {
  Vocabulary vocab({"signal", "light"});
  CHECK(ToIndices(Tokens({"light", "bus", "signal"}), vocab) == std::vector<std::size_t>{1, 0});
}

}  // namespace
