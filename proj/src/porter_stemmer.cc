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

#include "retta/porter_stemmer.h"

namespace retta::text {
namespace {

// Working buffer for one word. `end_` is the index of the last character of
// the current stem; `j_` marks the end of the stem left by the last
// successful Ends() call.
class StemBuffer {
 public:
  explicit StemBuffer(std::string_view term)
      : b_(term), end_(static_cast<int>(term.size()) - 1) {}

  std::string Run() {
    if (end_ <= 1) return b_;
    Step1ab();
    if (end_ > 0) {
      Step1c();
      Step2();
      Step3();
      Step4();
      Step5();
    }
    return b_.substr(0, end_ + 1);
  }

 private:
  bool IsConsonant(int i) const {
    switch (b_[i]) {
      case 'a': case 'e': case 'i': case 'o': case 'u':
        return false;
      case 'y':
        return i == 0 ? true : !IsConsonant(i - 1);
      default:
        return true;
    }
  }

  // Number of VC sequences in b_[0..j_].
  int Measure() const {
    int n = 0;
    int i = 0;
    while (true) {
      if (i > j_) return n;
      if (!IsConsonant(i)) break;
      ++i;
    }
    ++i;
    while (true) {
      while (true) {
        if (i > j_) return n;
        if (IsConsonant(i)) break;
        ++i;
      }
      ++i;
      ++n;
      while (true) {
        if (i > j_) return n;
        if (!IsConsonant(i)) break;
        ++i;
      }
      ++i;
    }
  }

  bool VowelInStem() const {
    for (int i = 0; i <= j_; ++i) {
      if (!IsConsonant(i)) return true;
    }
    return false;
  }

  bool DoubleConsonant(int i) const {
    if (i < 1) return false;
    if (b_[i] != b_[i - 1]) return false;
    return IsConsonant(i);
  }

  // consonant-vowel-consonant ending at i, where the last consonant is not
  // w, x or y.
  bool Cvc(int i) const {
    if (i < 2 || !IsConsonant(i) || IsConsonant(i - 1) || !IsConsonant(i - 2)) {
      return false;
    }
    char ch = b_[i];
    return ch != 'w' && ch != 'x' && ch != 'y';
  }

  bool Ends(std::string_view suffix) {
    int length = static_cast<int>(suffix.size());
    if (suffix.back() != b_[end_]) return false;
    if (length > end_ + 1) return false;
    if (std::string_view(b_).substr(end_ - length + 1, length) != suffix) return false;
    j_ = end_ - length;
    return true;
  }

  void SetTo(std::string_view replacement) {
    b_.replace(j_ + 1, end_ - j_, replacement);
    end_ = j_ + static_cast<int>(replacement.size());
  }

  void ReplaceIfMeasured(std::string_view replacement) {
    if (Measure() > 0) SetTo(replacement);
  }

  // Plurals and -ed/-ing.
  void Step1ab() {
    if (b_[end_] == 's') {
      if (Ends("sses")) {
        end_ -= 2;
      } else if (Ends("ies")) {
        SetTo("i");
      } else if (b_[end_ - 1] != 's') {
        --end_;
      }
    }
    if (Ends("eed")) {
      if (Measure() > 0) --end_;
    } else if ((Ends("ed") || Ends("ing")) && VowelInStem()) {
      end_ = j_;
      if (Ends("at")) {
        SetTo("ate");
      } else if (Ends("bl")) {
        SetTo("ble");
      } else if (Ends("iz")) {
        SetTo("ize");
      } else if (DoubleConsonant(end_)) {
        --end_;
        char ch = b_[end_];
        if (ch == 'l' || ch == 's' || ch == 'z') ++end_;
      } else {
        j_ = end_;
        if (Measure() == 1 && Cvc(end_)) SetTo("e");
      }
    }
  }

  // Terminal y -> i when the stem has a vowel.
  void Step1c() {
    if (Ends("y") && VowelInStem()) b_[end_] = 'i';
  }

  // Double suffixes to single ones, keyed on the penultimate letter.
  void Step2() {
    struct Rule { const char *from; const char *to; };
    static constexpr Rule kA[] = {{"ational", "ate"}, {"tional", "tion"}};
    static constexpr Rule kC[] = {{"enci", "ence"}, {"anci", "ance"}};
    static constexpr Rule kE[] = {{"izer", "ize"}};
    static constexpr Rule kL[] = {{"bli", "ble"}, {"alli", "al"}, {"entli", "ent"},
                                  {"eli", "e"}, {"ousli", "ous"}};
    static constexpr Rule kO[] = {{"ization", "ize"}, {"ation", "ate"}, {"ator", "ate"}};
    static constexpr Rule kS[] = {{"alism", "al"}, {"iveness", "ive"},
                                  {"fulness", "ful"}, {"ousness", "ous"}};
    static constexpr Rule kT[] = {{"aliti", "al"}, {"iviti", "ive"}, {"biliti", "ble"}};
    static constexpr Rule kG[] = {{"logi", "log"}};

    auto apply = [this](const auto &rules) {
      for (const Rule &rule : rules) {
        if (Ends(rule.from)) {
          ReplaceIfMeasured(rule.to);
          return;
        }
      }
    };
    if (end_ < 1) return;
    switch (b_[end_ - 1]) {
      case 'a': apply(kA); break;
      case 'c': apply(kC); break;
      case 'e': apply(kE); break;
      case 'l': apply(kL); break;
      case 'o': apply(kO); break;
      case 's': apply(kS); break;
      case 't': apply(kT); break;
      case 'g': apply(kG); break;
      default: break;
    }
  }

  // -ic-, -full, -ness etc.
  void Step3() {
    struct Rule { const char *from; const char *to; };
    static constexpr Rule kE[] = {{"icate", "ic"}, {"ative", ""}, {"alize", "al"}};
    static constexpr Rule kI[] = {{"iciti", "ic"}};
    static constexpr Rule kL[] = {{"ical", "ic"}, {"ful", ""}};
    static constexpr Rule kS[] = {{"ness", ""}};

    auto apply = [this](const auto &rules) {
      for (const Rule &rule : rules) {
        if (Ends(rule.from)) {
          ReplaceIfMeasured(rule.to);
          return;
        }
      }
    };
    switch (b_[end_]) {
      case 'e': apply(kE); break;
      case 'i': apply(kI); break;
      case 'l': apply(kL); break;
      case 's': apply(kS); break;
      default: break;
    }
  }

  // Strips -ant, -ence etc. in context <c>vcvc<v>.
  void Step4() {
    if (end_ < 1) return;
    bool matched = false;
    auto any = [this](std::initializer_list<std::string_view> suffixes) {
      for (std::string_view s : suffixes) {
        if (Ends(s)) return true;
      }
      return false;
    };
    switch (b_[end_ - 1]) {
      case 'a': matched = any({"al"}); break;
      case 'c': matched = any({"ance", "ence"}); break;
      case 'e': matched = any({"er"}); break;
      case 'i': matched = any({"ic"}); break;
      case 'l': matched = any({"able", "ible"}); break;
      case 'n': matched = any({"ant", "ement", "ment", "ent"}); break;
      case 'o':
        if (Ends("ion") && j_ >= 0 && (b_[j_] == 's' || b_[j_] == 't')) {
          matched = true;
        } else {
          matched = any({"ou"});
        }
        break;
      case 's': matched = any({"ism"}); break;
      case 't': matched = any({"ate", "iti"}); break;
      case 'u': matched = any({"ous"}); break;
      case 'v': matched = any({"ive"}); break;
      case 'z': matched = any({"ize"}); break;
      default: break;
    }
    if (matched && Measure() > 1) end_ = j_;
  }

  // Final -e and -ll.
  void Step5() {
    j_ = end_;
    if (b_[end_] == 'e') {
      int m = Measure();
      if (m > 1 || (m == 1 && !Cvc(end_ - 1))) --end_;
    }
    if (b_[end_] == 'l' && DoubleConsonant(end_) && Measure() > 1) --end_;
  }

  std::string b_;
  int end_;
  int j_ = 0;
};

}  // namespace

std::string PorterStem(std::string_view term) {
  if (term.empty()) return std::string();
  return StemBuffer(term).Run();
}

}  // namespace retta::text
