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

#ifndef RETTA_RULES_H_
#define RETTA_RULES_H_

#include <cstddef>
#include <set>
#include <string>
#include <vector>

#include "retta/preprocess.h"

namespace retta::rules {

// Sorted, duplicate-free list of terms.
using ItemSet = std::vector<std::string>;

struct Transaction {
  std::string doc_id;
  std::set<std::string> items;
};

// Distinct tokens of a document.
Transaction MakeTransaction(const text::TokenizedDocument &doc);

struct FrequentItemset {
  ItemSet items;
  std::size_t count = 0;
  double support = 0;
};

struct AssociationRule {
  ItemSet antecedent;
  ItemSet consequent;
  double support = 0;     // support(antecedent u consequent)
  double confidence = 0;  // support(A u C) / support(A)
  double lift = 0;        // confidence / support(C)

  bool operator==(const AssociationRule &) const = default;
};

struct MiningParams {
  double min_support = 0.05;
  double min_confidence = 0.6;
  std::size_t max_itemset_size = 4;

  bool operator==(const MiningParams &) const = default;
};

// Level-wise Apriori. Itemsets are returned by size, then lexicographically.
// An itemset is frequent when count / |transactions| >= min_support.
std::vector<FrequentItemset> FrequentItemsets(const std::vector<Transaction> &transactions,
                                              double min_support,
                                              std::size_t max_itemset_size);

// Rules from every frequent itemset of size >= 2 with confidence >=
// min_confidence, sorted by confidence desc, support desc, then
// (antecedent, consequent). Throws Error(kEmptyInput) for no transactions
// and Error(kParameter) for thresholds outside (0, 1].
std::vector<AssociationRule> MineRules(const std::vector<Transaction> &transactions,
                                       const MiningParams &params);

// seeds plus the consequents of every rule whose antecedent is within seeds.
// One step only; not a transitive closure.
std::set<std::string> ExpandTerms(const std::vector<AssociationRule> &rules,
                                  const std::set<std::string> &seeds);

// {"antecedent":[..],"consequent":[..],"support":0.666667,...} with fixed
// six-decimal numbers.
std::string FormatRule(const AssociationRule &rule);

}  // namespace retta::rules

#endif  // RETTA_RULES_H_
