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

#include "retta/rules.h"

#include <algorithm>
#include <iomanip>
#include <map>
#include <sstream>

#include "json.hpp"
#include "retta/error.h"

namespace retta::rules {
namespace {

using Ids = std::vector<std::size_t>;  // sorted item ids

bool Contains(const Ids &transaction, const Ids &candidate) {
  return std::includes(transaction.begin(), transaction.end(), candidate.begin(),
                       candidate.end());
}

void ValidateThreshold(double value, const char *name) {
  if (!(value > 0 && value <= 1)) {
    throw Error(ErrorCode::kParameter, std::string(name) + " must be in (0, 1]");
  }
}

std::string FixedSix(double value) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(6) << value;
  return out.str();
}

}  // namespace

Transaction MakeTransaction(const text::TokenizedDocument &doc) {
  return Transaction{doc.doc_id, std::set<std::string>(doc.tokens.begin(), doc.tokens.end())};
}

std::vector<FrequentItemset> FrequentItemsets(const std::vector<Transaction> &transactions,
                                              double min_support,
                                              std::size_t max_itemset_size) {
  if (transactions.empty()) throw Error(ErrorCode::kEmptyInput, "no transactions");
  ValidateThreshold(min_support, "min_support");
  if (max_itemset_size < 1) {
    throw Error(ErrorCode::kParameter, "max_itemset_size must be at least 1");
  }

  // Items get ids in lexicographic order so id order equals term order.
  std::map<std::string, std::size_t> item_ids;
  for (const Transaction &t : transactions) {
    for (const std::string &item : t.items) item_ids.emplace(item, 0);
  }
  std::vector<std::string> names;
  for (auto &[item, id] : item_ids) {
    id = names.size();
    names.push_back(item);
  }
  std::vector<Ids> baskets;
  baskets.reserve(transactions.size());
  for (const Transaction &t : transactions) {
    Ids ids;
    for (const std::string &item : t.items) ids.push_back(item_ids[item]);
    baskets.push_back(std::move(ids));  // std::set iteration keeps ids sorted
  }

  const double n = static_cast<double>(transactions.size());
  auto frequent = [&](std::size_t count) {
    return static_cast<double>(count) / n >= min_support;
  };

  std::vector<FrequentItemset> result;
  std::vector<Ids> level;
  {
    std::vector<std::size_t> counts(names.size(), 0);
    for (const Ids &basket : baskets) {
      for (std::size_t id : basket) ++counts[id];
    }
    for (std::size_t id = 0; id < names.size(); ++id) {
      if (frequent(counts[id])) {
        level.push_back({id});
        result.push_back({{names[id]}, counts[id], static_cast<double>(counts[id]) / n});
      }
    }
  }

  for (std::size_t size = 2; size <= max_itemset_size && level.size() >= 2; ++size) {
    std::set<Ids> previous(level.begin(), level.end());
    std::vector<Ids> candidates;
    // Join itemsets sharing their first size-2 items; `level` is sorted.
    for (std::size_t a = 0; a < level.size(); ++a) {
      for (std::size_t b = a + 1; b < level.size(); ++b) {
        if (!std::equal(level[a].begin(), level[a].end() - 1, level[b].begin())) break;
        Ids joined = level[a];
        joined.push_back(level[b].back());
        bool all_subsets_frequent = true;
        for (std::size_t drop = 0; drop + 2 < joined.size() && all_subsets_frequent; ++drop) {
          Ids subset;
          for (std::size_t i = 0; i < joined.size(); ++i) {
            if (i != drop) subset.push_back(joined[i]);
          }
          all_subsets_frequent = previous.contains(subset);
        }
        if (all_subsets_frequent) candidates.push_back(std::move(joined));
      }
    }
    std::vector<Ids> next;
    for (Ids &candidate : candidates) {
      std::size_t count = 0;
      for (const Ids &basket : baskets) {
        if (Contains(basket, candidate)) ++count;
      }
      if (!frequent(count)) continue;
      ItemSet items;
      for (std::size_t id : candidate) items.push_back(names[id]);
      result.push_back({std::move(items), count, static_cast<double>(count) / n});
      next.push_back(std::move(candidate));
    }
    level = std::move(next);
  }
  return result;
}

std::vector<AssociationRule> MineRules(const std::vector<Transaction> &transactions,
                                       const MiningParams &params) {
  if (transactions.empty()) throw Error(ErrorCode::kEmptyInput, "no transactions");
  ValidateThreshold(params.min_support, "min_support");
  ValidateThreshold(params.min_confidence, "min_confidence");

  std::vector<FrequentItemset> itemsets =
      FrequentItemsets(transactions, params.min_support, params.max_itemset_size);
  std::map<ItemSet, double> support;
  for (const FrequentItemset &f : itemsets) support.emplace(f.items, f.support);

  std::vector<AssociationRule> rules;
  for (const FrequentItemset &f : itemsets) {
    const std::size_t size = f.items.size();
    if (size < 2) continue;
    for (std::size_t mask = 1; mask + 1 < (std::size_t{1} << size); ++mask) {
      AssociationRule rule;
      for (std::size_t i = 0; i < size; ++i) {
        (mask >> i & 1 ? rule.antecedent : rule.consequent).push_back(f.items[i]);
      }
      rule.support = f.support;
      rule.confidence = f.support / support.at(rule.antecedent);
      if (rule.confidence < params.min_confidence) continue;
      rule.lift = rule.confidence / support.at(rule.consequent);
      rules.push_back(std::move(rule));
    }
  }
  std::sort(rules.begin(), rules.end(), [](const AssociationRule &a, const AssociationRule &b) {
    if (a.confidence != b.confidence) return a.confidence > b.confidence;
    if (a.support != b.support) return a.support > b.support;
    if (a.antecedent != b.antecedent) return a.antecedent < b.antecedent;
    return a.consequent < b.consequent;
  });
  return rules;
}

std::set<std::string> ExpandTerms(const std::vector<AssociationRule> &rules,
                                  const std::set<std::string> &seeds) {
  std::set<std::string> expanded = seeds;
  for (const AssociationRule &rule : rules) {
    bool applies = std::all_of(rule.antecedent.begin(), rule.antecedent.end(),
                               [&](const std::string &term) { return seeds.contains(term); });
    if (applies) expanded.insert(rule.consequent.begin(), rule.consequent.end());
  }
  return expanded;
}

std::string FormatRule(const AssociationRule &rule) {
  return "{\"antecedent\":" + nlohmann::json(rule.antecedent).dump() +
         ",\"consequent\":" + nlohmann::json(rule.consequent).dump() +
         ",\"support\":" + FixedSix(rule.support) +
         ",\"confidence\":" + FixedSix(rule.confidence) + ",\"lift\":" + FixedSix(rule.lift) +
         "}";
}

}  // namespace retta::rules
