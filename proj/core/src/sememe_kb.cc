// Copyright 2026 The Sememe-SC Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sememe_sc/sememe_kb.h"

#include <algorithm>
#include <numeric>
#include <random>

#include "sememe_sc/errors.h"
#include "sememe_sc/text_io.h"

namespace sememe_sc {

SememeInventory::SememeInventory(std::vector<std::string> ids) {
  for (const auto& id : ids) {
    if (id.empty()) throw PreconditionError("empty sememe identifier");
    if (index_.count(id)) throw PreconditionError("duplicate sememe '" + id + "'");
    index_.emplace(id, ids_.size());
    ids_.push_back(id);
  }
}

std::size_t SememeInventory::Add(std::string_view id) {
  if (id.empty()) throw PreconditionError("empty sememe identifier");
  auto [it, inserted] = index_.try_emplace(std::string(id), ids_.size());
  if (inserted) ids_.emplace_back(id);
  return it->second;
}

std::optional<std::size_t> SememeInventory::Find(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t SememeInventory::IndexOf(std::string_view id) const {
  if (auto found = Find(id)) return *found;
  throw PreconditionError("unknown sememe '" + std::string(id) + "'");
}

std::string_view RuleLabel(CombinationRule rule) {
  switch (rule) {
    case CombinationRule::kAdjN: return "ADJ_N";
    case CombinationRule::kNN: return "N_N";
    case CombinationRule::kVN: return "V_N";
    case CombinationRule::kOther: return "OTHER";
  }
  return "OTHER";
}

std::optional<CombinationRule> ParseRuleLabel(std::string_view label) {
  for (CombinationRule rule : kAllRules) {
    if (RuleLabel(rule) == label) return rule;
  }
  return std::nullopt;
}

std::string_view RuleDisplayName(CombinationRule rule) {
  switch (rule) {
    case CombinationRule::kAdjN: return "Adj-N";
    case CombinationRule::kNN: return "N-N";
    case CombinationRule::kVN: return "V-N";
    case CombinationRule::kOther: return "Other";
  }
  return "Other";
}

namespace {

bool IsSortedSet(const SememeSet& set) {
  return std::adjacent_find(set.begin(), set.end(),
                            [](std::size_t a, std::size_t b) { return a >= b; }) ==
         set.end();
}

void CheckSememeSet(const SememeSet& set, std::size_t inventory_size,
                    const std::string& token) {
  if (!IsSortedSet(set)) {
    throw PreconditionError("sememe set of '" + token + "' is not sorted and unique");
  }
  if (!set.empty() && set.back() >= inventory_size) {
    throw PreconditionError("sememe set of '" + token + "' is out of inventory range");
  }
}

void CheckSplits(const Splits& splits, std::size_t n) {
  std::vector<char> seen(n, 0);
  std::size_t total = 0;
  for (const auto* part : {&splits.train, &splits.valid, &splits.test}) {
    for (std::size_t i : *part) {
      if (i >= n) throw PreconditionError("split index out of range");
      if (seen[i]) throw PreconditionError("splits are not disjoint");
      seen[i] = 1;
      ++total;
    }
  }
  if (total != n) throw PreconditionError("splits do not cover every MWE");
}

}  // namespace

KbDataset::KbDataset(SememeInventory inventory, std::vector<LexEntry> lexicon,
                     std::vector<MweEntry> mwes, std::optional<Splits> splits)
    : inventory_(std::move(inventory)),
      lexicon_(std::move(lexicon)),
      mwes_(std::move(mwes)),
      splits_(std::move(splits)) {
  for (std::size_t i = 0; i < lexicon_.size(); ++i) {
    const LexEntry& entry = lexicon_[i];
    if (entry.sememes.empty()) {
      throw PreconditionError("word '" + entry.token + "' has no sememes");
    }
    CheckSememeSet(entry.sememes, inventory_.size(), entry.token);
    if (!word_index_.emplace(entry.token, i).second) {
      throw PreconditionError("duplicate word '" + entry.token + "'");
    }
  }
  for (std::size_t i = 0; i < mwes_.size(); ++i) {
    const MweEntry& mwe = mwes_[i];
    CheckSememeSet(mwe.sememes, inventory_.size(), mwe.token);
    for (const auto& c : {mwe.constituent1, mwe.constituent2}) {
      if (!word_index_.count(c)) {
        throw PreconditionError("MWE '" + mwe.token + "' has unknown constituent '" +
                                c + "'");
      }
    }
    if (!mwe_index_.emplace(mwe.token, i).second) {
      throw PreconditionError("duplicate MWE '" + mwe.token + "'");
    }
  }
  if (splits_) CheckSplits(*splits_, mwes_.size());
}

const LexEntry* KbDataset::FindWord(std::string_view token) const {
  auto it = word_index_.find(std::string(token));
  return it == word_index_.end() ? nullptr : &lexicon_[it->second];
}

const LexEntry& KbDataset::Word(std::string_view token) const {
  if (const LexEntry* entry = FindWord(token)) return *entry;
  throw PreconditionError("unknown word '" + std::string(token) + "'");
}

std::optional<std::size_t> KbDataset::FindMwe(std::string_view token) const {
  auto it = mwe_index_.find(std::string(token));
  if (it == mwe_index_.end()) return std::nullopt;
  return it->second;
}

KbDataset KbDataset::WithSplits(Splits splits) const {
  return KbDataset(inventory_, lexicon_, mwes_, std::move(splits));
}

bool KbDataset::operator==(const KbDataset& other) const {
  return inventory_ == other.inventory_ && lexicon_ == other.lexicon_ &&
         mwes_ == other.mwes_ && splits_ == other.splits_;
}

namespace {

SememeSet ParseSememeField(std::string_view field, SememeInventory* inventory,
                           std::size_t line_no) {
  SememeSet set;
  if (field.empty()) return set;
  for (std::string_view id : SplitFields(field, ',')) {
    if (id.empty()) throw DataError("empty sememe identifier in list", line_no);
    set.push_back(inventory->Add(id));
  }
  std::sort(set.begin(), set.end());
  set.erase(std::unique(set.begin(), set.end()), set.end());
  return set;
}

std::string JoinSememes(const SememeSet& set, const SememeInventory& inventory) {
  std::string out;
  for (std::size_t i = 0; i < set.size(); ++i) {
    if (i) out += ',';
    out += inventory.id(set[i]);
  }
  return out;
}

}  // namespace

KbDataset ParseKb(std::string_view lexicon_text, std::string_view mwe_text) {
  SememeInventory inventory;
  std::vector<LexEntry> lexicon;
  std::unordered_map<std::string, std::size_t> seen_words;

  const auto lex_lines = SplitLines(lexicon_text);
  for (std::size_t i = 0; i < lex_lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    if (IsSkippableLine(lex_lines[i])) continue;
    const auto fields = SplitFields(lex_lines[i], '\t');
    if (fields.size() != 2) {
      throw DataError("lexicon: expected 2 tab-separated fields, got " +
                          std::to_string(fields.size()),
                      line_no);
    }
    std::string token(fields[0]);
    if (token.empty()) throw DataError("lexicon: empty token", line_no);
    if (!seen_words.emplace(token, line_no).second) {
      throw DataError("lexicon: duplicate token '" + token + "'", line_no);
    }
    SememeSet sememes = ParseSememeField(fields[1], &inventory, line_no);
    if (sememes.empty()) {
      throw DataError("lexicon: empty sememe list for '" + token + "'", line_no);
    }
    lexicon.push_back({std::move(token), std::move(sememes)});
  }

  std::vector<MweEntry> mwes;
  std::unordered_map<std::string, std::size_t> seen_mwes;
  const auto mwe_lines = SplitLines(mwe_text);
  for (std::size_t i = 0; i < mwe_lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    if (IsSkippableLine(mwe_lines[i])) continue;
    const auto fields = SplitFields(mwe_lines[i], '\t');
    if (fields.size() != 5) {
      throw DataError("mwes: expected 5 tab-separated fields, got " +
                          std::to_string(fields.size()),
                      line_no);
    }
    MweEntry mwe;
    mwe.token = std::string(fields[0]);
    if (mwe.token.empty()) throw DataError("mwes: empty token", line_no);
    if (!seen_mwes.emplace(mwe.token, line_no).second) {
      throw DataError("mwes: duplicate token '" + mwe.token + "'", line_no);
    }
    mwe.constituent1 = std::string(fields[1]);
    mwe.constituent2 = std::string(fields[2]);
    for (const auto& c : {mwe.constituent1, mwe.constituent2}) {
      if (!seen_words.count(c)) {
        throw DataError("mwes: unknown constituent '" + c + "'", line_no);
      }
    }
    auto rule = ParseRuleLabel(fields[3]);
    if (!rule) {
      throw DataError("mwes: unknown combination rule '" + std::string(fields[3]) + "'",
                      line_no);
    }
    mwe.rule = *rule;
    mwe.sememes = ParseSememeField(fields[4], &inventory, line_no);
    mwes.push_back(std::move(mwe));
  }
  return KbDataset(std::move(inventory), std::move(lexicon), std::move(mwes));
}

std::string SerializeLexicon(const KbDataset& dataset) {
  std::string out;
  for (const LexEntry& entry : dataset.lexicon()) {
    out += entry.token;
    out += '\t';
    out += JoinSememes(entry.sememes, dataset.inventory());
    out += '\n';
  }
  return out;
}

std::string SerializeMwes(const KbDataset& dataset) {
  std::string out;
  for (const MweEntry& mwe : dataset.mwes()) {
    out += mwe.token + '\t' + mwe.constituent1 + '\t' + mwe.constituent2 + '\t';
    out += RuleLabel(mwe.rule);
    out += '\t';
    out += JoinSememes(mwe.sememes, dataset.inventory());
    out += '\n';
  }
  return out;
}

namespace {

KbDataset FilterOnce(const KbDataset& dataset, std::size_t min_frequency) {
  const SememeInventory& inventory = dataset.inventory();
  std::vector<std::size_t> counts(inventory.size(), 0);
  for (const LexEntry& entry : dataset.lexicon()) {
    for (std::size_t s : entry.sememes) ++counts[s];
  }
  for (const MweEntry& mwe : dataset.mwes()) {
    for (std::size_t s : mwe.sememes) ++counts[s];
  }

  constexpr std::size_t kDropped = static_cast<std::size_t>(-1);
  std::vector<std::size_t> remap(inventory.size(), kDropped);
  std::vector<std::string> kept_ids;
  for (std::size_t s = 0; s < inventory.size(); ++s) {
    if (counts[s] >= min_frequency) {
      remap[s] = kept_ids.size();
      kept_ids.push_back(inventory.id(s));
    }
  }
  auto remap_set = [&](const SememeSet& set) {
    SememeSet out;
    for (std::size_t s : set) {
      if (remap[s] != kDropped) out.push_back(remap[s]);
    }
    return out;
  };

  std::vector<LexEntry> lexicon;
  std::unordered_map<std::string, bool> word_kept;
  for (const LexEntry& entry : dataset.lexicon()) {
    SememeSet sememes = remap_set(entry.sememes);
    word_kept[entry.token] = !sememes.empty();
    if (!sememes.empty()) lexicon.push_back({entry.token, std::move(sememes)});
  }

  std::vector<MweEntry> mwes;
  std::vector<std::size_t> mwe_remap(dataset.mwes().size(), kDropped);
  for (std::size_t i = 0; i < dataset.mwes().size(); ++i) {
    const MweEntry& mwe = dataset.mwes()[i];
    if (!word_kept[mwe.constituent1] || !word_kept[mwe.constituent2]) continue;
    MweEntry copy = mwe;
    copy.sememes = remap_set(mwe.sememes);
    mwe_remap[i] = mwes.size();
    mwes.push_back(std::move(copy));
  }

  std::optional<Splits> splits;
  if (dataset.splits()) {
    splits.emplace();
    auto carry = [&](const std::vector<std::size_t>& in, std::vector<std::size_t>* out) {
      for (std::size_t i : in) {
        if (mwe_remap[i] != kDropped) out->push_back(mwe_remap[i]);
      }
    };
    carry(dataset.splits()->train, &splits->train);
    carry(dataset.splits()->valid, &splits->valid);
    carry(dataset.splits()->test, &splits->test);
  }
  return KbDataset(SememeInventory(std::move(kept_ids)), std::move(lexicon),
                   std::move(mwes), std::move(splits));
}

}  // namespace

KbDataset FilterSememes(const KbDataset& dataset, int min_frequency) {
  if (min_frequency < 1) throw PreconditionError("min_frequency must be >= 1");
  // Dropping an MWE lowers the counts of its sememes, so repeat until stable.
  KbDataset current = FilterOnce(dataset, static_cast<std::size_t>(min_frequency));
  while (true) {
    KbDataset next = FilterOnce(current, static_cast<std::size_t>(min_frequency));
    if (next.inventory().size() == current.inventory().size() &&
        next.mwes().size() == current.mwes().size()) {
      return current;
    }
    current = std::move(next);
  }
}

namespace {

template <typename Set>
ScdLevel ScdFromSets(const Set& mwe, const Set& c1, const Set& c2) {
  if (mwe.empty() || c1.empty() || c2.empty()) {
    throw PreconditionError("SCD is undefined for empty sememe sets");
  }
  Set united;
  std::set_union(c1.begin(), c1.end(), c2.begin(), c2.end(),
                 std::inserter(united, united.end()));
  std::size_t shared = 0;
  for (const auto& s : mwe) {
    if (std::binary_search(united.begin(), united.end(), s)) ++shared;
  }
  if (shared == mwe.size() && mwe.size() == united.size()) return ScdLevel::k3;
  if (shared == mwe.size()) return ScdLevel::k2;
  if (shared > 0) return ScdLevel::k1;
  return ScdLevel::k0;
}

}  // namespace

ScdLevel ComputeScd(const SememeSet& mwe, const SememeSet& constituent1,
                    const SememeSet& constituent2) {
  return ScdFromSets(mwe, constituent1, constituent2);
}

ScdLevel ComputeScd(const std::set<std::string>& mwe,
                    const std::set<std::string>& constituent1,
                    const std::set<std::string>& constituent2) {
  return ScdFromSets(mwe, constituent1, constituent2);
}

ScdLevel MweScd(const KbDataset& dataset, std::size_t mwe_index) {
  const MweEntry& mwe = dataset.mwes().at(mwe_index);
  if (mwe.sememes.empty()) {
    throw PreconditionError("MWE '" + mwe.token + "' has no sememe annotation");
  }
  return ComputeScd(mwe.sememes, dataset.Word(mwe.constituent1).sememes,
                    dataset.Word(mwe.constituent2).sememes);
}

KbDataset SplitDataset(const KbDataset& dataset, SplitRatios ratios,
                       std::uint64_t seed) {
  if (ratios.train == 0 || ratios.valid == 0 || ratios.test == 0) {
    throw PreconditionError("split ratios must be positive");
  }
  const std::size_t n = dataset.mwes().size();
  if (n < 3) throw PreconditionError("need at least 3 MWEs to split");
  const std::size_t total = ratios.train + ratios.valid + ratios.test;
  const std::size_t n_valid = std::max<std::size_t>(1, n * ratios.valid / total);
  const std::size_t n_test = std::max<std::size_t>(1, n * ratios.test / total);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);

  Splits splits;
  const auto begin = order.begin();
  splits.valid.assign(begin, begin + n_valid);
  splits.test.assign(begin + n_valid, begin + n_valid + n_test);
  splits.train.assign(begin + n_valid + n_test, order.end());
  for (auto* part : {&splits.train, &splits.valid, &splits.test}) {
    std::sort(part->begin(), part->end());
  }
  return dataset.WithSplits(std::move(splits));
}

std::map<ScdLevel, std::vector<std::size_t>> PartitionByScd(
    const KbDataset& dataset, std::span<const std::size_t> mwe_indices) {
  std::map<ScdLevel, std::vector<std::size_t>> buckets;
  for (std::size_t i : mwe_indices) buckets[MweScd(dataset, i)].push_back(i);
  return buckets;
}

std::map<CombinationRule, std::vector<std::size_t>> PartitionByRule(
    const KbDataset& dataset, std::span<const std::size_t> mwe_indices) {
  std::map<CombinationRule, std::vector<std::size_t>> buckets;
  for (std::size_t i : mwe_indices) buckets[dataset.mwes().at(i).rule].push_back(i);
  return buckets;
}

std::map<CombinationRule, double> MeanScdByRule(
    const KbDataset& dataset, std::span<const std::size_t> mwe_indices) {
  std::map<CombinationRule, std::pair<double, std::size_t>> sums;
  for (std::size_t i : mwe_indices) {
    const MweEntry& mwe = dataset.mwes().at(i);
    if (mwe.sememes.empty()) continue;
    auto& [sum, count] = sums[mwe.rule];
    sum += ScdValue(MweScd(dataset, i));
    ++count;
  }
  std::map<CombinationRule, double> means;
  for (const auto& [rule, acc] : sums) {
    means[rule] = acc.first / static_cast<double>(acc.second);
  }
  return means;
}

std::vector<std::size_t> AllMweIndices(const KbDataset& dataset) {
  std::vector<std::size_t> indices(dataset.mwes().size());
  std::iota(indices.begin(), indices.end(), 0);
  return indices;
}

}  // namespace sememe_sc
