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

// Sememe-annotated lexicons: inventory, words, two-constituent MWEs, and the
// rule-based semantic-compositionality degree (SCD) of an MWE.

#ifndef SEMEME_SC_SEMEME_KB_H_
#define SEMEME_SC_SEMEME_KB_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace sememe_sc {

// Sorted, duplicate-free list of inventory positions.
using SememeSet = std::vector<std::size_t>;

class SememeInventory {
 public:
  SememeInventory() = default;
  explicit SememeInventory(std::vector<std::string> ids);

  // Returns the position of `id`, appending it when new.
  std::size_t Add(std::string_view id);

  std::optional<std::size_t> Find(std::string_view id) const;
  // Throws PreconditionError for unknown identifiers.
  std::size_t IndexOf(std::string_view id) const;

  const std::string& id(std::size_t index) const { return ids_.at(index); }
  const std::vector<std::string>& ids() const { return ids_; }
  std::size_t size() const { return ids_.size(); }

  bool operator==(const SememeInventory& other) const { return ids_ == other.ids_; }

 private:
  std::vector<std::string> ids_;
  std::unordered_map<std::string, std::size_t> index_;
};

enum class CombinationRule { kAdjN = 0, kNN = 1, kVN = 2, kOther = 3 };

inline constexpr std::array<CombinationRule, 4> kAllRules = {
    CombinationRule::kAdjN, CombinationRule::kNN, CombinationRule::kVN,
    CombinationRule::kOther};

// File labels: ADJ_N, N_N, V_N, OTHER.
std::string_view RuleLabel(CombinationRule rule);
std::optional<CombinationRule> ParseRuleLabel(std::string_view label);
// Report labels: Adj-N, N-N, V-N, Other.
std::string_view RuleDisplayName(CombinationRule rule);
inline std::size_t RuleIndex(CombinationRule rule) {
  return static_cast<std::size_t>(rule);
}

// Larger means more compositional.
enum class ScdLevel : int { k0 = 0, k1 = 1, k2 = 2, k3 = 3 };

inline int ScdValue(ScdLevel level) { return static_cast<int>(level); }

struct LexEntry {
  std::string token;
  SememeSet sememes;

  bool operator==(const LexEntry&) const = default;
};

struct MweEntry {
  std::string token;
  std::string constituent1;
  std::string constituent2;
  CombinationRule rule = CombinationRule::kOther;
  SememeSet sememes;  // empty when unannotated

  bool operator==(const MweEntry&) const = default;
};

struct Splits {
  std::vector<std::size_t> train;
  std::vector<std::size_t> valid;
  std::vector<std::size_t> test;

  bool operator==(const Splits&) const = default;
};

// Immutable after construction. The constructor checks every invariant:
// non-empty lexicon sememe sets, in-range sememe positions, unique tokens,
// resolvable constituents, and (when present) splits that partition the MWEs.
class KbDataset {
 public:
  KbDataset() = default;
  KbDataset(SememeInventory inventory, std::vector<LexEntry> lexicon,
            std::vector<MweEntry> mwes, std::optional<Splits> splits = {});

  const SememeInventory& inventory() const { return inventory_; }
  const std::vector<LexEntry>& lexicon() const { return lexicon_; }
  const std::vector<MweEntry>& mwes() const { return mwes_; }
  const std::optional<Splits>& splits() const { return splits_; }

  const LexEntry* FindWord(std::string_view token) const;
  // Throws PreconditionError for unknown tokens.
  const LexEntry& Word(std::string_view token) const;
  std::optional<std::size_t> FindMwe(std::string_view token) const;

  KbDataset WithSplits(Splits splits) const;

  bool operator==(const KbDataset& other) const;

 private:
  SememeInventory inventory_;
  std::vector<LexEntry> lexicon_;
  std::vector<MweEntry> mwes_;
  std::optional<Splits> splits_;
  std::unordered_map<std::string, std::size_t> word_index_;
  std::unordered_map<std::string, std::size_t> mwe_index_;
};

// Parses the lexicon and MWE text formats. Errors are DataError with the
// offending 1-based line number.
KbDataset ParseKb(std::string_view lexicon_text, std::string_view mwe_text);

std::string SerializeLexicon(const KbDataset& dataset);
std::string SerializeMwes(const KbDataset& dataset);

// Drops sememes annotated on fewer than `min_frequency` entries (words and
// annotated MWEs both count), then words left without sememes and MWEs built
// on those words, repeating until nothing changes. Existing splits are carried
// over with renumbered indices.
KbDataset FilterSememes(const KbDataset& dataset, int min_frequency);

// Throws PreconditionError if any set is empty: the conditions overlap there.
ScdLevel ComputeScd(const SememeSet& mwe, const SememeSet& constituent1,
                    const SememeSet& constituent2);
ScdLevel ComputeScd(const std::set<std::string>& mwe,
                    const std::set<std::string>& constituent1,
                    const std::set<std::string>& constituent2);

// SCD of the MWE at `mwe_index` from its own and its constituents' sememes.
ScdLevel MweScd(const KbDataset& dataset, std::size_t mwe_index);

struct SplitRatios {
  unsigned train = 8;
  unsigned valid = 1;
  unsigned test = 1;
};

// Shuffles MWE indices with `seed`. Valid and test get the floor of their
// proportional share (at least one each); train takes the remainder.
KbDataset SplitDataset(const KbDataset& dataset, SplitRatios ratios,
                       std::uint64_t seed);

std::map<ScdLevel, std::vector<std::size_t>> PartitionByScd(
    const KbDataset& dataset, std::span<const std::size_t> mwe_indices);
std::map<CombinationRule, std::vector<std::size_t>> PartitionByRule(
    const KbDataset& dataset, std::span<const std::size_t> mwe_indices);
// Mean SCD per rule bucket; MWEs without sememes are skipped, empty buckets
// are absent.
std::map<CombinationRule, double> MeanScdByRule(
    const KbDataset& dataset, std::span<const std::size_t> mwe_indices);

std::vector<std::size_t> AllMweIndices(const KbDataset& dataset);

}  // namespace sememe_sc

#endif  // SEMEME_SC_SEMEME_KB_H_
