// Copyright 2026 The BiVert Authors.
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

// Word-pair relation categories and their costs.

#ifndef BIVERT_CORE_RELATION_HPP
#define BIVERT_CORE_RELATION_HPP

#include <array>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>

namespace bivert {

enum class RelationCategory {
  kSame,
  kExtra,
  kMissing,
  kStopword,
  kInflection,
  kDerivation,
  kSense,
};

inline constexpr std::array<RelationCategory, 7> kAllCategories = {
    RelationCategory::kSame,       RelationCategory::kExtra,
    RelationCategory::kMissing,    RelationCategory::kStopword,
    RelationCategory::kInflection, RelationCategory::kDerivation,
    RelationCategory::kSense,
};

std::string_view category_name(RelationCategory c);

struct RelationRecord {
  RelationCategory category;
  std::optional<std::string> src_word;
  std::optional<std::string> back_word;
  double cost;

  bool operator==(const RelationRecord&) const = default;
};

// Per-language stopword sets, lemma tables and derivational pairs. Lookups
// are total: unknown words are their own lemma and belong to no set.
class LexiconBundle {
 public:
  // Reads <dir>/stopwords/<lang>.txt, <dir>/lemmas/<lang>.tsv and
  // <dir>/derivations/<lang>.tsv for every language found.
  static LexiconBundle load(const std::filesystem::path& dir);

  void add_stopword(const std::string& lang, const std::string& word);
  void add_lemma(const std::string& lang, const std::string& surface,
                 const std::string& lemma);
  void add_derivation(const std::string& lang, const std::string& a, const std::string& b);

  bool is_stopword(std::string_view lang, std::string_view word) const;
  std::string lemmatize(std::string_view word, std::string_view lang) const;
  bool is_derivation(std::string_view lang, std::string_view lemma_a,
                     std::string_view lemma_b) const;

  std::size_t stopword_count(std::string_view lang) const;
  std::size_t lemma_count(std::string_view lang) const;

  // Off by default. Falls back to comparing suffix-stripped stems when the
  // derivation table has no entry.
  bool stem_fallback = false;

 private:
  struct PerLanguage {
    std::unordered_set<std::string> stopwords;
    std::unordered_map<std::string, std::string> lemmas;
    std::set<std::pair<std::string, std::string>> derivations;
  };
  const PerLanguage* find(std::string_view lang) const;

  std::map<std::string, PerLanguage, std::less<>> langs_;
};

// Cost of a pair that reaches the Sense step. Receives the surfaces and the
// representative cosine similarity.
using SenseCostFn =
    std::function<double(std::string_view src, std::string_view back, double similarity)>;

// Decision cascade: Missing, Extra, Same, Stopword, Inflection, Derivation,
// Sense. `src_len` is the preprocessed source word count.
RelationRecord classify_pair(std::optional<std::string_view> src_word,
                             std::optional<std::string_view> back_word, std::size_t src_len,
                             double similarity, std::string_view lang,
                             const LexiconBundle& lexicon, const SenseCostFn& sense_cost);

}  // namespace bivert

#endif  // BIVERT_CORE_RELATION_HPP
