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

// Sentence data model, language-specific text normalization and the
// line-delimited dataset format.

#ifndef BIVERT_CORE_CORPUS_HPP
#define BIVERT_CORE_CORPUS_HPP

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bivert {

struct Word {
  std::string surface;
  // Indices into the sentence token stream, ascending and contiguous.
  std::vector<std::size_t> token_indices;

  bool operator==(const Word&) const = default;
};

struct TokenizedSentence {
  std::string lang;
  std::vector<Word> words;
  std::string raw_text;

  std::size_t len() const { return words.size(); }
  std::size_t token_count() const;
  // Word index owning each token.
  std::vector<std::size_t> token_owners() const;

  bool operator==(const TokenizedSentence&) const = default;
};

// Dense per-token vectors, stored row-major.
class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  EmbeddingTable(std::size_t dim, std::vector<double> data);
  static EmbeddingTable from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return dim_ == 0 ? 0 : data_.size() / dim_; }
  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * dim_, dim_};
  }
  const std::vector<double>& data() const { return data_; }

  bool operator==(const EmbeddingTable&) const = default;

 private:
  std::size_t dim_ = 0;
  std::vector<double> data_;
};

struct SentencePairRecord {
  std::string id;
  std::string system;
  TokenizedSentence source;
  TokenizedSentence back;
  EmbeddingTable source_emb;
  EmbeddingTable back_emb;
  std::optional<double> human_score;

  bool operator==(const SentencePairRecord&) const = default;
};

// English: lowercase, expand contractions, collapse whitespace.
// Chinese: keep Han-script characters only.
// Anything else: lowercase only.
// Throws DegenerateSentence when nothing survives.
std::string preprocess(std::string_view text, std::string_view lang);

// Contraction expansion table used by the English normalizer.
std::optional<std::string_view> expand_contraction(std::string_view word);

// Checks the word/token partition and the embedding shape. `line` is only
// used for error messages.
void validate_sentence(const TokenizedSentence& sentence,
                       const EmbeddingTable& emb, std::size_t line = 0);

std::vector<SentencePairRecord> parse_dataset(std::istream& in);
std::vector<SentencePairRecord> load_dataset(const std::filesystem::path& path);
void write_dataset(std::ostream& out, std::span<const SentencePairRecord> records);

}  // namespace bivert

#endif  // BIVERT_CORE_CORPUS_HPP
