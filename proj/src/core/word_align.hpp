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

#ifndef BIVERT_CORE_WORD_ALIGN_HPP
#define BIVERT_CORE_WORD_ALIGN_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "corpus.hpp"

namespace bivert {

struct WordPair {
  std::size_t src;
  std::size_t back;
  // Cosine similarity of the token match that decided the pairing.
  double similarity;

  bool operator==(const WordPair&) const = default;
};

struct WordPairing {
  // Sorted by source word index.
  std::vector<WordPair> pairs;
  std::vector<std::size_t> missing_src;
  std::vector<std::size_t> extra_back;
};

// Aligns tokens with an exact assignment, then lifts token matches to words:
// each source word pairs with the back word most of its matched tokens point
// at (ties go to the strongest single token match). Conflicts over a back
// word are resolved by descending similarity, then ascending source index;
// losers become missing, unclaimed back words become extra.
WordPairing align_words(const TokenizedSentence& src, const TokenizedSentence& back,
                        const EmbeddingTable& src_emb, const EmbeddingTable& back_emb);

// Tab-separated debug view: matched pairs, then MISSING and EXTRA lines.
std::string format_alignment(const TokenizedSentence& src, const TokenizedSentence& back,
                             const WordPairing& pairing);

}  // namespace bivert

#endif  // BIVERT_CORE_WORD_ALIGN_HPP
