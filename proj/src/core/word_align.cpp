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

#include "word_align.hpp"

#include <algorithm>
#include <cstdio>
#include <map>

#include "assignment.hpp"
#include "errors.hpp"

namespace bivert {

namespace {

struct Vote {
  std::size_t count = 0;
  double best_similarity = -2.0;
};

}  // namespace

WordPairing align_words(const TokenizedSentence& src, const TokenizedSentence& back,
                        const EmbeddingTable& src_emb, const EmbeddingTable& back_emb) {
  validate_sentence(src, src_emb);
  validate_sentence(back, back_emb);
  const CostMatrix cost = build_cost_matrix(src_emb, back_emb);
  const Assignment tokens = solve_lsap(cost);
  const std::vector<std::size_t> src_owner = src.token_owners();
  const std::vector<std::size_t> back_owner = back.token_owners();

  // votes[src word][back word]
  std::vector<std::map<std::size_t, Vote>> votes(src.len());
  for (auto [ti, tj] : tokens.matches) {
    const double sim = std::clamp(1.0 - cost(ti, tj), -1.0, 1.0);
    Vote& v = votes[src_owner[ti]][back_owner[tj]];
    ++v.count;
    v.best_similarity = std::max(v.best_similarity, sim);
  }

  std::vector<WordPair> candidates;
  for (std::size_t ws = 0; ws < votes.size(); ++ws) {
    const std::pair<const std::size_t, Vote>* winner = nullptr;
    // std::map iterates back words ascending, so strict comparisons keep the
    // lowest index on a full tie.
    for (const auto& entry : votes[ws]) {
      if (!winner || entry.second.count > winner->second.count ||
          (entry.second.count == winner->second.count &&
           entry.second.best_similarity > winner->second.best_similarity))
        winner = &entry;
    }
    if (winner) candidates.push_back({ws, winner->first, winner->second.best_similarity});
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const WordPair& a, const WordPair& b) {
                     if (a.similarity != b.similarity) return a.similarity > b.similarity;
                     return a.src < b.src;
                   });

  WordPairing out;
  std::vector<char> src_paired(src.len()), back_claimed(back.len());
  for (const WordPair& c : candidates) {
    if (back_claimed[c.back]) continue;
    back_claimed[c.back] = 1;
    src_paired[c.src] = 1;
    out.pairs.push_back(c);
  }
  std::sort(out.pairs.begin(), out.pairs.end(),
            [](const WordPair& a, const WordPair& b) { return a.src < b.src; });
  for (std::size_t w = 0; w < src.len(); ++w)
    if (!src_paired[w]) out.missing_src.push_back(w);
  for (std::size_t w = 0; w < back.len(); ++w)
    if (!back_claimed[w]) out.extra_back.push_back(w);
  return out;
}

std::string format_alignment(const TokenizedSentence& src, const TokenizedSentence& back,
                             const WordPairing& pairing) {
  std::string out;
  char sim[32];
  for (const WordPair& p : pairing.pairs) {
    std::snprintf(sim, sizeof sim, "%.6f", p.similarity);
    out += src.words[p.src].surface + "\t↔\t" + back.words[p.back].surface + "\t" + sim +
           "\n";
  }
  for (std::size_t w : pairing.missing_src) out += "MISSING\t" + src.words[w].surface + "\n";
  for (std::size_t w : pairing.extra_back) out += "EXTRA\t" + back.words[w].surface + "\n";
  return out;
}

}  // namespace bivert
