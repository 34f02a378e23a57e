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

// Offline multilingual synset graph and path-based sense distance.
//
// A query for lemmas x and y builds a two-rooted subgraph: each root links
// to its senses (depth 1), and senses are expanded level by level along the
// allowed relation types until the roots connect or the depth limit is hit.
// Each semantic edge between a and b of type r weighs
//
//   (w(a ->r b) + w(b ->r' a)) / (2 d),   w(x ->r .) = max_r - (max_r - min_r) / n_r(x)
//
// where r' is the inverse relation, d the depth of the deeper endpoint and
// n_r(x) the number of type-r edges leaving x in the full snapshot. Root
// edges weigh 0. The path score is 1 - 2 / sum(w), clamped to [0, 1].

#ifndef BIVERT_CORE_SENSE_GRAPH_HPP
#define BIVERT_CORE_SENSE_GRAPH_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <vector>

namespace bivert {

class LexiconBundle;

enum class PartOfSpeech { kNoun, kVerb, kOther };

enum class SenseRelation {
  kRootSense,
  kHypernym,
  kHyponym,
  kHolonym,
  kMeronym,
  kAntonym,
};

inline constexpr std::size_t kSenseRelationCount = 6;

std::string_view relation_name(SenseRelation r);
std::optional<SenseRelation> parse_relation(std::string_view name);
std::string_view pos_name(PartOfSpeech p);
SenseRelation inverse(SenseRelation r);

struct RelationTypeParams {
  struct Bounds {
    double min_weight;
    double max_weight;
  };
  // Indexed by SenseRelation.
  std::array<Bounds, kSenseRelationCount> bounds;

  // Hypernym/hyponym/holonym/meronym in [1, 2], antonym fixed at 2.5.
  static RelationTypeParams defaults();
  const Bounds& operator[](SenseRelation r) const {
    return bounds[static_cast<std::size_t>(r)];
  }
};

class SenseGraphStore {
 public:
  struct Node {
    std::string id;
    PartOfSpeech pos;
    // lang -> lemmas
    std::map<std::string, std::vector<std::string>, std::less<>> lemmas;
  };
  struct OutEdge {
    std::size_t to;
    SenseRelation relation;
  };

  static SenseGraphStore load(const std::filesystem::path& path);
  static SenseGraphStore parse(std::istream& in);

  const std::string& version() const { return version_; }
  std::size_t node_count() const { return nodes_.size(); }
  const Node& node(std::size_t i) const { return nodes_[i]; }
  std::optional<std::size_t> find(std::string_view id) const;
  // Directed out-edges, including the implied inverse of every listed edge.
  const std::vector<OutEdge>& out_edges(std::size_t i) const { return out_[i]; }
  bool has_edge(std::size_t from, std::size_t to, SenseRelation r) const;
  // n_r(X): number of type-r edges leaving node i.
  std::size_t degree(std::size_t i, SenseRelation r) const {
    return degree_[i][static_cast<std::size_t>(r)];
  }

  // Synset node indices for a lemma, in snapshot order. Only nouns and verbs
  // are indexed.
  std::vector<std::size_t> senses(std::string_view lemma, std::string_view lang,
                                  PartOfSpeech pos) const;

  // Stable content fingerprint, used to key persistent caches.
  std::uint64_t fingerprint() const { return fingerprint_; }

 private:
  std::string version_;
  std::vector<Node> nodes_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::vector<OutEdge>> out_;
  std::vector<std::array<std::size_t, kSenseRelationCount>> degree_;
  // (lang, pos, lemma) -> nodes
  std::map<std::tuple<std::string, PartOfSpeech, std::string>, std::vector<std::size_t>,
           std::less<>>
      lemma_index_;
  std::uint64_t fingerprint_ = 0;
};

std::vector<std::string> senses_of(std::string_view lemma, std::string_view lang,
                                   PartOfSpeech pos, const SenseGraphStore& store);

// max_r - (max_r - min_r) / n_r. Throws Error(kDegree) for n_r == 0.
double edge_type_weight(SenseRelation r, std::size_t n_r, const RelationTypeParams& params);

// Symmetric edge weight between store nodes a and b; `depth` is the depth of
// the deeper endpoint. Root edges weigh 0.
double edge_weight(std::size_t a, std::size_t b, SenseRelation r, std::size_t depth,
                   const SenseGraphStore& store, const RelationTypeParams& params);

struct SenseConfig {
  std::size_t max_depth = 7;
  std::set<SenseRelation> allowed_relations = {SenseRelation::kHypernym};
  RelationTypeParams params = RelationTypeParams::defaults();

  std::string key() const;
};

struct PathEdge {
  std::string from;
  std::string to;
  // Relation as traversed from `from` to `to`.
  SenseRelation relation;
  std::size_t depth;
  double weight;
};

struct PathResult {
  bool found = false;
  std::vector<PathEdge> edges;
  double total_weight = 0.0;
  std::size_t depth_reached = 0;
};

PathResult shortest_sense_path(std::string_view x, std::string_view y, std::string_view lang,
                               PartOfSpeech pos, const SenseGraphStore& store,
                               const SenseConfig& config = {});

// 1 - 2 / total_weight clamped to [0, 1]; 0 for a zero-weight path.
double path_score(double total_weight);
double path_score(const PathResult& p);

// Graph score memo keyed by (lang, pos, lemma, lemma, config). Safe for
// concurrent use. With a directory, entries are read at construction and
// written back by save().
class SenseCostCache {
 public:
  SenseCostCache() = default;
  SenseCostCache(std::filesystem::path dir, std::uint64_t graph_fingerprint);

  // nullopt inside means "searched, no path".
  std::optional<std::optional<double>> get(const std::string& key) const;
  void put(const std::string& key, std::optional<double> score);
  std::size_t size() const;
  void save() const;

 private:
  mutable std::mutex mu_;
  std::map<std::string, std::optional<double>> entries_;
  std::optional<std::filesystem::path> file_;
};

// Lemmatizes both words, tries noun-noun then verb-verb paths and scores
// the first one found; otherwise falls back to 1 - max(similarity, 0).
double sense_cost(std::string_view src_word, std::string_view back_word, double similarity,
                  std::string_view lang, const SenseGraphStore* store,
                  const LexiconBundle& lexicon, const SenseConfig& config,
                  SenseCostCache* cache = nullptr);

// Human-readable view of a path search, one edge per line.
std::string format_path(std::string_view x, std::string_view y, PartOfSpeech pos,
                        const PathResult& p);

}  // namespace bivert

#endif  // BIVERT_CORE_SENSE_GRAPH_HPP
