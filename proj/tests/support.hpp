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

// Shared test helpers: fixture paths, random generators and brute-force
// reference implementations.

#ifndef BIVERT_TESTS_SUPPORT_HPP
#define BIVERT_TESTS_SUPPORT_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "core/assignment.hpp"
#include "core/corpus.hpp"
#include "core/sense_graph.hpp"

namespace bivert::testing {

inline std::filesystem::path data_path(const std::string& name) {
  return std::filesystem::path(BIVERT_TEST_DATA) / name;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("bivert-" + tag + "-" + std::to_string(rd()) + "-" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline CostMatrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols,
                                bool quantized = false) {
  std::uniform_real_distribution<double> u(0.0, 2.0);
  std::uniform_int_distribution<int> q(0, 16);
  CostMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = quantized ? q(rng) / 8.0 : u(rng);
  return m;
}

// Minimum total over every injective map of the smaller side into the larger,
// summed in row order.
inline double brute_force_lsap(const CostMatrix& m) {
  const bool flip = m.rows() > m.cols();
  const std::size_t k = flip ? m.cols() : m.rows();
  const std::size_t n = flip ? m.rows() : m.cols();
  auto cost = [&](std::size_t i, std::size_t j) { return flip ? m(j, i) : m(i, j); };
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> pick(k);
  std::vector<char> used(n, 0);
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == k) {
      // Sum in the original row order so totals compare bit for bit.
      std::vector<std::pair<std::size_t, double>> by_row;
      for (std::size_t a = 0; a < k; ++a)
        by_row.emplace_back(flip ? pick[a] : a, cost(a, pick[a]));
      std::sort(by_row.begin(), by_row.end());
      double s = 0.0;
      for (const auto& [r, c] : by_row) s += c;
      best = std::min(best, s);
      return;
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (used[j]) continue;
      used[j] = 1;
      pick[i] = j;
      rec(i + 1);
      used[j] = 0;
    }
  };
  rec(0);
  return best;
}

inline bool is_valid_assignment(const Assignment& a, std::size_t rows, std::size_t cols) {
  std::set<std::size_t> rs, cs;
  for (const auto& [r, c] : a.matches) {
    if (r >= rows || c >= cols) return false;
    if (!rs.insert(r).second || !cs.insert(c).second) return false;
  }
  if (a.matches.size() != std::min(rows, cols)) return false;
  for (std::size_t r : a.unmatched_rows)
    if (!rs.insert(r).second) return false;
  for (std::size_t c : a.unmatched_cols)
    if (!cs.insert(c).second) return false;
  return rs.size() == rows && cs.size() == cols;
}

// ---------------------------------------------------------------------------
// Random sense graphs with an independent path oracle.

struct RandomGraph {
  std::size_t nodes = 0;
  // Listed edges (from, to, relation); the snapshot adds inverses.
  std::vector<std::tuple<std::size_t, std::size_t, SenseRelation>> edges;
  std::vector<std::size_t> x_senses, y_senses;
  SenseConfig config;

  std::string node_id(std::size_t i) const { return "s" + std::to_string(i); }

  std::string snapshot() const {
    std::ostringstream out;
    out << "V\t5.2\n";
    for (std::size_t i = 0; i < nodes; ++i) {
      std::string lemmas = "w" + std::to_string(i);
      if (std::find(x_senses.begin(), x_senses.end(), i) != x_senses.end()) lemmas += "|xx";
      if (std::find(y_senses.begin(), y_senses.end(), i) != y_senses.end()) lemmas += "|yy";
      out << "N\t" << node_id(i) << "\tnoun\teng\t" << lemmas << "\n";
    }
    for (const auto& [a, b, r] : edges)
      out << "E\t" << node_id(a) << "\t" << node_id(b) << "\t" << relation_name(r) << "\n";
    return out.str();
  }
};

inline RandomGraph random_graph(std::mt19937_64& rng) {
  RandomGraph g;
  g.nodes = std::uniform_int_distribution<std::size_t>(2, 10)(rng);
  const std::size_t edge_count = std::uniform_int_distribution<std::size_t>(0, 2 * g.nodes)(rng);
  static constexpr SenseRelation kRel[] = {SenseRelation::kHypernym, SenseRelation::kHypernym,
                                           SenseRelation::kHolonym, SenseRelation::kMeronym,
                                           SenseRelation::kAntonym};
  std::uniform_int_distribution<std::size_t> pick_node(0, g.nodes - 1);
  std::uniform_int_distribution<std::size_t> pick_rel(0, 4);
  for (std::size_t e = 0; e < edge_count; ++e) {
    const std::size_t a = pick_node(rng), b = pick_node(rng);
    if (a == b) continue;
    g.edges.emplace_back(a, b, kRel[pick_rel(rng)]);
  }
  auto senses = [&] {
    std::vector<std::size_t> s;
    const std::size_t k = std::uniform_int_distribution<std::size_t>(1, 2)(rng);
    for (std::size_t i = 0; i < k; ++i) {
      const std::size_t v = pick_node(rng);
      if (std::find(s.begin(), s.end(), v) == s.end()) s.push_back(v);
    }
    std::sort(s.begin(), s.end());
    return s;
  };
  g.x_senses = senses();
  g.y_senses = senses();
  g.config.max_depth = std::uniform_int_distribution<std::size_t>(1, 7)(rng);
  g.config.allowed_relations = {SenseRelation::kHypernym};
  if (rng() % 2) g.config.allowed_relations.insert(SenseRelation::kHolonym);
  if (rng() % 3 == 0) g.config.allowed_relations.insert(SenseRelation::kAntonym);
  if (rng() % 4 == 0) g.config.allowed_relations.insert(SenseRelation::kHyponym);
  return g;
}

struct OraclePath {
  bool found = false;
  double total = 0.0;
  std::size_t level = 0;
};

// Rebuilds the level-by-level query subgraph from the raw edge list and
// enumerates every simple path between the two roots.
inline OraclePath oracle_shortest_path(const RandomGraph& g) {
  // Directed edge set with inverses, duplicates collapsed.
  std::set<std::tuple<std::size_t, std::size_t, SenseRelation>> directed;
  for (const auto& [a, b, r] : g.edges) {
    directed.emplace(a, b, r);
    directed.emplace(b, a, inverse(r));
  }
  std::map<std::pair<std::size_t, SenseRelation>, std::size_t> degree;
  for (const auto& [a, b, r] : directed) ++degree[{a, r}];
  const auto& p = g.config.params;
  auto w = [&](std::size_t a, SenseRelation r) {
    const double n = static_cast<double>(degree.at({a, r}));
    return p[r].max_weight - (p[r].max_weight - p[r].min_weight) / n;
  };

  // Vertex ids: 0 and 1 are the roots, synset i is i + 2.
  const std::size_t kNone = std::numeric_limits<std::size_t>::max();
  for (std::size_t level = 1;; ++level) {
    std::vector<std::size_t> depth(g.nodes, kNone);
    for (std::size_t s : g.x_senses) depth[s] = 1;
    for (std::size_t s : g.y_senses) depth[s] = 1;
    struct E {
      std::size_t a, b;
      double weight;
    };
    std::vector<E> es;
    for (std::size_t s : g.x_senses) es.push_back({0, s + 2, 0.0});
    for (std::size_t s : g.y_senses) es.push_back({1, s + 2, 0.0});
    for (std::size_t l = 1; l < level; ++l) {
      std::vector<std::size_t> frontier;
      for (std::size_t v = 0; v < g.nodes; ++v)
        if (depth[v] == l) frontier.push_back(v);
      for (std::size_t v : frontier) {
        for (const auto& [a, b, r] : directed) {
          if (a != v || !g.config.allowed_relations.count(r)) continue;
          if (depth[b] == kNone) depth[b] = l + 1;
          const double d = static_cast<double>(std::max(depth[a], depth[b]));
          es.push_back({a + 2, b + 2, (w(a, r) + w(b, inverse(r))) / (2.0 * d)});
        }
      }
    }
    std::vector<std::vector<std::pair<std::size_t, double>>> adj(g.nodes + 2);
    for (const E& e : es) {
      adj[e.a].emplace_back(e.b, e.weight);
      adj[e.b].emplace_back(e.a, e.weight);
    }
    double best = std::numeric_limits<double>::infinity();
    std::vector<char> on_path(g.nodes + 2, 0);
    std::function<void(std::size_t, double)> dfs = [&](std::size_t u, double acc) {
      if (u == 1) {
        best = std::min(best, acc);
        return;
      }
      on_path[u] = 1;
      for (const auto& [v, wt] : adj[u])
        if (!on_path[v]) dfs(v, acc + wt);
      on_path[u] = 0;
    };
    dfs(0, 0.0);
    if (std::isfinite(best)) return {true, best, level};
    if (level >= g.config.max_depth) return {false, 0.0, level};
  }
}

// ---------------------------------------------------------------------------
// Sentence builders.

// One token per word; embeddings given per token.
inline TokenizedSentence sentence(const std::string& lang, const std::vector<std::string>& words) {
  TokenizedSentence s;
  s.lang = lang;
  std::string raw;
  for (std::size_t i = 0; i < words.size(); ++i) {
    s.words.push_back({words[i], {i}});
    raw += (i ? " " : "") + words[i];
  }
  s.raw_text = raw;
  return s;
}

// Words with explicit token counts.
inline TokenizedSentence subword_sentence(
    const std::string& lang, const std::vector<std::pair<std::string, std::size_t>>& words) {
  TokenizedSentence s;
  s.lang = lang;
  std::size_t t = 0;
  for (const auto& [w, k] : words) {
    Word word{w, {}};
    for (std::size_t i = 0; i < k; ++i) word.token_indices.push_back(t++);
    s.words.push_back(std::move(word));
    s.raw_text += (s.raw_text.empty() ? "" : " ") + w;
  }
  return s;
}

inline EmbeddingTable random_embeddings(std::mt19937_64& rng, std::size_t rows, std::size_t dim) {
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<double> data(rows * dim);
  for (double& v : data) v = n(rng);
  return EmbeddingTable(dim, std::move(data));
}

}  // namespace bivert::testing

#endif  // BIVERT_TESTS_SUPPORT_HPP
