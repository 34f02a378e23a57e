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

#include "sense_graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <istream>
#include <limits>
#include <queue>
#include <sstream>

#include "errors.hpp"
#include "relation.hpp"

namespace bivert {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t b = 0;
  while (true) {
    const auto e = s.find(sep, b);
    out.push_back(s.substr(b, e == std::string::npos ? std::string::npos : e - b));
    if (e == std::string::npos) break;
    b = e + 1;
  }
  return out;
}

PartOfSpeech parse_pos(const std::string& s) {
  if (s == "noun" || s == "n") return PartOfSpeech::kNoun;
  if (s == "verb" || s == "v") return PartOfSpeech::kVerb;
  return PartOfSpeech::kOther;
}

std::uint64_t fnv1a(std::uint64_t h, std::string_view s) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Local view of the two-rooted query graph.
class QueryGraph {
 public:
  static constexpr std::size_t kRootX = 0;
  static constexpr std::size_t kRootY = 1;

  QueryGraph(const SenseGraphStore& store, const SenseConfig& config)
      : store_(store), config_(config) {
    depth_ = {0, 0};
    store_index_ = {kNoStore, kNoStore};
    adj_.resize(2);
  }

  void attach_senses(std::size_t root, const std::vector<std::size_t>& senses) {
    for (std::size_t s : senses) {
      const std::size_t local = intern(s, 1);
      add_edge(root, local, SenseRelation::kRootSense, 0.0);
    }
  }

  // Expands every node sitting at `level` along allowed out-edges.
  void expand(std::size_t level) {
    const std::size_t n = depth_.size();
    for (std::size_t local = 2; local < n; ++local) {
      if (depth_[local] != level) continue;
      const std::size_t from = store_index_[local];
      for (const auto& e : store_.out_edges(from)) {
        if (!config_.allowed_relations.contains(e.relation)) continue;
        const std::size_t to = intern(e.to, level + 1);
        const auto key = std::make_tuple(std::min(local, to), std::max(local, to),
                                         canonical(local, to, e.relation));
        if (!seen_edges_.insert(key).second) continue;
        const std::size_t d = std::max(depth_[local], depth_[to]);
        add_edge(local, to, e.relation,
                 edge_weight(from, e.to, e.relation, d, store_, config_.params));
      }
    }
  }

  PathResult dijkstra() const {
    const double inf = std::numeric_limits<double>::infinity();
    const std::size_t n = depth_.size();
    std::vector<double> dist(n, inf);
    std::vector<std::ptrdiff_t> prev_edge(n, -1);
    std::vector<std::size_t> prev_node(n, 0);
    std::vector<char> done(n, 0);
    using Item = std::pair<double, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    dist[kRootX] = 0.0;
    heap.emplace(0.0, kRootX);
    while (!heap.empty()) {
      auto [d, u] = heap.top();
      heap.pop();
      if (done[u]) continue;
      done[u] = 1;
      if (u == kRootY) break;
      for (std::size_t k = 0; k < adj_[u].size(); ++k) {
        const Adj& a = adj_[u][k];
        const double alt = d + a.weight;
        if (alt < dist[a.to]) {
          dist[a.to] = alt;
          prev_node[a.to] = u;
          prev_edge[a.to] = static_cast<std::ptrdiff_t>(k);
          heap.emplace(alt, a.to);
        }
      }
    }
    PathResult out;
    if (!done[kRootY]) return out;
    out.found = true;
    out.total_weight = dist[kRootY];
    for (std::size_t v = kRootY; v != kRootX; v = prev_node[v]) {
      const std::size_t u = prev_node[v];
      const Adj& a = adj_[u][static_cast<std::size_t>(prev_edge[v])];
      out.edges.push_back({label(u), label(v), a.relation, std::max(depth_[u], depth_[v]),
                           a.weight});
    }
    std::reverse(out.edges.begin(), out.edges.end());
    // Summed smallest first so that swapping x and y gives the same bits.
    std::vector<double> weights;
    for (const PathEdge& e : out.edges) weights.push_back(e.weight);
    std::sort(weights.begin(), weights.end());
    out.total_weight = 0.0;
    for (double w : weights) out.total_weight += w;
    return out;
  }

  void set_root_labels(std::string x, std::string y) {
    root_label_ = {"root:" + std::move(x), "root:" + std::move(y)};
  }

 private:
  static constexpr std::size_t kNoStore = std::numeric_limits<std::size_t>::max();

  struct Adj {
    std::size_t to;
    SenseRelation relation;
    double weight;
  };

  std::size_t intern(std::size_t store_idx, std::size_t depth) {
    auto [it, inserted] = local_.try_emplace(store_idx, depth_.size());
    if (inserted) {
      depth_.push_back(depth);
      store_index_.push_back(store_idx);
      adj_.emplace_back();
    }
    return it->second;
  }

  void add_edge(std::size_t a, std::size_t b, SenseRelation r, double w) {
    adj_[a].push_back({b, r, w});
    adj_[b].push_back({a, inverse(r), w});
  }

  // One identity per undirected edge: hypernym(a,b) and hyponym(b,a) are the
  // same connection.
  SenseRelation canonical(std::size_t a, std::size_t b, SenseRelation r) const {
    return a <= b ? r : inverse(r);
  }

  std::string label(std::size_t local) const {
    if (local < 2) return root_label_[local];
    return store_.node(store_index_[local]).id;
  }

  const SenseGraphStore& store_;
  const SenseConfig& config_;
  std::vector<std::size_t> depth_;
  std::vector<std::size_t> store_index_;
  std::vector<std::vector<Adj>> adj_;
  std::map<std::size_t, std::size_t> local_;
  std::set<std::tuple<std::size_t, std::size_t, SenseRelation>> seen_edges_;
  std::array<std::string, 2> root_label_;
};

}  // namespace

std::string_view relation_name(SenseRelation r) {
  switch (r) {
    case SenseRelation::kRootSense: return "root_sense";
    case SenseRelation::kHypernym: return "hypernym";
    case SenseRelation::kHyponym: return "hyponym";
    case SenseRelation::kHolonym: return "holonym";
    case SenseRelation::kMeronym: return "meronym";
    case SenseRelation::kAntonym: return "antonym";
  }
  return "unknown";
}

std::optional<SenseRelation> parse_relation(std::string_view name) {
  for (std::size_t i = 0; i < kSenseRelationCount; ++i) {
    const auto r = static_cast<SenseRelation>(i);
    if (relation_name(r) == name) return r;
  }
  return std::nullopt;
}

std::string_view pos_name(PartOfSpeech p) {
  switch (p) {
    case PartOfSpeech::kNoun: return "noun";
    case PartOfSpeech::kVerb: return "verb";
    case PartOfSpeech::kOther: return "other";
  }
  return "other";
}

SenseRelation inverse(SenseRelation r) {
  switch (r) {
    case SenseRelation::kHypernym: return SenseRelation::kHyponym;
    case SenseRelation::kHyponym: return SenseRelation::kHypernym;
    case SenseRelation::kHolonym: return SenseRelation::kMeronym;
    case SenseRelation::kMeronym: return SenseRelation::kHolonym;
    default: return r;
  }
}

RelationTypeParams RelationTypeParams::defaults() {
  RelationTypeParams p;
  p.bounds[static_cast<std::size_t>(SenseRelation::kRootSense)] = {0.0, 0.0};
  for (SenseRelation r : {SenseRelation::kHypernym, SenseRelation::kHyponym,
                          SenseRelation::kHolonym, SenseRelation::kMeronym})
    p.bounds[static_cast<std::size_t>(r)] = {1.0, 2.0};
  p.bounds[static_cast<std::size_t>(SenseRelation::kAntonym)] = {2.5, 2.5};
  return p;
}

SenseGraphStore SenseGraphStore::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorKind::kMissingResource, "cannot open graph snapshot '" + path.string() + "'");
  return parse(in);
}

SenseGraphStore SenseGraphStore::parse(std::istream& in) {
  SenseGraphStore g;
  struct RawEdge {
    std::size_t line;
    std::string from, to;
    SenseRelation relation;
  };
  std::vector<RawEdge> raw_edges;
  std::uint64_t h = 0xcbf29ce484222325ULL;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    h = fnv1a(h, line);
    h = fnv1a(h, "\n");
    if (line.empty() || line.front() == '#') continue;
    const auto f = split(line, '\t');
    if (f[0] == "V") {
      if (f.size() != 2) throw ParseError(n, "version line needs 2 fields");
      g.version_ = f[1];
    } else if (f[0] == "N") {
      if (f.size() != 5) throw ParseError(n, "node line needs 5 fields");
      if (f[1].empty()) throw ParseError(n, "empty node id");
      const PartOfSpeech pos = parse_pos(f[2]);
      auto [it, inserted] = g.index_.try_emplace(f[1], g.nodes_.size());
      if (inserted) g.nodes_.push_back({f[1], pos, {}});
      Node& node = g.nodes_[it->second];
      if (node.pos != pos) throw SchemaError(n, "node '" + f[1] + "' changes part of speech");
      auto& lemmas = node.lemmas[f[3]];
      for (const std::string& lemma : split(f[4], '|')) {
        if (lemma.empty()) continue;
        if (std::find(lemmas.begin(), lemmas.end(), lemma) != lemmas.end()) continue;
        lemmas.push_back(lemma);
        if (pos != PartOfSpeech::kOther)
          g.lemma_index_[std::make_tuple(f[3], pos, lemma)].push_back(it->second);
      }
    } else if (f[0] == "E") {
      if (f.size() != 4) throw ParseError(n, "edge line needs 4 fields");
      auto rel = parse_relation(f[3]);
      if (!rel) throw ParseError(n, "unknown relation '" + f[3] + "'");
      if (*rel == SenseRelation::kRootSense)
        throw SchemaError(n, "root_sense edges cannot appear in a snapshot");
      raw_edges.push_back({n, f[1], f[2], *rel});
    } else {
      throw ParseError(n, "unknown record type '" + f[0] + "'");
    }
  }

  g.out_.resize(g.nodes_.size());
  g.degree_.assign(g.nodes_.size(), {});
  std::set<std::tuple<std::size_t, std::size_t, SenseRelation>> seen;
  auto add = [&](std::size_t a, std::size_t b, SenseRelation r) {
    if (!seen.emplace(a, b, r).second) return;
    g.out_[a].push_back({b, r});
    ++g.degree_[a][static_cast<std::size_t>(r)];
  };
  for (const RawEdge& e : raw_edges) {
    auto a = g.find(e.from);
    auto b = g.find(e.to);
    if (!a || !b) throw SchemaError(e.line, "edge references an unknown node");
    if (*a == *b) throw SchemaError(e.line, "self-loop on '" + e.from + "'");
    add(*a, *b, e.relation);
    add(*b, *a, inverse(e.relation));
  }
  g.fingerprint_ = h;
  return g;
}

std::optional<std::size_t> SenseGraphStore::find(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

bool SenseGraphStore::has_edge(std::size_t from, std::size_t to, SenseRelation r) const {
  return std::any_of(out_[from].begin(), out_[from].end(),
                     [&](const OutEdge& e) { return e.to == to && e.relation == r; });
}

std::vector<std::size_t> SenseGraphStore::senses(std::string_view lemma, std::string_view lang,
                                                 PartOfSpeech pos) const {
  if (pos == PartOfSpeech::kOther) return {};
  auto it = lemma_index_.find(std::make_tuple(std::string(lang), pos, std::string(lemma)));
  if (it == lemma_index_.end()) return {};
  return it->second;
}

std::vector<std::string> senses_of(std::string_view lemma, std::string_view lang,
                                   PartOfSpeech pos, const SenseGraphStore& store) {
  std::vector<std::string> ids;
  for (std::size_t i : store.senses(lemma, lang, pos)) ids.push_back(store.node(i).id);
  return ids;
}

double edge_type_weight(SenseRelation r, std::size_t n_r, const RelationTypeParams& params) {
  if (r == SenseRelation::kRootSense) return 0.0;
  if (n_r == 0)
    throw Error(ErrorKind::kDegree,
                "relation '" + std::string(relation_name(r)) + "' has no outgoing edges");
  const auto& b = params[r];
  return b.max_weight - (b.max_weight - b.min_weight) / static_cast<double>(n_r);
}

double edge_weight(std::size_t a, std::size_t b, SenseRelation r, std::size_t depth,
                   const SenseGraphStore& store, const RelationTypeParams& params) {
  if (r == SenseRelation::kRootSense) return 0.0;
  if (depth == 0) throw Error(ErrorKind::kInvalidArgument, "edge depth must be positive");
  if (!store.has_edge(a, b, r))
    throw Error(ErrorKind::kInvalidArgument, "no " + std::string(relation_name(r)) +
                                                 " edge from '" + store.node(a).id + "' to '" +
                                                 store.node(b).id + "'");
  const SenseRelation back = inverse(r);
  const double forward = edge_type_weight(r, store.degree(a, r), params);
  const double reverse = edge_type_weight(back, store.degree(b, back), params);
  return (forward + reverse) / (2.0 * static_cast<double>(depth));
}

std::string SenseConfig::key() const {
  std::string k = "d" + std::to_string(max_depth) + ":";
  for (SenseRelation r : allowed_relations) {
    k += relation_name(r);
    k += ',';
  }
  char buf[64];
  for (const auto& b : params.bounds) {
    std::snprintf(buf, sizeof buf, "%.17g/%.17g;", b.min_weight, b.max_weight);
    k += buf;
  }
  return k;
}

PathResult shortest_sense_path(std::string_view x, std::string_view y, std::string_view lang,
                               PartOfSpeech pos, const SenseGraphStore& store,
                               const SenseConfig& config) {
  if (config.max_depth < 1) throw Error(ErrorKind::kInvalidArgument, "max_depth must be >= 1");
  QueryGraph graph(store, config);
  graph.set_root_labels(std::string(x), std::string(y));
  graph.attach_senses(QueryGraph::kRootX, store.senses(x, lang, pos));
  graph.attach_senses(QueryGraph::kRootY, store.senses(y, lang, pos));
  for (std::size_t level = 1;; ++level) {
    PathResult result = graph.dijkstra();
    result.depth_reached = level;
    if (result.found || level >= config.max_depth) return result;
    graph.expand(level);
  }
}

double path_score(double total_weight) {
  if (total_weight <= 0.0) return 0.0;
  return std::clamp(1.0 - 2.0 / total_weight, 0.0, 1.0);
}

double path_score(const PathResult& p) {
  if (!p.found) throw Error(ErrorKind::kInvalidArgument, "path_score of a missing path");
  return path_score(p.total_weight);
}

SenseCostCache::SenseCostCache(std::filesystem::path dir, std::uint64_t graph_fingerprint) {
  char name[64];
  std::snprintf(name, sizeof name, "sense-cost-%016llx.tsv",
                static_cast<unsigned long long>(graph_fingerprint));
  std::filesystem::create_directories(dir);
  file_ = dir / name;
  std::ifstream in(*file_);
  std::string line;
  while (std::getline(in, line)) {
    const auto tab = line.rfind('\t');
    if (tab == std::string::npos) continue;
    const std::string value = line.substr(tab + 1);
    if (value == "none") {
      entries_[line.substr(0, tab)] = std::nullopt;
    } else {
      try {
        entries_[line.substr(0, tab)] = std::stod(value);
      } catch (const std::exception&) {
        // Corrupt entries are recomputed.
      }
    }
  }
}

std::optional<std::optional<double>> SenseCostCache::get(const std::string& key) const {
  std::lock_guard lock(mu_);
  auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void SenseCostCache::put(const std::string& key, std::optional<double> score) {
  std::lock_guard lock(mu_);
  entries_.emplace(key, score);
}

std::size_t SenseCostCache::size() const {
  std::lock_guard lock(mu_);
  return entries_.size();
}

void SenseCostCache::save() const {
  if (!file_) return;
  std::lock_guard lock(mu_);
  const auto tmp = std::filesystem::path(file_->string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::trunc);
    char buf[40];
    for (const auto& [k, v] : entries_) {
      if (v) {
        std::snprintf(buf, sizeof buf, "%.17g", *v);
        out << k << '\t' << buf << '\n';
      } else {
        out << k << "\tnone\n";
      }
    }
  }
  std::filesystem::rename(tmp, *file_);
}

double sense_cost(std::string_view src_word, std::string_view back_word, double similarity,
                  std::string_view lang, const SenseGraphStore* store,
                  const LexiconBundle& lexicon, const SenseConfig& config,
                  SenseCostCache* cache) {
  const double fallback = std::clamp(1.0 - std::max(similarity, 0.0), 0.0, 1.0);
  if (!store) return fallback;
  const std::string x = lexicon.lemmatize(src_word, lang);
  const std::string y = lexicon.lemmatize(back_word, lang);
  for (PartOfSpeech pos : {PartOfSpeech::kNoun, PartOfSpeech::kVerb}) {
    std::optional<double> score;
    std::string key;
    if (cache) {
      key = std::string(lang) + "|" + std::string(pos_name(pos)) + "|" + x + "|" + y + "|" +
            config.key();
      if (auto hit = cache->get(key)) {
        if (*hit) return **hit;
        continue;
      }
    }
    const PathResult p = shortest_sense_path(x, y, lang, pos, *store, config);
    if (p.found) score = path_score(p);
    if (cache) cache->put(key, score);
    if (score) return *score;
  }
  return fallback;
}

std::string format_path(std::string_view x, std::string_view y, PartOfSpeech pos,
                        const PathResult& p) {
  std::ostringstream out;
  char buf[64];
  out << "QUERY\t" << x << '\t' << y << '\t' << pos_name(pos) << '\n';
  if (!p.found) {
    out << "NOT_FOUND\tdepth=" << p.depth_reached << '\n';
    return out.str();
  }
  for (const PathEdge& e : p.edges) {
    std::snprintf(buf, sizeof buf, "%.6f", e.weight);
    out << "EDGE\t" << e.from << '\t' << e.to << '\t' << relation_name(e.relation)
        << "\tdepth=" << e.depth << '\t' << buf << '\n';
  }
  std::snprintf(buf, sizeof buf, "%.6f", p.total_weight);
  out << "TOTAL\t" << buf << '\n';
  std::snprintf(buf, sizeof buf, "%.6f", path_score(p));
  out << "SCORE\t" << buf << '\n';
  return out.str();
}

}  // namespace bivert
