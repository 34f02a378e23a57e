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

#include "pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "errors.hpp"

#ifndef BIVERT_DEFAULT_LEXICON_DIR
#define BIVERT_DEFAULT_LEXICON_DIR ""
#endif

namespace bivert {

namespace {

using json = nlohmann::json;

template <typename Fn>
void parallel_for(std::size_t n, std::size_t jobs, Fn&& fn) {
  jobs = std::max<std::size_t>(1, std::min(jobs, n));
  if (jobs == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(n);
  std::vector<std::thread> workers;
  for (std::size_t w = 0; w < jobs; ++w) {
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : workers) t.join();
  // Report the failure of the earliest record, as a serial run would.
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

template <typename T>
std::optional<T> parse_number(std::string_view key, std::string_view value) {
  if (value.empty()) return std::nullopt;
  std::istringstream in{std::string(value)};
  T v;
  if (!(in >> v) || !in.eof())
    throw Error(ErrorKind::kInvalidArgument,
                "invalid value '" + std::string(value) + "' for '" + std::string(key) + "'");
  return v;
}

std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  std::size_t b = 0;
  while (b <= s.size()) {
    auto e = s.find(',', b);
    if (e == std::string_view::npos) e = s.size();
    std::string item(s.substr(b, e - b));
    if (!item.empty()) out.push_back(item);
    b = e + 1;
  }
  return out;
}

template <typename T>
json optional_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

template <typename T>
std::optional<T> optional_from(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return it->get<T>();
}

}  // namespace

std::string source_lang(std::string_view lang_pair) {
  const auto dash = lang_pair.find('-');
  return std::string(lang_pair.substr(0, dash));
}

SenseConfig RunConfig::sense_config() const {
  SenseConfig c;
  c.max_depth = max_depth;
  c.allowed_relations.clear();
  for (const std::string& name : relations) {
    auto r = parse_relation(name);
    if (!r || *r == SenseRelation::kRootSense)
      throw Error(ErrorKind::kInvalidArgument, "unknown sense relation '" + name + "'");
    c.allowed_relations.insert(*r);
  }
  if (c.max_depth < 1) throw Error(ErrorKind::kInvalidArgument, "max_depth must be >= 1");
  return c;
}

Hyperparams RunConfig::hyperparams() const {
  Hyperparams hp = default_hyperparams(lang_pair);
  if (n_estimators) hp.n_estimators = *n_estimators;
  if (tree_depth) hp.max_depth = *tree_depth;
  if (learning_rate) hp.learning_rate = *learning_rate;
  if (min_samples_leaf) hp.min_samples_leaf = *min_samples_leaf;
  if (subsample) hp.subsample = *subsample;
  hp.seed = seed;
  hp.validate();
  return hp;
}

std::size_t RunConfig::effective_jobs() const {
  if (jobs > 0) return jobs;
  return std::max(1u, std::thread::hardware_concurrency());
}

std::string RunConfig::to_json() const {
  json j = {
      {"dataset", dataset},
      {"graph", graph},
      {"lexicons", lexicons},
      {"model", model},
      {"out", out},
      {"report", report},
      {"lang_pair", lang_pair},
      {"max_depth", max_depth},
      {"relations", relations},
      {"mode", mode},
      {"seed", seed},
      {"jobs", jobs},
      {"n_estimators", optional_json(n_estimators)},
      {"tree_depth", optional_json(tree_depth)},
      {"learning_rate", optional_json(learning_rate)},
      {"min_samples_leaf", optional_json(min_samples_leaf)},
      {"subsample", optional_json(subsample)},
      {"exclude_system", exclude_system},
      {"cache_dir", cache_dir},
  };
  return j.dump(2) + "\n";
}

RunConfig RunConfig::from_json(std::string_view text) {
  try {
    const json j = json::parse(text);
    if (!j.is_object()) throw ParseError(0, "config must be an object");
    RunConfig c;
    c.dataset = j.value("dataset", c.dataset);
    c.graph = j.value("graph", c.graph);
    c.lexicons = j.value("lexicons", c.lexicons);
    c.model = j.value("model", c.model);
    c.out = j.value("out", c.out);
    c.report = j.value("report", c.report);
    c.lang_pair = j.value("lang_pair", c.lang_pair);
    c.max_depth = j.value("max_depth", c.max_depth);
    c.relations = j.value("relations", c.relations);
    c.mode = j.value("mode", c.mode);
    c.seed = j.value("seed", c.seed);
    c.jobs = j.value("jobs", c.jobs);
    c.n_estimators = optional_from<std::size_t>(j, "n_estimators");
    c.tree_depth = optional_from<std::size_t>(j, "tree_depth");
    c.learning_rate = optional_from<double>(j, "learning_rate");
    c.min_samples_leaf = optional_from<std::size_t>(j, "min_samples_leaf");
    c.subsample = optional_from<double>(j, "subsample");
    c.exclude_system = j.value("exclude_system", c.exclude_system);
    c.cache_dir = j.value("cache_dir", c.cache_dir);
    return c;
  } catch (const json::exception& e) {
    throw ParseError(0, std::string("config: ") + e.what());
  }
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kMissingResource, "cannot open config '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

void RunConfig::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorKind::kMissingResource, "cannot write config '" + path.string() + "'");
  out << to_json();
}

void RunConfig::set(std::string_view key, std::string_view value) {
  const std::string v(value);
  if (key == "dataset") dataset = v;
  else if (key == "graph") graph = v;
  else if (key == "lexicons") lexicons = v;
  else if (key == "model") model = v;
  else if (key == "out") out = v;
  else if (key == "report") report = v;
  else if (key == "lang_pair") lang_pair = v;
  else if (key == "max_depth") max_depth = parse_number<std::size_t>(key, v).value_or(7);
  else if (key == "relations") relations = split_list(v);
  else if (key == "mode") {
    if (v != "gbr" && v != "linear")
      throw Error(ErrorKind::kInvalidArgument, "mode must be gbr or linear");
    mode = v;
  }
  else if (key == "seed") seed = parse_number<std::uint64_t>(key, v).value_or(0);
  else if (key == "jobs") jobs = parse_number<std::size_t>(key, v).value_or(0);
  else if (key == "n_estimators") n_estimators = parse_number<std::size_t>(key, v);
  else if (key == "tree_depth") tree_depth = parse_number<std::size_t>(key, v);
  else if (key == "learning_rate") learning_rate = parse_number<double>(key, v);
  else if (key == "min_samples_leaf") min_samples_leaf = parse_number<std::size_t>(key, v);
  else if (key == "subsample") subsample = parse_number<double>(key, v);
  else if (key == "exclude_system") exclude_system = v;
  else if (key == "cache_dir") cache_dir = v;
  else throw Error(ErrorKind::kInvalidArgument, "unknown config key '" + std::string(key) + "'");
}

std::string RunConfig::get(std::string_view key) const {
  const json j = json::parse(to_json());
  auto it = j.find(std::string(key));
  if (it == j.end())
    throw Error(ErrorKind::kInvalidArgument, "unknown config key '" + std::string(key) + "'");
  if (it->is_string()) return it->get<std::string>();
  if (it->is_null()) return {};
  if (it->is_array()) {
    std::string s;
    for (const auto& item : *it) s += (s.empty() ? "" : ",") + item.get<std::string>();
    return s;
  }
  return it->dump();
}

std::unique_ptr<Engine> Engine::create(const RunConfig& config) {
  std::string lexdir = config.lexicons.empty() ? BIVERT_DEFAULT_LEXICON_DIR : config.lexicons;
  if (lexdir.empty()) throw Error(ErrorKind::kMissingResource, "no lexicon directory configured");
  LexiconBundle lexicon = LexiconBundle::load(lexdir);
  std::optional<SenseGraphStore> graph;
  if (!config.graph.empty()) graph = SenseGraphStore::load(config.graph);
  std::string cache_dir = config.cache_dir;
  if (cache_dir.empty())
    if (const char* env = std::getenv("BIVERT_CACHE_DIR")) cache_dir = env;
  return std::make_unique<Engine>(std::move(lexicon), std::move(graph), config.sense_config(),
                                  config.effective_jobs(), cache_dir);
}

Engine::Engine(LexiconBundle lexicon, std::optional<SenseGraphStore> graph, SenseConfig sense,
               std::size_t jobs, std::string cache_dir)
    : lexicon_(std::move(lexicon)),
      graph_(std::move(graph)),
      sense_(std::move(sense)),
      jobs_(std::max<std::size_t>(1, jobs)) {
  if (graph_ && !cache_dir.empty())
    cache_ = std::make_unique<SenseCostCache>(cache_dir, graph_->fingerprint());
  else
    cache_ = std::make_unique<SenseCostCache>();
}

Engine::~Engine() = default;

SentenceAnalysis Engine::analyze(const SentencePairRecord& record) const {
  SentenceAnalysis out;
  out.pairing = align_words(record.source, record.back, record.source_emb, record.back_emb);
  const std::string& lang = record.source.lang;
  const std::size_t len = record.source.len();
  const SenseCostFn sense = [&](std::string_view a, std::string_view b, double sim) {
    return sense_cost(a, b, sim, lang, graph(), lexicon_, sense_, cache_.get());
  };
  for (const WordPair& p : out.pairing.pairs)
    out.relations.push_back(classify_pair(record.source.words[p.src].surface,
                                          record.back.words[p.back].surface, len, p.similarity,
                                          lang, lexicon_, sense));
  for (std::size_t w : out.pairing.missing_src)
    out.relations.push_back(classify_pair(record.source.words[w].surface, std::nullopt, len,
                                          0.0, lang, lexicon_, sense));
  for (std::size_t w : out.pairing.extra_back)
    out.relations.push_back(classify_pair(std::nullopt, record.back.words[w].surface, len, 0.0,
                                          lang, lexicon_, sense));
  out.features = featurize(out.relations);
  return out;
}

std::vector<FeatureVector> Engine::featurize_all(
    std::span<const SentencePairRecord> records) const {
  std::vector<FeatureVector> out(records.size());
  parallel_for(records.size(), jobs_, [&](std::size_t i) { out[i] = analyze(records[i]).features; });
  return out;
}

std::vector<double> Engine::score_all(std::span<const SentencePairRecord> records,
                                      const Model& model) const {
  const std::vector<FeatureVector> features = featurize_all(records);
  std::vector<double> scores(features.size());
  for (std::size_t i = 0; i < features.size(); ++i) scores[i] = model.predict(features[i]);
  return scores;
}

Model Engine::train(std::span<const SentencePairRecord> records, const RunConfig& config) const {
  std::vector<double> labels;
  for (const SentencePairRecord& r : records) {
    if (!r.human_score)
      throw Error(ErrorKind::kMissingLabel, "record '" + r.id + "' has no human_score");
    labels.push_back(*r.human_score);
  }
  if (records.size() < 2)
    throw Error(ErrorKind::kInvalidArgument, "training needs at least 2 records");
  double lo = 0.0, hi = 1.0;
  const std::vector<double> y = normalize_labels(labels, &lo, &hi);
  const std::vector<FeatureVector> x = featurize_all(records);
  Model m;
  if (config.mode == "linear") {
    m = train_linear(x, y);
    m.hyperparams.seed = config.seed;
  } else if (config.mode == "gbr") {
    m = train_gbr(x, y, config.hyperparams());
  } else {
    throw Error(ErrorKind::kInvalidArgument, "mode must be gbr or linear");
  }
  m.lang_pair = config.lang_pair;
  m.label_min = lo;
  m.label_max = hi;
  return m;
}

std::string Engine::align_debug(const SentencePairRecord& record) const {
  const WordPairing p =
      align_words(record.source, record.back, record.source_emb, record.back_emb);
  return format_alignment(record.source, record.back, p);
}

std::string Engine::sense_path_debug(std::string_view x, std::string_view y,
                                     std::string_view lang) const {
  if (!graph_) throw Error(ErrorKind::kMissingResource, "sense-path needs a graph snapshot");
  const std::string lx = lexicon_.lemmatize(x, lang);
  const std::string ly = lexicon_.lemmatize(y, lang);
  std::string out;
  bool any = false;
  for (PartOfSpeech pos : {PartOfSpeech::kNoun, PartOfSpeech::kVerb}) {
    const bool has_x = !graph_->senses(lx, lang, pos).empty();
    const bool has_y = !graph_->senses(ly, lang, pos).empty();
    if (!has_x || !has_y) continue;
    any = true;
    const PathResult p = shortest_sense_path(lx, ly, lang, pos, *graph_, sense_);
    out += format_path(lx, ly, pos, p);
    if (p.found) return out;
  }
  if (!any)
    throw Error(ErrorKind::kNotFound, "no shared noun or verb senses for '" + lx + "' and '" +
                                          ly + "' in the snapshot");
  return out;
}

void Engine::flush_cache() const {
  if (cache_) cache_->save();
}

}  // namespace bivert
