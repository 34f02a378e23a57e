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

// End-to-end scoring: alignment, relation classification, features and the
// aggregation model, plus the run configuration that drives it.

#ifndef BIVERT_CORE_PIPELINE_HPP
#define BIVERT_CORE_PIPELINE_HPP

#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "corpus.hpp"
#include "relation.hpp"
#include "score_train.hpp"
#include "sense_graph.hpp"
#include "word_align.hpp"

namespace bivert {

struct RunConfig {
  std::string dataset;
  std::string graph;
  std::string lexicons;
  std::string model;
  std::string out;
  std::string report;
  std::string lang_pair = "eng-deu";
  std::size_t max_depth = 7;
  std::vector<std::string> relations = {"hypernym"};
  std::string mode = "gbr";
  std::uint64_t seed = 0;
  // 0 = hardware concurrency.
  std::size_t jobs = 0;
  // Unset fields take the language pair's defaults.
  std::optional<std::size_t> n_estimators;
  std::optional<std::size_t> tree_depth;
  std::optional<double> learning_rate;
  std::optional<std::size_t> min_samples_leaf;
  std::optional<double> subsample;
  std::string exclude_system;
  std::string cache_dir;

  SenseConfig sense_config() const;
  Hyperparams hyperparams() const;
  std::size_t effective_jobs() const;

  std::string to_json() const;
  static RunConfig from_json(std::string_view text);
  static RunConfig load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;

  // Sets one field from its string form; keys match the JSON field names.
  void set(std::string_view key, std::string_view value);
  std::string get(std::string_view key) const;

  bool operator==(const RunConfig&) const = default;
};

struct SentenceAnalysis {
  WordPairing pairing;
  std::vector<RelationRecord> relations;
  FeatureVector features;
};

// Shared, read-only scoring resources.
class Engine {
 public:
  // Loads lexicons (required) and the graph snapshot (optional; without it
  // Sense pairs use the embedding fallback).
  static std::unique_ptr<Engine> create(const RunConfig& config);
  Engine(LexiconBundle lexicon, std::optional<SenseGraphStore> graph, SenseConfig sense,
         std::size_t jobs, std::string cache_dir = {});
  ~Engine();

  SentenceAnalysis analyze(const SentencePairRecord& record) const;
  // Features for every record, in input order.
  std::vector<FeatureVector> featurize_all(std::span<const SentencePairRecord> records) const;
  std::vector<double> score_all(std::span<const SentencePairRecord> records,
                                const Model& model) const;

  // Trains on the records' human scores, normalized. Throws
  // Error(kMissingLabel) if any record lacks one.
  Model train(std::span<const SentencePairRecord> records, const RunConfig& config) const;

  std::string align_debug(const SentencePairRecord& record) const;
  // Searches noun then verb paths; Error(kNotFound) when neither lemma has a
  // sense in the snapshot.
  std::string sense_path_debug(std::string_view x, std::string_view y,
                               std::string_view lang) const;

  void flush_cache() const;

  const LexiconBundle& lexicon() const { return lexicon_; }
  const SenseGraphStore* graph() const { return graph_ ? &*graph_ : nullptr; }
  const SenseConfig& sense_config() const { return sense_; }

 private:
  LexiconBundle lexicon_;
  std::optional<SenseGraphStore> graph_;
  SenseConfig sense_;
  std::size_t jobs_;
  std::unique_ptr<SenseCostCache> cache_;
};

std::string source_lang(std::string_view lang_pair);

}  // namespace bivert

#endif  // BIVERT_CORE_PIPELINE_HPP
