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


#include <doctest.h>

#include <cstdlib>

#include "core/errors.hpp"
#include "core/pipeline.hpp"
#include "support.hpp"

using namespace bivert;
using bivert::testing::data_path;

namespace {

RunConfig fixture_config() {
  RunConfig c;
  c.lexicons = data_path("lexicons").string();
  c.graph = data_path("sense_graph.tsv").string();
  return c;
}

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::kInvalidArgument;
}

}  // namespace

TEST_CASE("config defaults") {
  const RunConfig c;
  CHECK(c.lang_pair == "eng-deu");
  CHECK(c.max_depth == 7);
  CHECK(c.relations == std::vector<std::string>{"hypernym"});
  CHECK(c.mode == "gbr");
  CHECK(c.seed == 0);
  CHECK(c.effective_jobs() >= 1);
  const auto sc = c.sense_config();
  CHECK(sc.max_depth == 7);
  CHECK(sc.allowed_relations == std::set<SenseRelation>{SenseRelation::kHypernym});
  CHECK(c.hyperparams() == default_hyperparams("eng-deu"));
}

TEST_CASE("config set/get and overrides") {
  RunConfig c;
  c.set("lang_pair", "eng-rus");
  CHECK(c.hyperparams().n_estimators == 550);
  CHECK(c.hyperparams().max_depth == 7);
  c.set("n_estimators", "12");
  c.set("learning_rate", "0.25");
  c.set("seed", "5");
  const auto hp = c.hyperparams();
  CHECK(hp.n_estimators == 12);
  CHECK(hp.max_depth == 7);
  CHECK(hp.learning_rate == 0.25);
  CHECK(hp.seed == 5);
  c.set("n_estimators", "");
  CHECK(c.hyperparams().n_estimators == 550);
  c.set("relations", "hypernym,antonym");
  CHECK(c.sense_config().allowed_relations.size() == 2);
  CHECK(c.get("relations") == "hypernym,antonym");
  CHECK(c.get("seed") == "5");
  CHECK(kind_of([&] { c.set("mode", "forest"); }) == ErrorKind::kInvalidArgument);
  CHECK(kind_of([&] { c.set("max_depth", "abc"); }) == ErrorKind::kInvalidArgument);
  CHECK(kind_of([&] { c.set("bogus", "1"); }) == ErrorKind::kInvalidArgument);
  CHECK(kind_of([&] { c.get("bogus"); }) == ErrorKind::kInvalidArgument);
  c.set("relations", "hypernym,synonym");
  CHECK(kind_of([&] { c.sense_config(); }) == ErrorKind::kInvalidArgument);
}

TEST_CASE("config round trips through its file form") {
  RunConfig c = fixture_config();
  c.dataset = "some/data.jsonl";
  c.mode = "linear";
  c.seed = 17;
  c.jobs = 3;
  c.tree_depth = 4;
  c.subsample = 0.5;
  c.relations = {"hypernym", "holonym"};
  c.exclude_system = "refB";
  CHECK(RunConfig::from_json(c.to_json()) == c);
  bivert::testing::TempDir dir("cfg");
  c.save(dir / "run.json");
  CHECK(RunConfig::load(dir / "run.json") == c);
  CHECK(RunConfig::from_json(RunConfig{}.to_json()) == RunConfig{});
  CHECK(kind_of([] { RunConfig::from_json("[1, 2]"); }) == ErrorKind::kParse);
  CHECK(kind_of([] { RunConfig::from_json("{\"max_depth\": \"x\"}"); }) == ErrorKind::kParse);
  CHECK(kind_of([&] { RunConfig::load(dir / "none.json"); }) == ErrorKind::kMissingResource);
}

TEST_CASE("engine resources") {
  RunConfig c = fixture_config();
  c.graph = data_path("absent.tsv").string();
  CHECK(kind_of([&] { Engine::create(c); }) == ErrorKind::kMissingResource);
  c = fixture_config();
  c.lexicons = data_path("absent").string();
  CHECK(kind_of([&] { Engine::create(c); }) == ErrorKind::kMissingResource);
  c = RunConfig{};
  const auto engine = Engine::create(c);  // bundled lexicons, no graph
  CHECK(engine->graph() == nullptr);
  CHECK(engine->lexicon().stopword_count("eng") == 179);
}

TEST_CASE("identity records give zero features") {
  const auto engine = Engine::create(fixture_config());
  const auto recs = load_dataset(data_path("identity.jsonl"));
  for (const auto& r : recs) {
    const auto a = engine->analyze(r);
    CHECK(a.features == FeatureVector{});
    for (const auto& rel : a.relations) CHECK(rel.category == RelationCategory::kSame);
  }
  Model m;
  m.init = 0.42;
  const auto scores = engine->score_all(recs, m);
  for (double s : scores) CHECK(s == m.predict(FeatureVector{}));
}

TEST_CASE("mixed record analysis") {
  const auto engine = Engine::create(fixture_config());
  const auto recs = load_dataset(data_path("align.jsonl"));
  const auto& r = recs.at(1);
  const auto a = engine->analyze(r);
  std::vector<RelationCategory> cats;
  for (const auto& rel : a.relations) cats.push_back(rel.category);
  using C = RelationCategory;
  CHECK(cats == std::vector<C>{C::kStopword, C::kDerivation, C::kInflection, C::kInflection,
                               C::kExtra});
  CHECK(a.features[0] == 0.25);
  CHECK(a.features[1] == 0.0);
  CHECK(a.features[2] == 0.25);
  double infl = 0.0;
  for (std::size_t i = 0; i < a.pairing.pairs.size(); ++i)
    if (a.relations[i].category == C::kInflection) infl += 1.0 - a.pairing.pairs[i].similarity;
  CHECK(a.features[3] == doctest::Approx(infl));
  CHECK(a.features[4] == doctest::Approx(1.0 - a.pairing.pairs[1].similarity));
  CHECK(a.features[5] == 0.0);
  CHECK(engine->align_debug(r).find("EXTRA\ttoday\n") != std::string::npos);
}

TEST_CASE("parallel featurization keeps order and values") {
  std::mt19937_64 rng(12);
  std::vector<SentencePairRecord> recs;
  const std::vector<std::string> vocab = {"the",   "cat",  "cats", "ran",    "running",
                                          "happy", "happiness", "challenge", "problem",
                                          "zebra", "nebula", "question"};
  for (int i = 0; i < 60; ++i) {
    auto pick = [&] {
      std::vector<std::string> w;
      const std::size_t n = 1 + rng() % 6;
      for (std::size_t k = 0; k < n; ++k) w.push_back(vocab[rng() % vocab.size()]);
      return bivert::testing::sentence("eng", w);
    };
    SentencePairRecord r;
    r.id = "r" + std::to_string(i);
    r.system = "s";
    r.source = pick();
    r.back = pick();
    r.source_emb = bivert::testing::random_embeddings(rng, r.source.token_count(), 4);
    r.back_emb = bivert::testing::random_embeddings(rng, r.back.token_count(), 4);
    recs.push_back(std::move(r));
  }
  RunConfig c = fixture_config();
  c.jobs = 1;
  const auto serial = Engine::create(c)->featurize_all(recs);
  c.jobs = 4;
  const auto parallel = Engine::create(c)->featurize_all(recs);
  CHECK(serial == parallel);
  for (const auto& f : serial)
    for (std::size_t k = 0; k < kFeatureCount; ++k) CHECK(f[k] >= 0.0);
}

TEST_CASE("training through the engine") {
  const auto engine = Engine::create(fixture_config());
  auto recs = load_dataset(data_path("identity.jsonl"));
  RunConfig c = fixture_config();
  c.n_estimators = 5;
  const Model m = engine->train(recs, c);
  CHECK(m.lang_pair == "eng-deu");
  CHECK(m.label_min == 6.0);
  CHECK(m.label_max == 9.0);
  CHECK(m.trees.size() == 5);
  recs[1].human_score.reset();
  CHECK(kind_of([&] { engine->train(recs, c); }) == ErrorKind::kMissingLabel);
  CHECK(kind_of([&] {
          engine->train(load_dataset(data_path("unlabeled.jsonl")), c);
        }) == ErrorKind::kMissingLabel);
}

TEST_CASE("sense path debug view") {
  const auto engine = Engine::create(fixture_config());
  const auto text = engine->sense_path_debug("challenges", "problems", "eng");
  CHECK(text.rfind("QUERY\tchallenge\tproblem\tnoun\n", 0) == 0);
  CHECK(text.find("TOTAL\t1.250000\n") != std::string::npos);
  const auto shared = engine->sense_path_debug("challenge", "dare", "eng");
  CHECK(shared.find("TOTAL\t0.000000\nSCORE\t0.000000\n") != std::string::npos);
  const auto verb = engine->sense_path_debug("defy", "query", "eng");
  CHECK(verb.find("\tverb\n") != std::string::npos);
  CHECK(kind_of([&] { engine->sense_path_debug("zzzz", "problem", "eng"); }) ==
        ErrorKind::kNotFound);
  const auto none = engine->sense_path_debug("zebra", "nebula", "eng");
  CHECK(none.find("NOT_FOUND\tdepth=7") != std::string::npos);
  RunConfig c = fixture_config();
  c.graph.clear();
  CHECK(kind_of([&] { Engine::create(c)->sense_path_debug("a", "b", "eng"); }) ==
        ErrorKind::kMissingResource);
}

TEST_CASE("source language of a pair") {
  CHECK(source_lang("eng-deu") == "eng");
  CHECK(source_lang("zho-eng") == "zho");
}
