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

#include "bivert/bivert.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>
#include <vector>

#include "../core/corpus.hpp"
#include "../core/errors.hpp"
#include "../core/pipeline.hpp"
#include "../core/score_train.hpp"

struct bivert_config {
  bivert::RunConfig config;
};

struct bivert_engine {
  std::unique_ptr<bivert::Engine> engine;
};

struct bivert_dataset {
  std::vector<bivert::SentencePairRecord> records;
};

struct bivert_model {
  bivert::Model model;
};

namespace {

thread_local std::string g_last_error;

bivert_status status_for(bivert::ErrorKind kind) {
  using bivert::ErrorKind;
  switch (kind) {
    case ErrorKind::kInvalidArgument: return BIVERT_E_INVALID_ARGUMENT;
    case ErrorKind::kMissingResource: return BIVERT_E_MISSING_RESOURCE;
    case ErrorKind::kParse:
    case ErrorKind::kSchema: return BIVERT_E_PARSE;
    case ErrorKind::kMissingLabel: return BIVERT_E_MISSING_LABEL;
    case ErrorKind::kNotFound: return BIVERT_E_NOT_FOUND;
    case ErrorKind::kDegenerateSentence: return BIVERT_E_DEGENERATE;
    case ErrorKind::kZeroVector:
    case ErrorKind::kDegree:
    case ErrorKind::kUndefinedCorrelation: return BIVERT_E_NUMERIC;
  }
  return BIVERT_E_INTERNAL;
}

bivert_status fail(bivert_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

// Runs fn, translating exceptions into status codes.
template <typename Fn>
bivert_status guarded(Fn&& fn) {
  try {
    fn();
    return BIVERT_OK;
  } catch (const bivert::Error& e) {
    return fail(status_for(e.kind()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(BIVERT_E_INTERNAL, "out of memory");
  } catch (const std::filesystem::filesystem_error& e) {
    return fail(BIVERT_E_MISSING_RESOURCE, e.what());
  } catch (const std::exception& e) {
    return fail(BIVERT_E_INTERNAL, e.what());
  } catch (...) {
    return fail(BIVERT_E_INTERNAL, "unknown error");
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

#define BIVERT_REQUIRE(cond, what) \
  do {                             \
    if (!(cond)) return fail(BIVERT_E_INVALID_ARGUMENT, what); \
  } while (0)

}  // namespace

extern "C" {

const char* bivert_version(void) { return "1.0.0"; }

const char* bivert_last_error(void) { return g_last_error.c_str(); }

void bivert_string_free(char* s) { std::free(s); }

const char* bivert_feature_name(size_t index) {
  if (index >= bivert::kFeatureCount) return nullptr;
  return bivert::kFeatureNames[index].data();
}

bivert_status bivert_config_create(bivert_config** out) {
  BIVERT_REQUIRE(out, "null output pointer");
  return guarded([&] { *out = new bivert_config{}; });
}

bivert_status bivert_config_load(const char* path, bivert_config** out) {
  BIVERT_REQUIRE(path && out, "null argument");
  return guarded([&] { *out = new bivert_config{bivert::RunConfig::load(path)}; });
}

bivert_status bivert_config_save(const bivert_config* config, const char* path) {
  BIVERT_REQUIRE(config && path, "null argument");
  return guarded([&] { config->config.save(path); });
}

bivert_status bivert_config_set(bivert_config* config, const char* key, const char* value) {
  BIVERT_REQUIRE(config && key && value, "null argument");
  return guarded([&] { config->config.set(key, value); });
}

bivert_status bivert_config_get(const bivert_config* config, const char* key, char** value) {
  BIVERT_REQUIRE(config && key && value, "null argument");
  return guarded([&] { *value = dup_string(config->config.get(key)); });
}

void bivert_config_destroy(bivert_config* config) { delete config; }

bivert_status bivert_engine_create(const bivert_config* config, bivert_engine** out) {
  BIVERT_REQUIRE(config && out, "null argument");
  return guarded([&] { *out = new bivert_engine{bivert::Engine::create(config->config)}; });
}

bivert_status bivert_engine_flush_cache(const bivert_engine* engine) {
  BIVERT_REQUIRE(engine, "null engine");
  return guarded([&] { engine->engine->flush_cache(); });
}

void bivert_engine_destroy(bivert_engine* engine) { delete engine; }

bivert_status bivert_dataset_load(const char* path, bivert_dataset** out) {
  BIVERT_REQUIRE(path && out, "null argument");
  return guarded([&] { *out = new bivert_dataset{bivert::load_dataset(path)}; });
}

size_t bivert_dataset_size(const bivert_dataset* dataset) {
  return dataset ? dataset->records.size() : 0;
}

const char* bivert_dataset_id(const bivert_dataset* dataset, size_t index) {
  if (!dataset || index >= dataset->records.size()) return nullptr;
  return dataset->records[index].id.c_str();
}

const char* bivert_dataset_system(const bivert_dataset* dataset, size_t index) {
  if (!dataset || index >= dataset->records.size()) return nullptr;
  return dataset->records[index].system.c_str();
}

int bivert_dataset_human_score(const bivert_dataset* dataset, size_t index, double* score) {
  if (!dataset || index >= dataset->records.size()) return 0;
  const auto& h = dataset->records[index].human_score;
  if (!h) return 0;
  if (score) *score = *h;
  return 1;
}

void bivert_dataset_destroy(bivert_dataset* dataset) { delete dataset; }

bivert_status bivert_model_load(const char* path, bivert_model** out) {
  BIVERT_REQUIRE(path && out, "null argument");
  return guarded([&] { *out = new bivert_model{bivert::load_model(path)}; });
}

bivert_status bivert_model_save(const bivert_model* model, const char* path) {
  BIVERT_REQUIRE(model && path, "null argument");
  return guarded([&] { bivert::save_model(model->model, path); });
}

bivert_status bivert_model_predict(const bivert_model* model,
                                   const double features[BIVERT_FEATURE_COUNT], double* score) {
  BIVERT_REQUIRE(model && features && score, "null argument");
  return guarded([&] {
    bivert::FeatureVector f;
    for (std::size_t k = 0; k < bivert::kFeatureCount; ++k) f[k] = features[k];
    *score = model->model.predict(f);
  });
}

bivert_status bivert_model_importances(const bivert_model* model,
                                       double out[BIVERT_FEATURE_COUNT]) {
  BIVERT_REQUIRE(model && out, "null argument");
  return guarded([&] {
    const auto imp = bivert::feature_importances(model->model);
    std::copy(imp.begin(), imp.end(), out);
  });
}

void bivert_model_destroy(bivert_model* model) { delete model; }

bivert_status bivert_featurize(const bivert_engine* engine, const bivert_dataset* dataset,
                               double* out) {
  BIVERT_REQUIRE(engine && dataset && (out || dataset->records.empty()), "null argument");
  return guarded([&] {
    const auto features = engine->engine->featurize_all(dataset->records);
    for (std::size_t i = 0; i < features.size(); ++i)
      for (std::size_t k = 0; k < bivert::kFeatureCount; ++k)
        out[i * bivert::kFeatureCount + k] = features[i][k];
  });
}

bivert_status bivert_score(const bivert_engine* engine, const bivert_dataset* dataset,
                           const bivert_model* model, double* out) {
  BIVERT_REQUIRE(engine && dataset && model && (out || dataset->records.empty()),
                 "null argument");
  return guarded([&] {
    const auto scores = engine->engine->score_all(dataset->records, model->model);
    std::copy(scores.begin(), scores.end(), out);
  });
}

bivert_status bivert_train(const bivert_engine* engine, const bivert_dataset* dataset,
                           const bivert_config* config, bivert_model** out) {
  BIVERT_REQUIRE(engine && dataset && config && out, "null argument");
  return guarded([&] {
    *out = new bivert_model{engine->engine->train(dataset->records, config->config)};
  });
}

bivert_status bivert_system_report(const bivert_dataset* dataset, const double* scores,
                                   const char* exclude_system, char** report) {
  BIVERT_REQUIRE(dataset && report && (scores || dataset->records.empty()), "null argument");
  return guarded([&] {
    std::vector<bivert::ScoredRecord> scored;
    for (std::size_t i = 0; i < dataset->records.size(); ++i) {
      const auto& r = dataset->records[i];
      if (!r.human_score)
        throw bivert::Error(bivert::ErrorKind::kMissingLabel,
                            "record '" + r.id + "' has no human_score");
      scored.push_back({r.system, *r.human_score, scores[i]});
    }
    const auto rep = bivert::system_level_report(scored, exclude_system ? exclude_system : "");
    *report = dup_string(rep.to_tsv());
  });
}

bivert_status bivert_align(const bivert_engine* engine, const bivert_dataset* dataset,
                           const char* record_id, char** text) {
  BIVERT_REQUIRE(engine && dataset && record_id && text, "null argument");
  return guarded([&] {
    for (const auto& r : dataset->records) {
      if (r.id == record_id) {
        *text = dup_string(engine->engine->align_debug(r));
        return;
      }
    }
    throw bivert::Error(bivert::ErrorKind::kNotFound,
                        std::string("no record with id '") + record_id + "'");
  });
}

bivert_status bivert_sense_path(const bivert_engine* engine, const char* lemma_a,
                                const char* lemma_b, const char* lang, char** text) {
  BIVERT_REQUIRE(engine && lemma_a && lemma_b && lang && text, "null argument");
  return guarded([&] {
    *text = dup_string(engine->engine->sense_path_debug(lemma_a, lemma_b, lang));
  });
}

bivert_status bivert_preprocess(const char* text, const char* lang, char** out) {
  BIVERT_REQUIRE(text && lang && out, "null argument");
  return guarded([&] { *out = dup_string(bivert::preprocess(text, lang)); });
}

bivert_status bivert_pearson(const double* a, const double* b, size_t n, double* r) {
  BIVERT_REQUIRE(a && b && r, "null argument");
  return guarded([&] { *r = bivert::pearson({a, n}, {b, n}); });
}

}  // extern "C"
