/*
 * Copyright 2026 The BiVert Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/*
 * C interface to the BiVert reference-less translation evaluator.
 *
 * All objects are opaque handles owned by the caller and released with the
 * matching *_destroy function. Every fallible call returns a bivert_status;
 * on failure bivert_last_error() describes the problem (per thread, valid
 * until the next failing call on that thread). Strings returned through
 * char** out-parameters are heap allocated and freed with
 * bivert_string_free().
 *
 * Handles are immutable after construction except bivert_config, so they can
 * be shared across threads once built.
 */

#ifndef BIVERT_BIVERT_H
#define BIVERT_BIVERT_H

#include <stddef.h>

#if defined(_WIN32)
#  define BIVERT_API __declspec(dllexport)
#elif defined(__GNUC__)
#  define BIVERT_API __attribute__((visibility("default")))
#else
#  define BIVERT_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes double as CLI exit codes. */
typedef enum bivert_status {
  BIVERT_OK = 0,
  BIVERT_E_INVALID_ARGUMENT = 1,
  BIVERT_E_MISSING_RESOURCE = 2,
  BIVERT_E_PARSE = 3, /* malformed input or schema violation */
  BIVERT_E_MISSING_LABEL = 4,
  BIVERT_E_NOT_FOUND = 5,
  BIVERT_E_DEGENERATE = 6, /* sentence empty after preprocessing */
  BIVERT_E_NUMERIC = 7,    /* zero vector, graph degree, undefined correlation */
  BIVERT_E_INTERNAL = 8
} bivert_status;

#define BIVERT_FEATURE_COUNT 6

typedef struct bivert_config bivert_config;
typedef struct bivert_engine bivert_engine;
typedef struct bivert_dataset bivert_dataset;
typedef struct bivert_model bivert_model;

BIVERT_API const char* bivert_version(void);
BIVERT_API const char* bivert_last_error(void);
BIVERT_API void bivert_string_free(char* s);

/* Feature name for index 0..5 (extra, missing, stopword, inflection,
 * derivation, sense); NULL when out of range. */
BIVERT_API const char* bivert_feature_name(size_t index);

/* ---- run configuration ------------------------------------------------ */

BIVERT_API bivert_status bivert_config_create(bivert_config** out);
BIVERT_API bivert_status bivert_config_load(const char* path, bivert_config** out);
BIVERT_API bivert_status bivert_config_save(const bivert_config* config, const char* path);
/* Keys: dataset, graph, lexicons, model, out, report, lang_pair, max_depth,
 * relations (comma list), mode (gbr|linear), seed, jobs, n_estimators,
 * tree_depth, learning_rate, min_samples_leaf, subsample, exclude_system,
 * cache_dir. An empty value resets optional numeric keys. */
BIVERT_API bivert_status bivert_config_set(bivert_config* config, const char* key,
                                           const char* value);
BIVERT_API bivert_status bivert_config_get(const bivert_config* config, const char* key,
                                           char** value);
BIVERT_API void bivert_config_destroy(bivert_config* config);

/* ---- resources ----------------------------------------------------------- */

/* Loads lexicons and, when configured, the sense graph snapshot. */
BIVERT_API bivert_status bivert_engine_create(const bivert_config* config,
                                              bivert_engine** out);
/* Writes the sense-cost memo to the cache directory, if one is configured. */
BIVERT_API bivert_status bivert_engine_flush_cache(const bivert_engine* engine);
BIVERT_API void bivert_engine_destroy(bivert_engine* engine);

BIVERT_API bivert_status bivert_dataset_load(const char* path, bivert_dataset** out);
BIVERT_API size_t bivert_dataset_size(const bivert_dataset* dataset);
/* Borrowed pointers, valid for the dataset's lifetime. */
BIVERT_API const char* bivert_dataset_id(const bivert_dataset* dataset, size_t index);
BIVERT_API const char* bivert_dataset_system(const bivert_dataset* dataset, size_t index);
/* Returns 1 and writes the score when the record is labelled, else 0. */
BIVERT_API int bivert_dataset_human_score(const bivert_dataset* dataset, size_t index,
                                          double* score);
BIVERT_API void bivert_dataset_destroy(bivert_dataset* dataset);

/* ---- model ------------------------------------------------------------- */

BIVERT_API bivert_status bivert_model_load(const char* path, bivert_model** out);
BIVERT_API bivert_status bivert_model_save(const bivert_model* model, const char* path);
BIVERT_API bivert_status bivert_model_predict(const bivert_model* model,
                                              const double features[BIVERT_FEATURE_COUNT],
                                              double* score);
BIVERT_API bivert_status bivert_model_importances(const bivert_model* model,
                                                  double out[BIVERT_FEATURE_COUNT]);
BIVERT_API void bivert_model_destroy(bivert_model* model);

/* ---- pipeline ------------------------------------------------------------ */

/* Per-record features, row-major into out[size * 6]. */
BIVERT_API bivert_status bivert_featurize(const bivert_engine* engine,
                                          const bivert_dataset* dataset, double* out);
/* Per-record predicted quality, higher is better, into out[size]. */
BIVERT_API bivert_status bivert_score(const bivert_engine* engine, const bivert_dataset* dataset,
                                      const bivert_model* model, double* out);
/* Trains with the config's mode and hyperparameters. Every record needs a
 * human score (BIVERT_E_MISSING_LABEL otherwise). */
BIVERT_API bivert_status bivert_train(const bivert_engine* engine,
                                      const bivert_dataset* dataset,
                                      const bivert_config* config, bivert_model** out);
/* System-level table: "system\thuman_mean\tbivert_mean" rows and a final
 * "PEARSON\tr" line. exclude_system may be NULL. */
BIVERT_API bivert_status bivert_system_report(const bivert_dataset* dataset,
                                              const double* scores, const char* exclude_system,
                                              char** report);
/* Word alignment debug view for one record. */
BIVERT_API bivert_status bivert_align(const bivert_engine* engine, const bivert_dataset* dataset,
                                      const char* record_id, char** text);
/* Sense path debug view; lang is the lemma language (e.g. "eng"). */
BIVERT_API bivert_status bivert_sense_path(const bivert_engine* engine, const char* lemma_a,
                                           const char* lemma_b, const char* lang, char** text);

/* ---- standalone helpers ------------------------------------------------- */

BIVERT_API bivert_status bivert_preprocess(const char* text, const char* lang, char** out);
BIVERT_API bivert_status bivert_pearson(const double* a, const double* b, size_t n, double* r);

#ifdef __cplusplus
}
#endif

#endif /* BIVERT_BIVERT_H */
