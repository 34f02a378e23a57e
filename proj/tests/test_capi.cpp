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

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "bivert/bivert.h"

namespace {

std::string data(const char* name) { return std::string(BIVERT_TEST_DATA) + "/" + name; }

std::string take(char* s) {
  std::string out = s ? s : "";
  bivert_string_free(s);
  return out;
}

bivert_config* fixture_config() {
  bivert_config* c = nullptr;
  REQUIRE(bivert_config_create(&c) == BIVERT_OK);
  REQUIRE(bivert_config_set(c, "lexicons", data("lexicons").c_str()) == BIVERT_OK);
  REQUIRE(bivert_config_set(c, "graph", data("sense_graph.tsv").c_str()) == BIVERT_OK);
  return c;
}

}  // namespace

TEST_CASE("version and feature names") {
  CHECK(std::string(bivert_version()) == "1.0.0");
  const char* names[] = {"extra", "missing", "stopword", "inflection", "derivation", "sense"};
  for (size_t k = 0; k < BIVERT_FEATURE_COUNT; ++k)
    CHECK(std::string(bivert_feature_name(k)) == names[k]);
  CHECK(bivert_feature_name(BIVERT_FEATURE_COUNT) == nullptr);
  bivert_string_free(nullptr);
}

TEST_CASE("null arguments are rejected") {
  bivert_config* c = nullptr;
  CHECK(bivert_config_create(nullptr) == BIVERT_E_INVALID_ARGUMENT);
  CHECK(std::string(bivert_last_error()).size() > 0);
  CHECK(bivert_config_set(nullptr, "seed", "1") == BIVERT_E_INVALID_ARGUMENT);
  CHECK(bivert_engine_create(nullptr, nullptr) == BIVERT_E_INVALID_ARGUMENT);
  CHECK(bivert_dataset_load(nullptr, nullptr) == BIVERT_E_INVALID_ARGUMENT);
  CHECK(bivert_model_predict(nullptr, nullptr, nullptr) == BIVERT_E_INVALID_ARGUMENT);
  CHECK(bivert_pearson(nullptr, nullptr, 3, nullptr) == BIVERT_E_INVALID_ARGUMENT);
  CHECK(bivert_dataset_size(nullptr) == 0);
  CHECK(bivert_dataset_id(nullptr, 0) == nullptr);
  CHECK(bivert_dataset_human_score(nullptr, 0, nullptr) == 0);
  bivert_config_destroy(nullptr);
  bivert_engine_destroy(nullptr);
  bivert_dataset_destroy(nullptr);
  bivert_model_destroy(nullptr);
  (void)c;
}

TEST_CASE("config keys") {
  bivert_config* c = nullptr;
  REQUIRE(bivert_config_create(&c) == BIVERT_OK);
  char* v = nullptr;
  REQUIRE(bivert_config_get(c, "max_depth", &v) == BIVERT_OK);
  CHECK(take(v) == "7");
  CHECK(bivert_config_set(c, "mode", "linear") == BIVERT_OK);
  REQUIRE(bivert_config_get(c, "mode", &v) == BIVERT_OK);
  CHECK(take(v) == "linear");
  CHECK(bivert_config_set(c, "nope", "1") == BIVERT_E_INVALID_ARGUMENT);
  CHECK(std::string(bivert_last_error()).find("nope") != std::string::npos);
  CHECK(bivert_config_set(c, "seed", "x") == BIVERT_E_INVALID_ARGUMENT);
  CHECK(bivert_config_load(data("absent.json").c_str(), &c) == BIVERT_E_MISSING_RESOURCE);
  bivert_config_destroy(c);
}

TEST_CASE("dataset accessors and load errors") {
  bivert_dataset* d = nullptr;
  REQUIRE(bivert_dataset_load(data("identity.jsonl").c_str(), &d) == BIVERT_OK);
  CHECK(bivert_dataset_size(d) == 3);
  CHECK(std::string(bivert_dataset_id(d, 0)) == "id0");
  CHECK(std::string(bivert_dataset_system(d, 2)) == "sysC");
  double s = 0.0;
  CHECK(bivert_dataset_human_score(d, 1, &s) == 1);
  CHECK(s == 6.0);
  CHECK(bivert_dataset_id(d, 3) == nullptr);
  bivert_dataset_destroy(d);

  bivert_dataset* bad = nullptr;
  CHECK(bivert_dataset_load(data("malformed.jsonl").c_str(), &bad) == BIVERT_E_PARSE);
  CHECK(bivert_dataset_load(data("bad_dim.jsonl").c_str(), &bad) == BIVERT_E_PARSE);
  CHECK(std::string(bivert_last_error()).find("line 2") != std::string::npos);
  CHECK(bivert_dataset_load(data("absent.jsonl").c_str(), &bad) == BIVERT_E_MISSING_RESOURCE);
  CHECK(bad == nullptr);
  REQUIRE(bivert_dataset_load(data("unlabeled.jsonl").c_str(), &d) == BIVERT_OK);
  CHECK(bivert_dataset_human_score(d, 0, &s) == 0);
  bivert_dataset_destroy(d);
}

TEST_CASE("train, save, load, score") {
  bivert_config* c = fixture_config();
  REQUIRE(bivert_config_set(c, "n_estimators", "10") == BIVERT_OK);
  bivert_engine* e = nullptr;
  REQUIRE(bivert_engine_create(c, &e) == BIVERT_OK);
  bivert_dataset* d = nullptr;
  REQUIRE(bivert_dataset_load(data("identity.jsonl").c_str(), &d) == BIVERT_OK);

  std::vector<double> feats(bivert_dataset_size(d) * BIVERT_FEATURE_COUNT, -1.0);
  REQUIRE(bivert_featurize(e, d, feats.data()) == BIVERT_OK);
  for (double f : feats) CHECK(f == 0.0);

  bivert_model* m = nullptr;
  REQUIRE(bivert_train(e, d, c, &m) == BIVERT_OK);
  double imp[BIVERT_FEATURE_COUNT];
  REQUIRE(bivert_model_importances(m, imp) == BIVERT_OK);
  double sum = 0.0;
  for (double x : imp) sum += x;
  CHECK(sum == doctest::Approx(1.0));

  const auto path = std::filesystem::temp_directory_path() / "bivert_capi_model.json";
  REQUIRE(bivert_model_save(m, path.c_str()) == BIVERT_OK);
  bivert_model* loaded = nullptr;
  REQUIRE(bivert_model_load(path.c_str(), &loaded) == BIVERT_OK);
  std::filesystem::remove(path);

  const double zero[BIVERT_FEATURE_COUNT] = {0, 0, 0, 0, 0, 0};
  double p1 = 0.0, p2 = 0.0;
  REQUIRE(bivert_model_predict(m, zero, &p1) == BIVERT_OK);
  REQUIRE(bivert_model_predict(loaded, zero, &p2) == BIVERT_OK);
  CHECK(p1 == p2);

  std::vector<double> scores(bivert_dataset_size(d));
  REQUIRE(bivert_score(e, d, loaded, scores.data()) == BIVERT_OK);
  for (double s : scores) CHECK(s == p1);

  char* report = nullptr;
  REQUIRE(bivert_system_report(d, scores.data(), nullptr, &report) == BIVERT_OK);
  const std::string text = take(report);
  CHECK(text.rfind("sysA\t7.500000\t", 0) == 0);
  CHECK(text.find("PEARSON\tn/a\n") != std::string::npos);
  std::vector<double> varied = {0.1, 0.2, 0.3};
  REQUIRE(bivert_system_report(d, varied.data(), "sysB", &report) == BIVERT_OK);
  CHECK(take(report).find("PEARSON\t1.000000") != std::string::npos);

  bivert_dataset* unl = nullptr;
  REQUIRE(bivert_dataset_load(data("unlabeled.jsonl").c_str(), &unl) == BIVERT_OK);
  bivert_model* none = nullptr;
  CHECK(bivert_train(e, unl, c, &none) == BIVERT_E_MISSING_LABEL);
  CHECK(none == nullptr);

  bivert_model_destroy(m);
  bivert_model_destroy(loaded);
  bivert_dataset_destroy(unl);
  bivert_dataset_destroy(d);
  bivert_engine_destroy(e);
  bivert_config_destroy(c);
}

TEST_CASE("debug views") {
  bivert_config* c = fixture_config();
  bivert_engine* e = nullptr;
  REQUIRE(bivert_engine_create(c, &e) == BIVERT_OK);
  bivert_dataset* d = nullptr;
  REQUIRE(bivert_dataset_load(data("identity.jsonl").c_str(), &d) == BIVERT_OK);
  char* text = nullptr;
  REQUIRE(bivert_align(e, d, "id1", &text) == BIVERT_OK);
  CHECK(take(text).find("\t↔\t") != std::string::npos);
  CHECK(bivert_align(e, d, "missing-id", &text) == BIVERT_E_NOT_FOUND);
  REQUIRE(bivert_sense_path(e, "challenge", "problem", "eng", &text) == BIVERT_OK);
  CHECK(take(text).find("TOTAL\t1.250000") != std::string::npos);
  CHECK(bivert_sense_path(e, "qqq", "problem", "eng", &text) == BIVERT_E_NOT_FOUND);
  bivert_dataset_destroy(d);
  bivert_engine_destroy(e);

  REQUIRE(bivert_config_set(c, "graph", data("absent.tsv").c_str()) == BIVERT_OK);
  CHECK(bivert_engine_create(c, &e) == BIVERT_E_MISSING_RESOURCE);
  bivert_config_destroy(c);
}

TEST_CASE("standalone helpers") {
  char* out = nullptr;
  REQUIRE(bivert_preprocess("Don't STOP", "eng", &out) == BIVERT_OK);
  CHECK(take(out) == "do not stop");
  const double a[] = {1, 2, 3}, b[] = {2, 4, 7}, flat[] = {5, 5, 5};
  double r = 0.0;
  REQUIRE(bivert_pearson(a, b, 3, &r) == BIVERT_OK);
  CHECK(r == doctest::Approx(0.9933992677987828));
  CHECK(bivert_pearson(a, flat, 3, &r) == BIVERT_E_NUMERIC);
  CHECK(bivert_pearson(a, b, 1, &r) == BIVERT_E_NUMERIC);
}
