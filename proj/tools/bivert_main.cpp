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

// bivert: command-line front end over the C API.
//
// Exit codes: 0 ok, 1 usage/invalid argument, 2 missing resource, 3 parse or
// schema error, 4 missing training label, 5 unknown record id or lemma,
// 6 degenerate sentence, 7 numeric failure, 8 internal error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bivert/bivert.h"

namespace {

struct Deleter {
  void operator()(bivert_config* p) const { bivert_config_destroy(p); }
  void operator()(bivert_engine* p) const { bivert_engine_destroy(p); }
  void operator()(bivert_dataset* p) const { bivert_dataset_destroy(p); }
  void operator()(bivert_model* p) const { bivert_model_destroy(p); }
  void operator()(char* p) const { bivert_string_free(p); }
};
template <typename T>
using Handle = std::unique_ptr<T, Deleter>;

// Thrown to unwind with an exit code after the message has been printed.
struct Exit {
  int code;
};

void check(bivert_status s, const char* what) {
  if (s == BIVERT_OK) return;
  std::cerr << "bivert: " << what << ": " << bivert_last_error() << "\n";
  throw Exit{static_cast<int>(s)};
}

std::string take(char* s) {
  Handle<char> h(s);
  return h ? std::string(h.get()) : std::string();
}

// Writes to `path`, or stdout when empty.
void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    std::cerr << "bivert: cannot write '" << path << "'\n";
    throw Exit{BIVERT_E_MISSING_RESOURCE};
  }
  out << text;
}

std::string format_number(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.9f", v);
  return buf;
}

std::string importances_table(const bivert_model* model, const std::string& label) {
  double imp[BIVERT_FEATURE_COUNT];
  check(bivert_model_importances(model, imp), "importances");
  std::string header = "pair", row = label.empty() ? "model" : label;
  for (size_t k = 0; k < BIVERT_FEATURE_COUNT; ++k) {
    header += std::string("\t") + bivert_feature_name(k);
    char buf[32];
    std::snprintf(buf, sizeof buf, "\t%.3f", imp[k]);
    row += buf;
  }
  return header + "\n" + row + "\n";
}

struct Flags {
  std::string config_file, save_config;
  std::vector<std::pair<std::string, std::string>> overrides;
};

// Registers a flag whose value, when given, overrides the config file.
void add_override(CLI::App& app, Flags& flags, const std::string& name, const std::string& key,
                  const std::string& help) {
  app.add_option_function<std::string>(
      name, [&flags, key](const std::string& v) { flags.overrides.emplace_back(key, v); }, help);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"BiVert: reference-less translation evaluation via back-translation"};
  app.require_subcommand(1);
  app.fallthrough();

  Flags flags;
  app.add_option("--config", flags.config_file, "JSON run configuration; flags override it");
  app.add_option("--save-config", flags.save_config, "Write the resolved configuration here");
  add_override(app, flags, "--dataset", "dataset", "Line-delimited dataset file");
  add_override(app, flags, "--graph", "graph", "Sense graph snapshot");
  add_override(app, flags, "--lexicons", "lexicons", "Lexicon directory");
  add_override(app, flags, "--model", "model", "Model file (input for score, output for train)");
  add_override(app, flags, "--lang-pair", "lang_pair", "Language pair tag, e.g. eng-deu");
  add_override(app, flags, "--max-depth", "max_depth", "Sense graph depth limit (default 7)");
  add_override(app, flags, "--relations", "relations",
               "Comma-separated sense relations (default hypernym)");
  add_override(app, flags, "--mode", "mode", "gbr or linear (default gbr)");
  add_override(app, flags, "--seed", "seed", "Random seed (default 0)");
  add_override(app, flags, "--jobs", "jobs", "Parallel workers (default: all cores)");
  add_override(app, flags, "--n-estimators", "n_estimators", "Boosting rounds");
  add_override(app, flags, "--tree-depth", "tree_depth", "Regression tree depth");
  add_override(app, flags, "--learning-rate", "learning_rate", "Shrinkage");
  add_override(app, flags, "--min-samples-leaf", "min_samples_leaf", "Minimum leaf size");
  add_override(app, flags, "--subsample", "subsample", "Row fraction per tree");
  add_override(app, flags, "--out", "out", "Output file for per-sentence scores");
  add_override(app, flags, "--report", "report", "Output file for the system-level report");
  add_override(app, flags, "--exclude-system", "exclude_system",
               "System left out of the correlation (e.g. refB)");

  auto* score = app.add_subcommand("score", "Score a dataset with a trained model");
  auto* train = app.add_subcommand("train", "Train the aggregation model");
  auto* align = app.add_subcommand("align", "Show the word alignment of one record");
  std::string record_id;
  align->add_option("id", record_id, "Record id")->required();
  auto* sense = app.add_subcommand("sense-path", "Show the sense graph path between lemmas");
  std::string lemma_a, lemma_b;
  sense->add_option("lemma_a", lemma_a)->required();
  sense->add_option("lemma_b", lemma_b)->required();
  auto* importances = app.add_subcommand("importances", "Print model feature importances");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : BIVERT_E_INVALID_ARGUMENT;
  }

  try {
    bivert_config* raw_config = nullptr;
    if (flags.config_file.empty())
      check(bivert_config_create(&raw_config), "config");
    else
      check(bivert_config_load(flags.config_file.c_str(), &raw_config), "config");
    Handle<bivert_config> config(raw_config);
    for (const auto& [key, value] : flags.overrides)
      check(bivert_config_set(config.get(), key.c_str(), value.c_str()), "config");
    if (!flags.save_config.empty())
      check(bivert_config_save(config.get(), flags.save_config.c_str()), "save config");

    auto get = [&](const char* key) {
      char* v = nullptr;
      check(bivert_config_get(config.get(), key, &v), "config");
      return take(v);
    };

    if (importances->parsed()) {
      bivert_model* m = nullptr;
      check(bivert_model_load(get("model").c_str(), &m), "model");
      Handle<bivert_model> model(m);
      std::cout << importances_table(model.get(), get("lang_pair"));
      return 0;
    }

    bivert_engine* e = nullptr;
    check(bivert_engine_create(config.get(), &e), "resources");
    Handle<bivert_engine> engine(e);

    if (sense->parsed()) {
      std::string lang = get("lang_pair");
      lang = lang.substr(0, lang.find('-'));
      char* text = nullptr;
      check(bivert_sense_path(engine.get(), lemma_a.c_str(), lemma_b.c_str(), lang.c_str(), &text),
            "sense-path");
      std::cout << take(text);
      return 0;
    }

    bivert_dataset* d = nullptr;
    check(bivert_dataset_load(get("dataset").c_str(), &d), "dataset");
    Handle<bivert_dataset> dataset(d);
    const size_t n = bivert_dataset_size(dataset.get());

    if (align->parsed()) {
      char* text = nullptr;
      check(bivert_align(engine.get(), dataset.get(), record_id.c_str(), &text), "align");
      std::cout << take(text);
      return 0;
    }

    if (train->parsed()) {
      const std::string model_path = get("model");
      if (model_path.empty()) {
        std::cerr << "bivert: train needs --model\n";
        return BIVERT_E_INVALID_ARGUMENT;
      }
      bivert_model* m = nullptr;
      check(bivert_train(engine.get(), dataset.get(), config.get(), &m), "train");
      Handle<bivert_model> model(m);
      check(bivert_model_save(model.get(), model_path.c_str()), "save model");
      check(bivert_engine_flush_cache(engine.get()), "cache");
      std::cout << importances_table(model.get(), get("lang_pair"));
      return 0;
    }

    if (score->parsed()) {
      bivert_model* m = nullptr;
      check(bivert_model_load(get("model").c_str(), &m), "model");
      Handle<bivert_model> model(m);
      std::vector<double> scores(n);
      check(bivert_score(engine.get(), dataset.get(), model.get(), scores.data()), "score");
      check(bivert_engine_flush_cache(engine.get()), "cache");

      std::string lines;
      for (size_t i = 0; i < n; ++i)
        lines += std::string(bivert_dataset_id(dataset.get(), i)) + "\t" +
                 format_number(scores[i]) + "\n";
      emit(get("out"), lines);

      bool labelled = n > 0;
      for (size_t i = 0; i < n && labelled; ++i)
        labelled = bivert_dataset_human_score(dataset.get(), i, nullptr) != 0;
      if (!labelled) {
        std::cerr << "bivert: system report skipped (records without human_score)\n";
        return 0;
      }
      const std::string exclude = get("exclude_system");
      char* report = nullptr;
      check(bivert_system_report(dataset.get(), scores.data(),
                                 exclude.empty() ? nullptr : exclude.c_str(), &report),
            "report");
      emit(get("report"), take(report));
      return 0;
    }
  } catch (const Exit& e) {
    return e.code;
  }
  return BIVERT_E_INVALID_ARGUMENT;
}
