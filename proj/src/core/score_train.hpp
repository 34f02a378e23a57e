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

// Per-sentence relation features, the aggregation model (least-squares
// gradient boosted regression trees, or a non-negative linear penalty
// model), and system-level meta-evaluation.

#ifndef BIVERT_CORE_SCORE_TRAIN_HPP
#define BIVERT_CORE_SCORE_TRAIN_HPP

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "relation.hpp"

namespace bivert {

inline constexpr std::size_t kFeatureCount = 6;
inline constexpr std::array<std::string_view, kFeatureCount> kFeatureNames = {
    "extra", "missing", "stopword", "inflection", "derivation", "sense"};

// Summed costs per relation category; Same contributes nothing.
struct FeatureVector {
  std::array<double, kFeatureCount> values{};

  double& operator[](std::size_t i) { return values[i]; }
  double operator[](std::size_t i) const { return values[i]; }
  bool operator==(const FeatureVector&) const = default;
};

FeatureVector featurize(std::span<const RelationRecord> records);

// Clamps negatives to 0 and min-max scales to [0, 1]; constant input maps to
// 0.5. `min_out`/`max_out` receive the bounds after clamping.
std::vector<double> normalize_labels(std::span<const double> scores, double* min_out = nullptr,
                                     double* max_out = nullptr);

struct Hyperparams {
  std::size_t n_estimators = 100;
  std::size_t max_depth = 6;
  double learning_rate = 0.1;
  std::uint64_t seed = 0;
  std::size_t min_samples_leaf = 5;
  // Fraction of rows drawn (without replacement, from `seed`) for each tree.
  double subsample = 1.0;

  void validate() const;
  bool operator==(const Hyperparams&) const = default;
};

// Per-language-pair defaults: eng-deu 100/6/0.1, eng-rus 550/7/0.1,
// zho-eng 1000/6/0.05. Unknown tags get eng-deu's settings.
Hyperparams default_hyperparams(std::string_view lang_pair);

struct RegressionTree {
  struct Node {
    // -1 for leaves.
    int feature = -1;
    double threshold = 0.0;
    std::size_t left = 0;
    std::size_t right = 0;
    double value = 0.0;
    // Squared-error reduction achieved by the split.
    double gain = 0.0;
    std::size_t samples = 0;

    bool operator==(const Node&) const = default;
  };
  // nodes[0] is the root.
  std::vector<Node> nodes;

  double predict(const FeatureVector& x) const;
  bool operator==(const RegressionTree&) const = default;
};

enum class ModelMode { kGbr, kLinear };

struct Model {
  ModelMode mode = ModelMode::kGbr;
  double init = 0.0;
  double learning_rate = 1.0;
  std::vector<RegressionTree> trees;
  // Linear mode coefficients, all <= 0 (costs lower the score).
  std::array<double, kFeatureCount> weights{};

  // Provenance, round-tripped through the model file.
  Hyperparams hyperparams;
  std::string lang_pair;
  double label_min = 0.0;
  double label_max = 1.0;

  double predict(const FeatureVector& x) const;
  bool operator==(const Model&) const = default;
};

// Least-squares boosting: init to mean(y), then each tree is fit to the
// residuals (exact greedy splits, variance reduction) and added with
// learning-rate shrinkage. `on_iteration`, when set, receives the training
// MSE after every tree.
Model train_gbr(std::span<const FeatureVector> x, std::span<const double> y,
                const Hyperparams& hp,
                const std::function<void(std::size_t, double)>& on_iteration = {});

// score = intercept - sum(w_k * feature_k) with w_k >= 0, fit by exhaustive
// active-set non-negative least squares.
Model train_linear(std::span<const FeatureVector> x, std::span<const double> y);

double mean_squared_error(const Model& m, std::span<const FeatureVector> x,
                          std::span<const double> y);

// Impurity-reduction totals per feature normalized to 1; uniform 1/6 for a
// model without splits. Linear models report normalized |w|.
std::array<double, kFeatureCount> feature_importances(const Model& m);

std::string model_to_json(const Model& m);
Model model_from_json(std::string_view text);
void save_model(const Model& m, const std::filesystem::path& path);
Model load_model(const std::filesystem::path& path);

// Sample Pearson r. Throws Error(kUndefinedCorrelation) when either input is
// constant or shorter than 2.
double pearson(std::span<const double> a, std::span<const double> b);

struct ScoredRecord {
  std::string system;
  double human;
  double predicted;
};

struct SystemReport {
  struct Row {
    std::string system;
    std::size_t count;
    double human_mean;
    double bivert_mean;
  };
  // Sorted by system name.
  std::vector<Row> rows;
  std::optional<double> pearson;
  std::string excluded_system;
  std::vector<std::string> notes;

  std::string to_tsv() const;
};

SystemReport system_level_report(std::span<const ScoredRecord> records,
                                 std::string_view exclude_system = {});

}  // namespace bivert

#endif  // BIVERT_CORE_SCORE_TRAIN_HPP
