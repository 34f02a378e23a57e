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

#include "score_train.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

#include <Eigen/Dense>
#include <json.hpp>

#include "errors.hpp"

namespace bivert {

namespace {

using json = nlohmann::json;

std::size_t feature_slot(RelationCategory c) {
  switch (c) {
    case RelationCategory::kExtra: return 0;
    case RelationCategory::kMissing: return 1;
    case RelationCategory::kStopword: return 2;
    case RelationCategory::kInflection: return 3;
    case RelationCategory::kDerivation: return 4;
    case RelationCategory::kSense: return 5;
    case RelationCategory::kSame: break;
  }
  return kFeatureCount;
}

class TreeBuilder {
 public:
  TreeBuilder(std::span<const FeatureVector> x, const std::vector<double>& residual,
              const Hyperparams& hp)
      : x_(x), residual_(residual), hp_(hp) {}

  RegressionTree build(std::vector<std::size_t> rows) {
    tree_.nodes.clear();
    grow(std::move(rows), 0);
    return std::move(tree_);
  }

 private:
  struct Split {
    int feature = -1;
    double threshold = 0.0;
    double gain = 0.0;
  };

  std::size_t grow(std::vector<std::size_t> rows, std::size_t depth) {
    const std::size_t id = tree_.nodes.size();
    tree_.nodes.emplace_back();
    double sum = 0.0;
    for (std::size_t r : rows) sum += residual_[r];
    tree_.nodes[id].value = sum / static_cast<double>(rows.size());
    tree_.nodes[id].samples = rows.size();
    if (depth >= hp_.max_depth || rows.size() < 2 * hp_.min_samples_leaf) return id;

    const Split s = best_split(rows, sum);
    if (s.feature < 0) return id;

    std::vector<std::size_t> left, right;
    for (std::size_t r : rows)
      (x_[r][static_cast<std::size_t>(s.feature)] <= s.threshold ? left : right).push_back(r);
    rows.clear();
    rows.shrink_to_fit();
    const std::size_t l = grow(std::move(left), depth + 1);
    const std::size_t r = grow(std::move(right), depth + 1);
    RegressionTree::Node& node = tree_.nodes[id];
    node.feature = s.feature;
    node.threshold = s.threshold;
    node.gain = s.gain;
    node.left = l;
    node.right = r;
    return id;
  }

  // Exact greedy search over midpoints between distinct sorted values.
  Split best_split(const std::vector<std::size_t>& rows, double total) const {
    Split best;
    const std::size_t n = rows.size();
    const double parent = total * total / static_cast<double>(n);
    std::vector<std::size_t> order(rows);
    for (std::size_t f = 0; f < kFeatureCount; ++f) {
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t a, std::size_t b) { return x_[a][f] < x_[b][f]; });
      double left_sum = 0.0;
      for (std::size_t k = 0; k + 1 < n; ++k) {
        left_sum += residual_[order[k]];
        const std::size_t nl = k + 1;
        const std::size_t nr = n - nl;
        if (nl < hp_.min_samples_leaf) continue;
        if (nr < hp_.min_samples_leaf) break;
        const double lo = x_[order[k]][f];
        const double hi = x_[order[k + 1]][f];
        if (!(lo < hi)) continue;
        const double right_sum = total - left_sum;
        const double gain = left_sum * left_sum / static_cast<double>(nl) +
                            right_sum * right_sum / static_cast<double>(nr) - parent;
        if (gain > best.gain) {
          double mid = lo + (hi - lo) / 2.0;
          if (!(mid < hi)) mid = lo;
          best = {static_cast<int>(f), mid, gain};
        }
      }
    }
    return best;
  }

  std::span<const FeatureVector> x_;
  const std::vector<double>& residual_;
  const Hyperparams& hp_;
  RegressionTree tree_;
};

void check_training_input(std::span<const FeatureVector> x, std::span<const double> y) {
  if (x.size() != y.size())
    throw SchemaError("feature rows (" + std::to_string(x.size()) + ") and labels (" +
                      std::to_string(y.size()) + ") differ");
  if (x.size() < 2) throw Error(ErrorKind::kInvalidArgument, "training needs at least 2 rows");
  for (double v : y)
    if (!std::isfinite(v)) throw Error(ErrorKind::kInvalidArgument, "non-finite label");
  for (const FeatureVector& f : x)
    for (double v : f.values)
      if (!std::isfinite(v)) throw Error(ErrorKind::kInvalidArgument, "non-finite feature");
}

json tree_node_to_json(const RegressionTree& t, std::size_t i) {
  const RegressionTree::Node& n = t.nodes[i];
  if (n.feature < 0) return {{"value", n.value}, {"samples", n.samples}};
  return {{"feature", kFeatureNames[static_cast<std::size_t>(n.feature)]},
          {"threshold", n.threshold},
          {"gain", n.gain},
          {"samples", n.samples},
          {"value", n.value},
          {"left", tree_node_to_json(t, n.left)},
          {"right", tree_node_to_json(t, n.right)}};
}

std::size_t tree_node_from_json(const json& j, RegressionTree& t) {
  const std::size_t id = t.nodes.size();
  t.nodes.emplace_back();
  RegressionTree::Node node;
  node.value = j.at("value").get<double>();
  node.samples = j.value("samples", std::size_t{0});
  if (j.contains("feature")) {
    const std::string name = j.at("feature").get<std::string>();
    auto it = std::find(kFeatureNames.begin(), kFeatureNames.end(), name);
    if (it == kFeatureNames.end()) throw ParseError(0, "unknown feature '" + name + "'");
    node.feature = static_cast<int>(it - kFeatureNames.begin());
    node.threshold = j.at("threshold").get<double>();
    node.gain = j.value("gain", 0.0);
    node.left = tree_node_from_json(j.at("left"), t);
    node.right = tree_node_from_json(j.at("right"), t);
  }
  t.nodes[id] = node;
  return id;
}

std::string fmt6(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

}  // namespace

FeatureVector featurize(std::span<const RelationRecord> records) {
  FeatureVector f;
  for (const RelationRecord& r : records) {
    const std::size_t slot = feature_slot(r.category);
    if (slot < kFeatureCount) f[slot] += r.cost;
  }
  return f;
}

std::vector<double> normalize_labels(std::span<const double> scores, double* min_out,
                                     double* max_out) {
  if (scores.empty()) throw Error(ErrorKind::kInvalidArgument, "no labels to normalize");
  std::vector<double> out(scores.begin(), scores.end());
  for (double& v : out) v = std::max(v, 0.0);
  const auto [lo_it, hi_it] = std::minmax_element(out.begin(), out.end());
  const double lo = *lo_it, hi = *hi_it;
  if (min_out) *min_out = lo;
  if (max_out) *max_out = hi;
  for (double& v : out) v = (hi > lo) ? (v - lo) / (hi - lo) : 0.5;
  return out;
}

void Hyperparams::validate() const {
  if (n_estimators == 0 || max_depth == 0 || min_samples_leaf == 0 || !(learning_rate > 0.0) ||
      !(subsample > 0.0 && subsample <= 1.0))
    throw Error(ErrorKind::kInvalidArgument,
                "hyperparameters must be positive (subsample in (0, 1])");
}

Hyperparams default_hyperparams(std::string_view lang_pair) {
  Hyperparams hp;
  if (lang_pair == "eng-rus") {
    hp.n_estimators = 550;
    hp.max_depth = 7;
  } else if (lang_pair == "zho-eng") {
    hp.n_estimators = 1000;
    hp.max_depth = 6;
    hp.learning_rate = 0.05;
  }
  return hp;
}

double RegressionTree::predict(const FeatureVector& x) const {
  std::size_t i = 0;
  while (nodes[i].feature >= 0)
    i = x[static_cast<std::size_t>(nodes[i].feature)] <= nodes[i].threshold ? nodes[i].left
                                                                            : nodes[i].right;
  return nodes[i].value;
}

double Model::predict(const FeatureVector& x) const {
  if (mode == ModelMode::kLinear) {
    double s = init;
    for (std::size_t k = 0; k < kFeatureCount; ++k) s += weights[k] * x[k];
    return s;
  }
  double s = 0.0;
  for (const RegressionTree& t : trees) s += t.predict(x);
  return init + learning_rate * s;
}

Model train_gbr(std::span<const FeatureVector> x, std::span<const double> y,
                const Hyperparams& hp,
                const std::function<void(std::size_t, double)>& on_iteration) {
  check_training_input(x, y);
  hp.validate();
  const std::size_t n = x.size();

  Model m;
  m.mode = ModelMode::kGbr;
  m.learning_rate = hp.learning_rate;
  m.hyperparams = hp;
  m.init = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);

  std::vector<double> current(n, m.init), residual(n);
  std::mt19937_64 rng(hp.seed);
  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), 0);
  const std::size_t draw =
      std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(hp.subsample * n)));

  TreeBuilder builder(x, residual, hp);
  for (std::size_t it = 0; it < hp.n_estimators; ++it) {
    for (std::size_t i = 0; i < n; ++i) residual[i] = y[i] - current[i];
    std::vector<std::size_t> rows = all;
    if (draw < n) {
      std::shuffle(rows.begin(), rows.end(), rng);
      rows.resize(draw);
      std::sort(rows.begin(), rows.end());
    }
    m.trees.push_back(builder.build(std::move(rows)));
    double sse = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      current[i] += hp.learning_rate * m.trees.back().predict(x[i]);
      const double d = y[i] - current[i];
      sse += d * d;
    }
    if (on_iteration) on_iteration(it + 1, sse / static_cast<double>(n));
  }
  return m;
}

Model train_linear(std::span<const FeatureVector> x, std::span<const double> y) {
  check_training_input(x, y);
  const std::size_t n = x.size();
  Eigen::MatrixXd xc(n, kFeatureCount);
  Eigen::VectorXd yc(n);
  std::array<double, kFeatureCount> xmean{};
  const double ymean = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
  for (std::size_t k = 0; k < kFeatureCount; ++k) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i][k];
    xmean[k] = s / static_cast<double>(n);
  }
  // Columns are negated costs so the non-negative coefficients are penalties.
  for (std::size_t i = 0; i < n; ++i) {
    yc(static_cast<Eigen::Index>(i)) = y[i] - ymean;
    for (std::size_t k = 0; k < kFeatureCount; ++k)
      xc(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = -(x[i][k] - xmean[k]);
  }

  // The optimum is the unconstrained fit on its own support, so trying every
  // support and keeping the best feasible one is exact.
  double best_sse = yc.squaredNorm();
  std::array<double, kFeatureCount> best{};
  for (unsigned mask = 1; mask < (1u << kFeatureCount); ++mask) {
    std::vector<Eigen::Index> cols;
    for (std::size_t k = 0; k < kFeatureCount; ++k)
      if (mask & (1u << k)) cols.push_back(static_cast<Eigen::Index>(k));
    Eigen::MatrixXd sub(n, static_cast<Eigen::Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c)
      sub.col(static_cast<Eigen::Index>(c)) = xc.col(cols[c]);
    const Eigen::VectorXd coef = sub.colPivHouseholderQr().solve(yc);
    if ((coef.array() < 0.0).any() || !coef.allFinite()) continue;
    const double sse = (yc - sub * coef).squaredNorm();
    if (sse < best_sse - 1e-12 * (1.0 + best_sse)) {
      best_sse = sse;
      best.fill(0.0);
      for (std::size_t c = 0; c < cols.size(); ++c)
        best[static_cast<std::size_t>(cols[c])] = coef(static_cast<Eigen::Index>(c));
    }
  }

  Model m;
  m.mode = ModelMode::kLinear;
  m.learning_rate = 1.0;
  m.init = ymean;
  for (std::size_t k = 0; k < kFeatureCount; ++k) {
    m.weights[k] = best[k] == 0.0 ? 0.0 : -best[k];
    m.init -= m.weights[k] * xmean[k];
  }
  return m;
}

double mean_squared_error(const Model& m, std::span<const FeatureVector> x,
                          std::span<const double> y) {
  double sse = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = y[i] - m.predict(x[i]);
    sse += d * d;
  }
  return x.empty() ? 0.0 : sse / static_cast<double>(x.size());
}

std::array<double, kFeatureCount> feature_importances(const Model& m) {
  std::array<double, kFeatureCount> imp{};
  if (m.mode == ModelMode::kLinear) {
    for (std::size_t k = 0; k < kFeatureCount; ++k) imp[k] = std::abs(m.weights[k]);
  } else {
    for (const RegressionTree& t : m.trees)
      for (const auto& node : t.nodes)
        if (node.feature >= 0) imp[static_cast<std::size_t>(node.feature)] += node.gain;
  }
  const double total = std::accumulate(imp.begin(), imp.end(), 0.0);
  if (!(total > 0.0)) {
    imp.fill(1.0 / static_cast<double>(kFeatureCount));
    return imp;
  }
  for (double& v : imp) v /= total;
  return imp;
}

std::string model_to_json(const Model& m) {
  json trees = json::array();
  for (const RegressionTree& t : m.trees) trees.push_back(tree_node_to_json(t, 0));
  json j = {
      {"mode", m.mode == ModelMode::kGbr ? "gbr" : "linear"},
      {"init", m.init},
      {"lr", m.learning_rate},
      {"feature_names", kFeatureNames},
      {"trees", std::move(trees)},
      {"train_meta",
       {{"lang_pair", m.lang_pair},
        {"n_estimators", m.hyperparams.n_estimators},
        {"max_depth", m.hyperparams.max_depth},
        {"learning_rate", m.hyperparams.learning_rate},
        {"min_samples_leaf", m.hyperparams.min_samples_leaf},
        {"subsample", m.hyperparams.subsample},
        {"seed", m.hyperparams.seed},
        {"label_min", m.label_min},
        {"label_max", m.label_max}}},
  };
  if (m.mode == ModelMode::kLinear) j["weights"] = m.weights;
  return j.dump(1) + "\n";
}

Model model_from_json(std::string_view text) {
  try {
    const json j = json::parse(text);
    Model m;
    const std::string mode = j.at("mode").get<std::string>();
    if (mode == "gbr")
      m.mode = ModelMode::kGbr;
    else if (mode == "linear")
      m.mode = ModelMode::kLinear;
    else
      throw ParseError(0, "unknown model mode '" + mode + "'");
    m.init = j.at("init").get<double>();
    m.learning_rate = j.at("lr").get<double>();
    const auto names = j.at("feature_names").get<std::vector<std::string>>();
    if (!std::equal(names.begin(), names.end(), kFeatureNames.begin(), kFeatureNames.end()))
      throw ParseError(0, "unexpected feature_names in model");
    for (const json& t : j.at("trees")) {
      RegressionTree tree;
      tree_node_from_json(t, tree);
      m.trees.push_back(std::move(tree));
    }
    if (m.mode == ModelMode::kLinear)
      m.weights = j.at("weights").get<std::array<double, kFeatureCount>>();
    if (auto it = j.find("train_meta"); it != j.end()) {
      const json& meta = *it;
      m.lang_pair = meta.value("lang_pair", std::string{});
      m.hyperparams.n_estimators = meta.value("n_estimators", m.hyperparams.n_estimators);
      m.hyperparams.max_depth = meta.value("max_depth", m.hyperparams.max_depth);
      m.hyperparams.learning_rate = meta.value("learning_rate", m.hyperparams.learning_rate);
      m.hyperparams.min_samples_leaf =
          meta.value("min_samples_leaf", m.hyperparams.min_samples_leaf);
      m.hyperparams.subsample = meta.value("subsample", m.hyperparams.subsample);
      m.hyperparams.seed = meta.value("seed", m.hyperparams.seed);
      m.label_min = meta.value("label_min", 0.0);
      m.label_max = meta.value("label_max", 1.0);
    }
    return m;
  } catch (const json::exception& e) {
    throw ParseError(0, std::string("model file: ") + e.what());
  }
}

void save_model(const Model& m, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::kMissingResource, "cannot write model '" + path.string() + "'");
  out << model_to_json(m);
}

Model load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kMissingResource, "cannot open model '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return model_from_json(ss.str());
}

double pearson(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size())
    throw Error(ErrorKind::kInvalidArgument, "pearson inputs differ in length");
  if (a.size() < 2)
    throw Error(ErrorKind::kUndefinedCorrelation, "pearson needs at least 2 points");
  auto constant = [](std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [&](double t) { return t == v[0]; });
  };
  if (constant(a) || constant(b))
    throw Error(ErrorKind::kUndefinedCorrelation, "pearson of a constant input");
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - ma;
    const double db = b[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa == 0.0 || sbb == 0.0)
    throw Error(ErrorKind::kUndefinedCorrelation, "pearson of a constant input");
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

SystemReport system_level_report(std::span<const ScoredRecord> records,
                                 std::string_view exclude_system) {
  struct Acc {
    std::size_t n = 0;
    double human = 0.0;
    double predicted = 0.0;
  };
  std::map<std::string, Acc> by_system;
  for (const ScoredRecord& r : records) {
    Acc& a = by_system[r.system];
    ++a.n;
    a.human += r.human;
    a.predicted += r.predicted;
  }
  SystemReport report;
  report.excluded_system = std::string(exclude_system);
  std::vector<double> human, bivert;
  for (const auto& [system, a] : by_system) {
    const double n = static_cast<double>(a.n);
    report.rows.push_back({system, a.n, a.human / n, a.predicted / n});
    if (!exclude_system.empty() && system == exclude_system) continue;
    human.push_back(a.human / n);
    bivert.push_back(a.predicted / n);
  }
  if (!exclude_system.empty()) {
    if (by_system.contains(std::string(exclude_system)))
      report.notes.push_back("excluded from correlation: " + std::string(exclude_system));
    else
      report.notes.push_back("exclusion requested but system absent: " +
                             std::string(exclude_system));
  }
  try {
    report.pearson = pearson(human, bivert);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::kUndefinedCorrelation) throw;
    report.notes.push_back("correlation undefined: " + std::string(e.what()));
  }
  return report;
}

std::string SystemReport::to_tsv() const {
  std::string out;
  for (const Row& r : rows)
    out += r.system + "\t" + fmt6(r.human_mean) + "\t" + fmt6(r.bivert_mean) + "\n";
  for (const std::string& note : notes) out += "# " + note + "\n";
  out += "PEARSON\t" + (pearson ? fmt6(*pearson) : std::string("n/a")) + "\n";
  return out;
}

}  // namespace bivert
