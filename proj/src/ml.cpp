#include "topicflow/ml.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "json.hpp"
#include "topicflow/common.hpp"

namespace topicflow::ml {

using nlohmann::json;

Dataset Dataset::from_rows(const std::vector<std::vector<double>>& rows, std::vector<int> labels) {
  Dataset d;
  d.n_features = rows.empty() ? 0 : rows.front().size();
  for (const auto& r : rows) {
    if (r.size() != d.n_features) {
      throw Error(ErrorCode::validation, "dataset rows have inconsistent widths");
    }
    d.x.insert(d.x.end(), r.begin(), r.end());
  }
  d.y = std::move(labels);
  d.validate();
  return d;
}

void Dataset::validate() const {
  if (y.empty()) throw Error(ErrorCode::validation, "dataset is empty");
  if (x.size() != y.size() * n_features) {
    throw Error(ErrorCode::validation, "dataset feature matrix does not match label count");
  }
  for (int v : y) {
    if (v != 0 && v != 1) throw Error(ErrorCode::validation, "labels must be 0 or 1");
  }
  for (double v : x) {
    if (!std::isfinite(v)) throw Error(ErrorCode::numeric, "dataset contains a non-finite value");
  }
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
  Dataset d;
  d.n_features = n_features;
  d.x.reserve(indices.size() * n_features);
  d.y.reserve(indices.size());
  for (std::size_t i : indices) {
    auto r = row(i);
    d.x.insert(d.x.end(), r.begin(), r.end());
    d.y.push_back(y[i]);
  }
  return d;
}

Standardizer Standardizer::fit(const Dataset& data) {
  Standardizer s;
  const std::size_t d = data.n_features;
  const double n = static_cast<double>(data.size());
  s.mean.assign(d, 0.0);
  s.scale.assign(d, 0.0);
  for (std::size_t i = 0; i < data.size(); ++i) {
    auto r = data.row(i);
    for (std::size_t j = 0; j < d; ++j) s.mean[j] += r[j];
  }
  for (double& m : s.mean) m /= n;
  for (std::size_t i = 0; i < data.size(); ++i) {
    auto r = data.row(i);
    for (std::size_t j = 0; j < d; ++j) s.scale[j] += (r[j] - s.mean[j]) * (r[j] - s.mean[j]);
  }
  for (double& v : s.scale) {
    v = std::sqrt(v / n);
    if (v < 1e-12) v = 1.0;
  }
  return s;
}

void Standardizer::apply(std::span<const double> in, std::span<double> out) const {
  for (std::size_t j = 0; j < in.size(); ++j) out[j] = (in[j] - mean[j]) / scale[j];
}

Dataset Standardizer::transform(const Dataset& data) const {
  Dataset d = data;
  for (std::size_t i = 0; i < d.size(); ++i) {
    std::span<double> r(d.x.data() + i * d.n_features, d.n_features);
    apply(r, r);
  }
  return d;
}

Metrics prf(std::span<const int> y_true, std::span<const int> y_pred) {
  if (y_true.size() != y_pred.size()) {
    throw Error(ErrorCode::invalid_argument, "prf: label and prediction lengths differ");
  }
  std::size_t tp = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    if (y_pred[i] == 1 && y_true[i] == 1) ++tp;
    else if (y_pred[i] == 1) ++fp;
    else if (y_true[i] == 1) ++fn;
  }
  Metrics m;
  if (tp + fp > 0) m.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
  if (tp + fn > 0) m.recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
  if (m.precision + m.recall > 0) m.f1 = 2 * m.precision * m.recall / (m.precision + m.recall);
  return m;
}

Metrics mean_metrics(std::span<const Metrics> folds) {
  Metrics m;
  if (folds.empty()) return m;
  for (const auto& f : folds) {
    m.precision += f.precision;
    m.recall += f.recall;
    m.f1 += f.f1;
  }
  const double n = static_cast<double>(folds.size());
  m.precision /= n;
  m.recall /= n;
  m.f1 /= n;
  return m;
}

// ---- logistic regression

namespace {

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// log(1 + exp(z)) without overflow.
double softplus(double z) { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

double linear(std::span<const double> x, std::span<const double> w, double b) {
  double z = b;
  for (std::size_t j = 0; j < w.size(); ++j) z += w[j] * x[j];
  return z;
}

}  // namespace

double LogisticRegression::predict_proba(std::span<const double> features) const {
  if (features.size() != weights_.size()) {
    throw Error(ErrorCode::invalid_argument, "feature count does not match the model");
  }
  return sigmoid(linear(features, weights_, bias_));
}

std::string LogisticRegression::to_json() const {
  return json{{"kind", "logreg"}, {"weights", weights_}, {"bias", bias_}}.dump();
}

double LogisticRegression::loss(const Dataset& data, std::span<const double> weights, double bias,
                                double l2) {
  double total = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double z = linear(data.row(i), weights, bias);
    // -[y log s(z) + (1-y) log(1 - s(z))] = softplus(z) - y z
    total += softplus(z) - data.y[i] * z;
  }
  double reg = 0.0;
  for (double w : weights) reg += w * w;
  return total / static_cast<double>(data.size()) + 0.5 * l2 * reg;
}

std::vector<double> LogisticRegression::gradient(const Dataset& data,
                                                 std::span<const double> weights, double bias,
                                                 double l2) {
  const std::size_t d = weights.size();
  std::vector<double> g(d + 1, 0.0);
  for (std::size_t i = 0; i < data.size(); ++i) {
    auto r = data.row(i);
    const double err = sigmoid(linear(r, weights, bias)) - data.y[i];
    for (std::size_t j = 0; j < d; ++j) g[j] += err * r[j];
    g[d] += err;
  }
  const double n = static_cast<double>(data.size());
  for (std::size_t j = 0; j < d; ++j) g[j] = g[j] / n + l2 * weights[j];
  g[d] /= n;
  return g;
}

LogisticRegression train_logreg(const Dataset& data, const LogRegParams& params) {
  data.validate();
  if (!(params.learning_rate > 0) || params.iterations < 0 || params.l2 < 0) {
    throw Error(ErrorCode::invalid_argument,
                "logistic regression needs learning_rate > 0, iterations >= 0, l2 >= 0");
  }
  std::vector<double> w(data.n_features, 0.0);
  double b = 0.0;
  for (int it = 0; it < params.iterations; ++it) {
    const auto g = LogisticRegression::gradient(data, w, b, params.l2);
    for (std::size_t j = 0; j < w.size(); ++j) w[j] -= params.learning_rate * g[j];
    b -= params.learning_rate * g.back();
    const double l = LogisticRegression::loss(data, w, b, params.l2);
    if (!std::isfinite(l)) {
      throw Error(ErrorCode::numeric,
                  "logistic regression loss became non-finite at iteration " + std::to_string(it + 1));
    }
  }
  return LogisticRegression(std::move(w), b);
}

// ---- random forest

namespace {

double gini(std::size_t pos, std::size_t n) {
  if (n == 0) return 0.0;
  const double p = static_cast<double>(pos) / static_cast<double>(n);
  return 2.0 * p * (1.0 - p);
}

class TreeBuilder {
 public:
  TreeBuilder(const Dataset& data, const ForestParams& params, std::mt19937_64& rng)
      : data_(data), params_(params), rng_(rng) {
    const std::size_t d = data.n_features;
    per_split_ = params.feature_subsample > 0
                     ? std::min<std::size_t>(static_cast<std::size_t>(params.feature_subsample), d)
                     : std::max<std::size_t>(1, static_cast<std::size_t>(std::sqrt(static_cast<double>(d))));
  }

  std::vector<TreeNode> build(std::vector<std::size_t> rows) {
    nodes_.clear();
    grow(rows, 0);
    return std::move(nodes_);
  }

 private:
  struct Split {
    int feature = -1;
    double threshold = 0.0;
    double impurity = 0.0;
  };

  int grow(std::vector<std::size_t>& rows, int depth) {
    const int id = static_cast<int>(nodes_.size());
    nodes_.emplace_back();
    std::size_t pos = 0;
    for (std::size_t r : rows) pos += static_cast<std::size_t>(data_.y[r]);
    nodes_[id].value = static_cast<double>(pos) / static_cast<double>(rows.size());

    const bool pure = pos == 0 || pos == rows.size();
    const bool depth_done = params_.max_depth > 0 && depth >= params_.max_depth;
    const auto min_leaf = static_cast<std::size_t>(std::max(1, params_.min_leaf));
    if (pure || depth_done || rows.size() < 2 * min_leaf) return id;

    const Split split = best_split(rows, pos, min_leaf);
    if (split.feature < 0) return id;

    std::vector<std::size_t> left, right;
    for (std::size_t r : rows) {
      (data_.row(r)[static_cast<std::size_t>(split.feature)] <= split.threshold ? left : right).push_back(r);
    }
    rows.clear();
    rows.shrink_to_fit();
    nodes_[id].feature = split.feature;
    nodes_[id].threshold = split.threshold;
    const int l = grow(left, depth + 1);
    nodes_[id].left = l;
    const int r = grow(right, depth + 1);
    nodes_[id].right = r;
    return id;
  }

  // Tries `per_split_` random features; if none of them separates the rows,
  // keeps drawing from the remaining ones.
  Split best_split(const std::vector<std::size_t>& rows, std::size_t pos, std::size_t min_leaf) {
    std::vector<std::size_t> features(data_.n_features);
    std::iota(features.begin(), features.end(), 0);
    for (std::size_t i = features.size(); i > 1; --i) {
      std::swap(features[i - 1], features[rng_() % i]);
    }
    Split best;
    best.impurity = std::numeric_limits<double>::infinity();
    std::vector<std::pair<double, int>> vals(rows.size());
    const double n = static_cast<double>(rows.size());
    for (std::size_t fi = 0; fi < features.size(); ++fi) {
      if (fi >= per_split_ && best.feature >= 0) break;
      const std::size_t f = features[fi];
      for (std::size_t i = 0; i < rows.size(); ++i) {
        vals[i] = {data_.row(rows[i])[f], data_.y[rows[i]]};
      }
      std::sort(vals.begin(), vals.end());
      std::size_t left_pos = 0;
      for (std::size_t i = 0; i + 1 < vals.size(); ++i) {
        left_pos += static_cast<std::size_t>(vals[i].second);
        if (vals[i].first == vals[i + 1].first) continue;
        const std::size_t nl = i + 1;
        const std::size_t nr = vals.size() - nl;
        if (nl < min_leaf || nr < min_leaf) continue;
        const double imp = (static_cast<double>(nl) * gini(left_pos, nl) +
                            static_cast<double>(nr) * gini(pos - left_pos, nr)) / n;
        if (imp < best.impurity) {
          best.impurity = imp;
          best.feature = static_cast<int>(f);
          best.threshold = vals[i].first + (vals[i + 1].first - vals[i].first) / 2.0;
        }
      }
    }
    return best;
  }

  const Dataset& data_;
  const ForestParams& params_;
  std::mt19937_64& rng_;
  std::size_t per_split_;
  std::vector<TreeNode> nodes_;
};

double tree_value(const std::vector<TreeNode>& tree, std::span<const double> x) {
  int i = 0;
  while (tree[static_cast<std::size_t>(i)].feature >= 0) {
    const auto& node = tree[static_cast<std::size_t>(i)];
    i = x[static_cast<std::size_t>(node.feature)] <= node.threshold ? node.left : node.right;
  }
  return tree[static_cast<std::size_t>(i)].value;
}

int positive_votes(const std::vector<std::vector<TreeNode>>& trees, std::span<const double> x) {
  int votes = 0;
  for (const auto& t : trees) votes += tree_value(t, x) > 0.5 ? 1 : 0;
  return votes;
}

}  // namespace

double RandomForest::predict_proba(std::span<const double> features) const {
  return static_cast<double>(positive_votes(trees_, features)) / static_cast<double>(trees_.size());
}

int RandomForest::predict(std::span<const double> features) const {
  return 2 * positive_votes(trees_, features) > static_cast<int>(trees_.size()) ? 1 : 0;
}

std::string RandomForest::to_json() const {
  json trees = json::array();
  for (const auto& t : trees_) {
    json nodes = json::array();
    for (const auto& n : t) nodes.push_back({n.feature, n.threshold, n.left, n.right, n.value});
    trees.push_back(nodes);
  }
  return json{{"kind", "random_forest"}, {"trees", trees}}.dump();
}

RandomForest train_random_forest(const Dataset& data, const ForestParams& params) {
  data.validate();
  if (params.n_trees < 1) throw Error(ErrorCode::invalid_argument, "random forest needs n_trees >= 1");
  if (params.max_depth < 0 || params.min_leaf < 1 || params.feature_subsample < 0) {
    throw Error(ErrorCode::invalid_argument, "invalid random forest parameters");
  }
  std::vector<std::vector<TreeNode>> trees(static_cast<std::size_t>(params.n_trees));
  parallel_for(trees.size(), [&](std::size_t t) {
    std::mt19937_64 rng(params.seed + t);
    std::vector<std::size_t> rows(data.size());
    if (params.bootstrap) {
      for (auto& r : rows) r = rng() % data.size();
    } else {
      std::iota(rows.begin(), rows.end(), 0);
    }
    TreeBuilder builder(data, params, rng);
    trees[t] = builder.build(std::move(rows));
  });
  return RandomForest(std::move(trees));
}

// ---- wrappers

double StandardizedModel::predict_proba(std::span<const double> features) const {
  std::vector<double> z(features.size());
  standardizer_.apply(features, z);
  return inner_->predict_proba(z);
}

int StandardizedModel::predict(std::span<const double> features) const {
  std::vector<double> z(features.size());
  standardizer_.apply(features, z);
  return inner_->predict(z);
}

std::string StandardizedModel::to_json() const {
  return json{{"kind", "standardized"},
              {"mean", standardizer_.mean},
              {"scale", standardizer_.scale},
              {"model", json::parse(inner_->to_json())}}
      .dump();
}

Trainer logreg_trainer(const LogRegParams& params, bool standardize) {
  return [params, standardize](const Dataset& data) -> std::unique_ptr<Model> {
    if (!standardize) return std::make_unique<LogisticRegression>(train_logreg(data, params));
    Standardizer s = Standardizer::fit(data);
    auto inner = std::make_unique<LogisticRegression>(train_logreg(s.transform(data), params));
    return std::make_unique<StandardizedModel>(std::move(s), std::move(inner));
  };
}

Trainer forest_trainer(const ForestParams& params) {
  return [params](const Dataset& data) -> std::unique_ptr<Model> {
    return std::make_unique<RandomForest>(train_random_forest(data, params));
  };
}

namespace {

std::unique_ptr<Model> model_from(const json& j) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "logreg") {
    return std::make_unique<LogisticRegression>(j.at("weights").get<std::vector<double>>(),
                                                j.at("bias").get<double>());
  }
  if (kind == "random_forest") {
    std::vector<std::vector<TreeNode>> trees;
    for (const auto& t : j.at("trees")) {
      std::vector<TreeNode> nodes;
      for (const auto& n : t) {
        nodes.push_back({n.at(0).get<int>(), n.at(1).get<double>(), n.at(2).get<int>(),
                         n.at(3).get<int>(), n.at(4).get<double>()});
      }
      trees.push_back(std::move(nodes));
    }
    if (trees.empty()) throw Error(ErrorCode::validation, "random forest has no trees");
    return std::make_unique<RandomForest>(std::move(trees));
  }
  if (kind == "standardized") {
    Standardizer s{j.at("mean").get<std::vector<double>>(), j.at("scale").get<std::vector<double>>()};
    return std::make_unique<StandardizedModel>(std::move(s), model_from(j.at("model")));
  }
  throw Error(ErrorCode::validation, "unknown model kind '" + kind + "'");
}

}  // namespace

std::unique_ptr<Model> model_from_json(const std::string& text) {
  try {
    return model_from(json::parse(text));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::parse, std::string("model JSON: ") + e.what());
  }
}

// ---- cross-validation

std::vector<std::vector<std::size_t>> stratified_folds(std::span<const int> labels, std::size_t k,
                                                       std::uint64_t seed) {
  if (k < 2) throw Error(ErrorCode::invalid_argument, "k-fold needs k >= 2");
  if (labels.size() < k) {
    throw Error(ErrorCode::validation, "k-fold needs at least k samples (" + std::to_string(labels.size()) +
                                           " < " + std::to_string(k) + ")");
  }
  std::array<std::vector<std::size_t>, 2> by_class;
  for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i] == 1 ? 1 : 0].push_back(i);
  if (by_class[0].empty() || by_class[1].empty()) {
    throw Error(ErrorCode::validation, "stratified k-fold needs both classes present");
  }
  std::mt19937_64 rng(seed);
  std::vector<std::vector<std::size_t>> folds(k);
  std::size_t next = 0;
  for (auto& members : by_class) {
    for (std::size_t i = members.size(); i > 1; --i) std::swap(members[i - 1], members[rng() % i]);
    for (std::size_t idx : members) {
      folds[next].push_back(idx);
      next = (next + 1) % k;
    }
  }
  for (auto& f : folds) std::sort(f.begin(), f.end());
  return folds;
}

CvResult kfold_cv(const Dataset& data, std::size_t k, const Trainer& trainer, std::uint64_t seed) {
  data.validate();
  const auto folds = stratified_folds(data.y, k, seed);
  CvResult result;
  result.folds.resize(k);
  result.predictions.assign(data.size(), 0);
  result.fold_of.assign(data.size(), 0);
  parallel_for(k, [&](std::size_t f) {
    std::vector<std::size_t> train;
    train.reserve(data.size() - folds[f].size());
    for (std::size_t g = 0; g < k; ++g) {
      if (g != f) train.insert(train.end(), folds[g].begin(), folds[g].end());
    }
    std::sort(train.begin(), train.end());
    const auto model = trainer(data.subset(train));
    std::vector<int> truth, pred;
    for (std::size_t i : folds[f]) {
      const int p = model->predict(data.row(i));
      result.predictions[i] = p;
      result.fold_of[i] = f;
      truth.push_back(data.y[i]);
      pred.push_back(p);
    }
    result.folds[f] = prf(truth, pred);
  });
  result.mean = mean_metrics(result.folds);
  return result;
}

}  // namespace topicflow::ml
