#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace topicflow::ml {

// Row-major feature matrix with binary labels.
struct Dataset {
  std::size_t n_features = 0;
  std::vector<double> x;
  std::vector<int> y;

  std::size_t size() const noexcept { return y.size(); }
  std::span<const double> row(std::size_t i) const {
    return {x.data() + i * n_features, n_features};
  }

  static Dataset from_rows(const std::vector<std::vector<double>>& rows, std::vector<int> labels);
  // Throws unless n >= 1, shapes agree, labels are 0/1 and values are finite.
  void validate() const;
  Dataset subset(std::span<const std::size_t> indices) const;
};

// Per-feature z-scoring; constant features get scale 1.
struct Standardizer {
  std::vector<double> mean;
  std::vector<double> scale;

  static Standardizer fit(const Dataset& data);
  void apply(std::span<const double> in, std::span<double> out) const;
  Dataset transform(const Dataset& data) const;
};

struct Metrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Positive-class metrics; zero denominators give 0.
Metrics prf(std::span<const int> y_true, std::span<const int> y_pred);
Metrics mean_metrics(std::span<const Metrics> folds);

class Model {
 public:
  virtual ~Model() = default;
  virtual double predict_proba(std::span<const double> features) const = 0;
  virtual int predict(std::span<const double> features) const {
    return predict_proba(features) > 0.5 ? 1 : 0;
  }
  virtual std::string to_json() const = 0;
};

using Trainer = std::function<std::unique_ptr<Model>(const Dataset&)>;

struct LogRegParams {
  double learning_rate = 0.1;
  int iterations = 500;
  double l2 = 1e-3;
  std::uint64_t seed = 0;  // weights start at zero; kept for interface symmetry
};

class LogisticRegression : public Model {
 public:
  LogisticRegression(std::vector<double> weights, double bias)
      : weights_(std::move(weights)), bias_(bias) {}

  double predict_proba(std::span<const double> features) const override;
  std::string to_json() const override;

  const std::vector<double>& weights() const noexcept { return weights_; }
  double bias() const noexcept { return bias_; }

  // Mean log-loss plus (l2 / 2) * |w|^2; the bias is not penalised.
  static double loss(const Dataset& data, std::span<const double> weights, double bias, double l2);
  // Gradient of loss(); the last element is d/d bias.
  static std::vector<double> gradient(const Dataset& data, std::span<const double> weights,
                                      double bias, double l2);

 private:
  std::vector<double> weights_;
  double bias_;
};

LogisticRegression train_logreg(const Dataset& data, const LogRegParams& params = {});

struct ForestParams {
  int n_trees = 100;
  int max_depth = 0;          // 0 = unlimited
  int min_leaf = 1;
  int feature_subsample = 0;  // features tried per split; 0 = sqrt(d)
  bool bootstrap = true;
  std::uint64_t seed = 0;
};

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0;  // positive fraction at the leaf
};

class RandomForest : public Model {
 public:
  explicit RandomForest(std::vector<std::vector<TreeNode>> trees) : trees_(std::move(trees)) {}

  // Share of trees voting positive.
  double predict_proba(std::span<const double> features) const override;
  // Majority vote; ties go to 0.
  int predict(std::span<const double> features) const override;
  std::string to_json() const override;

  const std::vector<std::vector<TreeNode>>& trees() const noexcept { return trees_; }

 private:
  std::vector<std::vector<TreeNode>> trees_;
};

RandomForest train_random_forest(const Dataset& data, const ForestParams& params = {});

// A model applied after a standardizer fitted on its training data.
class StandardizedModel : public Model {
 public:
  StandardizedModel(Standardizer standardizer, std::unique_ptr<Model> inner)
      : standardizer_(std::move(standardizer)), inner_(std::move(inner)) {}

  double predict_proba(std::span<const double> features) const override;
  int predict(std::span<const double> features) const override;
  std::string to_json() const override;

 private:
  Standardizer standardizer_;
  std::unique_ptr<Model> inner_;
};

Trainer logreg_trainer(const LogRegParams& params, bool standardize = true);
Trainer forest_trainer(const ForestParams& params);

// Reads a model written by Model::to_json().
std::unique_ptr<Model> model_from_json(const std::string& json);

// Stratified fold assignment: each class is shuffled and dealt round-robin,
// the second class continuing where the first stopped.
std::vector<std::vector<std::size_t>> stratified_folds(std::span<const int> labels, std::size_t k,
                                                       std::uint64_t seed);

struct CvResult {
  std::vector<Metrics> folds;
  std::vector<int> predictions;  // out-of-fold prediction per sample
  std::vector<std::size_t> fold_of;
  Metrics mean;                  // macro average over folds
};

CvResult kfold_cv(const Dataset& data, std::size_t k, const Trainer& trainer, std::uint64_t seed);

}  // namespace topicflow::ml
