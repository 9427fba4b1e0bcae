#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "topicflow/analytics.hpp"
#include "topicflow/ml.hpp"

namespace topicflow {

struct ForecastSample {
  TopicId topic;
  int window_start = 0;
  std::array<std::vector<long>, 4> streams;  // RA, RI, PA, PI over the window
  bool label = false;
};

struct GoldStandardParams {
  int window = 5;
  int horizon = 10;
  long emerged_lt = 10;  // cumulative industrial patents at window end must stay below
  long label_gt = 50;    // industrial patents in the horizon needed for a positive
  bool non_overlapping = false;  // step windows by their length instead of by one year
  CollaborativeMode mode = CollaborativeMode::both;
};

// Samples ordered by topic id, then window start. Topics without documents
// are skipped.
std::vector<ForecastSample> build_gold_standard(const AidaGraph& graph,
                                                const GoldStandardParams& params = {});

// The 17 stream combinations in table order.
const std::vector<std::string>& feature_combos();
bool is_feature_combo(std::string_view name);

std::vector<double> featurize(const ForecastSample& sample, std::string_view combo);

enum class ModelKind { logreg, random_forest };
std::string_view to_string(ModelKind kind);
ModelKind parse_model_kind(std::string_view name);

struct ExperimentParams {
  ModelKind model = ModelKind::logreg;
  std::size_t folds = 10;
  std::uint64_t seed = 42;
  ml::LogRegParams logreg;
  ml::ForestParams forest;
};

ml::Trainer make_trainer(const ExperimentParams& params);

struct ComboResult {
  std::string combo;
  ml::Metrics metrics;  // mean of per-fold metrics
};

std::vector<ComboResult> run_experiment(const std::vector<ForecastSample>& samples,
                                        const std::vector<std::string>& combos,
                                        const ExperimentParams& params);

// topic,window_start,label,RA_1..RA_n,RI_1..,PA_1..,PI_1..
void write_samples_csv(std::ostream& out, const std::vector<ForecastSample>& samples);
// combo,precision,recall,f1 as percentages with one decimal.
std::string results_to_csv(const std::vector<ComboResult>& results);
std::string results_to_json(const std::vector<ComboResult>& results, const ExperimentParams& params);

}  // namespace topicflow
