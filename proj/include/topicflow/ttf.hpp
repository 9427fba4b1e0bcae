#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "topicflow/classifier.hpp"
#include "topicflow/corpus.hpp"
#include "topicflow/forecast.hpp"
#include "topicflow/ml.hpp"

namespace topicflow {

// Paper counts per (technology, topic, year).
struct TechTopicCube {
  std::vector<std::string> technologies;  // normalized labels, input order
  std::vector<TopicId> topics;            // sorted
  int first_year = 0;
  int last_year = -1;
  std::vector<long> cells;                // [tech][topic][year]

  std::size_t years() const noexcept {
    return last_year < first_year ? 0 : static_cast<std::size_t>(last_year - first_year + 1);
  }
  long at(std::size_t tech, std::size_t topic, std::size_t year_offset) const {
    return cells[(tech * topics.size() + topic) * years() + year_offset];
  }
  long& at(std::size_t tech, std::size_t topic, std::size_t year_offset) {
    return cells[(tech * topics.size() + topic) * years() + year_offset];
  }
};

// One label per line; blank lines skipped, labels normalized and de-duplicated.
std::vector<std::string> load_technologies(const std::string& path);
std::vector<std::string> read_technologies(std::istream& in);

struct CubeParams {
  int first_year = 0;
  int last_year = 0;
  long min_papers = 10;  // technologies mentioned by fewer publications are dropped
};

// Publications in [first_year, last_year] only. A technology is mentioned
// when its tokens appear as a contiguous run inside one clause of the title,
// abstract or a keyword. The topic axis holds every topic annotated on some
// included publication.
TechTopicCube build_cube(const Corpus& corpus, const std::vector<TopicAnnotation>& annotations,
                         const std::vector<std::string>& technologies, const CubeParams& params);

void write_cube_csv(std::ostream& out, const TechTopicCube& cube);

struct AdoptionParams {
  int feature_years = 5;
  int horizon = 5;
  long adopted_at = 10;
};

struct AdoptionSample {
  std::size_t tech = 0;   // index into the cube
  std::size_t topic = 0;  // index into the cube
  int as_of_year = 0;
  std::vector<double> features;
  bool label = false;
};

// For every as-of year and every (tech, topic) pair not yet adopted
// (cumulative count below adopted_at): the tech's trailing counts over all
// topics, topic-major, followed by the target topic's trailing counts.
// Positive when the cumulative count reaches adopted_at within the horizon.
std::vector<AdoptionSample> adoption_samples(const TechTopicCube& cube,
                                             const AdoptionParams& params = {});

struct TopicAdoptionRow {
  TopicId topic;
  std::size_t samples = 0;
  std::size_t positives = 0;
  ml::Metrics metrics;
};

struct AdoptionResult {
  ml::Metrics overall;   // mean over folds
  ml::Metrics baseline;  // majority class of each training fold, same folds
  std::vector<TopicAdoptionRow> per_topic;  // descending F1, ties by topic
};

struct PredictParams {
  ExperimentParams experiment;
  std::size_t min_positives = 50;  // per-topic rows need this many positive labels
};

AdoptionResult predict_adoption(const TechTopicCube& cube,
                                const std::vector<AdoptionSample>& samples,
                                const PredictParams& params);

// topic,samples,positives,precision,recall,f1 with percentages.
std::string adoption_to_csv(const AdoptionResult& result);
std::string adoption_to_json(const AdoptionResult& result, const PredictParams& params);

}  // namespace topicflow
