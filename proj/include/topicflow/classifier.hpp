#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "topicflow/corpus.hpp"
#include "topicflow/embedding.hpp"
#include "topicflow/ontology.hpp"

namespace topicflow {

std::size_t levenshtein_distance(std::string_view a, std::string_view b);

// 1 - distance / max(|a|, |b|); 1.0 when both are empty.
double levenshtein_similarity(std::string_view a, std::string_view b);

struct ScoredTopic {
  TopicId topic;
  double score = 0.0;

  friend bool operator==(const ScoredTopic&, const ScoredTopic&) = default;
};

struct ClassifierConfig {
  double syntactic_threshold = 0.94;
  std::size_t top_k = 10;
  double cosine_floor = 0.7;
  std::unordered_set<std::string> stopwords = default_stopwords();

  static std::unordered_set<std::string> default_stopwords();

  // Keys: threshold, top_k, cosine_floor, stopwords_path (one word per line).
  // Missing keys keep their defaults.
  static ClassifierConfig from_json(std::string_view json_text);
  void validate() const;
};

// Indexes ontology labels for n-gram lookup. Candidates are pruned by
// length and by a character-histogram lower bound on edit distance before
// the exact distance is computed, so results equal a full scan.
class LabelMatcher {
 public:
  explicit LabelMatcher(const TopicOntology& ontology);

  // (topic index, similarity) for every topic having a label within
  // `threshold` of `ngram`, best similarity per topic.
  std::vector<std::pair<std::size_t, double>> match(std::string_view ngram,
                                                    double threshold) const;

 private:
  struct Entry {
    std::string key;
    std::array<std::uint8_t, 32> hist{};
    std::vector<std::size_t> topics;
  };
  std::vector<std::vector<Entry>> by_length_;
};

std::vector<ScoredTopic> syntactic_classify(const Document& doc, const TopicOntology& ontology,
                                            double threshold);

std::vector<ScoredTopic> semantic_classify(const Document& doc, const TopicOntology& ontology,
                                           const EmbeddingModel& model,
                                           const ClassifierConfig& config);

// Descending by score (ties by topic id), cut after the point farthest from
// the chord joining the first and last points.
std::vector<TopicId> elbow_select(std::vector<ScoredTopic> scores);

// Ancestors of `topics` that are not themselves in `topics`, sorted.
std::vector<TopicId> enrich(const std::vector<TopicId>& topics, const TopicOntology& ontology);

struct TopicAnnotation {
  std::string doc_id;
  std::vector<ScoredTopic> syntactic;  // sorted by topic
  std::vector<ScoredTopic> semantic;   // sorted by topic; score is relevance
  std::vector<TopicId> enhanced;
  std::vector<TopicId> all;            // the union field

  friend bool operator==(const TopicAnnotation&, const TopicAnnotation&) = default;
};

class Classifier {
 public:
  // `model` may be null for syntactic-only classification. The ontology and
  // model must outlive the classifier.
  Classifier(const TopicOntology& ontology, const EmbeddingModel* model,
             ClassifierConfig config = {});

  TopicAnnotation classify(const Document& doc) const;

  // Shares n-gram lookups across documents; identical to calling classify()
  // per document.
  std::vector<TopicAnnotation> classify_corpus(const Corpus& corpus) const;

  const ClassifierConfig& config() const noexcept { return config_; }

 private:
  std::vector<TopicAnnotation> classify_documents(std::span<const Document> docs) const;

  const TopicOntology& ontology_;
  const EmbeddingModel* model_;
  ClassifierConfig config_;
  LabelMatcher matcher_;
};

TopicAnnotation classify(const Document& doc, const TopicOntology& ontology,
                         const EmbeddingModel* model, const ClassifierConfig& config);

std::string annotation_to_json(const TopicAnnotation& a);
TopicAnnotation annotation_from_json(std::string_view line, std::size_t line_no);
void write_annotations(std::ostream& out, const std::vector<TopicAnnotation>& annotations);
std::vector<TopicAnnotation> read_annotations(std::istream& in);
std::vector<TopicAnnotation> load_annotations(const std::string& path);

}  // namespace topicflow
