#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "topicflow/common.hpp"

namespace topicflow {

enum class OntologyFormat { edge_csv, turtle_subset };

std::optional<OntologyFormat> parse_ontology_format(std::string_view name);

// One parsed statement of an ontology file. `subject` and `object` are raw
// entity keys: label text for edge CSV, IRIs for turtle.
struct OntologyRelation {
  enum class Kind { declare, super_topic_of, related_equivalent, ignored };
  std::string subject;
  Kind kind = Kind::declare;
  std::string object;
  std::size_t line = 0;
};

// Immutable topic hierarchy with equivalence classes collapsed onto one
// canonical TopicId each. Safe for concurrent reads after construction.
class TopicOntology {
 public:
  TopicOntology() = default;

  static TopicOntology load(const std::string& path, OntologyFormat format);

  // Builds from parsed statements. With `keys_are_iris` each distinct IRI is
  // an entity whose label comes from its local name; otherwise the entity is
  // the normalized label itself.
  static TopicOntology build(const std::vector<OntologyRelation>& relations,
                             bool keys_are_iris);

  std::size_t size() const noexcept { return topics_.size(); }
  std::size_t edge_count() const noexcept { return edge_count_; }

  // Sorted by id.
  const std::vector<TopicId>& topics() const noexcept { return topics_; }

  bool contains(const TopicId& t) const { return index_.count(t) != 0; }

  std::optional<TopicId> canonical_topic(std::string_view raw_label) const;

  // Sorted; excludes `topic` itself. Throws not_found for unknown topics.
  std::vector<TopicId> super_topics(const TopicId& topic, bool transitive) const;

  const std::vector<std::string>& labels(const TopicId& topic) const;

  // (child, parent) pairs, sorted.
  std::vector<std::pair<TopicId, TopicId>> super_edges() const;

  // Index-based access for the hot paths in the classifier and analytics.
  std::optional<std::size_t> index_of(const TopicId& t) const;
  const TopicId& at(std::size_t index) const { return topics_[index]; }
  const std::vector<std::size_t>& parents_of(std::size_t index) const {
    return parents_[index];
  }
  const std::vector<std::size_t>& ancestors_of(std::size_t index) const {
    return ancestors_[index];
  }

  // Every normalized label with the index of the topic it denotes, sorted
  // by label.
  const std::vector<std::pair<std::string, std::size_t>>& label_table() const {
    return label_table_;
  }

 private:
  std::vector<TopicId> topics_;
  std::unordered_map<TopicId, std::size_t, TopicIdHash> index_;
  std::vector<std::vector<std::string>> labels_;
  std::vector<std::vector<std::size_t>> parents_;
  std::vector<std::vector<std::size_t>> ancestors_;
  std::unordered_map<std::string, std::size_t> label_index_;
  std::vector<std::pair<std::string, std::size_t>> label_table_;
  std::size_t edge_count_ = 0;
};

std::vector<OntologyRelation> parse_edge_csv(std::istream& in);
std::vector<OntologyRelation> parse_ontology_turtle(std::istream& in);

}  // namespace topicflow
