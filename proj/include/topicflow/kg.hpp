#pragma once

#include <iosfwd>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "topicflow/classifier.hpp"
#include "topicflow/corpus.hpp"
#include "topicflow/ontology.hpp"

namespace topicflow {

struct GraphDocument {
  DocumentKind kind = DocumentKind::publication;
  int year = 0;
  std::vector<std::size_t> topics;  // ontology indices, sorted
  AffiliationType affiliation = AffiliationType::unknown;
  std::set<std::string> sectors;

  friend bool operator==(const GraphDocument&, const GraphDocument&) = default;
};

// Topic-annotated documents with affiliation types and industrial sectors.
// Immutable after construction.
class AidaGraph {
 public:
  AidaGraph(std::shared_ptr<const TopicOntology> ontology,
            std::map<std::string, GraphDocument> docs);

  // by_topic_ points into docs_; map nodes survive a move but not a copy.
  AidaGraph(const AidaGraph&) = delete;
  AidaGraph& operator=(const AidaGraph&) = delete;
  AidaGraph(AidaGraph&&) noexcept = default;
  AidaGraph& operator=(AidaGraph&&) noexcept = default;

  const TopicOntology& ontology() const noexcept { return *ontology_; }
  std::shared_ptr<const TopicOntology> ontology_ptr() const noexcept { return ontology_; }

  // Keyed by document id, iteration is in id order.
  const std::map<std::string, GraphDocument>& documents() const noexcept { return docs_; }
  std::size_t size() const noexcept { return docs_.size(); }

  // Earliest and latest document years; {0, -1} for an empty graph.
  std::pair<int, int> year_span() const noexcept { return span_; }

  // Documents carrying each topic, indexed by ontology topic index, in
  // document id order.
  const std::vector<std::vector<const GraphDocument*>>& docs_by_topic() const noexcept {
    return by_topic_;
  }

  std::vector<TopicId> topic_ids(const GraphDocument& doc) const;

  friend bool operator==(const AidaGraph& a, const AidaGraph& b) { return a.docs_ == b.docs_; }

 private:
  std::shared_ptr<const TopicOntology> ontology_;
  std::map<std::string, GraphDocument> docs_;
  std::vector<std::vector<const GraphDocument*>> by_topic_;
  std::pair<int, int> span_{0, -1};
};

// Documents without an annotation get an empty topic set.
AidaGraph build_graph(const Corpus& corpus, const std::vector<TopicAnnotation>& annotations,
                      const OrgRegistry& registry,
                      std::shared_ptr<const TopicOntology> ontology);

struct KindStats {
  std::size_t total = 0;
  std::size_t with_registry = 0;  // every affiliation except unknown
  std::size_t academia = 0;
  std::size_t industry = 0;
  std::size_t collaborative = 0;
  std::size_t additional = 0;     // other_typed
  std::size_t unknown = 0;

  friend bool operator==(const KindStats&, const KindStats&) = default;
};

struct StatsReport {
  KindStats publications;
  KindStats patents;

  friend bool operator==(const StatsReport&, const StatsReport&) = default;
};

StatsReport graph_stats(const AidaGraph& graph);
std::string stats_to_json(const StatsReport& report);
std::string stats_to_table(const StatsReport& report);

// Predicate IRIs of the exported graph.
std::string has_topic_iri();
std::string has_affiliation_type_iri();
std::string has_assignee_type_iri();
std::string has_industrial_sector_iri();
std::string document_iri(std::string_view doc_id);

// Writes one triple per (doc, hasTopic, topic), per affiliation
// (hasAffiliationType for publications, hasAssigneeType for patents) and
// per sector, sorted by (doc id, predicate, object). Unknown affiliations
// produce no triple. Returns the number of triples written.
std::size_t export_triples(const AidaGraph& graph, std::ostream& out);
std::size_t export_triples(const AidaGraph& graph, const std::string& path);

// Inverse of export_triples. Kind and year come from the corpus, which must
// contain every document mentioned in the triples.
AidaGraph import_triples(std::istream& in, const Corpus& corpus,
                         std::shared_ptr<const TopicOntology> ontology);
AidaGraph import_triples(const std::string& path, const Corpus& corpus,
                         std::shared_ptr<const TopicOntology> ontology);

}  // namespace topicflow
