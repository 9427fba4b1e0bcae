#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "topicflow/kg.hpp"

namespace topicflow {

// Yearly co-occurrence network over topics. Edge keys are ordered (a < b).
struct TopicNetwork {
  int year = 0;
  std::map<TopicId, long> node_weight;
  std::map<std::pair<TopicId, TopicId>, long> edge_weight;

  friend bool operator==(const TopicNetwork&, const TopicNetwork&) = default;
};

// Built from the year's publications only.
TopicNetwork build_topic_network(const AidaGraph& graph, int year);

// One network per year in [first_year, last_year].
std::vector<TopicNetwork> build_topic_networks(const AidaGraph& graph, int first_year,
                                               int last_year);

inline constexpr std::size_t kAccelerationWindow = 5;

struct AccelerationOptions {
  double growth_percentile = 0.75;  // fraction in [0, 1]
  int min_support = 2;              // years in which an edge must appear
};

// Least-squares slope of `weights` against 0, 1, 2, ...
double trend_slope(const std::vector<double>& weights);

// Edges with a positive slope at or above the percentile of positive slopes,
// weighted by trunc(slope * 1000) (at least 1). Node weights are the sums of
// incident kept-edge weights. The result carries the window's last year.
TopicNetwork acceleration_graph(const std::vector<TopicNetwork>& networks,
                                const AccelerationOptions& options = {});

using Community = std::vector<TopicId>;  // sorted

// Overlapping communities of adjacent k-cliques, sorted lexicographically.
std::vector<Community> clique_percolation(const TopicNetwork& network, std::size_t k);

std::vector<Community> detect_emerging(const std::vector<TopicNetwork>& networks,
                                       std::size_t k = 3,
                                       const AccelerationOptions& options = {});

struct GoldEntry {
  std::string emerging_topic;
  int debut_year = 0;
  std::vector<TopicId> ancestors;  // sorted, unique
};

struct GoldStandard {
  std::vector<GoldEntry> entries;

  // JSON array of {"topic", "debut_year", "ancestors": [labels]}. Ancestor
  // labels known to the ontology are mapped to their canonical topic.
  static GoldStandard load(const std::string& path, const TopicOntology& ontology);
  static GoldStandard read(std::istream& in, const TopicOntology& ontology);
};

struct GoldEvaluation {
  double precision = 0.0;
  double recall = 0.0;
  std::size_t matched_clusters = 0;
  std::size_t matched_entries = 0;
};

GoldEvaluation evaluate_against_gold(const std::vector<Community>& clusters,
                                     const GoldStandard& gold, double min_overlap = 0.5);

// `year,a,b,weight` rows in edge order, with a header.
void write_network_csv(std::ostream& out, const std::vector<TopicNetwork>& networks);
std::string communities_to_json(const std::vector<Community>& communities);

}  // namespace topicflow
