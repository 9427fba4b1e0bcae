#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "topicflow/kg.hpp"

namespace topicflow {

// Papers-academia, papers-industry, patents-academia, patents-industry.
enum class Stream { RA = 0, RI = 1, PA = 2, PI = 3 };
inline constexpr std::array<Stream, 4> kStreams{Stream::RA, Stream::RI, Stream::PA, Stream::PI};

std::string_view to_string(Stream s);
std::optional<Stream> parse_stream(std::string_view s);

// How collaborative documents enter the academia/industry streams.
enum class CollaborativeMode { both, exclude };

struct TopicTimeSeries {
  TopicId topic;
  int first_year = 0;
  int last_year = 0;
  std::array<std::vector<long>, 4> counts;  // indexed by Stream

  const std::vector<long>& operator[](Stream s) const { return counts[static_cast<int>(s)]; }
  std::size_t length() const noexcept { return counts[0].size(); }
};

TopicTimeSeries topic_time_series(const AidaGraph& graph, const TopicId& topic, int first_year,
                                  int last_year,
                                  CollaborativeMode mode = CollaborativeMode::both);

// (academic - industrial) / all documents of the topic, unknown-typed ones
// included in the denominator. Throws when the topic has no documents.
double academia_industry_index(const AidaGraph& graph, const TopicId& topic,
                               CollaborativeMode mode = CollaborativeMode::both);

// (papers - patents) / all documents of the topic.
double papers_patents_index(const AidaGraph& graph, const TopicId& topic);

// First year whose cumulative count reaches `threshold`.
std::optional<int> emergence_year(std::span<const long> yearly_counts, int first_year,
                                  long threshold = 10);

enum class EmergenceBasis {
  per_stream,   // each stream must reach the threshold on its own
  all_streams,  // the topic's combined count reaches the threshold and the
                // stream has at least one document by then
};

struct LagOptions {
  long threshold = 10;
  EmergenceBasis basis = EmergenceBasis::per_stream;
  CollaborativeMode mode = CollaborativeMode::both;
};

struct StreamLag {
  Stream from;
  Stream to;
  std::size_t topics = 0;     // topics emerged in both streams
  double mean_years = 0.0;    // mean of year(to) - year(from)
  double std_years = 0.0;     // population standard deviation
};

struct LagReport {
  std::size_t topics_emerged = 0;
  std::array<std::size_t, 4> first_count{};
  std::array<double, 4> first_share{};
  std::vector<StreamLag> pairs;  // every ordered pair of distinct streams
};

// Ties for the first stream are broken in RA, RI, PA, PI order.
LagReport lag_report(const AidaGraph& graph, const LagOptions& options = {});
std::string lag_report_to_json(const LagReport& report);

struct YearWindow {
  int first = 0;
  int last = 0;
};

enum class KindFilter { all, publications, patents };

struct GrowingTopic {
  TopicId topic;
  long count_a = 0;
  long count_b = 0;
  long growth = 0;
  std::optional<double> relative_growth;  // absent when count_a == 0
};

// Ranked by absolute growth, ties by topic id. Topics absent from both
// windows are left out; top_n == 0 keeps every topic.
std::vector<GrowingTopic> growing_topics(const AidaGraph& graph, YearWindow window_a,
                                         YearWindow window_b, std::size_t top_n,
                                         KindFilter kinds = KindFilter::all);

}  // namespace topicflow
