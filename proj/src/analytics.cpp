#include "topicflow/analytics.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"

namespace topicflow {

std::string_view to_string(Stream s) {
  switch (s) {
    case Stream::RA: return "RA";
    case Stream::RI: return "RI";
    case Stream::PA: return "PA";
    case Stream::PI: return "PI";
  }
  return "";
}

std::optional<Stream> parse_stream(std::string_view s) {
  for (Stream st : kStreams) {
    if (to_string(st) == s) return st;
  }
  return std::nullopt;
}

namespace {

std::size_t topic_index(const AidaGraph& graph, const TopicId& topic) {
  auto idx = graph.ontology().index_of(topic);
  if (!idx) throw Error(ErrorCode::not_found, "unknown topic '" + topic.value + "'");
  return *idx;
}

// Streams a document contributes to; collaborative documents feed both the
// academic and the industrial stream unless excluded.
void add_to_streams(const GraphDocument& d, CollaborativeMode mode,
                    const std::function<void(Stream)>& add) {
  const bool paper = d.kind == DocumentKind::publication;
  const bool academic = d.affiliation == AffiliationType::academic ||
                        (d.affiliation == AffiliationType::collaborative &&
                         mode == CollaborativeMode::both);
  const bool industrial = d.affiliation == AffiliationType::industrial ||
                          (d.affiliation == AffiliationType::collaborative &&
                           mode == CollaborativeMode::both);
  if (academic) add(paper ? Stream::RA : Stream::PA);
  if (industrial) add(paper ? Stream::RI : Stream::PI);
}

TopicTimeSeries series_for_index(const AidaGraph& graph, std::size_t idx, int first_year,
                                 int last_year, CollaborativeMode mode) {
  TopicTimeSeries ts;
  ts.topic = graph.ontology().at(idx);
  ts.first_year = first_year;
  ts.last_year = last_year;
  const std::size_t len = static_cast<std::size_t>(last_year - first_year + 1);
  for (auto& c : ts.counts) c.assign(len, 0);
  for (const GraphDocument* d : graph.docs_by_topic()[idx]) {
    if (d->year < first_year || d->year > last_year) continue;
    const auto y = static_cast<std::size_t>(d->year - first_year);
    add_to_streams(*d, mode, [&](Stream s) { ++ts.counts[static_cast<int>(s)][y]; });
  }
  return ts;
}

}  // namespace

TopicTimeSeries topic_time_series(const AidaGraph& graph, const TopicId& topic, int first_year,
                                  int last_year, CollaborativeMode mode) {
  const std::size_t idx = topic_index(graph, topic);
  if (first_year > last_year) {
    throw Error(ErrorCode::invalid_argument, "year range is empty");
  }
  return series_for_index(graph, idx, first_year, last_year, mode);
}

double academia_industry_index(const AidaGraph& graph, const TopicId& topic,
                               CollaborativeMode mode) {
  const auto& docs = graph.docs_by_topic()[topic_index(graph, topic)];
  if (docs.empty()) {
    throw Error(ErrorCode::validation, "topic '" + topic.value + "' has no documents");
  }
  long academic = 0;
  long industrial = 0;
  for (const GraphDocument* d : docs) {
    const bool collab = d->affiliation == AffiliationType::collaborative && mode == CollaborativeMode::both;
    if (d->affiliation == AffiliationType::academic || collab) ++academic;
    if (d->affiliation == AffiliationType::industrial || collab) ++industrial;
  }
  return static_cast<double>(academic - industrial) / static_cast<double>(docs.size());
}

double papers_patents_index(const AidaGraph& graph, const TopicId& topic) {
  const auto& docs = graph.docs_by_topic()[topic_index(graph, topic)];
  if (docs.empty()) {
    throw Error(ErrorCode::validation, "topic '" + topic.value + "' has no documents");
  }
  long papers = 0;
  for (const GraphDocument* d : docs) {
    if (d->kind == DocumentKind::publication) ++papers;
  }
  const long patents = static_cast<long>(docs.size()) - papers;
  return static_cast<double>(papers - patents) / static_cast<double>(docs.size());
}

std::optional<int> emergence_year(std::span<const long> yearly_counts, int first_year,
                                  long threshold) {
  if (threshold < 1) throw Error(ErrorCode::invalid_argument, "emergence threshold must be >= 1");
  long total = 0;
  for (std::size_t i = 0; i < yearly_counts.size(); ++i) {
    total += yearly_counts[i];
    if (total >= threshold) return first_year + static_cast<int>(i);
  }
  return std::nullopt;
}

LagReport lag_report(const AidaGraph& graph, const LagOptions& options) {
  if (options.threshold < 1) throw Error(ErrorCode::invalid_argument, "emergence threshold must be >= 1");
  LagReport report;
  struct Acc {
    std::size_t n = 0;
    double sum = 0.0;
    double sum_sq = 0.0;
  };
  std::array<std::array<Acc, 4>, 4> acc{};

  const auto [y0, y1] = graph.year_span();
  if (y1 >= y0) {
    const std::size_t n_topics = graph.ontology().size();
    std::vector<std::array<std::optional<int>, 4>> emerged(n_topics);
    parallel_for(n_topics, [&](std::size_t t) {
      if (graph.docs_by_topic()[t].empty()) return;
      const auto ts = series_for_index(graph, t, y0, y1, options.mode);
      if (options.basis == EmergenceBasis::per_stream) {
        for (Stream s : kStreams) {
          emerged[t][static_cast<int>(s)] = emergence_year(ts[s], y0, options.threshold);
        }
        return;
      }
      std::vector<long> combined(ts.length(), 0);
      for (Stream s : kStreams) {
        for (std::size_t i = 0; i < combined.size(); ++i) combined[i] += ts[s][i];
      }
      const auto overall = emergence_year(combined, y0, options.threshold);
      if (!overall) return;
      for (Stream s : kStreams) {
        if (auto present = emergence_year(ts[s], y0, 1)) {
          emerged[t][static_cast<int>(s)] = std::max(*present, *overall);
        }
      }
    });

    for (const auto& years : emerged) {
      int first = -1;
      for (int s = 0; s < 4; ++s) {
        if (years[s] && (first < 0 || *years[s] < *years[first])) first = s;
      }
      if (first < 0) continue;
      ++report.topics_emerged;
      ++report.first_count[first];
      for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
          if (a == b || !years[a] || !years[b]) continue;
          const double gap = *years[b] - *years[a];
          auto& c = acc[a][b];
          ++c.n;
          c.sum += gap;
          c.sum_sq += gap * gap;
        }
      }
    }
  }
  for (int s = 0; s < 4; ++s) {
    report.first_share[s] = report.topics_emerged == 0
                                ? 0.0
                                : static_cast<double>(report.first_count[s]) /
                                      static_cast<double>(report.topics_emerged);
  }
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      if (a == b) continue;
      StreamLag lag{kStreams[a], kStreams[b]};
      const auto& c = acc[a][b];
      lag.topics = c.n;
      if (c.n > 0) {
        const double n = static_cast<double>(c.n);
        lag.mean_years = c.sum / n;
        lag.std_years = std::sqrt(std::max(0.0, c.sum_sq / n - lag.mean_years * lag.mean_years));
      }
      report.pairs.push_back(lag);
    }
  }
  return report;
}

std::string lag_report_to_json(const LagReport& report) {
  nlohmann::ordered_json j;
  j["topics_emerged"] = report.topics_emerged;
  nlohmann::ordered_json first = nlohmann::ordered_json::object();
  for (Stream s : kStreams) {
    first[std::string(to_string(s))] = {{"topics", report.first_count[static_cast<int>(s)]},
                                        {"share", report.first_share[static_cast<int>(s)]}};
  }
  j["first_emergence"] = first;
  j["pairs"] = nlohmann::ordered_json::array();
  for (const auto& p : report.pairs) {
    nlohmann::ordered_json row;
    row["from"] = to_string(p.from);
    row["to"] = to_string(p.to);
    row["topics"] = p.topics;
    if (p.topics > 0) {
      row["mean_years"] = p.mean_years;
      row["std_years"] = p.std_years;
    } else {
      row["mean_years"] = nullptr;
      row["std_years"] = nullptr;
    }
    j["pairs"].push_back(row);
  }
  return j.dump(2) + "\n";
}

std::vector<GrowingTopic> growing_topics(const AidaGraph& graph, YearWindow window_a,
                                         YearWindow window_b, std::size_t top_n,
                                         KindFilter kinds) {
  if (window_a.first > window_a.last || window_b.first > window_b.last) {
    throw Error(ErrorCode::invalid_argument, "growth windows must not be empty");
  }
  if (window_a.last >= window_b.first) {
    throw Error(ErrorCode::invalid_argument, "growth windows must be disjoint and ordered");
  }
  std::vector<GrowingTopic> out;
  const auto& by_topic = graph.docs_by_topic();
  for (std::size_t t = 0; t < by_topic.size(); ++t) {
    GrowingTopic g;
    for (const GraphDocument* d : by_topic[t]) {
      if (kinds == KindFilter::publications && d->kind != DocumentKind::publication) continue;
      if (kinds == KindFilter::patents && d->kind != DocumentKind::patent) continue;
      if (d->year >= window_a.first && d->year <= window_a.last) ++g.count_a;
      if (d->year >= window_b.first && d->year <= window_b.last) ++g.count_b;
    }
    if (g.count_a == 0 && g.count_b == 0) continue;
    g.topic = graph.ontology().at(t);
    g.growth = g.count_b - g.count_a;
    if (g.count_a > 0) g.relative_growth = static_cast<double>(g.growth) / static_cast<double>(g.count_a);
    out.push_back(std::move(g));
  }
  std::sort(out.begin(), out.end(), [](const GrowingTopic& a, const GrowingTopic& b) {
    return a.growth != b.growth ? a.growth > b.growth : a.topic < b.topic;
  });
  if (top_n > 0 && out.size() > top_n) out.resize(top_n);
  return out;
}

}  // namespace topicflow
