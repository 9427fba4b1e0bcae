#include "topicflow/ttf.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"
#include "topicflow/text.hpp"

namespace topicflow {

std::vector<std::string> read_technologies(std::istream& in) {
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  std::string line;
  while (std::getline(in, line)) {
    auto label = normalize_label(line);
    if (label.empty()) continue;
    if (seen.insert(label).second) out.push_back(std::move(label));
  }
  return out;
}

std::vector<std::string> load_technologies(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot open technology list '" + path + "'");
  return read_technologies(in);
}

TechTopicCube build_cube(const Corpus& corpus, const std::vector<TopicAnnotation>& annotations,
                         const std::vector<std::string>& technologies, const CubeParams& params) {
  if (technologies.empty()) throw Error(ErrorCode::invalid_argument, "technology list is empty");
  if (params.first_year > params.last_year) {
    throw Error(ErrorCode::invalid_argument, "cube year range is empty");
  }
  std::unordered_map<std::string_view, const TopicAnnotation*> by_doc;
  for (const auto& a : annotations) {
    if (!corpus.find(a.doc_id)) {
      throw Error(ErrorCode::validation, "annotation for unknown document '" + a.doc_id + "'");
    }
    by_doc[a.doc_id] = &a;
  }

  struct Paper {
    int year_offset;
    const std::vector<TopicId>* topics;
    std::vector<Segment> segments;
  };
  std::vector<const Document*> selected;
  for (const auto& d : corpus.documents()) {
    if (d.kind == DocumentKind::publication && d.year >= params.first_year &&
        d.year <= params.last_year) {
      selected.push_back(&d);
    }
  }
  static const std::vector<TopicId> kNoTopics;
  std::vector<Paper> papers(selected.size());
  parallel_for(selected.size(), [&](std::size_t i) {
    const Document& d = *selected[i];
    auto it = by_doc.find(d.id);
    papers[i] = {d.year - params.first_year, it == by_doc.end() ? &kNoTopics : &it->second->all,
                 d.segments()};
  });

  std::set<TopicId> topic_set;
  for (const auto& p : papers) topic_set.insert(p.topics->begin(), p.topics->end());

  TechTopicCube cube;
  cube.topics.assign(topic_set.begin(), topic_set.end());
  cube.first_year = params.first_year;
  cube.last_year = params.last_year;
  std::map<TopicId, std::size_t> topic_index;
  for (std::size_t i = 0; i < cube.topics.size(); ++i) topic_index.emplace(cube.topics[i], i);

  const std::size_t slice = cube.topics.size() * cube.years();
  std::vector<std::vector<long>> slices(technologies.size());
  std::vector<long> mentions(technologies.size(), 0);
  parallel_for(technologies.size(), [&](std::size_t t) {
    const auto phrase = tokenize(technologies[t]);
    slices[t].assign(slice, 0);
    if (phrase.empty()) return;
    for (const auto& p : papers) {
      if (!contains_phrase(p.segments, phrase)) continue;
      ++mentions[t];
      for (const auto& topic : *p.topics) {
        slices[t][topic_index.at(topic) * cube.years() + static_cast<std::size_t>(p.year_offset)] += 1;
      }
    }
  });
  for (std::size_t t = 0; t < technologies.size(); ++t) {
    if (mentions[t] < params.min_papers) continue;
    cube.technologies.push_back(normalize_label(technologies[t]));
    cube.cells.insert(cube.cells.end(), slices[t].begin(), slices[t].end());
  }
  return cube;
}

void write_cube_csv(std::ostream& out, const TechTopicCube& cube) {
  out << "tech,topic,year,count\n";
  for (std::size_t t = 0; t < cube.technologies.size(); ++t) {
    for (std::size_t s = 0; s < cube.topics.size(); ++s) {
      for (std::size_t y = 0; y < cube.years(); ++y) {
        const long c = cube.at(t, s, y);
        if (c == 0) continue;
        out << csv_escape(cube.technologies[t]) << ',' << csv_escape(cube.topics[s].value) << ','
            << cube.first_year + static_cast<int>(y) << ',' << c << '\n';
      }
    }
  }
}

std::vector<AdoptionSample> adoption_samples(const TechTopicCube& cube,
                                             const AdoptionParams& params) {
  if (params.feature_years < 1 || params.horizon < 1 || params.adopted_at < 1) {
    throw Error(ErrorCode::invalid_argument, "feature_years, horizon and adopted_at must be >= 1");
  }
  const auto fy = static_cast<std::size_t>(params.feature_years);
  const auto hz = static_cast<std::size_t>(params.horizon);
  const std::size_t years = cube.years();
  if (years < fy + hz) {
    throw Error(ErrorCode::validation, "cube spans " + std::to_string(years) +
                                           " years; need at least " + std::to_string(fy + hz));
  }
  const std::size_t n_topics = cube.topics.size();
  std::vector<std::vector<AdoptionSample>> per_tech(cube.technologies.size());
  parallel_for(cube.technologies.size(), [&](std::size_t t) {
    // Cumulative counts per topic, cum[s][y] = sum of years 0..y.
    std::vector<std::vector<long>> cum(n_topics, std::vector<long>(years, 0));
    for (std::size_t s = 0; s < n_topics; ++s) {
      long run = 0;
      for (std::size_t y = 0; y < years; ++y) {
        run += cube.at(t, s, y);
        cum[s][y] = run;
      }
    }
    for (std::size_t a = fy - 1; a + hz < years; ++a) {
      std::vector<double> history;
      history.reserve(n_topics * fy);
      for (std::size_t s = 0; s < n_topics; ++s) {
        for (std::size_t y = a + 1 - fy; y <= a; ++y) history.push_back(static_cast<double>(cube.at(t, s, y)));
      }
      for (std::size_t s = 0; s < n_topics; ++s) {
        if (cum[s][a] >= params.adopted_at) continue;
        AdoptionSample sample;
        sample.tech = t;
        sample.topic = s;
        sample.as_of_year = cube.first_year + static_cast<int>(a);
        sample.features = history;
        for (std::size_t y = a + 1 - fy; y <= a; ++y) {
          sample.features.push_back(static_cast<double>(cube.at(t, s, y)));
        }
        sample.label = cum[s][a + hz] >= params.adopted_at;
        per_tech[t].push_back(std::move(sample));
      }
    }
  });
  std::vector<AdoptionSample> out;
  for (auto& v : per_tech) {
    for (auto& s : v) out.push_back(std::move(s));
  }
  return out;
}

namespace {

class MajorityModel : public ml::Model {
 public:
  explicit MajorityModel(int label) : label_(label) {}
  double predict_proba(std::span<const double>) const override { return label_; }
  int predict(std::span<const double>) const override { return label_; }
  std::string to_json() const override {
    return nlohmann::json{{"kind", "majority"}, {"label", label_}}.dump();
  }

 private:
  int label_;
};

}  // namespace

AdoptionResult predict_adoption(const TechTopicCube& cube,
                                const std::vector<AdoptionSample>& samples,
                                const PredictParams& params) {
  if (samples.empty()) throw Error(ErrorCode::validation, "no adoption samples");
  ml::Dataset data;
  data.n_features = samples.front().features.size();
  for (const auto& s : samples) {
    if (s.features.size() != data.n_features) {
      throw Error(ErrorCode::validation, "adoption samples have inconsistent feature widths");
    }
    data.x.insert(data.x.end(), s.features.begin(), s.features.end());
    data.y.push_back(s.label ? 1 : 0);
  }
  const auto& ex = params.experiment;
  const auto cv = ml::kfold_cv(data, ex.folds, make_trainer(ex), ex.seed);
  const auto base = ml::kfold_cv(
      data, ex.folds,
      [](const ml::Dataset& train) -> std::unique_ptr<ml::Model> {
        const auto pos = std::count(train.y.begin(), train.y.end(), 1);
        return std::make_unique<MajorityModel>(2 * pos > static_cast<long>(train.y.size()) ? 1 : 0);
      },
      ex.seed);

  AdoptionResult result;
  result.overall = cv.mean;
  result.baseline = base.mean;
  std::vector<std::vector<int>> truth(cube.topics.size()), pred(cube.topics.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    truth[samples[i].topic].push_back(data.y[i]);
    pred[samples[i].topic].push_back(cv.predictions[i]);
  }
  for (std::size_t s = 0; s < cube.topics.size(); ++s) {
    const auto positives = static_cast<std::size_t>(std::count(truth[s].begin(), truth[s].end(), 1));
    if (truth[s].empty() || positives < params.min_positives) continue;
    result.per_topic.push_back({cube.topics[s], truth[s].size(), positives, ml::prf(truth[s], pred[s])});
  }
  std::sort(result.per_topic.begin(), result.per_topic.end(),
            [](const TopicAdoptionRow& a, const TopicAdoptionRow& b) {
              return a.metrics.f1 != b.metrics.f1 ? a.metrics.f1 > b.metrics.f1 : a.topic < b.topic;
            });
  return result;
}

namespace {

std::string percent(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", v * 100.0);
  return buf;
}

nlohmann::ordered_json metrics_json(const ml::Metrics& m) {
  return {{"precision", m.precision}, {"recall", m.recall}, {"f1", m.f1}};
}

}  // namespace

std::string adoption_to_csv(const AdoptionResult& result) {
  std::string out = "topic,samples,positives,precision,recall,f1\n";
  for (const auto& r : result.per_topic) {
    out += csv_escape(r.topic.value) + ',' + std::to_string(r.samples) + ',' +
           std::to_string(r.positives) + ',' + percent(r.metrics.precision) + ',' +
           percent(r.metrics.recall) + ',' + percent(r.metrics.f1) + '\n';
  }
  return out;
}

std::string adoption_to_json(const AdoptionResult& result, const PredictParams& params) {
  nlohmann::ordered_json j;
  j["model"] = to_string(params.experiment.model);
  j["folds"] = params.experiment.folds;
  j["seed"] = params.experiment.seed;
  j["min_positives"] = params.min_positives;
  j["overall"] = metrics_json(result.overall);
  j["baseline"] = metrics_json(result.baseline);
  j["per_topic"] = nlohmann::ordered_json::array();
  for (const auto& r : result.per_topic) {
    auto row = metrics_json(r.metrics);
    row["topic"] = r.topic.value;
    row["samples"] = r.samples;
    row["positives"] = r.positives;
    j["per_topic"].push_back(row);
  }
  return j.dump(2) + "\n";
}

}  // namespace topicflow
