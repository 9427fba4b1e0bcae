#include "topicflow/forecast.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>

#include "json.hpp"
#include "topicflow/text.hpp"

namespace topicflow {

std::vector<ForecastSample> build_gold_standard(const AidaGraph& graph,
                                                const GoldStandardParams& params) {
  if (params.window < 1 || params.horizon < 1) {
    throw Error(ErrorCode::invalid_argument, "window and horizon must be >= 1");
  }
  const auto [y0, y1] = graph.year_span();
  const int span = y1 - y0 + 1;
  if (span < params.window + params.horizon) {
    throw Error(ErrorCode::validation, "graph spans " + std::to_string(std::max(span, 0)) +
                                           " years; need at least " +
                                           std::to_string(params.window + params.horizon));
  }
  const auto& onto = graph.ontology();
  const int step = params.non_overlapping ? params.window : 1;
  std::vector<std::vector<ForecastSample>> per_topic(onto.size());
  parallel_for(onto.size(), [&](std::size_t t) {
    if (graph.docs_by_topic()[t].empty()) return;
    const auto ts = topic_time_series(graph, onto.at(t), y0, y1, params.mode);
    const auto& pi = ts[Stream::PI];
    for (int s = y0; s + params.window + params.horizon - 1 <= y1; s += step) {
      const auto win = static_cast<std::size_t>(s - y0);
      const auto end = win + static_cast<std::size_t>(params.window);  // one past window end
      long cumulative = 0;
      for (std::size_t i = 0; i < end; ++i) cumulative += pi[i];
      if (cumulative >= params.emerged_lt) break;  // cumulative only grows
      long future = 0;
      for (std::size_t i = end; i < end + static_cast<std::size_t>(params.horizon); ++i) future += pi[i];
      ForecastSample sample;
      sample.topic = onto.at(t);
      sample.window_start = s;
      for (Stream st : kStreams) {
        const auto& c = ts[st];
        sample.streams[static_cast<int>(st)].assign(c.begin() + static_cast<long>(win),
                                                    c.begin() + static_cast<long>(end));
      }
      sample.label = future > params.label_gt;
      per_topic[t].push_back(std::move(sample));
    }
  });
  std::vector<ForecastSample> out;
  for (auto& v : per_topic) {
    for (auto& s : v) out.push_back(std::move(s));
  }
  return out;
}

const std::vector<std::string>& feature_combos() {
  static const std::vector<std::string> combos{
      "RA",       "RI",       "PA",       "PI",       "R",        "P",
      "RA-RI",    "RA-PA",    "RA-PI",    "RI-PA",    "RI-PI",    "PA-PI",
      "RA-RI-PA", "RA-RI-PI", "RA-PA-PI", "RI-PA-PI", "RA-RI-PA-PI"};
  return combos;
}

bool is_feature_combo(std::string_view name) {
  const auto& c = feature_combos();
  return std::find(c.begin(), c.end(), name) != c.end();
}

std::vector<double> featurize(const ForecastSample& sample, std::string_view combo) {
  if (!is_feature_combo(combo)) {
    throw Error(ErrorCode::invalid_argument, "unknown feature combination '" + std::string(combo) + "'");
  }
  auto stream = [&](Stream s) -> const std::vector<long>& { return sample.streams[static_cast<int>(s)]; };
  std::vector<double> out;
  auto add_sum = [&](Stream a, Stream b) {
    const auto& x = stream(a);
    const auto& y = stream(b);
    for (std::size_t i = 0; i < x.size(); ++i) out.push_back(static_cast<double>(x[i] + y[i]));
  };
  if (combo == "R") {
    add_sum(Stream::RA, Stream::RI);
    return out;
  }
  if (combo == "P") {
    add_sum(Stream::PA, Stream::PI);
    return out;
  }
  std::size_t pos = 0;
  while (pos <= combo.size()) {
    const std::size_t dash = std::min(combo.find('-', pos), combo.size());
    const auto s = parse_stream(combo.substr(pos, dash - pos));
    for (long v : stream(*s)) out.push_back(static_cast<double>(v));
    pos = dash + 1;
  }
  return out;
}

std::string_view to_string(ModelKind kind) {
  return kind == ModelKind::logreg ? "logreg" : "random_forest";
}

ModelKind parse_model_kind(std::string_view name) {
  if (name == "logreg" || name == "lr") return ModelKind::logreg;
  if (name == "random_forest" || name == "rf") return ModelKind::random_forest;
  throw Error(ErrorCode::invalid_argument, "unknown model kind '" + std::string(name) + "'");
}

ml::Trainer make_trainer(const ExperimentParams& params) {
  if (params.model == ModelKind::logreg) return ml::logreg_trainer(params.logreg, true);
  ml::ForestParams forest = params.forest;
  forest.seed = params.seed;
  return ml::forest_trainer(forest);
}

std::vector<ComboResult> run_experiment(const std::vector<ForecastSample>& samples,
                                        const std::vector<std::string>& combos,
                                        const ExperimentParams& params) {
  for (const auto& c : combos) {
    if (!is_feature_combo(c)) throw Error(ErrorCode::invalid_argument, "unknown feature combination '" + c + "'");
  }
  if (samples.size() < params.folds) {
    throw Error(ErrorCode::validation, "need at least " + std::to_string(params.folds) +
                                           " samples, got " + std::to_string(samples.size()));
  }
  std::vector<int> labels;
  labels.reserve(samples.size());
  for (const auto& s : samples) labels.push_back(s.label ? 1 : 0);
  const auto positives = std::count(labels.begin(), labels.end(), 1);
  if (positives == 0 || positives == static_cast<long>(labels.size())) {
    throw Error(ErrorCode::validation, "forecast samples contain a single class");
  }
  const auto trainer = make_trainer(params);
  std::vector<ComboResult> results(combos.size());
  parallel_for(combos.size(), [&](std::size_t c) {
    ml::Dataset data;
    for (const auto& s : samples) {
      const auto row = featurize(s, combos[c]);
      data.n_features = row.size();
      data.x.insert(data.x.end(), row.begin(), row.end());
    }
    data.y = labels;
    results[c].combo = combos[c];
    results[c].metrics = ml::kfold_cv(data, params.folds, trainer, params.seed).mean;
  });
  return results;
}

void write_samples_csv(std::ostream& out, const std::vector<ForecastSample>& samples) {
  const std::size_t len = samples.empty() ? 5 : samples.front().streams[0].size();
  out << "topic,window_start,label";
  for (Stream s : kStreams) {
    for (std::size_t i = 1; i <= len; ++i) out << ',' << to_string(s) << '_' << i;
  }
  out << '\n';
  for (const auto& s : samples) {
    out << csv_escape(s.topic.value) << ',' << s.window_start << ',' << (s.label ? 1 : 0);
    for (const auto& stream : s.streams) {
      for (long v : stream) out << ',' << v;
    }
    out << '\n';
  }
}

namespace {

std::string percent(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", v * 100.0);
  return buf;
}

}  // namespace

std::string results_to_csv(const std::vector<ComboResult>& results) {
  std::string out = "combo,precision,recall,f1\n";
  for (const auto& r : results) {
    out += r.combo + ',' + percent(r.metrics.precision) + ',' + percent(r.metrics.recall) + ',' +
           percent(r.metrics.f1) + '\n';
  }
  return out;
}

std::string results_to_json(const std::vector<ComboResult>& results, const ExperimentParams& params) {
  nlohmann::ordered_json j;
  j["model"] = to_string(params.model);
  j["folds"] = params.folds;
  j["seed"] = params.seed;
  j["averaging"] = "macro";
  j["results"] = nlohmann::ordered_json::array();
  for (const auto& r : results) {
    j["results"].push_back({{"combo", r.combo},
                            {"precision", r.metrics.precision},
                            {"recall", r.metrics.recall},
                            {"f1", r.metrics.f1}});
  }
  return j.dump(2) + "\n";
}

}  // namespace topicflow
