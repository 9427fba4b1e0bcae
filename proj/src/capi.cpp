#include "topicflow/topicflow.h"

#include <cstring>
#include <fstream>
#include <memory>
#include <set>
#include <sstream>

#include "json.hpp"
#include "topicflow/analytics.hpp"
#include "topicflow/classifier.hpp"
#include "topicflow/emergence.hpp"
#include "topicflow/forecast.hpp"
#include "topicflow/kg.hpp"
#include "topicflow/query.hpp"
#include "topicflow/text.hpp"
#include "topicflow/ttf.hpp"

using namespace topicflow;
using nlohmann::json;

struct tf_ontology {
  std::shared_ptr<const TopicOntology> value;
};
struct tf_corpus {
  Corpus value;
};
struct tf_registry {
  OrgRegistry value;
};
struct tf_embeddings {
  EmbeddingModel value;
};
struct tf_graph {
  AidaGraph value;
};

namespace {

thread_local std::string t_error;

tf_status fail(tf_status status, std::string message) {
  t_error = std::move(message);
  return status;
}

template <typename Fn>
tf_status guarded(Fn&& fn) {
  t_error.clear();
  try {
    fn();
    return TF_OK;
  } catch (const Error& e) {
    return fail(static_cast<tf_status>(static_cast<int>(e.code())), e.what());
  } catch (const json::exception& e) {
    return fail(TF_ERR_INVALID_ARGUMENT, std::string("parameters: ") + e.what());
  } catch (const std::bad_alloc&) {
    return fail(TF_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(TF_ERR_INTERNAL, e.what());
  }
}

void require(const void* p, const char* name) {
  if (!p) throw Error(ErrorCode::invalid_argument, std::string(name) + " must not be null");
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size() + 1);
  return out;
}

void put(char** out, const std::string& s) {
  if (out) *out = dup_string(s);
}

// JSON parameter object; every key must be read, so unknown keys surface as
// errors instead of being silently ignored.
class Params {
 public:
  explicit Params(const char* text) {
    if (text && *text) {
      j_ = json::parse(text);
      if (!j_.is_object()) throw Error(ErrorCode::invalid_argument, "parameters must be a JSON object");
    } else {
      j_ = json::object();
    }
  }

  bool has(const std::string& key) {
    used_.insert(key);
    return j_.contains(key) && !j_[key].is_null();
  }

  template <typename T>
  T get(const std::string& key, T fallback) {
    if (!has(key)) return fallback;
    try {
      return j_[key].get<T>();
    } catch (const json::exception&) {
      throw Error(ErrorCode::invalid_argument, "parameter '" + key + "' has the wrong type");
    }
  }

  const json& raw(const std::string& key) {
    used_.insert(key);
    return j_[key];
  }

  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (!used_.count(key)) throw Error(ErrorCode::invalid_argument, "unknown parameter '" + key + "'");
    }
  }

 private:
  json j_;
  std::set<std::string> used_;
};

CollaborativeMode collab_mode(Params& p) {
  return p.get<bool>("exclude_collaborative", false) ? CollaborativeMode::exclude
                                                     : CollaborativeMode::both;
}

ExperimentParams experiment_params(Params& p) {
  ExperimentParams ex;
  ex.model = parse_model_kind(p.get<std::string>("model", "logreg"));
  ex.folds = p.get<std::size_t>("folds", ex.folds);
  ex.seed = p.get<std::uint64_t>("seed", ex.seed);
  ex.logreg.learning_rate = p.get<double>("learning_rate", ex.logreg.learning_rate);
  ex.logreg.iterations = p.get<int>("iterations", ex.logreg.iterations);
  ex.logreg.l2 = p.get<double>("l2", ex.logreg.l2);
  ex.logreg.seed = ex.seed;
  ex.forest.n_trees = p.get<int>("n_trees", ex.forest.n_trees);
  ex.forest.max_depth = p.get<int>("max_depth", ex.forest.max_depth);
  ex.forest.min_leaf = p.get<int>("min_leaf", ex.forest.min_leaf);
  ex.forest.feature_subsample = p.get<int>("feature_subsample", ex.forest.feature_subsample);
  ex.forest.seed = ex.seed;
  return ex;
}

YearWindow window_param(Params& p, const std::string& key, YearWindow fallback) {
  if (!p.has(key)) return fallback;
  const auto& v = p.raw(key);
  if (!v.is_array() || v.size() != 2 || !v[0].is_number_integer() || !v[1].is_number_integer()) {
    throw Error(ErrorCode::invalid_argument, "parameter '" + key + "' must be [first_year, last_year]");
  }
  return {v[0].get<int>(), v[1].get<int>()};
}

std::vector<TopicId> topic_list(const AidaGraph& g, const char* topics_json) {
  require(topics_json, "topics");
  const json j = json::parse(topics_json);
  if (!j.is_array() || j.empty()) {
    throw Error(ErrorCode::invalid_argument, "topics must be a non-empty JSON array of labels");
  }
  std::vector<TopicId> out;
  for (const auto& t : j) {
    if (!t.is_string()) throw Error(ErrorCode::invalid_argument, "topic labels must be strings");
    auto id = g.ontology().canonical_topic(t.get<std::string>());
    if (!id) throw Error(ErrorCode::not_found, "unknown topic '" + t.get<std::string>() + "'");
    out.push_back(*id);
  }
  return out;
}

std::string trends_csv(const AidaGraph& g, const std::vector<TopicId>& topics, int y0, int y1,
                       CollaborativeMode mode) {
  std::ostringstream out;
  out << "topic,stream";
  for (int y = y0; y <= y1; ++y) out << ',' << y;
  out << '\n';
  for (const auto& t : topics) {
    const auto ts = topic_time_series(g, t, y0, y1, mode);
    for (Stream s : kStreams) {
      out << csv_escape(t.value) << ',' << to_string(s);
      for (long c : ts[s]) out << ',' << c;
      out << '\n';
    }
  }
  return out.str();
}

std::string indexes_csv(const AidaGraph& g, const std::vector<TopicId>& topics,
                        CollaborativeMode mode) {
  std::string out = "topic,documents,academia_industry_index,papers_patents_index\n";
  for (const auto& t : topics) {
    const auto n = g.docs_by_topic()[*g.ontology().index_of(t)].size();
    out += csv_escape(t.value) + ',' + std::to_string(n) + ',';
    if (n == 0) {
      out += ",\n";
      continue;
    }
    out += format_double(academia_industry_index(g, t, mode)) + ',' +
           format_double(papers_patents_index(g, t)) + '\n';
  }
  return out;
}

std::string growing_csv(const std::vector<GrowingTopic>& rows) {
  std::string out = "topic,count_a,count_b,growth,relative_growth\n";
  for (const auto& r : rows) {
    out += csv_escape(r.topic.value) + ',' + std::to_string(r.count_a) + ',' +
           std::to_string(r.count_b) + ',' + std::to_string(r.growth) + ',' +
           (r.relative_growth ? format_double(*r.relative_growth) : std::string()) + '\n';
  }
  return out;
}

// Default comparison: the last five years of the graph against the five before.
std::pair<YearWindow, YearWindow> default_growth_windows(const AidaGraph& g) {
  const auto [y0, y1] = g.year_span();
  if (y1 - y0 + 1 < 2) throw Error(ErrorCode::validation, "graph spans fewer than two years");
  const int len = std::min(5, (y1 - y0 + 1) / 2);
  return {{y1 - 2 * len + 1, y1 - len}, {y1 - len + 1, y1}};
}

KindFilter parse_kinds(const std::string& s) {
  if (s == "all") return KindFilter::all;
  if (s == "publications") return KindFilter::publications;
  if (s == "patents") return KindFilter::patents;
  throw Error(ErrorCode::invalid_argument, "kinds must be all, publications or patents");
}

struct EmergenceRun {
  std::size_t k = 3;
  AccelerationOptions accel;
  double min_overlap = 0.5;
  std::optional<int> start;
};

nlohmann::ordered_json run_emergence(const AidaGraph& g, const EmergenceRun& run,
                                     const GoldStandard* gold, std::string* networks_csv) {
  const auto [y0, y1] = g.year_span();
  const int w = static_cast<int>(kAccelerationWindow);
  int first = y0;
  int last = y1 - w + 1;
  if (run.start) {
    first = last = *run.start;
    if (*run.start < y0 || *run.start + w - 1 > y1) {
      throw Error(ErrorCode::validation, "window starting " + std::to_string(*run.start) +
                                             " lies outside the graph years");
    }
  }
  if (last < first) throw Error(ErrorCode::validation, "graph spans fewer than five years");
  const auto nets = build_topic_networks(g, first, last + w - 1);
  if (networks_csv) {
    std::ostringstream out;
    write_network_csv(out, nets);
    *networks_csv = out.str();
  }
  const std::size_t n_windows = static_cast<std::size_t>(last - first + 1);
  std::vector<std::vector<Community>> clusters(n_windows);
  parallel_for(n_windows, [&](std::size_t i) {
    std::vector<TopicNetwork> window(nets.begin() + static_cast<long>(i),
                                     nets.begin() + static_cast<long>(i) + w);
    clusters[i] = detect_emerging(window, run.k, run.accel);
  });

  nlohmann::ordered_json j;
  j["method"] = "acpm-variant";
  j["k"] = run.k;
  j["growth_percentile"] = run.accel.growth_percentile;
  j["min_support"] = run.accel.min_support;
  if (gold) j["min_overlap"] = run.min_overlap;
  j["windows"] = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < n_windows; ++i) {
    nlohmann::ordered_json win;
    win["first_year"] = first + static_cast<int>(i);
    win["last_year"] = first + static_cast<int>(i) + w - 1;
    win["clusters"] = json::parse(communities_to_json(clusters[i]));
    if (gold) {
      const auto ev = evaluate_against_gold(clusters[i], *gold, run.min_overlap);
      win["evaluation"] = {{"precision", ev.precision}, {"recall", ev.recall},
                           {"matched_clusters", ev.matched_clusters},
                           {"matched_entries", ev.matched_entries}};
    }
    j["windows"].push_back(win);
  }
  return j;
}

EmergenceRun emergence_params(Params& p) {
  EmergenceRun run;
  run.k = p.get<std::size_t>("k", run.k);
  run.accel.growth_percentile = p.get<double>("growth_percentile", run.accel.growth_percentile);
  run.accel.min_support = p.get<int>("min_support", run.accel.min_support);
  if (p.has("start")) run.start = p.get<int>("start", 0);
  return run;
}

}  // namespace

extern "C" {

const char* tf_last_error(void) { return t_error.c_str(); }
const char* tf_version(void) { return version_string(); }
void tf_string_free(char* s) { std::free(s); }
void tf_set_threads(unsigned n) { set_thread_count(n); }

tf_status tf_ontology_load(const char* path, const char* format, tf_ontology** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    const auto fmt = parse_ontology_format(format ? format : "edge-csv");
    if (!fmt) throw Error(ErrorCode::invalid_argument, std::string("unknown ontology format '") + format + "'");
    auto o = std::make_shared<const TopicOntology>(TopicOntology::load(path, *fmt));
    *out = new tf_ontology{std::move(o)};
  });
}

void tf_ontology_free(tf_ontology* o) { delete o; }

tf_status tf_ontology_size(const tf_ontology* o, size_t* out) {
  return guarded([&] {
    require(o, "ontology");
    require(out, "out");
    *out = o->value->size();
  });
}

tf_status tf_ontology_canonical(const tf_ontology* o, const char* label, char** out) {
  return guarded([&] {
    require(o, "ontology");
    require(label, "label");
    require(out, "out");
    auto id = o->value->canonical_topic(label);
    if (!id) throw Error(ErrorCode::not_found, std::string("unknown topic '") + label + "'");
    *out = dup_string(id->value);
  });
}

tf_status tf_ontology_super_topics(const tf_ontology* o, const char* topic, int transitive,
                                   char** out_json) {
  return guarded([&] {
    require(o, "ontology");
    require(topic, "topic");
    require(out_json, "out");
    auto id = o->value->canonical_topic(topic);
    if (!id) throw Error(ErrorCode::not_found, std::string("unknown topic '") + topic + "'");
    json j = json::array();
    for (const auto& t : o->value->super_topics(*id, transitive != 0)) j.push_back(t.value);
    *out_json = dup_string(j.dump());
  });
}

tf_status tf_corpus_load(const char* path, tf_corpus** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new tf_corpus{Corpus::load(path)};
  });
}

void tf_corpus_free(tf_corpus* c) { delete c; }

tf_status tf_corpus_size(const tf_corpus* c, size_t* out) {
  return guarded([&] {
    require(c, "corpus");
    require(out, "out");
    *out = c->value.size();
  });
}

tf_status tf_registry_load(const char* registry_path, const char* taxonomy_path, tf_registry** out) {
  return guarded([&] {
    require(registry_path, "registry path");
    require(out, "out");
    if (taxonomy_path) {
      const auto taxonomy = SectorTaxonomy::load(taxonomy_path);
      *out = new tf_registry{OrgRegistry::load(registry_path, &taxonomy)};
    } else {
      *out = new tf_registry{OrgRegistry::load(registry_path)};
    }
  });
}

void tf_registry_free(tf_registry* r) { delete r; }

tf_status tf_embeddings_load(const char* path, tf_embeddings** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new tf_embeddings{EmbeddingModel::load(path)};
  });
}

void tf_embeddings_free(tf_embeddings* e) { delete e; }

tf_status tf_classify(const tf_ontology* o, const tf_corpus* c, const tf_embeddings* e,
                      const char* params_json, char** out_jsonl) {
  return guarded([&] {
    require(o, "ontology");
    require(c, "corpus");
    require(out_jsonl, "out");
    Params p(params_json);
    json known = json::object();
    for (const char* key : {"threshold", "top_k", "cosine_floor", "stopwords_path"}) {
      if (p.has(key)) known[key] = p.raw(key);
    }
    p.finish();
    auto config = ClassifierConfig::from_json(known.dump());
    config.validate();
    const Classifier classifier(*o->value, e ? &e->value : nullptr, std::move(config));
    std::ostringstream out;
    write_annotations(out, classifier.classify_corpus(c->value));
    *out_jsonl = dup_string(out.str());
  });
}

tf_status tf_graph_build(const tf_ontology* o, const tf_corpus* c, const tf_registry* r,
                         const char* annotations_path, tf_graph** out) {
  return guarded([&] {
    require(o, "ontology");
    require(c, "corpus");
    require(r, "registry");
    require(annotations_path, "annotations path");
    require(out, "out");
    const auto annotations = load_annotations(annotations_path);
    *out = new tf_graph{build_graph(c->value, annotations, r->value, o->value)};
  });
}

tf_status tf_graph_import(const tf_ontology* o, const tf_corpus* c, const char* triples_path,
                          tf_graph** out) {
  return guarded([&] {
    require(o, "ontology");
    require(c, "corpus");
    require(triples_path, "triples path");
    require(out, "out");
    *out = new tf_graph{import_triples(std::string(triples_path), c->value, o->value)};
  });
}

void tf_graph_free(tf_graph* g) { delete g; }

tf_status tf_graph_export(const tf_graph* g, char** out_triples, size_t* out_count) {
  return guarded([&] {
    require(g, "graph");
    require(out_triples, "out");
    std::ostringstream out;
    const std::size_t n = export_triples(g->value, out);
    *out_triples = dup_string(out.str());
    if (out_count) *out_count = n;
  });
}

tf_status tf_stats(const tf_graph* g, const char* format, char** out) {
  return guarded([&] {
    require(g, "graph");
    require(out, "out");
    const std::string fmt = format ? format : "json";
    const auto report = graph_stats(g->value);
    if (fmt == "json") {
      *out = dup_string(stats_to_json(report));
    } else if (fmt == "table") {
      *out = dup_string(stats_to_table(report));
    } else {
      throw Error(ErrorCode::invalid_argument, "stats format must be json or table");
    }
  });
}

tf_status tf_trends(const tf_graph* g, const char* topics_json, const char* params_json,
                    char** out_csv) {
  return guarded([&] {
    require(g, "graph");
    require(out_csv, "out");
    Params p(params_json);
    const auto [y0, y1] = g->value.year_span();
    const int first = p.get<int>("first_year", y0);
    const int last = p.get<int>("last_year", y1);
    const auto mode = collab_mode(p);
    p.finish();
    *out_csv = dup_string(trends_csv(g->value, topic_list(g->value, topics_json), first, last, mode));
  });
}

tf_status tf_indexes(const tf_graph* g, const char* topics_json, const char* params_json,
                     char** out_csv) {
  return guarded([&] {
    require(g, "graph");
    require(out_csv, "out");
    Params p(params_json);
    const auto mode = collab_mode(p);
    p.finish();
    *out_csv = dup_string(indexes_csv(g->value, topic_list(g->value, topics_json), mode));
  });
}

tf_status tf_lags(const tf_graph* g, const char* params_json, char** out_json) {
  return guarded([&] {
    require(g, "graph");
    require(out_json, "out");
    Params p(params_json);
    LagOptions opts;
    opts.threshold = p.get<long>("threshold", opts.threshold);
    const auto basis = p.get<std::string>("basis", "per_stream");
    if (basis == "per_stream") {
      opts.basis = EmergenceBasis::per_stream;
    } else if (basis == "all_streams") {
      opts.basis = EmergenceBasis::all_streams;
    } else {
      throw Error(ErrorCode::invalid_argument, "basis must be per_stream or all_streams");
    }
    opts.mode = collab_mode(p);
    p.finish();
    *out_json = dup_string(lag_report_to_json(lag_report(g->value, opts)));
  });
}

tf_status tf_growing(const tf_graph* g, const char* params_json, char** out_csv) {
  return guarded([&] {
    require(g, "graph");
    require(out_csv, "out");
    Params p(params_json);
    const bool need_defaults = !p.has("window_a") || !p.has("window_b");
    const auto defaults = need_defaults ? default_growth_windows(g->value)
                                        : std::pair<YearWindow, YearWindow>{};
    const auto a = window_param(p, "window_a", defaults.first);
    const auto b = window_param(p, "window_b", defaults.second);
    const auto top = p.get<std::size_t>("top", 20);
    const auto kinds = parse_kinds(p.get<std::string>("kinds", "all"));
    p.finish();
    *out_csv = dup_string(growing_csv(growing_topics(g->value, a, b, top, kinds)));
  });
}

tf_status tf_emergence(const tf_graph* g, const char* params_json, const char* gold_path,
                       char** out_json, char** out_networks_csv) {
  return guarded([&] {
    require(g, "graph");
    require(out_json, "out");
    Params p(params_json);
    auto run = emergence_params(p);
    run.min_overlap = p.get<double>("min_overlap", run.min_overlap);
    p.finish();
    std::optional<GoldStandard> gold;
    if (gold_path) gold = GoldStandard::load(gold_path, g->value.ontology());
    std::string networks;
    const auto j = run_emergence(g->value, run, gold ? &*gold : nullptr,
                                 out_networks_csv ? &networks : nullptr);
    *out_json = dup_string(j.dump(2) + "\n");
    put(out_networks_csv, networks);
  });
}

tf_status tf_forecast(const tf_graph* g, const char* params_json, char** out_csv, char** out_json,
                      char** out_samples_csv) {
  return guarded([&] {
    require(g, "graph");
    require(out_csv, "out");
    Params p(params_json);
    GoldStandardParams gp;
    gp.window = p.get<int>("window", gp.window);
    gp.horizon = p.get<int>("horizon", gp.horizon);
    gp.emerged_lt = p.get<long>("emerged_lt", gp.emerged_lt);
    gp.label_gt = p.get<long>("label_gt", gp.label_gt);
    gp.non_overlapping = p.get<bool>("non_overlapping", gp.non_overlapping);
    gp.mode = collab_mode(p);
    const auto combos = p.get<std::vector<std::string>>("combos", feature_combos());
    const auto ex = experiment_params(p);
    p.finish();
    const auto samples = build_gold_standard(g->value, gp);
    if (out_samples_csv) {
      std::ostringstream s;
      write_samples_csv(s, samples);
      *out_samples_csv = dup_string(s.str());
    }
    const auto results = run_experiment(samples, combos, ex);
    *out_csv = dup_string(results_to_csv(results));
    put(out_json, results_to_json(results, ex));
  });
}

tf_status tf_ttf(const tf_corpus* c, const char* annotations_path, const char* technologies_path,
                 const char* params_json, char** out_csv, char** out_json, char** out_cube_csv) {
  return guarded([&] {
    require(c, "corpus");
    require(annotations_path, "annotations path");
    require(technologies_path, "technologies path");
    require(out_csv, "out");
    Params p(params_json);
    int y0 = 0, y1 = -1;
    for (const auto& d : c->value.documents()) {
      if (d.kind != DocumentKind::publication) continue;
      if (y1 < y0) {
        y0 = y1 = d.year;
      } else {
        y0 = std::min(y0, d.year);
        y1 = std::max(y1, d.year);
      }
    }
    CubeParams cp;
    cp.first_year = p.get<int>("first_year", y0);
    cp.last_year = p.get<int>("last_year", y1);
    cp.min_papers = p.get<long>("min_papers", cp.min_papers);
    AdoptionParams ap;
    ap.feature_years = p.get<int>("feature_years", ap.feature_years);
    ap.horizon = p.get<int>("horizon", ap.horizon);
    ap.adopted_at = p.get<long>("adopted_at", ap.adopted_at);
    PredictParams pp;
    pp.min_positives = p.get<std::size_t>("min_positives", pp.min_positives);
    pp.experiment = experiment_params(p);
    p.finish();

    const auto annotations = load_annotations(annotations_path);
    const auto technologies = load_technologies(technologies_path);
    const auto cube = build_cube(c->value, annotations, technologies, cp);
    if (out_cube_csv) {
      std::ostringstream s;
      write_cube_csv(s, cube);
      *out_cube_csv = dup_string(s.str());
    }
    const auto samples = adoption_samples(cube, ap);
    const auto result = predict_adoption(cube, samples, pp);
    *out_csv = dup_string(adoption_to_csv(result));
    put(out_json, adoption_to_json(result, pp));
  });
}

tf_status tf_filter(const tf_corpus* c, const char* query, char** out_jsonl, size_t* out_count) {
  return guarded([&] {
    require(c, "corpus");
    require(query, "query");
    require(out_jsonl, "out");
    const auto q = Query::parse(query);
    const auto filtered = filter_corpus(c->value, q);
    std::ostringstream out;
    filtered.write_jsonl(out);
    *out_jsonl = dup_string(out.str());
    if (out_count) *out_count = filtered.size();
  });
}

tf_status tf_report(const tf_graph* g, const char* params_json, char** out_bundle_json) {
  return guarded([&] {
    require(g, "graph");
    require(out_bundle_json, "out");
    Params p(params_json);
    const auto defaults = default_growth_windows(g->value);
    const auto a = window_param(p, "window_a", defaults.first);
    const auto b = window_param(p, "window_b", defaults.second);
    const auto top = p.get<std::size_t>("top", 20);
    auto run = emergence_params(p);
    p.finish();

    const auto& graph = g->value;
    const auto growing = growing_topics(graph, a, b, top, KindFilter::all);
    std::vector<TopicId> topics;
    for (const auto& r : growing) topics.push_back(r.topic);

    nlohmann::ordered_json bundle;
    bundle["stats.txt"] = stats_to_table(graph_stats(graph));
    bundle["growing_topics.csv"] = growing_csv(growing);
    bundle["indexes.csv"] = indexes_csv(graph, topics, CollaborativeMode::both);
    const auto [y0, y1] = graph.year_span();
    if (y1 - y0 + 1 >= static_cast<int>(kAccelerationWindow)) {
      if (!run.start) run.start = y1 - static_cast<int>(kAccelerationWindow) + 1;
      bundle["emerging_clusters.json"] = run_emergence(graph, run, nullptr, nullptr).dump(2) + "\n";
    }
    *out_bundle_json = dup_string(bundle.dump());
  });
}

}  // extern "C"
