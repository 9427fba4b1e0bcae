// topicflow command-line driver. Everything goes through the C interface.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "topicflow/topicflow.h"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

constexpr int kUsageError = 1;
constexpr int kDataError = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Kind { input, output, text, integer, number, flag, list };

struct OptSpec {
  std::string name;  // long flag without dashes
  Kind kind;
  bool required;
  std::string help;
};

struct Command {
  Command(std::string n, std::string h, std::vector<OptSpec> s)
      : name(std::move(n)), help(std::move(h)), specs(std::move(s)) {}

  std::string name;
  std::string help;
  std::vector<OptSpec> specs;
  CLI::App* app = nullptr;
  std::map<std::string, std::string> text;
  std::map<std::string, std::vector<std::string>> lists;
  std::map<std::string, bool> flags;
  std::map<std::string, CLI::Option*> options;

  bool has(const std::string& k) const {
    if (auto it = text.find(k); it != text.end()) return !it->second.empty();
    if (auto it = lists.find(k); it != lists.end()) return !it->second.empty();
    if (auto it = flags.find(k); it != flags.end()) return it->second;
    return false;
  }
  const std::string& get(const std::string& k) const { return text.at(k); }
  const OptSpec* spec(const std::string& k) const {
    for (const auto& s : specs) {
      if (s.name == k) return &s;
    }
    return nullptr;
  }
};

std::string param_key(const std::string& name) {
  std::string k = name;
  for (char& c : k) {
    if (c == '-') c = '_';
  }
  return k;
}

// ---- C interface helpers

struct CString {
  char* p = nullptr;
  ~CString() { tf_string_free(p); }
  std::string str() const { return p ? std::string(p) : std::string(); }
};

void check(tf_status s) {
  if (s != TF_OK) throw DataError(tf_last_error());
}

template <typename T, void (*Free)(T*)>
struct Handle {
  T* p = nullptr;
  Handle() = default;
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  ~Handle() { Free(p); }
};

using Ontology = Handle<tf_ontology, tf_ontology_free>;
using Corpus = Handle<tf_corpus, tf_corpus_free>;
using Registry = Handle<tf_registry, tf_registry_free>;
using Embeddings = Handle<tf_embeddings, tf_embeddings_free>;
using Graph = Handle<tf_graph, tf_graph_free>;

// ---- outputs

// Collects output files and writes them only after the whole command has
// succeeded, via temporary files renamed into place.
class Outputs {
 public:
  void add(const std::string& path, std::string content) { files_.emplace_back(path, std::move(content)); }

  void commit() {
    std::vector<std::string> temps;
    for (const auto& [path, content] : files_) {
      const fs::path target(path);
      if (target.has_parent_path()) fs::create_directories(target.parent_path());
      const std::string tmp = path + ".tmp";
      std::ofstream out(tmp, std::ios::binary);
      out << content;
      out.close();
      if (!out) {
        for (const auto& t : temps) fs::remove(t);
        fs::remove(tmp);
        throw DataError("cannot write '" + path + "'");
      }
      temps.push_back(tmp);
    }
    for (std::size_t i = 0; i < files_.size(); ++i) fs::rename(temps[i], files_[i].first);
  }

  std::vector<std::string> paths() const {
    std::vector<std::string> out;
    for (const auto& f : files_) out.push_back(f.first);
    return out;
  }

 private:
  std::vector<std::pair<std::string, std::string>> files_;
};

std::string fnv1a64_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read '" + path + "'");
  std::uint64_t h = 1469598103934665603ULL;
  char buf[65536];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 1099511628211ULL;
    }
  }
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(h));
  return hex;
}

// Inputs with content hashes, every other set option as a parameter. The
// thread count is left out: it never changes results.
std::string manifest(const Command& cmd, const std::vector<std::string>& outputs) {
  ordered_json m;
  m["tool"] = "topicflow";
  m["version"] = tf_version();
  m["command"] = cmd.name;
  ordered_json inputs = ordered_json::object();
  ordered_json params = ordered_json::object();
  for (const auto& s : cmd.specs) {
    if (!cmd.has(s.name)) continue;
    switch (s.kind) {
      case Kind::input:
        inputs[s.name] = {{"path", cmd.get(s.name)}, {"fnv1a64", fnv1a64_file(cmd.get(s.name))}};
        break;
      case Kind::output:
        break;
      case Kind::flag:
        params[s.name] = true;
        break;
      case Kind::list:
        params[s.name] = cmd.lists.at(s.name);
        break;
      default:
        params[s.name] = cmd.get(s.name);
    }
  }
  m["inputs"] = inputs;
  m["parameters"] = params;
  if (cmd.has("seed")) m["seed"] = std::stoull(cmd.get("seed"));
  m["outputs"] = outputs;
  return m.dump(2) + "\n";
}

// ---- parameter JSON built from options

void put_param(ordered_json& j, const Command& cmd, const std::string& name) {
  if (!cmd.has(name)) return;
  const OptSpec* s = cmd.spec(name);
  const std::string key = param_key(name);
  try {
    switch (s->kind) {
      case Kind::integer: {
        std::size_t pos = 0;
        const long long v = std::stoll(cmd.get(name), &pos);
        if (pos != cmd.get(name).size()) throw std::invalid_argument(name);
        j[key] = v;
        break;
      }
      case Kind::number: {
        std::size_t pos = 0;
        const double v = std::stod(cmd.get(name), &pos);
        if (pos != cmd.get(name).size()) throw std::invalid_argument(name);
        j[key] = v;
        break;
      }
      case Kind::flag:
        j[key] = true;
        break;
      case Kind::list:
        j[key] = cmd.lists.at(name);
        break;
      default:
        j[key] = cmd.get(name);
    }
  } catch (const std::logic_error&) {
    throw UsageError("--" + name + ": expected a " +
                     std::string(s->kind == Kind::integer ? "whole number" : "number") + ", got '" +
                     cmd.get(name) + "'");
  }
}

std::string params_json(const Command& cmd, const std::vector<std::string>& names) {
  ordered_json j = ordered_json::object();
  for (const auto& n : names) put_param(j, cmd, n);
  return j.dump();
}

// "2010-2014" or "2010..2014" -> [2010, 2014]
ordered_json year_window(const Command& cmd, const std::string& name) {
  const std::string& v = cmd.get(name);
  auto sep = v.find("..");
  std::size_t skip = 2;
  if (sep == std::string::npos) {
    sep = v.find('-', 1);
    skip = 1;
  }
  try {
    if (sep == std::string::npos) throw std::invalid_argument(v);
    std::size_t p1 = 0, p2 = 0;
    const int a = std::stoi(v.substr(0, sep), &p1);
    const std::string rest = v.substr(sep + skip);
    const int b = std::stoi(rest, &p2);
    if (p1 != sep || p2 != rest.size()) throw std::invalid_argument(v);
    return ordered_json::array({a, b});
  } catch (const std::logic_error&) {
    throw UsageError("--" + name + ": expected FIRST-LAST years, got '" + v + "'");
  }
}

// ---- shared loaders

void load_ontology(const Command& cmd, Ontology& o) {
  const std::string fmt = cmd.has("ontology-format") ? cmd.get("ontology-format") : "edge-csv";
  check(tf_ontology_load(cmd.get("ontology").c_str(), fmt.c_str(), &o.p));
}

void load_corpus(const Command& cmd, Corpus& c) { check(tf_corpus_load(cmd.get("corpus").c_str(), &c.p)); }

void load_graph(const Command& cmd, Ontology& o, Corpus& c, Graph& g) {
  load_ontology(cmd, o);
  load_corpus(cmd, c);
  check(tf_graph_import(o.p, c.p, cmd.get("graph").c_str(), &g.p));
}

const std::vector<std::string> kModelParams{"model",    "folds",     "seed",      "learning-rate",
                                            "iterations", "l2",      "n-trees",   "max-depth",
                                            "min-leaf", "feature-subsample"};

std::vector<std::string> concat(std::vector<std::string> a, const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

// ---- subcommands

void run_classify(const Command& cmd, Outputs& out) {
  Ontology o;
  Corpus c;
  Embeddings e;
  load_ontology(cmd, o);
  load_corpus(cmd, c);
  if (cmd.has("embeddings")) check(tf_embeddings_load(cmd.get("embeddings").c_str(), &e.p));
  ordered_json p = ordered_json::object();
  put_param(p, cmd, "threshold");
  put_param(p, cmd, "top-k");
  put_param(p, cmd, "cosine-floor");
  if (cmd.has("stopwords")) p["stopwords_path"] = cmd.get("stopwords");
  CString ann;
  check(tf_classify(o.p, c.p, e.p, p.dump().c_str(), &ann.p));
  out.add(cmd.get("out"), ann.str());
  std::size_t n = 0;
  check(tf_corpus_size(c.p, &n));
  std::clog << "classify: annotated " << n << " documents\n";
}

void run_build_kg(const Command& cmd, Outputs& out) {
  Ontology o;
  Corpus c;
  Registry r;
  Graph g;
  load_ontology(cmd, o);
  load_corpus(cmd, c);
  check(tf_registry_load(cmd.get("registry").c_str(),
                         cmd.has("sectors") ? cmd.get("sectors").c_str() : nullptr, &r.p));
  check(tf_graph_build(o.p, c.p, r.p, cmd.get("annotations").c_str(), &g.p));
  CString triples;
  std::size_t n = 0;
  check(tf_graph_export(g.p, &triples.p, &n));
  out.add(cmd.get("out"), triples.str());
  std::clog << "build-kg: wrote " << n << " triples\n";
}

void run_stats(const Command& cmd, Outputs& out) {
  Ontology o;
  Corpus c;
  Graph g;
  load_graph(cmd, o, c, g);
  CString s;
  check(tf_stats(g.p, cmd.has("format") ? cmd.get("format").c_str() : "json", &s.p));
  out.add(cmd.get("out"), s.str());
}

void run_trends(const Command& cmd, Outputs& out) {
  Ontology o;
  Corpus c;
  Graph g;
  load_graph(cmd, o, c, g);
  const std::string topics = ordered_json(cmd.lists.at("topic")).dump();
  CString series;
  check(tf_trends(g.p, topics.c_str(),
                  params_json(cmd, {"first-year", "last-year", "exclude-collaborative"}).c_str(),
                  &series.p));
  out.add(cmd.get("out"), series.str());
  if (cmd.has("indexes")) {
    CString idx;
    check(tf_indexes(g.p, topics.c_str(), params_json(cmd, {"exclude-collaborative"}).c_str(), &idx.p));
    out.add(cmd.get("indexes"), idx.str());
  }
  if (cmd.has("lags")) {
    CString lags;
    check(tf_lags(g.p, params_json(cmd, {"threshold", "basis", "exclude-collaborative"}).c_str(),
                  &lags.p));
    out.add(cmd.get("lags"), lags.str());
  }
}

void run_emergence(const Command& cmd, Outputs& out) {
  Ontology o;
  Corpus c;
  Graph g;
  load_graph(cmd, o, c, g);
  CString result, networks;
  std::vector<std::string> keys{"start", "k", "growth-percentile", "min-support"};
  if (cmd.has("gold")) keys.push_back("min-overlap");
  check(tf_emergence(g.p, params_json(cmd, keys).c_str(),
                     cmd.has("gold") ? cmd.get("gold").c_str() : nullptr, &result.p,
                     cmd.has("networks") ? &networks.p : nullptr));
  out.add(cmd.get("out"), result.str());
  if (cmd.has("networks")) out.add(cmd.get("networks"), networks.str());
}

void run_forecast(const Command& cmd, Outputs& out) {
  Ontology o;
  Corpus c;
  Graph g;
  load_graph(cmd, o, c, g);
  ordered_json p = ordered_json::parse(params_json(
      cmd, concat({"window", "horizon", "emerged-lt", "label-gt", "non-overlapping",
                   "exclude-collaborative"},
                  kModelParams)));
  if (cmd.has("combo")) p["combos"] = cmd.lists.at("combo");
  CString csv, json, samples;
  check(tf_forecast(g.p, p.dump().c_str(), &csv.p, &json.p, cmd.has("samples") ? &samples.p : nullptr));
  out.add(cmd.get("out"), csv.str());
  if (cmd.has("json")) out.add(cmd.get("json"), json.str());
  if (cmd.has("samples")) out.add(cmd.get("samples"), samples.str());
}

void run_ttf(const Command& cmd, Outputs& out) {
  Corpus c;
  load_corpus(cmd, c);
  const std::string p = params_json(
      cmd, concat({"first-year", "last-year", "min-papers", "feature-years", "horizon", "adopted-at",
                   "min-positives"},
                  kModelParams));
  CString csv, json, cube;
  check(tf_ttf(c.p, cmd.get("annotations").c_str(), cmd.get("technologies").c_str(), p.c_str(),
               &csv.p, &json.p, cmd.has("cube") ? &cube.p : nullptr));
  out.add(cmd.get("out"), csv.str());
  if (cmd.has("json")) out.add(cmd.get("json"), json.str());
  if (cmd.has("cube")) out.add(cmd.get("cube"), cube.str());
}

void run_filter(const Command& cmd, Outputs& out) {
  Corpus c;
  load_corpus(cmd, c);
  CString docs;
  std::size_t n = 0;
  check(tf_filter(c.p, cmd.get("query").c_str(), &docs.p, &n));
  out.add(cmd.get("out"), docs.str());
  std::clog << "filter: " << n << " matching documents\n";
}

void run_report(const Command& cmd, Outputs& out) {
  Ontology o;
  Corpus c;
  Graph g;
  load_graph(cmd, o, c, g);
  ordered_json p = ordered_json::parse(params_json(cmd, {"top", "k", "growth-percentile", "min-support"}));
  if (cmd.has("window-a")) p["window_a"] = year_window(cmd, "window-a");
  if (cmd.has("window-b")) p["window_b"] = year_window(cmd, "window-b");
  CString bundle;
  check(tf_report(g.p, p.dump().c_str(), &bundle.p));
  const auto files = ordered_json::parse(bundle.str());
  const fs::path dir(cmd.get("out"));
  for (const auto& [name, content] : files.items()) {
    out.add((dir / name).string(), content.get<std::string>());
  }
}

using Runner = void (*)(const Command&, Outputs&);

struct CommandDef {
  Command cmd;
  Runner run;
  bool out_is_dir = false;
};

std::vector<OptSpec> graph_inputs() {
  return {{"ontology", Kind::input, true, "ontology file"},
          {"ontology-format", Kind::text, false, "edge-csv (default) or turtle-subset"},
          {"corpus", Kind::input, true, "corpus JSONL"},
          {"graph", Kind::input, true, "triples written by build-kg"}};
}

std::vector<OptSpec> model_specs() {
  return {{"model", Kind::text, false, "logreg (default) or random_forest"},
          {"folds", Kind::integer, false, "cross-validation folds (10)"},
          {"seed", Kind::integer, false, "random seed (42)"},
          {"learning-rate", Kind::number, false, "logistic regression step size"},
          {"iterations", Kind::integer, false, "logistic regression iterations"},
          {"l2", Kind::number, false, "logistic regression L2 penalty"},
          {"n-trees", Kind::integer, false, "random forest trees"},
          {"max-depth", Kind::integer, false, "random forest depth, 0 = unlimited"},
          {"min-leaf", Kind::integer, false, "random forest minimum leaf size"},
          {"feature-subsample", Kind::integer, false, "features per split, 0 = sqrt(d)"}};
}

std::vector<OptSpec> operator+(std::vector<OptSpec> a, const std::vector<OptSpec>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

std::vector<CommandDef> command_defs() {
  std::vector<CommandDef> defs;
  defs.push_back({{"classify", "annotate documents with ontology topics",
                   {{"ontology", Kind::input, true, "ontology file"},
                    {"ontology-format", Kind::text, false, "edge-csv (default) or turtle-subset"},
                    {"corpus", Kind::input, true, "corpus JSONL"},
                    {"embeddings", Kind::input, false, "word vectors; enables the semantic module"},
                    {"stopwords", Kind::input, false, "stopword list, one per line"},
                    {"threshold", Kind::number, false, "syntactic similarity threshold (0.94)"},
                    {"top-k", Kind::integer, false, "embedding neighbours per n-gram (10)"},
                    {"cosine-floor", Kind::number, false, "minimum neighbour similarity (0.7)"},
                    {"out", Kind::output, true, "annotation JSONL"}}},
                  run_classify});
  defs.push_back({{"build-kg", "build the knowledge graph and write it as triples",
                   {{"ontology", Kind::input, true, "ontology file"},
                    {"ontology-format", Kind::text, false, "edge-csv (default) or turtle-subset"},
                    {"corpus", Kind::input, true, "corpus JSONL"},
                    {"annotations", Kind::input, true, "annotation JSONL from classify"},
                    {"registry", Kind::input, true, "organisation registry CSV"},
                    {"sectors", Kind::input, false, "industrial sector taxonomy CSV"},
                    {"out", Kind::output, true, "triples file"}}},
                  run_build_kg});
  defs.push_back({{"stats", "document counts by affiliation type",
                   graph_inputs() + std::vector<OptSpec>{
                                        {"format", Kind::text, false, "json (default) or table"},
                                        {"out", Kind::output, true, "statistics file"}}},
                  run_stats});
  defs.push_back({{"trends", "yearly RA/RI/PA/PI series, indexes and emergence lags",
                   graph_inputs() + std::vector<OptSpec>{
                                        {"topic", Kind::list, true, "topic label (repeatable)"},
                                        {"first-year", Kind::integer, false, "first year of the series"},
                                        {"last-year", Kind::integer, false, "last year of the series"},
                                        {"exclude-collaborative", Kind::flag, false,
                                         "leave collaborative documents out of both streams"},
                                        {"threshold", Kind::integer, false, "emergence threshold (10)"},
                                        {"basis", Kind::text, false, "per_stream (default) or all_streams"},
                                        {"indexes", Kind::output, false, "index CSV"},
                                        {"lags", Kind::output, false, "emergence lag JSON"},
                                        {"out", Kind::output, true, "series CSV"}}},
                  run_trends});
  defs.push_back({{"emergence", "detect topic clusters with accelerating collaboration",
                   graph_inputs() + std::vector<OptSpec>{
                                        {"start", Kind::integer, false, "first year of a single window"},
                                        {"k", Kind::integer, false, "clique size (3)"},
                                        {"growth-percentile", Kind::number, false, "slope percentile (0.75)"},
                                        {"min-support", Kind::integer, false, "years an edge must appear (2)"},
                                        {"gold", Kind::input, false, "gold standard JSON"},
                                        {"min-overlap", Kind::number, false, "gold match overlap (0.5)"},
                                        {"networks", Kind::output, false, "yearly network CSV"},
                                        {"out", Kind::output, true, "clusters JSON"}}},
                  run_emergence});
  defs.push_back({{"forecast", "industrial impact forecasting experiment",
                   graph_inputs() +
                       std::vector<OptSpec>{
                           {"window", Kind::integer, false, "window length (5)"},
                           {"horizon", Kind::integer, false, "label horizon (10)"},
                           {"emerged-lt", Kind::integer, false, "industrial patents before emergence (10)"},
                           {"label-gt", Kind::integer, false, "industrial patents for a positive (50)"},
                           {"non-overlapping", Kind::flag, false, "step windows by their length"},
                           {"exclude-collaborative", Kind::flag, false,
                            "leave collaborative documents out of both streams"},
                           {"combo", Kind::list, false, "feature combination (repeatable, default all 17)"}} +
                       model_specs() +
                       std::vector<OptSpec>{{"samples", Kind::output, false, "sample CSV"},
                                            {"json", Kind::output, false, "results JSON"},
                                            {"out", Kind::output, true, "results CSV"}}},
                  run_forecast});
  defs.push_back({{"ttf", "technology adoption prediction",
                   std::vector<OptSpec>{
                       {"corpus", Kind::input, true, "corpus JSONL"},
                       {"annotations", Kind::input, true, "annotation JSONL from classify"},
                       {"technologies", Kind::input, true, "technology labels, one per line"},
                       {"first-year", Kind::integer, false, "first cube year"},
                       {"last-year", Kind::integer, false, "last cube year"},
                       {"min-papers", Kind::integer, false, "papers a technology needs (10)"},
                       {"feature-years", Kind::integer, false, "trailing feature years (5)"},
                       {"horizon", Kind::integer, false, "label horizon (5)"},
                       {"adopted-at", Kind::integer, false, "papers marking adoption (10)"},
                       {"min-positives", Kind::integer, false, "positives for a per-topic row (50)"}} +
                       model_specs() +
                       std::vector<OptSpec>{{"cube", Kind::output, false, "cube CSV"},
                                            {"json", Kind::output, false, "results JSON"},
                                            {"out", Kind::output, true, "per-topic results CSV"}}},
                  run_ttf});
  defs.push_back({{"filter", "select documents with a boolean query",
                   {{"corpus", Kind::input, true, "corpus JSONL"},
                    {"query", Kind::text, true, "query, e.g. \"semantic web\" AND year:2010..2015"},
                    {"out", Kind::output, true, "matching documents JSONL"}}},
                  run_filter});
  defs.push_back({{"report", "static report bundle",
                   graph_inputs() + std::vector<OptSpec>{
                                        {"window-a", Kind::text, false, "earlier years, FIRST-LAST"},
                                        {"window-b", Kind::text, false, "later years, FIRST-LAST"},
                                        {"top", Kind::integer, false, "growing topics listed (20)"},
                                        {"k", Kind::integer, false, "clique size (3)"},
                                        {"growth-percentile", Kind::number, false, "slope percentile (0.75)"},
                                        {"min-support", Kind::integer, false, "years an edge must appear (2)"},
                                        {"out", Kind::output, true, "output directory"}}},
                  run_report, true});
  return defs;
}

void register_options(Command& cmd) {
  for (const auto& s : cmd.specs) {
    const std::string flag = "--" + s.name;
    CLI::Option* opt = nullptr;
    switch (s.kind) {
      case Kind::flag:
        opt = cmd.app->add_flag(flag, cmd.flags[s.name], s.help);
        break;
      case Kind::list:
        opt = cmd.app->add_option(flag, cmd.lists[s.name], s.help);
        break;
      default:
        opt = cmd.app->add_option(flag, cmd.text[s.name], s.help);
        if (s.kind == Kind::integer || s.kind == Kind::number) opt->check(CLI::Number);
    }
    cmd.options[s.name] = opt;
  }
}

std::string config_scalar(const nlohmann::json& v, const std::string& key) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number() || v.is_boolean()) return v.dump();
  throw UsageError("config key '" + key + "' must be a scalar");
}

// Config values fill options the command line left unset.
void apply_config(Command& cmd, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config '" + path + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("config '" + path + "': " + e.what());
  }
  if (!j.is_object()) throw UsageError("config '" + path + "' must be a JSON object");
  for (const auto& [raw_key, value] : j.items()) {
    std::string key = raw_key;
    for (char& ch : key) {
      if (ch == '_') ch = '-';
    }
    if (key == "threads") continue;  // handled globally
    const OptSpec* s = cmd.spec(key);
    if (!s) throw UsageError("config key '" + raw_key + "' is not an option of " + cmd.name);
    if (cmd.options.at(key)->count() > 0) continue;
    switch (s->kind) {
      case Kind::flag:
        if (!value.is_boolean()) throw UsageError("config key '" + raw_key + "' must be true or false");
        cmd.flags[key] = value.get<bool>();
        break;
      case Kind::list:
        if (value.is_array()) {
          auto& list = cmd.lists[key];
          for (const auto& v : value) list.push_back(config_scalar(v, raw_key));
        } else {
          cmd.lists[key] = {config_scalar(value, raw_key)};
        }
        break;
      default:
        cmd.text[key] = config_scalar(value, raw_key);
    }
  }
}

std::optional<std::string> config_threads(const std::string& path) {
  std::ifstream in(path);
  if (!in) return std::nullopt;
  try {
    const auto j = nlohmann::json::parse(in);
    if (j.is_object() && j.contains("threads")) return config_scalar(j["threads"], "threads");
  } catch (const nlohmann::json::exception&) {
  }
  return std::nullopt;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"topicflow: topic classification and trend analytics over scholarly corpora"};
  app.require_subcommand(1);
  app.set_version_flag("--version", tf_version());
  std::string threads;
  std::string config;
  app.add_option("--threads", threads, "worker threads (default: all cores)")->check(CLI::NonNegativeNumber);
  app.add_option("--config", config, "JSON file with option defaults; command-line flags win");

  auto defs = command_defs();
  for (auto& d : defs) {
    d.cmd.app = app.add_subcommand(d.cmd.name, d.cmd.help);
    register_options(d.cmd);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }

  CommandDef* def = nullptr;
  for (auto& d : defs) {
    if (d.cmd.app->parsed()) def = &d;
  }
  Command& cmd = def->cmd;

  try {
    if (!config.empty()) {
      apply_config(cmd, config);
      if (threads.empty()) threads = config_threads(config).value_or("");
    }
    std::vector<std::string> missing;
    for (const auto& s : cmd.specs) {
      if (s.required && !cmd.has(s.name)) missing.push_back("--" + s.name);
    }
    if (!missing.empty()) {
      std::string msg = "missing required option";
      msg += missing.size() > 1 ? "s: " : ": ";
      for (std::size_t i = 0; i < missing.size(); ++i) msg += (i ? ", " : "") + missing[i];
      throw UsageError(msg);
    }
    if (!threads.empty()) {
      try {
        tf_set_threads(static_cast<unsigned>(std::stoul(threads)));
      } catch (const std::logic_error&) {
        throw UsageError("--threads: expected a whole number, got '" + threads + "'");
      }
    }

    Outputs out;
    def->run(cmd, out);
    const std::string manifest_path =
        def->out_is_dir ? (fs::path(cmd.get("out")) / "manifest.json").string()
                        : cmd.get("out") + ".manifest.json";
    out.add(manifest_path, manifest(cmd, out.paths()));
    out.commit();
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << cmd.app->help();
    return kUsageError;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDataError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDataError;
  }
  return 0;
}
