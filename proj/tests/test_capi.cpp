#include <cstring>
#include <string>

#include "doctest.h"
#include "fixture_files.hpp"
#include "json.hpp"
#include "topicflow/topicflow.h"

using namespace tfx;
using nlohmann::json;

namespace {

std::string take(char* s) {
  std::string out = s ? s : "";
  tf_string_free(s);
  return out;
}

struct Fixture {
  fs::path dir = scratch_dir("capi");
  tf_ontology* onto = nullptr;
  tf_corpus* corpus = nullptr;
  tf_registry* registry = nullptr;
  tf_graph* graph = nullptr;

  Fixture() {
    REQUIRE(tf_ontology_load(write_file(dir / "onto.csv", kOntologyCsv).c_str(), "edge-csv", &onto) == TF_OK);
    REQUIRE(tf_corpus_load(write_file(dir / "corpus.jsonl", fixture_corpus()).c_str(), &corpus) == TF_OK);
    REQUIRE(tf_registry_load(write_file(dir / "reg.csv", kRegistryCsv).c_str(), nullptr, &registry) == TF_OK);
    char* ann = nullptr;
    REQUIRE(tf_classify(onto, corpus, nullptr, "{\"threshold\":1.0}", &ann) == TF_OK);
    write_file(dir / "ann.jsonl", take(ann));
    REQUIRE(tf_graph_build(onto, corpus, registry, (dir / "ann.jsonl").c_str(), &graph) == TF_OK);
  }
  ~Fixture() {
    tf_graph_free(graph);
    tf_registry_free(registry);
    tf_corpus_free(corpus);
    tf_ontology_free(onto);
    fs::remove_all(dir);
  }
};

}  // namespace

TEST_CASE("version and null handles") {
  CHECK(std::string(tf_version()) == "0.3.0");
  size_t n = 7;
  CHECK(tf_ontology_size(nullptr, &n) == TF_ERR_INVALID_ARGUMENT);
  CHECK(std::strlen(tf_last_error()) > 0);
  tf_ontology_free(nullptr);
  tf_string_free(nullptr);
}

TEST_CASE("ontology queries through the C interface") {
  Fixture f;
  size_t n = 0;
  CHECK(tf_ontology_size(f.onto, &n) == TF_OK);
  CHECK(n == 10);
  CHECK(std::string(tf_last_error()).empty());
  char* out = nullptr;
  REQUIRE(tf_ontology_canonical(f.onto, "Ontology Mapping", &out) == TF_OK);
  CHECK(take(out) == "ontology matching");
  CHECK(tf_ontology_canonical(f.onto, "astrology", &out) == TF_ERR_NOT_FOUND);
  CHECK(std::string(tf_last_error()).find("astrology") != std::string::npos);
  REQUIRE(tf_ontology_super_topics(f.onto, "deep learning", 1, &out) == TF_OK);
  CHECK(json::parse(take(out)) ==
        json::array({"artificial intelligence", "computer science", "machine learning", "neural networks"}));
  REQUIRE(tf_ontology_super_topics(f.onto, "deep learning", 0, &out) == TF_OK);
  CHECK(json::parse(take(out)) == json::array({"neural networks"}));
}

TEST_CASE("load failures map to status codes") {
  auto dir = scratch_dir("capi_err");
  tf_ontology* o = nullptr;
  CHECK(tf_ontology_load((dir / "missing.csv").c_str(), "edge-csv", &o) == TF_ERR_IO);
  CHECK(o == nullptr);
  CHECK(tf_ontology_load(write_file(dir / "o.csv", kOntologyCsv).c_str(), "owl", &o) == TF_ERR_INVALID_ARGUMENT);
  auto cyclic = write_file(dir / "c.csv", "subject,relation,object\na,superTopicOf,b\nb,superTopicOf,a\n");
  CHECK(tf_ontology_load(cyclic.c_str(), "edge-csv", &o) == TF_ERR_VALIDATION);
  tf_corpus* c = nullptr;
  CHECK(tf_corpus_load(write_file(dir / "bad.jsonl", "{\"id\":\"a\",\"kind\":\"publication\",\"title\":\"x\",\"year\":2000}\n{oops\n").c_str(), &c) ==
        TF_ERR_PARSE);
  CHECK(std::string(tf_last_error()).find('2') != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("classification, graph and analytics") {
  Fixture f;
  size_t n = 0;
  CHECK(tf_corpus_size(f.corpus, &n) == TF_OK);
  CHECK(n == 24);
  char* out = nullptr;
  CHECK(tf_classify(f.onto, f.corpus, nullptr, "{\"bogus\":1}", &out) == TF_ERR_INVALID_ARGUMENT);
  CHECK(tf_classify(f.onto, f.corpus, nullptr, "{\"threshold\":", &out) == TF_ERR_INVALID_ARGUMENT);

  REQUIRE(tf_stats(f.graph, "json", &out) == TF_OK);
  auto stats = json::parse(take(out));
  CHECK(stats["publications"]["total"] == 16);
  CHECK(stats["patents"]["total"] == 8);
  CHECK(tf_stats(f.graph, "xml", &out) == TF_ERR_INVALID_ARGUMENT);

  REQUIRE(tf_trends(f.graph, "[\"databases\"]", "", &out) == TF_OK);
  auto csv = take(out);
  CHECK(csv.find("databases") != std::string::npos);
  CHECK(tf_trends(f.graph, "[\"astrology\"]", "", &out) == TF_ERR_NOT_FOUND);
  CHECK(tf_trends(f.graph, "[\"databases\"]", "{\"first_yaer\":2000}", &out) == TF_ERR_INVALID_ARGUMENT);
  CHECK(std::string(tf_last_error()).find("first_yaer") != std::string::npos);

  REQUIRE(tf_indexes(f.graph, "[\"databases\",\"semantic web\"]", nullptr, &out) == TF_OK);
  CHECK(take(out).find("semantic web") != std::string::npos);
  REQUIRE(tf_lags(f.graph, "{\"threshold\":1}", &out) == TF_OK);
  CHECK(json::parse(take(out)).is_object());
  REQUIRE(tf_growing(f.graph, "{\"window_a\":[2000,2004],\"window_b\":[2005,2009],\"top\":3}", &out) == TF_OK);
  take(out);
}

TEST_CASE("triples round trip through files") {
  Fixture f;
  char* triples = nullptr;
  size_t count = 0;
  REQUIRE(tf_graph_export(f.graph, &triples, &count) == TF_OK);
  CHECK(count > 24);
  const std::string text = take(triples);
  auto path = write_file(f.dir / "kg.nt", text);
  tf_graph* back = nullptr;
  REQUIRE(tf_graph_import(f.onto, f.corpus, path.c_str(), &back) == TF_OK);
  REQUIRE(tf_graph_export(back, &triples, nullptr) == TF_OK);
  CHECK(take(triples) == text);
  tf_graph_free(back);
}

TEST_CASE("filter and report") {
  Fixture f;
  char* out = nullptr;
  size_t count = 0;
  REQUIRE(tf_filter(f.corpus, "\"query processing\" OR \"linked data\"", &out, &count) == TF_OK);
  CHECK(count == 8);
  take(out);
  CHECK(tf_filter(f.corpus, "(databases", &out, &count) == TF_ERR_PARSE);
  REQUIRE(tf_report(f.graph, "{\"k\":3}", &out) == TF_OK);
  CHECK(json::parse(take(out)).is_object());
}

TEST_CASE("thread count does not change results") {
  Fixture f;
  char* a = nullptr;
  char* b = nullptr;
  tf_set_threads(1);
  REQUIRE(tf_classify(f.onto, f.corpus, nullptr, nullptr, &a) == TF_OK);
  tf_set_threads(4);
  REQUIRE(tf_classify(f.onto, f.corpus, nullptr, nullptr, &b) == TF_OK);
  CHECK(take(a) == take(b));
  tf_set_threads(0);
}
