#include <sstream>

#include "doctest.h"
#include "support.hpp"
#include "topicflow/turtle.hpp"

using namespace tfx;

namespace {

Corpus three_docs() {
  return Corpus::from_documents({
      paper("p1", 2010, "deep learning", {"uni"}),
      paper("p2", 2011, "linked data", {"uni", "corp"}),
      patent("t1", 2012, "query processing", {"corp"}),
  });
}

}  // namespace

TEST_CASE("graph documents carry annotation unions, affiliations and sectors") {
  auto onto = shared_ontology(kCsOntology);
  auto corpus = three_docs();
  std::vector<TopicAnnotation> ann = {
      annotation("p1", {"deep learning", "neural networks", "machine learning"}),
      annotation("t1", {"query processing", "databases"}),
  };
  auto g = build_graph(corpus, ann, basic_registry(), onto);
  REQUIRE(g.size() == 3);
  for (const auto& a : ann) CHECK(g.topic_ids(g.documents().at(a.doc_id)) == a.all);
  CHECK(g.documents().at("p2").topics.empty());
  CHECK(g.documents().at("p1").affiliation == AffiliationType::academic);
  CHECK(g.documents().at("p2").affiliation == AffiliationType::collaborative);
  CHECK(g.documents().at("p2").sectors == std::set<std::string>{"automotive"});
  CHECK(g.documents().at("t1").affiliation == AffiliationType::industrial);
  CHECK(g.documents().at("t1").kind == DocumentKind::patent);
  CHECK(g.documents().at("t1").year == 2012);
  CHECK(g.year_span() == std::pair{2010, 2012});
  CHECK(g.docs_by_topic()[*onto->index_of(TopicId("databases"))].size() == 1);
}

TEST_CASE("empty corpus gives an empty graph with zero stats") {
  auto g = build_graph(Corpus{}, {}, basic_registry(), shared_ontology(kCsOntology));
  CHECK(g.size() == 0);
  CHECK(graph_stats(g) == StatsReport{});
  std::ostringstream out;
  CHECK(export_triples(g, out) == 0);
  CHECK(out.str().empty());
}

TEST_CASE("annotations for unknown documents or topics are rejected") {
  auto onto = shared_ontology(kCsOntology);
  CHECK_THROWS_AS(build_graph(three_docs(), {annotation("ghost", {"databases"})}, basic_registry(), onto),
                  Error);
  CHECK_THROWS_AS(build_graph(three_docs(), {annotation("p1", {"astrology"})}, basic_registry(), onto),
                  Error);
}

TEST_CASE("stats on a 10-document corpus match a hand tally") {
  auto onto = shared_ontology(kCsOntology);
  auto corpus = Corpus::from_documents({
      paper("a1", 2000, "x", {"uni"}),
      paper("a2", 2000, "x", {"uni", "uni"}),
      paper("a3", 2000, "x", {"corp"}),
      paper("a4", 2000, "x", {"uni", "corp"}),
      paper("a5", 2000, "x", {"gov"}),
      paper("a6", 2000, "x"),
      patent("b1", 2000, "x", {"corp"}),
      patent("b2", 2000, "x", {"corp", "uni"}),
      patent("b3", 2000, "x", {"missing"}),
      patent("b4", 2000, "x", {"uni"}),
  });
  auto st = graph_stats(build_graph(corpus, {}, basic_registry(), onto));
  CHECK(st.publications == KindStats{6, 5, 2, 1, 1, 1, 1});
  CHECK(st.patents == KindStats{4, 3, 1, 1, 1, 0, 1});
  for (const auto& k : {st.publications, st.patents}) {
    CHECK(k.academia + k.industry + k.collaborative + k.additional == k.with_registry);
    CHECK(k.with_registry + k.unknown == k.total);
  }
  auto table = stats_to_table(st);
  for (const char* row : {"Total documents", "Documents with registry IDs", "Academia", "Industry",
                          "Collaborative", "Additional categories"}) {
    CHECK(table.find(row) != std::string::npos);
  }
  auto json = stats_to_json(st);
  CHECK(json.find("\"publications\"") != std::string::npos);
}

TEST_CASE("two topics and one affiliation give three triples") {
  auto onto = shared_ontology(kCsOntology);
  auto corpus = Corpus::from_documents({paper("p", 2010, "t", {"uni"})});
  auto g = build_graph(corpus, {annotation("p", {"databases", "query processing"})}, basic_registry(), onto);
  std::ostringstream out;
  CHECK(export_triples(g, out) == 3);
  std::istringstream in(out.str());
  auto triples = turtle::read(in);
  REQUIRE(triples.size() == 3);
  CHECK(triples[0].predicate == has_affiliation_type_iri());
  CHECK(triples[1].predicate == has_topic_iri());
}

TEST_CASE("publications use hasAffiliationType and patents hasAssigneeType") {
  auto onto = shared_ontology(kCsOntology);
  auto g = build_graph(three_docs(), {}, basic_registry(), onto);
  std::ostringstream out;
  export_triples(g, out);
  std::istringstream in(out.str());
  auto triples = turtle::read(in);
  std::size_t aff = 0, asg = 0, sec = 0;
  for (const auto& t : triples) {
    if (t.predicate == has_affiliation_type_iri()) {
      ++aff;
      CHECK(t.subject != document_iri("t1"));
    } else if (t.predicate == has_assignee_type_iri()) {
      ++asg;
      CHECK(t.subject == document_iri("t1"));
    } else if (t.predicate == has_industrial_sector_iri()) {
      ++sec;
    }
  }
  CHECK(aff == 2);
  CHECK(asg == 1);
  CHECK(sec == 2);
  // Sorted by subject, predicate, object.
  for (std::size_t i = 1; i < triples.size(); ++i) {
    auto key = [](const turtle::Triple& t) { return std::tie(t.subject, t.predicate, t.object); };
    CHECK(key(triples[i - 1]) < key(triples[i]));
  }
}

TEST_CASE("unknown affiliations produce no affiliation triple") {
  auto onto = shared_ontology(kCsOntology);
  auto corpus = Corpus::from_documents({paper("p", 2010, "t")});
  auto g = build_graph(corpus, {annotation("p", {"databases"})}, basic_registry(), onto);
  std::ostringstream out;
  CHECK(export_triples(g, out) == 1);
}

TEST_CASE("export then import reproduces the graph") {
  auto onto = shared_ontology(kCsOntology);
  std::vector<Document> docs;
  std::vector<TopicAnnotation> ann;
  const char* orgs[][2] = {{"uni", ""}, {"corp", ""}, {"uni", "corp"}, {"gov", ""}, {"", ""}, {"odd id", ""}};
  const char* topics[] = {"databases", "semantic web", "deep learning", "ontology matching"};
  for (int i = 0; i < 24; ++i) {
    std::vector<std::string> o;
    for (const char* x : orgs[i % 6]) {
      if (*x) o.push_back(x);
    }
    const std::string id = "doc " + std::to_string(i) + (i % 5 == 0 ? "/é" : "");
    docs.push_back(i % 3 ? paper(id, 2000 + i, "t", o) : patent(id, 2000 + i, "t", o));
    if (i % 4) ann.push_back(annotation(id, {topics[i % 4], topics[(i + 1) % 4]}));
  }
  auto corpus = Corpus::from_documents(docs);
  std::istringstream reg_in(
      "org_id,org_type,sectors\nuni,education,\ncorp,company,automotive|energy\ngov,government,\n"
      "odd id,other,\n");
  auto g = build_graph(corpus, ann, OrgRegistry::read(reg_in), onto);
  std::ostringstream out;
  export_triples(g, out);
  std::istringstream in(out.str());
  auto back = import_triples(in, corpus, onto);
  CHECK(back == g);
  std::ostringstream again;
  export_triples(back, again);
  CHECK(again.str() == out.str());
}
