#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "topicflow/corpus.hpp"
#include "topicflow/kg.hpp"
#include "topicflow/ontology.hpp"

namespace tfx {

using namespace topicflow;

inline TopicOntology ontology_from_csv(std::string_view body) {
  std::istringstream in("subject,relation,object\n" + std::string(body));
  return TopicOntology::build(parse_edge_csv(in), false);
}

inline std::shared_ptr<const TopicOntology> shared_ontology(std::string_view body) {
  return std::make_shared<const TopicOntology>(ontology_from_csv(body));
}

inline Document doc(std::string id, DocumentKind kind, int year, std::string title,
                    std::string abstract = {}, std::vector<std::string> keywords = {},
                    std::vector<std::string> orgs = {}) {
  Document d;
  d.id = std::move(id);
  d.kind = kind;
  d.year = year;
  d.title = std::move(title);
  d.abstract = std::move(abstract);
  d.keywords = std::move(keywords);
  d.org_ids = std::move(orgs);
  return d;
}

inline Document paper(std::string id, int year, std::string title, std::vector<std::string> orgs = {}) {
  return doc(std::move(id), DocumentKind::publication, year, std::move(title), {}, {}, std::move(orgs));
}

inline Document patent(std::string id, int year, std::string title, std::vector<std::string> orgs = {}) {
  return doc(std::move(id), DocumentKind::patent, year, std::move(title), {}, {}, std::move(orgs));
}

// Registry with "uni" (education), "corp" (company), "gov" (government).
inline OrgRegistry basic_registry() {
  std::istringstream in(
      "org_id,org_type,sectors\n"
      "uni,education,\n"
      "corp,company,automotive\n"
      "gov,government,\n");
  return OrgRegistry::read(in);
}

inline std::vector<TopicId> ids(std::initializer_list<const char*> labels) {
  std::vector<TopicId> out;
  for (const char* l : labels) out.emplace_back(l);
  return out;
}

inline TopicAnnotation annotation(std::string doc_id, std::initializer_list<const char*> topics) {
  TopicAnnotation a;
  a.doc_id = std::move(doc_id);
  a.all = ids(topics);
  std::sort(a.all.begin(), a.all.end());
  return a;
}

// Graph document built directly, bypassing corpus and registry.
struct GDoc {
  std::string id;
  DocumentKind kind;
  int year;
  AffiliationType affiliation;
  std::vector<std::string> topics;
};

inline AidaGraph graph_of(std::shared_ptr<const TopicOntology> onto, const std::vector<GDoc>& docs) {
  std::map<std::string, GraphDocument> out;
  for (const auto& d : docs) {
    GraphDocument g;
    g.kind = d.kind;
    g.year = d.year;
    g.affiliation = d.affiliation;
    for (const auto& t : d.topics) g.topics.push_back(*onto->index_of(TopicId(t)));
    std::sort(g.topics.begin(), g.topics.end());
    out.emplace(d.id, std::move(g));
  }
  return AidaGraph(std::move(onto), std::move(out));
}

// CS fixture used across the classifier and analytics tests.
inline constexpr std::string_view kCsOntology =
    "computer science,superTopicOf,artificial intelligence\n"
    "artificial intelligence,superTopicOf,machine learning\n"
    "machine learning,superTopicOf,neural networks\n"
    "neural networks,superTopicOf,deep learning\n"
    "machine learning,superTopicOf,support vector machines\n"
    "computer science,superTopicOf,semantic web\n"
    "semantic web,superTopicOf,linked data\n"
    "semantic web,superTopicOf,ontology matching\n"
    "ontology matching,relatedEquivalent,ontology mapping\n"
    "semantic web,superTopicOf,ontology alignment\n"
    "computer science,superTopicOf,databases\n"
    "databases,superTopicOf,query processing\n"
    "computer science,superTopicOf,information retrieval\n";

}  // namespace tfx
