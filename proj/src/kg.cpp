#include "topicflow/kg.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <tuple>

#include "json.hpp"
#include "topicflow/turtle.hpp"

namespace topicflow {

namespace {

std::string affiliation_object(AffiliationType a) {
  const std::string base(turtle::kAida);
  switch (a) {
    case AffiliationType::academic: return base + "academia";
    case AffiliationType::industrial: return base + "industry";
    case AffiliationType::collaborative: return base + "collaborative";
    case AffiliationType::other_typed: return base + "other";
    case AffiliationType::unknown: break;
  }
  return {};
}

std::optional<AffiliationType> affiliation_from_object(std::string_view iri) {
  for (auto a : {AffiliationType::academic, AffiliationType::industrial,
                 AffiliationType::collaborative, AffiliationType::other_typed}) {
    if (affiliation_object(a) == iri) return a;
  }
  return std::nullopt;
}

std::string sector_iri(std::string_view sector) {
  return std::string(turtle::kInduso) + turtle::encode_segment(sector);
}

}  // namespace

AidaGraph::AidaGraph(std::shared_ptr<const TopicOntology> ontology,
                     std::map<std::string, GraphDocument> docs)
    : ontology_(std::move(ontology)), docs_(std::move(docs)) {
  if (!ontology_) throw Error(ErrorCode::invalid_argument, "graph requires an ontology");
  by_topic_.resize(ontology_->size());
  bool first = true;
  for (auto& [id, d] : docs_) {
    std::sort(d.topics.begin(), d.topics.end());
    d.topics.erase(std::unique(d.topics.begin(), d.topics.end()), d.topics.end());
    for (std::size_t t : d.topics) {
      if (t >= ontology_->size()) {
        throw Error(ErrorCode::validation, "document '" + id + "' references a topic outside the ontology");
      }
      by_topic_[t].push_back(&d);
    }
    if (first) {
      span_ = {d.year, d.year};
      first = false;
    } else {
      span_.first = std::min(span_.first, d.year);
      span_.second = std::max(span_.second, d.year);
    }
  }
}

std::vector<TopicId> AidaGraph::topic_ids(const GraphDocument& doc) const {
  std::vector<TopicId> out;
  out.reserve(doc.topics.size());
  for (std::size_t t : doc.topics) out.push_back(ontology_->at(t));
  return out;
}

AidaGraph build_graph(const Corpus& corpus, const std::vector<TopicAnnotation>& annotations,
                      const OrgRegistry& registry,
                      std::shared_ptr<const TopicOntology> ontology) {
  if (!ontology) throw Error(ErrorCode::invalid_argument, "graph requires an ontology");
  std::map<std::string, GraphDocument> docs;
  for (const auto& d : corpus.documents()) {
    GraphDocument g;
    g.kind = d.kind;
    g.year = d.year;
    g.affiliation = classify_affiliation(d, registry);
    g.sectors = assign_sectors(d, registry);
    docs.emplace(d.id, std::move(g));
  }
  for (const auto& a : annotations) {
    auto it = docs.find(a.doc_id);
    if (it == docs.end()) {
      throw Error(ErrorCode::validation, "annotation for unknown document '" + a.doc_id + "'");
    }
    for (const auto& t : a.all) {
      auto idx = ontology->index_of(t);
      if (!idx) {
        throw Error(ErrorCode::validation, "annotation of '" + a.doc_id + "' uses unknown topic '" +
                                               t.value + "'");
      }
      it->second.topics.push_back(*idx);
    }
  }
  return AidaGraph(std::move(ontology), std::move(docs));
}

StatsReport graph_stats(const AidaGraph& graph) {
  StatsReport r;
  for (const auto& [id, d] : graph.documents()) {
    KindStats& k = d.kind == DocumentKind::publication ? r.publications : r.patents;
    ++k.total;
    switch (d.affiliation) {
      case AffiliationType::academic: ++k.academia; break;
      case AffiliationType::industrial: ++k.industry; break;
      case AffiliationType::collaborative: ++k.collaborative; break;
      case AffiliationType::other_typed: ++k.additional; break;
      case AffiliationType::unknown: ++k.unknown; break;
    }
    if (d.affiliation != AffiliationType::unknown) ++k.with_registry;
  }
  return r;
}

std::string stats_to_json(const StatsReport& report) {
  auto kind = [](const KindStats& k) {
    return nlohmann::ordered_json{{"total", k.total},
                                  {"with_registry", k.with_registry},
                                  {"academia", k.academia},
                                  {"industry", k.industry},
                                  {"collaborative", k.collaborative},
                                  {"additional", k.additional},
                                  {"unknown", k.unknown}};
  };
  nlohmann::ordered_json j{{"publications", kind(report.publications)},
                           {"patents", kind(report.patents)}};
  return j.dump(2) + "\n";
}

std::string stats_to_table(const StatsReport& report) {
  const std::vector<std::tuple<std::string, std::size_t, std::size_t>> rows{
      {"Total documents", report.publications.total, report.patents.total},
      {"Documents with registry IDs", report.publications.with_registry, report.patents.with_registry},
      {"Academia", report.publications.academia, report.patents.academia},
      {"Industry", report.publications.industry, report.patents.industry},
      {"Collaborative", report.publications.collaborative, report.patents.collaborative},
      {"Additional categories with registry ID", report.publications.additional,
       report.patents.additional},
      {"Without registry IDs", report.publications.unknown, report.patents.unknown},
  };
  std::size_t label_w = 0;
  for (const auto& r : rows) label_w = std::max(label_w, std::get<0>(r).size());
  std::ostringstream out;
  out << std::left << std::setw(static_cast<int>(label_w)) << "" << " | " << std::right
      << std::setw(12) << "Publications" << " | " << std::setw(12) << "Patents" << '\n';
  out << std::string(label_w, '-') << "-+-" << std::string(12, '-') << "-+-" << std::string(12, '-')
      << '\n';
  for (const auto& [label, pubs, pats] : rows) {
    out << std::left << std::setw(static_cast<int>(label_w)) << label << " | " << std::right
        << std::setw(12) << pubs << " | " << std::setw(12) << pats << '\n';
  }
  return out.str();
}

std::string has_topic_iri() { return std::string(turtle::kAida) + "hasTopic"; }
std::string has_affiliation_type_iri() { return std::string(turtle::kAida) + "hasAffiliationType"; }
std::string has_assignee_type_iri() { return std::string(turtle::kAida) + "hasAssigneeType"; }
std::string has_industrial_sector_iri() {
  return std::string(turtle::kAida) + "hasIndustrialSector";
}
std::string document_iri(std::string_view doc_id) {
  return std::string(turtle::kAidaResource) + turtle::encode_segment(doc_id);
}

std::size_t export_triples(const AidaGraph& graph, std::ostream& out) {
  const std::string topic_p = has_topic_iri();
  const std::string aff_p = has_affiliation_type_iri();
  const std::string asg_p = has_assignee_type_iri();
  const std::string sec_p = has_industrial_sector_iri();
  std::size_t written = 0;
  // Documents iterate in id order; within a document, sort by (predicate, object).
  for (const auto& [id, d] : graph.documents()) {
    std::vector<std::pair<std::string, std::string>> po;
    for (std::size_t t : d.topics) po.emplace_back(topic_p, turtle::topic_iri(graph.ontology().at(t).value));
    if (d.affiliation != AffiliationType::unknown) {
      po.emplace_back(d.kind == DocumentKind::publication ? aff_p : asg_p,
                      affiliation_object(d.affiliation));
    }
    for (const auto& s : d.sectors) po.emplace_back(sec_p, sector_iri(s));
    std::sort(po.begin(), po.end());
    const std::string subject = document_iri(id);
    for (auto& [p, o] : po) {
      turtle::write(out, {subject, p, o, false, 0});
      ++written;
    }
  }
  if (!out) throw Error(ErrorCode::io, "failed writing triples");
  return written;
}

std::size_t export_triples(const AidaGraph& graph, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::io, "cannot open '" + path + "' for writing");
  const std::size_t n = export_triples(graph, out);
  out.flush();
  if (!out) throw Error(ErrorCode::io, "failed writing '" + path + "'");
  return n;
}

AidaGraph import_triples(std::istream& in, const Corpus& corpus,
                         std::shared_ptr<const TopicOntology> ontology) {
  if (!ontology) throw Error(ErrorCode::invalid_argument, "graph requires an ontology");
  std::map<std::string, GraphDocument> docs;
  for (const auto& d : corpus.documents()) {
    GraphDocument g;
    g.kind = d.kind;
    g.year = d.year;
    docs.emplace(d.id, std::move(g));
  }
  const std::string doc_prefix(turtle::kAidaResource);
  const std::string topic_p = has_topic_iri();
  const std::string aff_p = has_affiliation_type_iri();
  const std::string asg_p = has_assignee_type_iri();
  const std::string sec_p = has_industrial_sector_iri();
  const std::string sector_prefix(turtle::kInduso);

  for (const auto& t : turtle::read(in)) {
    const std::string where = "turtle line " + std::to_string(t.line) + ": ";
    if (t.subject.rfind(doc_prefix, 0) != 0) {
      throw ParseError(where + "subject is not a document IRI", t.line);
    }
    const std::string id = turtle::decode_segment(std::string_view(t.subject).substr(doc_prefix.size()));
    auto it = docs.find(id);
    if (it == docs.end()) throw Error(ErrorCode::validation, where + "document '" + id + "' not in corpus");
    GraphDocument& d = it->second;
    if (t.predicate == topic_p) {
      const auto label = turtle::label_from_topic_iri(t.object);
      auto idx = ontology->index_of(TopicId(label));
      if (!idx) throw Error(ErrorCode::validation, where + "unknown topic '" + label + "'");
      d.topics.push_back(*idx);
    } else if (t.predicate == aff_p || t.predicate == asg_p) {
      const bool patent_predicate = t.predicate == asg_p;
      if (patent_predicate != (d.kind == DocumentKind::patent)) {
        throw Error(ErrorCode::validation, where + "affiliation predicate does not match document kind");
      }
      auto a = affiliation_from_object(t.object);
      if (!a) throw ParseError(where + "unknown affiliation category '" + t.object + "'", t.line);
      d.affiliation = *a;
    } else if (t.predicate == sec_p) {
      if (t.object.rfind(sector_prefix, 0) != 0) {
        throw ParseError(where + "sector object is not an industrial-sector IRI", t.line);
      }
      d.sectors.insert(turtle::decode_segment(std::string_view(t.object).substr(sector_prefix.size())));
    } else {
      throw ParseError(where + "unexpected predicate '" + t.predicate + "'", t.line);
    }
  }
  return AidaGraph(std::move(ontology), std::move(docs));
}

AidaGraph import_triples(const std::string& path, const Corpus& corpus,
                         std::shared_ptr<const TopicOntology> ontology) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot open triples file '" + path + "'");
  return import_triples(in, corpus, std::move(ontology));
}

}  // namespace topicflow
