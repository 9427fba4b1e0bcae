#include "topicflow/ontology.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <numeric>

#include "topicflow/text.hpp"
#include "topicflow/turtle.hpp"

namespace topicflow {

namespace {

using Kind = OntologyRelation::Kind;

std::optional<Kind> relation_kind(std::string_view name) {
  if (name == "superTopicOf" || name == "broaderGeneric" ||
      name == "skos:broaderGeneric") {
    return Kind::super_topic_of;
  }
  if (name == "relatedEquivalent" || name == "relevantEquivalent") {
    return Kind::related_equivalent;
  }
  if (name == "contributesTo" || name == "sameAs" || name == "owl:sameAs") {
    return Kind::ignored;
  }
  return std::nullopt;
}

struct UnionFind {
  std::vector<std::size_t> parent;

  std::size_t add() {
    parent.push_back(parent.size());
    return parent.size() - 1;
  }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  // The smaller id (earlier first appearance) stays the root so the class
  // representative is the first entity seen in the file.
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent[b] = a;
  }
};

// Depth-first search for a back edge; returns the cycle as a path of class
// ids with the first node repeated at the end.
std::vector<std::size_t> find_cycle(
    const std::vector<std::vector<std::size_t>>& parents) {
  const std::size_t n = parents.size();
  std::vector<int> state(n, 0);  // 0 new, 1 on stack, 2 done
  std::vector<std::size_t> stack;
  std::vector<std::size_t> cursor(n, 0);
  for (std::size_t root = 0; root < n; ++root) {
    if (state[root] != 0) continue;
    stack.push_back(root);
    state[root] = 1;
    while (!stack.empty()) {
      const std::size_t v = stack.back();
      if (cursor[v] < parents[v].size()) {
        const std::size_t w = parents[v][cursor[v]++];
        if (state[w] == 1) {
          auto it = std::find(stack.begin(), stack.end(), w);
          std::vector<std::size_t> cycle(it, stack.end());
          cycle.push_back(w);
          return cycle;
        }
        if (state[w] == 0) {
          state[w] = 1;
          stack.push_back(w);
        }
      } else {
        state[v] = 2;
        stack.pop_back();
      }
    }
  }
  return {};
}

}  // namespace

std::optional<OntologyFormat> parse_ontology_format(std::string_view name) {
  if (name == "edge-csv" || name == "csv") return OntologyFormat::edge_csv;
  if (name == "turtle-subset" || name == "turtle" || name == "ttl") {
    return OntologyFormat::turtle_subset;
  }
  return std::nullopt;
}

std::vector<OntologyRelation> parse_edge_csv(std::istream& in) {
  std::vector<OntologyRelation> out;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto fields = split_csv_line(line, line_no);
    if (!header_seen) {
      if (fields.size() != 3 || trim(fields[0]) != "subject" ||
          trim(fields[1]) != "relation" || trim(fields[2]) != "object") {
        throw ParseError("line " + std::to_string(line_no) +
                             ": expected header 'subject,relation,object'",
                         line_no);
      }
      header_seen = true;
      continue;
    }
    if (fields.size() != 3) {
      throw ParseError("line " + std::to_string(line_no) + ": expected 3 fields, got " +
                           std::to_string(fields.size()),
                       line_no);
    }
    OntologyRelation rel;
    rel.line = line_no;
    rel.subject = trim(fields[0]);
    rel.object = trim(fields[2]);
    const std::string relation = trim(fields[1]);
    if (rel.subject.empty()) {
      throw ParseError("line " + std::to_string(line_no) + ": empty subject", line_no);
    }
    if (relation.empty()) {
      if (!rel.object.empty()) {
        throw ParseError("line " + std::to_string(line_no) +
                             ": object given without a relation",
                         line_no);
      }
      rel.kind = Kind::declare;
    } else {
      auto kind = relation_kind(relation);
      if (!kind) {
        throw ParseError("line " + std::to_string(line_no) + ": unknown relation '" +
                             relation + "'",
                         line_no);
      }
      if (rel.object.empty()) {
        throw ParseError("line " + std::to_string(line_no) + ": empty object", line_no);
      }
      rel.kind = *kind;
    }
    out.push_back(std::move(rel));
  }
  if (!header_seen) {
    throw ParseError("missing header 'subject,relation,object'", 1);
  }
  return out;
}

std::vector<OntologyRelation> parse_ontology_turtle(std::istream& in) {
  const std::string super_topic = std::string(turtle::kCsoSchema) + "superTopicOf";
  const std::string related = std::string(turtle::kCsoSchema) + "relatedEquivalent";
  const std::string relevant = std::string(turtle::kCsoSchema) + "relevantEquivalent";
  const std::string broader = std::string(turtle::kSkos) + "broaderGeneric";
  const std::string label = std::string(turtle::kRdfs) + "label";

  std::vector<OntologyRelation> out;
  for (auto& t : turtle::read(in)) {
    OntologyRelation rel;
    rel.line = t.line;
    rel.subject = t.subject;
    if (t.predicate == super_topic || t.predicate == broader) {
      rel.kind = Kind::super_topic_of;
    } else if (t.predicate == related || t.predicate == relevant) {
      rel.kind = Kind::related_equivalent;
    } else if (t.predicate == label) {
      rel.kind = Kind::declare;
    } else {
      // contributesTo, owl:sameAs and anything else carry no hierarchy.
      continue;
    }
    if (rel.kind != Kind::declare) {
      if (t.object_is_literal) {
        throw ParseError("turtle line " + std::to_string(t.line) +
                             ": hierarchy relation needs an IRI object",
                         t.line);
      }
      rel.object = std::move(t.object);
    }
    out.push_back(std::move(rel));
  }
  return out;
}

TopicOntology TopicOntology::load(const std::string& path, OntologyFormat format) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::io, "cannot open ontology file '" + path + "'");
  }
  if (format == OntologyFormat::edge_csv) {
    return build(parse_edge_csv(in), false);
  }
  return build(parse_ontology_turtle(in), true);
}

TopicOntology TopicOntology::build(const std::vector<OntologyRelation>& relations,
                                   bool keys_are_iris) {
  // Entities in order of first appearance.
  std::unordered_map<std::string, std::size_t> entity_of_key;
  std::vector<std::string> entity_label;
  UnionFind uf;

  auto entity = [&](const std::string& key, std::size_t line) {
    const std::string norm =
        keys_are_iris ? normalize_label(turtle::label_from_topic_iri(key))
                      : normalize_label(key);
    if (norm.empty()) {
      throw ParseError("line " + std::to_string(line) + ": empty topic label", line);
    }
    const std::string& id_key = keys_are_iris ? key : norm;
    auto [it, inserted] = entity_of_key.emplace(id_key, entity_label.size());
    if (inserted) {
      entity_label.push_back(norm);
      uf.add();
    }
    return it->second;
  };

  std::vector<std::pair<std::size_t, std::size_t>> raw_edges;  // child, parent
  for (const auto& rel : relations) {
    if (rel.kind == Kind::ignored) continue;
    const std::size_t s = entity(rel.subject, rel.line);
    if (rel.kind == Kind::declare) continue;
    const std::size_t o = entity(rel.object, rel.line);
    if (rel.kind == Kind::related_equivalent) {
      uf.unite(s, o);
    } else {
      raw_edges.emplace_back(o, s);
    }
  }

  // Canonical class per entity; the class id is the representative entity.
  const std::size_t n_entities = entity_label.size();
  std::vector<std::size_t> class_rep(n_entities);
  for (std::size_t e = 0; e < n_entities; ++e) class_rep[e] = uf.find(e);

  // A normalized label may belong to only one class.
  std::unordered_map<std::string, std::size_t> label_class;
  for (std::size_t e = 0; e < n_entities; ++e) {
    auto [it, inserted] = label_class.emplace(entity_label[e], class_rep[e]);
    if (!inserted && it->second != class_rep[e]) {
      throw Error(ErrorCode::validation,
                  "label '" + entity_label[e] + "' maps to two distinct topics ('" +
                      entity_label[it->second] + "' and '" +
                      entity_label[class_rep[e]] + "')");
    }
  }

  TopicOntology onto;
  std::vector<std::size_t> reps;
  for (std::size_t e = 0; e < n_entities; ++e) {
    if (class_rep[e] == e) reps.push_back(e);
  }
  std::sort(reps.begin(), reps.end(), [&](std::size_t a, std::size_t b) {
    return entity_label[a] < entity_label[b];
  });
  std::unordered_map<std::size_t, std::size_t> topic_of_rep;
  for (std::size_t i = 0; i < reps.size(); ++i) {
    topic_of_rep[reps[i]] = i;
    onto.topics_.emplace_back(entity_label[reps[i]]);
    onto.index_.emplace(onto.topics_.back(), i);
  }
  const std::size_t n = reps.size();
  onto.labels_.resize(n);
  for (const auto& [label, rep] : label_class) {
    const std::size_t topic = topic_of_rep.at(rep);
    onto.labels_[topic].push_back(label);
    onto.label_index_.emplace(label, topic);
    onto.label_table_.emplace_back(label, topic);
  }
  for (auto& ls : onto.labels_) std::sort(ls.begin(), ls.end());
  std::sort(onto.label_table_.begin(), onto.label_table_.end());

  onto.parents_.resize(n);
  for (auto [child, parent] : raw_edges) {
    onto.parents_[topic_of_rep.at(class_rep[child])].push_back(
        topic_of_rep.at(class_rep[parent]));
  }
  for (auto& ps : onto.parents_) {
    std::sort(ps.begin(), ps.end());
    ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
    onto.edge_count_ += ps.size();
  }

  if (auto cycle = find_cycle(onto.parents_); !cycle.empty()) {
    std::string path;
    for (std::size_t i = 0; i < cycle.size(); ++i) {
      if (i) path += " -> ";
      path += onto.topics_[cycle[i]].value;
    }
    throw Error(ErrorCode::validation, "cycle in superTopicOf hierarchy: " + path);
  }

  // Ancestor closure in reverse topological order (parents before children).
  onto.ancestors_.assign(n, {});
  std::vector<int> done(n, 0);
  std::vector<std::size_t> stack;
  for (std::size_t root = 0; root < n; ++root) {
    if (done[root]) continue;
    stack.push_back(root);
    while (!stack.empty()) {
      const std::size_t v = stack.back();
      bool ready = true;
      for (std::size_t p : onto.parents_[v]) {
        if (!done[p]) {
          stack.push_back(p);
          ready = false;
        }
      }
      if (!ready) continue;
      stack.pop_back();
      if (done[v]) continue;
      auto& anc = onto.ancestors_[v];
      for (std::size_t p : onto.parents_[v]) {
        anc.push_back(p);
        anc.insert(anc.end(), onto.ancestors_[p].begin(), onto.ancestors_[p].end());
      }
      std::sort(anc.begin(), anc.end());
      anc.erase(std::unique(anc.begin(), anc.end()), anc.end());
      done[v] = 1;
    }
  }
  return onto;
}

std::optional<TopicId> TopicOntology::canonical_topic(std::string_view raw_label) const {
  auto it = label_index_.find(normalize_label(raw_label));
  if (it == label_index_.end()) return std::nullopt;
  return topics_[it->second];
}

std::optional<std::size_t> TopicOntology::index_of(const TopicId& t) const {
  auto it = index_.find(t);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<TopicId> TopicOntology::super_topics(const TopicId& topic,
                                                 bool transitive) const {
  auto idx = index_of(topic);
  if (!idx) {
    throw Error(ErrorCode::not_found, "unknown topic '" + topic.value + "'");
  }
  const auto& src = transitive ? ancestors_[*idx] : parents_[*idx];
  std::vector<TopicId> out;
  out.reserve(src.size());
  // Indices follow id order, so the result is already sorted.
  for (std::size_t p : src) out.push_back(topics_[p]);
  return out;
}

const std::vector<std::string>& TopicOntology::labels(const TopicId& topic) const {
  auto idx = index_of(topic);
  if (!idx) {
    throw Error(ErrorCode::not_found, "unknown topic '" + topic.value + "'");
  }
  return labels_[*idx];
}

std::vector<std::pair<TopicId, TopicId>> TopicOntology::super_edges() const {
  std::vector<std::pair<TopicId, TopicId>> out;
  out.reserve(edge_count_);
  for (std::size_t c = 0; c < parents_.size(); ++c) {
    for (std::size_t p : parents_[c]) out.emplace_back(topics_[c], topics_[p]);
  }
  return out;
}

}  // namespace topicflow
