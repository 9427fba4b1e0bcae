#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace topicflow::turtle {

// Fixed prefix table accepted by the reader (the writer always emits full
// IRIs):
//
//   cso:     http://cso.kmi.open.ac.uk/schema/cso#
//   topics:  https://cso.kmi.open.ac.uk/topics/
//   owl:     http://www.w3.org/2002/07/owl#
//   skos:    http://www.w3.org/2004/02/skos/core#
//   rdfs:    http://www.w3.org/2000/01/rdf-schema#
//   aida:    http://aida.kmi.open.ac.uk/ontology#
//   aidares: http://aida.kmi.open.ac.uk/resource/
//   induso:  http://aida.kmi.open.ac.uk/induso#
//
// `@prefix` directives are accepted only when they restate an entry of this
// table.
inline constexpr std::string_view kCsoSchema = "http://cso.kmi.open.ac.uk/schema/cso#";
inline constexpr std::string_view kCsoTopics = "https://cso.kmi.open.ac.uk/topics/";
inline constexpr std::string_view kOwl = "http://www.w3.org/2002/07/owl#";
inline constexpr std::string_view kSkos = "http://www.w3.org/2004/02/skos/core#";
inline constexpr std::string_view kRdfs = "http://www.w3.org/2000/01/rdf-schema#";
inline constexpr std::string_view kAida = "http://aida.kmi.open.ac.uk/ontology#";
inline constexpr std::string_view kAidaResource = "http://aida.kmi.open.ac.uk/resource/";
inline constexpr std::string_view kInduso = "http://aida.kmi.open.ac.uk/induso#";

struct Triple {
  std::string subject;
  std::string predicate;
  std::string object;  // IRI, or the lexical form when object_is_literal
  bool object_is_literal = false;
  std::size_t line = 0;
};

// Reads `<s> <p> <o> .` lines. Blank lines and `#` comments are skipped.
std::vector<Triple> read(std::istream& in);
std::vector<Triple> read_file(const std::string& path);

void write(std::ostream& out, const Triple& t);

// Percent-encodes everything outside the IRI-unreserved set.
std::string encode_segment(std::string_view raw);
std::string decode_segment(std::string_view encoded);

// Topic IRIs use underscores for spaces, mirroring the public ontology dump.
std::string topic_iri(std::string_view label);
std::string label_from_topic_iri(std::string_view iri);

}  // namespace topicflow::turtle
