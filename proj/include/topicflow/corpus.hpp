#pragma once

#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "topicflow/common.hpp"
#include "topicflow/text.hpp"

namespace topicflow {

enum class DocumentKind { publication, patent };

std::string_view to_string(DocumentKind kind);

struct Document {
  std::string id;
  DocumentKind kind = DocumentKind::publication;
  std::string title;
  std::string abstract;
  std::vector<std::string> keywords;
  int year = 0;
  std::optional<std::string> venue;
  std::vector<std::string> org_ids;

  // Title, abstract and each keyword, tokenized into clause segments.
  std::vector<Segment> segments() const;
};

class Corpus {
 public:
  Corpus() = default;

  // Validates ids (non-empty, unique) and years.
  static Corpus from_documents(std::vector<Document> docs);
  static Corpus load(const std::string& path);
  static Corpus read(std::istream& in);

  std::size_t size() const noexcept { return docs_.size(); }
  bool empty() const noexcept { return docs_.empty(); }
  const std::vector<Document>& documents() const noexcept { return docs_; }
  const Document& operator[](std::size_t i) const { return docs_[i]; }

  const Document* find(std::string_view id) const;

  void write_jsonl(std::ostream& out) const;

 private:
  std::vector<Document> docs_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Parses one JSONL record. `line_no` is only used in error messages.
Document parse_document(std::string_view json_line, std::size_t line_no);
std::string document_to_json(const Document& doc);

enum class OrgType { education, company, government, other };

std::optional<OrgType> parse_org_type(std::string_view s);

struct OrgEntry {
  OrgType type = OrgType::other;
  std::set<std::string> sectors;
};

// Two-level industrial sector taxonomy: `sector,parent_sector`, where the
// parent column is empty for top-level sectors.
class SectorTaxonomy {
 public:
  static SectorTaxonomy load(const std::string& path);
  static SectorTaxonomy read(std::istream& in);

  bool contains(std::string_view sector) const;
  std::optional<std::string> parent(std::string_view sector) const;
  std::size_t size() const noexcept { return parent_.size(); }

 private:
  std::unordered_map<std::string, std::string> parent_;
};

class OrgRegistry {
 public:
  // Sector labels are validated against `taxonomy` when one is given.
  static OrgRegistry load(const std::string& path,
                          const SectorTaxonomy* taxonomy = nullptr);
  static OrgRegistry read(std::istream& in, const SectorTaxonomy* taxonomy = nullptr);

  void add(std::string org_id, OrgEntry entry);

  const OrgEntry* find(std::string_view org_id) const;
  std::size_t size() const noexcept { return entries_.size(); }

 private:
  std::unordered_map<std::string, OrgEntry> entries_;
};

enum class AffiliationType { academic, industrial, collaborative, other_typed, unknown };

std::string_view to_string(AffiliationType a);
std::optional<AffiliationType> parse_affiliation(std::string_view s);

// Repeated org ids count once, so permuting or duplicating ids never changes
// the outcome.
AffiliationType classify_affiliation(const Document& doc, const OrgRegistry& registry);

// Union of company sectors for industrial and collaborative documents;
// empty otherwise.
std::set<std::string> assign_sectors(const Document& doc, const OrgRegistry& registry);

}  // namespace topicflow
