#include "topicflow/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>

#include "json.hpp"

namespace topicflow {

using nlohmann::json;

std::string_view to_string(DocumentKind kind) {
  return kind == DocumentKind::publication ? "publication" : "patent";
}

std::vector<Segment> Document::segments() const {
  std::vector<Segment> out = segment_text(title);
  for (auto& s : segment_text(abstract)) out.push_back(std::move(s));
  for (const auto& kw : keywords) {
    for (auto& s : segment_text(kw)) out.push_back(std::move(s));
  }
  return out;
}

namespace {

[[noreturn]] void bad_line(std::size_t line_no, const std::string& what) {
  throw ParseError("corpus line " + std::to_string(line_no) + ": " + what, line_no);
}

std::string string_field(const json& j, const char* key, std::size_t line_no,
                         bool required) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) {
    if (required) bad_line(line_no, std::string("missing field '") + key + "'");
    return {};
  }
  if (!it->is_string()) bad_line(line_no, std::string("field '") + key + "' must be a string");
  return it->get<std::string>();
}

std::vector<std::string> string_list(const json& j, const char* key, std::size_t line_no) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return {};
  if (!it->is_array()) bad_line(line_no, std::string("field '") + key + "' must be an array");
  std::vector<std::string> out;
  for (const auto& v : *it) {
    if (!v.is_string()) bad_line(line_no, std::string("field '") + key + "' must hold strings");
    out.push_back(v.get<std::string>());
  }
  return out;
}

}  // namespace

Document parse_document(std::string_view json_line, std::size_t line_no) {
  json j;
  try {
    j = json::parse(json_line);
  } catch (const json::parse_error& e) {
    bad_line(line_no, std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) bad_line(line_no, "expected a JSON object");

  Document d;
  d.id = string_field(j, "id", line_no, true);
  if (d.id.empty()) bad_line(line_no, "empty id");
  const std::string kind = string_field(j, "kind", line_no, true);
  if (kind == "publication") {
    d.kind = DocumentKind::publication;
  } else if (kind == "patent") {
    d.kind = DocumentKind::patent;
  } else {
    bad_line(line_no, "kind must be 'publication' or 'patent', got '" + kind + "'");
  }
  d.title = string_field(j, "title", line_no, true);
  d.abstract = string_field(j, "abstract", line_no, false);
  d.keywords = string_list(j, "keywords", line_no);
  auto year = j.find("year");
  if (year == j.end() || !year->is_number_integer()) {
    bad_line(line_no, "field 'year' must be an integer");
  }
  d.year = year->get<int>();
  if (d.year < 1000 || d.year > 3000) {
    bad_line(line_no, "year " + std::to_string(d.year) + " outside [1000, 3000]");
  }
  if (auto venue = j.find("venue"); venue != j.end() && !venue->is_null()) {
    if (!venue->is_string()) bad_line(line_no, "field 'venue' must be a string");
    d.venue = venue->get<std::string>();
  }
  d.org_ids = string_list(j, "org_ids", line_no);
  return d;
}

std::string document_to_json(const Document& doc) {
  json j;
  j["id"] = doc.id;
  j["kind"] = to_string(doc.kind);
  j["title"] = doc.title;
  j["abstract"] = doc.abstract;
  j["keywords"] = doc.keywords;
  j["year"] = doc.year;
  if (doc.venue) j["venue"] = *doc.venue;
  j["org_ids"] = doc.org_ids;
  return j.dump();
}

Corpus Corpus::from_documents(std::vector<Document> docs) {
  Corpus c;
  c.docs_ = std::move(docs);
  for (std::size_t i = 0; i < c.docs_.size(); ++i) {
    const auto& d = c.docs_[i];
    if (d.id.empty()) {
      throw Error(ErrorCode::validation, "document " + std::to_string(i) + " has an empty id");
    }
    if (d.year < 1000 || d.year > 3000) {
      throw Error(ErrorCode::validation, "document '" + d.id + "' has year outside [1000, 3000]");
    }
    if (!c.index_.emplace(d.id, i).second) {
      throw Error(ErrorCode::validation, "duplicate document id '" + d.id + "'");
    }
  }
  return c;
}

Corpus Corpus::read(std::istream& in) {
  std::vector<Document> docs;
  std::unordered_map<std::string, std::size_t> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    Document d = parse_document(line, line_no);
    if (auto [it, inserted] = seen.emplace(d.id, line_no); !inserted) {
      throw ParseError("corpus line " + std::to_string(line_no) + ": duplicate document id '" +
                           d.id + "' (first seen on line " + std::to_string(it->second) + ")",
                       line_no);
    }
    docs.push_back(std::move(d));
  }
  return from_documents(std::move(docs));
}

Corpus Corpus::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot open corpus file '" + path + "'");
  return read(in);
}

const Document* Corpus::find(std::string_view id) const {
  auto it = index_.find(std::string(id));
  return it == index_.end() ? nullptr : &docs_[it->second];
}

void Corpus::write_jsonl(std::ostream& out) const {
  for (const auto& d : docs_) out << document_to_json(d) << '\n';
}

std::optional<OrgType> parse_org_type(std::string_view s) {
  if (s == "education") return OrgType::education;
  if (s == "company") return OrgType::company;
  if (s == "government") return OrgType::government;
  if (s == "other") return OrgType::other;
  return std::nullopt;
}

SectorTaxonomy SectorTaxonomy::read(std::istream& in) {
  SectorTaxonomy tax;
  std::string line;
  std::size_t line_no = 0;
  bool header = false;
  std::vector<std::pair<std::string, std::size_t>> parents_to_check;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto f = split_csv_line(line, line_no);
    if (!header) {
      if (f.size() != 2 || trim(f[0]) != "sector" || trim(f[1]) != "parent_sector") {
        throw ParseError("taxonomy line 1: expected header 'sector,parent_sector'", line_no);
      }
      header = true;
      continue;
    }
    if (f.size() != 2) {
      throw ParseError("taxonomy line " + std::to_string(line_no) + ": expected 2 fields", line_no);
    }
    std::string sector = trim(f[0]);
    std::string parent = trim(f[1]);
    if (sector.empty()) {
      throw ParseError("taxonomy line " + std::to_string(line_no) + ": empty sector", line_no);
    }
    if (!parent.empty()) parents_to_check.emplace_back(parent, line_no);
    if (!tax.parent_.emplace(sector, parent).second) {
      throw ParseError("taxonomy line " + std::to_string(line_no) + ": duplicate sector '" +
                           sector + "'",
                       line_no);
    }
  }
  for (const auto& [parent, ln] : parents_to_check) {
    auto it = tax.parent_.find(parent);
    if (it == tax.parent_.end()) {
      throw ParseError("taxonomy line " + std::to_string(ln) + ": unknown parent sector '" +
                           parent + "'",
                       ln);
    }
    if (!it->second.empty()) {
      throw ParseError("taxonomy line " + std::to_string(ln) + ": parent sector '" + parent +
                           "' is not top-level (taxonomy has two levels)",
                       ln);
    }
  }
  return tax;
}

SectorTaxonomy SectorTaxonomy::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot open sector taxonomy '" + path + "'");
  return read(in);
}

bool SectorTaxonomy::contains(std::string_view sector) const {
  return parent_.count(std::string(sector)) != 0;
}

std::optional<std::string> SectorTaxonomy::parent(std::string_view sector) const {
  auto it = parent_.find(std::string(sector));
  if (it == parent_.end() || it->second.empty()) return std::nullopt;
  return it->second;
}

OrgRegistry OrgRegistry::read(std::istream& in, const SectorTaxonomy* taxonomy) {
  OrgRegistry reg;
  std::string line;
  std::size_t line_no = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto f = split_csv_line(line, line_no);
    if (!header) {
      if (f.size() != 3 || trim(f[0]) != "org_id" || trim(f[1]) != "org_type" ||
          trim(f[2]) != "sectors") {
        throw ParseError("registry line 1: expected header 'org_id,org_type,sectors'", line_no);
      }
      header = true;
      continue;
    }
    const std::string where = "registry line " + std::to_string(line_no) + ": ";
    if (f.size() != 3) throw ParseError(where + "expected 3 fields", line_no);
    std::string id = trim(f[0]);
    if (id.empty()) throw ParseError(where + "empty org_id", line_no);
    auto type = parse_org_type(trim(f[1]));
    if (!type) throw ParseError(where + "unknown org_type '" + trim(f[1]) + "'", line_no);
    OrgEntry entry;
    entry.type = *type;
    std::string_view sectors = f[2];
    while (!sectors.empty()) {
      auto bar = sectors.find('|');
      std::string s = trim(sectors.substr(0, bar));
      if (!s.empty()) {
        if (taxonomy && !taxonomy->contains(s)) {
          throw ParseError(where + "sector '" + s + "' is not in the sector taxonomy", line_no);
        }
        entry.sectors.insert(std::move(s));
      }
      if (bar == std::string_view::npos) break;
      sectors.remove_prefix(bar + 1);
    }
    if (reg.find(id)) throw ParseError(where + "duplicate org_id '" + id + "'", line_no);
    reg.add(std::move(id), std::move(entry));
  }
  return reg;
}

OrgRegistry OrgRegistry::load(const std::string& path, const SectorTaxonomy* taxonomy) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot open registry file '" + path + "'");
  return read(in, taxonomy);
}

void OrgRegistry::add(std::string org_id, OrgEntry entry) {
  entries_[std::move(org_id)] = std::move(entry);
}

const OrgEntry* OrgRegistry::find(std::string_view org_id) const {
  auto it = entries_.find(std::string(org_id));
  return it == entries_.end() ? nullptr : &it->second;
}

std::string_view to_string(AffiliationType a) {
  switch (a) {
    case AffiliationType::academic: return "academic";
    case AffiliationType::industrial: return "industrial";
    case AffiliationType::collaborative: return "collaborative";
    case AffiliationType::other_typed: return "other_typed";
    case AffiliationType::unknown: return "unknown";
  }
  return "unknown";
}

std::optional<AffiliationType> parse_affiliation(std::string_view s) {
  for (auto a : {AffiliationType::academic, AffiliationType::industrial,
                 AffiliationType::collaborative, AffiliationType::other_typed,
                 AffiliationType::unknown}) {
    if (to_string(a) == s) return a;
  }
  return std::nullopt;
}

AffiliationType classify_affiliation(const Document& doc, const OrgRegistry& registry) {
  if (doc.org_ids.empty()) return AffiliationType::unknown;
  bool has_education = false;
  bool has_company = false;
  bool has_other = false;
  for (const auto& org : doc.org_ids) {
    const OrgEntry* e = registry.find(org);
    if (!e) return AffiliationType::unknown;
    switch (e->type) {
      case OrgType::education: has_education = true; break;
      case OrgType::company: has_company = true; break;
      default: has_other = true; break;
    }
  }
  if (has_education && has_company) return AffiliationType::collaborative;
  if (has_education && !has_other) return AffiliationType::academic;
  if (has_company && !has_other) return AffiliationType::industrial;
  return AffiliationType::other_typed;
}

std::set<std::string> assign_sectors(const Document& doc, const OrgRegistry& registry) {
  const auto aff = classify_affiliation(doc, registry);
  if (aff != AffiliationType::industrial && aff != AffiliationType::collaborative) {
    return {};
  }
  std::set<std::string> out;
  for (const auto& org : doc.org_ids) {
    const OrgEntry* e = registry.find(org);
    if (e && e->type == OrgType::company) out.insert(e->sectors.begin(), e->sectors.end());
  }
  return out;
}

}  // namespace topicflow
