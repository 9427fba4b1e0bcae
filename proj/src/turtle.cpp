#include "topicflow/turtle.hpp"

#include <array>
#include <fstream>
#include <istream>
#include <ostream>
#include <utility>

#include "topicflow/common.hpp"
#include "topicflow/text.hpp"

namespace topicflow::turtle {

namespace {

constexpr std::array<std::pair<std::string_view, std::string_view>, 8>
    kPrefixes{{
        {"cso", kCsoSchema},
        {"topics", kCsoTopics},
        {"owl", kOwl},
        {"skos", kSkos},
        {"rdfs", kRdfs},
        {"aida", kAida},
        {"aidares", kAidaResource},
        {"induso", kInduso},
    }};

[[noreturn]] void fail(std::size_t line, const std::string& what) {
  throw ParseError("turtle line " + std::to_string(line) + ": " + what, line);
}

std::string expand_prefixed(std::string_view name, std::size_t line) {
  const auto colon = name.find(':');
  if (colon == std::string_view::npos) {
    fail(line, "expected IRI or prefixed name, got '" + std::string(name) + "'");
  }
  const auto prefix = name.substr(0, colon);
  for (const auto& [p, iri] : kPrefixes) {
    if (p == prefix) {
      return std::string(iri) + std::string(name.substr(colon + 1));
    }
  }
  fail(line, "unknown prefix '" + std::string(prefix) + "'");
}

class LineScanner {
 public:
  LineScanner(std::string_view text, std::size_t line) : s_(text), line_(line) {}

  void skip_ws() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t' || s_[pos_] == '\r')) {
      ++pos_;
    }
  }

  bool at_end() {
    skip_ws();
    return pos_ >= s_.size() || s_[pos_] == '#';
  }

  char peek() {
    skip_ws();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }

  std::string iri_or_name() {
    skip_ws();
    if (pos_ >= s_.size()) fail(line_, "unexpected end of line");
    if (s_[pos_] == '<') {
      const auto close = s_.find('>', pos_);
      if (close == std::string_view::npos) fail(line_, "unterminated IRI");
      std::string iri(s_.substr(pos_ + 1, close - pos_ - 1));
      pos_ = close + 1;
      return iri;
    }
    if (s_[pos_] == '_') fail(line_, "blank nodes are not supported");
    const auto start = pos_;
    while (pos_ < s_.size() && s_[pos_] != ' ' && s_[pos_] != '\t') {
      ++pos_;
    }
    auto name = s_.substr(start, pos_ - start);
    // A trailing '.' glued to the name terminates the statement.
    if (!name.empty() && name.back() == '.') {
      name.remove_suffix(1);
      --pos_;
    }
    return expand_prefixed(name, line_);
  }

  std::string literal() {
    skip_ws();
    ++pos_;  // opening quote
    std::string out;
    while (pos_ < s_.size() && s_[pos_] != '"') {
      if (s_[pos_] == '\\' && pos_ + 1 < s_.size()) {
        const char e = s_[pos_ + 1];
        out.push_back(e == 'n' ? '\n' : e == 't' ? '\t' : e);
        pos_ += 2;
        continue;
      }
      out.push_back(s_[pos_++]);
    }
    if (pos_ >= s_.size()) fail(line_, "unterminated literal");
    ++pos_;
    // Language tags and datatypes are dropped.
    if (pos_ < s_.size() && s_[pos_] == '@') {
      while (pos_ < s_.size() && s_[pos_] != ' ' && s_[pos_] != '.') ++pos_;
    } else if (s_.substr(pos_, 2) == "^^") {
      pos_ += 2;
      iri_or_name();
    }
    return out;
  }

  void expect_dot() {
    skip_ws();
    if (pos_ >= s_.size() || s_[pos_] != '.') fail(line_, "expected '.'");
    ++pos_;
    if (!at_end()) fail(line_, "trailing content after '.'");
  }

  std::string_view rest() const { return s_.substr(pos_); }

 private:
  std::string_view s_;
  std::size_t line_;
  std::size_t pos_ = 0;
};

void check_prefix_directive(std::string_view text, std::size_t line) {
  // "@prefix name: <iri> ."
  const auto body = trim(text.substr(7));
  const auto colon = body.find(':');
  if (colon == std::string::npos) fail(line, "malformed @prefix");
  const std::string prefix = body.substr(0, colon);
  LineScanner rest(std::string_view(body).substr(colon + 1), line);
  const auto iri = rest.iri_or_name();
  rest.expect_dot();
  for (const auto& [p, known] : kPrefixes) {
    if (p == prefix && known == iri) {
      return;
    }
  }
  fail(line, "prefix '" + prefix + "' is not in the fixed prefix table");
}

bool unreserved(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         (c >= '0' && c <= '9') || c == '-' || c == '.' || c == '_' || c == '~';
}

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

std::vector<Triple> read(std::istream& in) {
  std::vector<Triple> out;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(raw);
    if (line.empty() || line[0] == '#') {
      continue;
    }
    if (line.rfind("@prefix", 0) == 0) {
      check_prefix_directive(line, line_no);
      continue;
    }
    LineScanner scan(line, line_no);
    Triple t;
    t.line = line_no;
    t.subject = scan.iri_or_name();
    t.predicate = scan.iri_or_name();
    if (t.predicate == "a") {
      fail(line_no, "'a' shorthand is not supported");
    }
    if (scan.peek() == '"') {
      t.object = scan.literal();
      t.object_is_literal = true;
    } else {
      t.object = scan.iri_or_name();
    }
    scan.expect_dot();
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<Triple> read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::io, "cannot open turtle file '" + path + "'");
  }
  return read(in);
}

void write(std::ostream& out, const Triple& t) {
  out << '<' << t.subject << "> <" << t.predicate << "> ";
  if (t.object_is_literal) {
    out << '"';
    for (char c : t.object) {
      if (c == '"' || c == '\\') out << '\\';
      if (c == '\n') {
        out << "\\n";
        continue;
      }
      out << c;
    }
    out << '"';
  } else {
    out << '<' << t.object << '>';
  }
  out << " .\n";
}

std::string encode_segment(std::string_view raw) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  out.reserve(raw.size());
  for (unsigned char c : raw) {
    if (unreserved(c)) {
      out.push_back(static_cast<char>(c));
    } else {
      out.push_back('%');
      out.push_back(kHex[c >> 4]);
      out.push_back(kHex[c & 0xF]);
    }
  }
  return out;
}

std::string decode_segment(std::string_view encoded) {
  std::string out;
  out.reserve(encoded.size());
  for (std::size_t i = 0; i < encoded.size(); ++i) {
    if (encoded[i] == '%' && i + 2 < encoded.size() &&
        hex_value(encoded[i + 1]) >= 0 && hex_value(encoded[i + 2]) >= 0) {
      out.push_back(static_cast<char>(hex_value(encoded[i + 1]) * 16 +
                                      hex_value(encoded[i + 2])));
      i += 2;
    } else {
      out.push_back(encoded[i]);
    }
  }
  return out;
}

std::string topic_iri(std::string_view label) {
  std::string out(kCsoTopics);
  std::size_t start = 0;
  while (start <= label.size()) {
    auto space = label.find(' ', start);
    if (space == std::string_view::npos) space = label.size();
    auto word = encode_segment(label.substr(start, space - start));
    // Literal underscores must survive the space<->underscore mapping.
    for (char c : word) {
      if (c == '_') {
        out += "%5F";
      } else {
        out.push_back(c);
      }
    }
    if (space < label.size()) out.push_back('_');
    start = space + 1;
  }
  return out;
}

std::string label_from_topic_iri(std::string_view iri) {
  auto slash = iri.find_last_of("/#");
  auto local = slash == std::string_view::npos ? iri : iri.substr(slash + 1);
  std::string spaced(local);
  for (char& c : spaced) {
    if (c == '_') c = ' ';
  }
  return decode_segment(spaced);
}

}  // namespace topicflow::turtle
