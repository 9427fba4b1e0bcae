#include "topicflow/text.hpp"

#include <charconv>
#include <cmath>

#include "topicflow/common.hpp"

namespace topicflow {

namespace {

bool is_space(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

bool is_token_char(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         (c >= '0' && c <= '9') || c >= 0x80;
}

bool is_clause_break(unsigned char c) {
  switch (c) {
    case '.': case ',': case ';': case ':': case '!': case '?':
    case '(': case ')': case '[': case ']': case '{': case '}':
    case '"':
      return true;
    default:
      return false;
  }
}

char lower(unsigned char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a')
                                : static_cast<char>(c);
}

}  // namespace

std::string normalize_label(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  bool pending_space = false;
  for (unsigned char c : raw) {
    if (c == '-' || is_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back(lower(c));
  }
  return out;
}

std::vector<Segment> segment_text(std::string_view text) {
  std::vector<Segment> segments;
  Segment current;
  std::string token;
  auto flush_token = [&] {
    if (!token.empty()) {
      current.push_back(std::move(token));
      token.clear();
    }
  };
  auto flush_segment = [&] {
    flush_token();
    if (!current.empty()) {
      segments.push_back(std::move(current));
      current.clear();
    }
  };
  for (unsigned char c : text) {
    if (is_token_char(c)) {
      token.push_back(lower(c));
    } else if (is_clause_break(c)) {
      flush_segment();
    } else {
      flush_token();
    }
  }
  flush_segment();
  return segments;
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string token;
  for (unsigned char c : text) {
    if (is_token_char(c)) {
      token.push_back(lower(c));
    } else if (!token.empty()) {
      tokens.push_back(std::move(token));
      token.clear();
    }
  }
  if (!token.empty()) {
    tokens.push_back(std::move(token));
  }
  return tokens;
}

std::string join(const std::vector<std::string>& tokens, std::string_view sep,
                 std::size_t first, std::size_t count) {
  std::string out;
  const std::size_t last =
      count == std::string::npos ? tokens.size()
                                 : std::min(tokens.size(), first + count);
  for (std::size_t i = first; i < last; ++i) {
    if (i != first) {
      out.append(sep);
    }
    out.append(tokens[i]);
  }
  return out;
}

bool contains_phrase(const std::vector<Segment>& segments,
                     const std::vector<std::string>& phrase) {
  if (phrase.empty()) {
    return false;
  }
  for (const auto& seg : segments) {
    if (seg.size() < phrase.size()) {
      continue;
    }
    for (std::size_t i = 0; i + phrase.size() <= seg.size(); ++i) {
      bool hit = true;
      for (std::size_t j = 0; j < phrase.size(); ++j) {
        if (seg[i + j] != phrase[j]) {
          hit = false;
          break;
        }
      }
      if (hit) {
        return true;
      }
    }
  }
  return false;
}

std::vector<std::string> split_csv_line(std::string_view line,
                                        std::size_t line_no) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
    } else if (c == '"') {
      if (!field.empty() || was_quoted) {
        throw ParseError("line " + std::to_string(line_no) +
                             ": stray quote inside unquoted field",
                         line_no);
      }
      quoted = true;
      was_quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
      was_quoted = false;
    } else if (c == '\r' && i + 1 == line.size()) {
      // tolerate CRLF
    } else {
      field.push_back(c);
    }
  }
  if (quoted) {
    throw ParseError(
        "line " + std::to_string(line_no) + ": unterminated quoted field",
        line_no);
  }
  fields.push_back(std::move(field));
  return fields;
}

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\n") == std::string_view::npos) {
    return std::string(field);
  }
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') {
      out.push_back('"');
    }
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && is_space(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && is_space(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::string format_double(double v) {
  if (std::isnan(v)) {
    return "nan";
  }
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace topicflow
