#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace topicflow {

// Lowercases ASCII, maps hyphens to spaces, trims, and collapses runs of
// whitespace to one space. Ontology labels and lookup keys go through this.
std::string normalize_label(std::string_view raw);

// Token runs of one text field, split at clause punctuation so n-grams never
// bridge sentences. Tokens are lowercased alphanumeric runs; every other ASCII
// character is a separator. Bytes >= 0x80 are kept inside tokens.
using Segment = std::vector<std::string>;

std::vector<Segment> segment_text(std::string_view text);

// Tokens of a label or phrase, ignoring clause breaks.
std::vector<std::string> tokenize(std::string_view text);

std::string join(const std::vector<std::string>& tokens, std::string_view sep,
                 std::size_t first = 0, std::size_t count = std::string::npos);

// True if `phrase` occurs as a contiguous token run inside one segment.
bool contains_phrase(const std::vector<Segment>& segments,
                     const std::vector<std::string>& phrase);

// Minimal RFC-4180 style CSV: quoted fields, doubled quotes, no embedded
// newlines.
std::vector<std::string> split_csv_line(std::string_view line,
                                        std::size_t line_no);

std::string csv_escape(std::string_view field);

std::string trim(std::string_view s);

// Shortest decimal form that reads back to the same double.
std::string format_double(double v);

}  // namespace topicflow
