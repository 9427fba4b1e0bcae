#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace topicflow {

enum class ErrorCode {
  invalid_argument = 1,
  io = 2,
  parse = 3,
  validation = 4,
  not_found = 5,
  numeric = 6,
};

// All library failures surface as this exception; the C API maps `code()`
// onto its integer status values.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Parse failures carry the 1-based line (files) or 0-based offset (queries)
// where they occurred.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t position)
      : Error(ErrorCode::parse, message), position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

// Canonical representative of an ontology equivalence class.
struct TopicId {
  std::string value;

  TopicId() = default;
  explicit TopicId(std::string v) : value(std::move(v)) {}

  const std::string& str() const noexcept { return value; }
  bool empty() const noexcept { return value.empty(); }

  friend auto operator<=>(const TopicId&, const TopicId&) = default;
  friend bool operator==(const TopicId&, const TopicId&) = default;
};

struct TopicIdHash {
  std::size_t operator()(const TopicId& t) const noexcept {
    return std::hash<std::string>{}(t.value);
  }
};

// Worker cap for the parallel sections. 0 means hardware concurrency.
void set_thread_count(unsigned n);
unsigned thread_count();

// Runs fn(i) for i in [0, n). Each index is handled exactly once; callers
// write results into pre-sized slots so output never depends on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

const char* version_string();

}  // namespace topicflow
