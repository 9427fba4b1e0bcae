#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "topicflow/corpus.hpp"

namespace topicflow {

// Boolean inclusion criteria over document metadata.
//
//   expr    := or
//   or      := and ("OR" and)*
//   and     := unary ("AND" unary)*
//   unary   := "NOT" unary | primary
//   primary := PHRASE | "(" expr ")" | year | venue
//   year    := "year:" INT [".." INT]
//   venue   := "venue:" PHRASE
//
// PHRASE is a double-quoted string. A phrase matches when its tokens occur
// contiguously inside the title, the abstract, or one keyword, compared
// case-insensitively on token boundaries. Venues compare after label
// normalization.
class Query {
 public:
  struct Node;

  static Query parse(std::string_view text);

  bool matches(const Document& doc) const;
  bool matches(const Document& doc, const std::vector<Segment>& segments) const;

  const std::string& text() const noexcept { return text_; }

  Query(Query&&) noexcept;
  Query& operator=(Query&&) noexcept;
  ~Query();

 private:
  Query() = default;
  std::string text_;
  std::unique_ptr<Node> root_;
};

// Documents satisfying `query`, in corpus order.
Corpus filter_corpus(const Corpus& corpus, const Query& query);

}  // namespace topicflow
