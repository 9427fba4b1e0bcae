#include "topicflow/query.hpp"

#include <cctype>
#include <charconv>
#include <vector>

namespace topicflow {

struct Query::Node {
  enum class Op { phrase, year, venue, op_not, op_and, op_or };
  Op op = Op::phrase;
  std::vector<std::string> tokens;  // phrase
  int year_lo = 0;
  int year_hi = 0;
  std::string venue;
  std::unique_ptr<Node> lhs;
  std::unique_ptr<Node> rhs;
};

namespace {

using Node = Query::Node;

struct Token {
  enum class Kind { phrase, kw_and, kw_or, kw_not, lparen, rparen, year, venue, end };
  Kind kind = Kind::end;
  std::string text;
  int year_lo = 0;
  int year_hi = 0;
  std::size_t pos = 0;
};

[[noreturn]] void fail(std::size_t pos, const std::string& what) {
  throw ParseError("query parse error at position " + std::to_string(pos) + ": " + what, pos);
}

class Lexer {
 public:
  explicit Lexer(std::string_view s) : s_(s) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      Token t;
      t.pos = pos_;
      if (pos_ >= s_.size()) {
        out.push_back(t);
        return out;
      }
      const char c = s_[pos_];
      if (c == '(') {
        t.kind = Token::Kind::lparen;
        ++pos_;
      } else if (c == ')') {
        t.kind = Token::Kind::rparen;
        ++pos_;
      } else if (c == '"') {
        t.kind = Token::Kind::phrase;
        t.text = quoted();
      } else {
        const std::size_t start = pos_;
        while (pos_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[pos_])) &&
               s_[pos_] != '(' && s_[pos_] != ')' && s_[pos_] != '"') {
          ++pos_;
        }
        const auto word = s_.substr(start, pos_ - start);
        if (word == "AND") {
          t.kind = Token::Kind::kw_and;
        } else if (word == "OR") {
          t.kind = Token::Kind::kw_or;
        } else if (word == "NOT") {
          t.kind = Token::Kind::kw_not;
        } else if (word.rfind("year:", 0) == 0) {
          t.kind = Token::Kind::year;
          year_range(word.substr(5), start + 5, t);
        } else if (word == "venue:") {
          if (pos_ >= s_.size() || s_[pos_] != '"') fail(pos_, "venue: must be followed by a quoted name");
          t.kind = Token::Kind::venue;
          t.text = quoted();
        } else {
          fail(start, "unexpected word '" + std::string(word) +
                          "' (phrases must be quoted; operators are AND, OR, NOT)");
        }
      }
      out.push_back(std::move(t));
    }
  }

 private:
  std::string quoted() {
    const std::size_t open = pos_++;
    std::string out;
    while (pos_ < s_.size() && s_[pos_] != '"') out.push_back(s_[pos_++]);
    if (pos_ >= s_.size()) fail(open, "unterminated quoted phrase");
    ++pos_;
    return out;
  }

  static int parse_year(std::string_view s, std::size_t pos) {
    int v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size() || s.empty()) {
      fail(pos, "invalid year '" + std::string(s) + "'");
    }
    return v;
  }

  static void year_range(std::string_view spec, std::size_t pos, Token& t) {
    const auto dots = spec.find("..");
    if (dots == std::string_view::npos) {
      t.year_lo = t.year_hi = parse_year(spec, pos);
    } else {
      t.year_lo = parse_year(spec.substr(0, dots), pos);
      t.year_hi = parse_year(spec.substr(dots + 2), pos + dots + 2);
      if (t.year_lo > t.year_hi) fail(pos, "empty year range");
    }
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  std::unique_ptr<Node> parse() {
    auto root = parse_or();
    if (peek().kind != Token::Kind::end) fail(peek().pos, "unexpected trailing input");
    return root;
  }

 private:
  const Token& peek() const { return toks_[i_]; }
  const Token& take() { return toks_[i_++]; }

  static std::unique_ptr<Node> binary(Node::Op op, std::unique_ptr<Node> l, std::unique_ptr<Node> r) {
    auto n = std::make_unique<Node>();
    n->op = op;
    n->lhs = std::move(l);
    n->rhs = std::move(r);
    return n;
  }

  std::unique_ptr<Node> parse_or() {
    auto lhs = parse_and();
    while (peek().kind == Token::Kind::kw_or) {
      take();
      lhs = binary(Node::Op::op_or, std::move(lhs), parse_and());
    }
    return lhs;
  }

  std::unique_ptr<Node> parse_and() {
    auto lhs = parse_unary();
    while (peek().kind == Token::Kind::kw_and) {
      take();
      lhs = binary(Node::Op::op_and, std::move(lhs), parse_unary());
    }
    return lhs;
  }

  std::unique_ptr<Node> parse_unary() {
    if (peek().kind == Token::Kind::kw_not) {
      take();
      auto n = std::make_unique<Node>();
      n->op = Node::Op::op_not;
      n->lhs = parse_unary();
      return n;
    }
    return parse_primary();
  }

  std::unique_ptr<Node> parse_primary() {
    const Token& t = take();
    auto n = std::make_unique<Node>();
    switch (t.kind) {
      case Token::Kind::phrase:
        n->op = Node::Op::phrase;
        n->tokens = tokenize(t.text);
        if (n->tokens.empty()) fail(t.pos, "phrase has no searchable tokens");
        return n;
      case Token::Kind::year:
        n->op = Node::Op::year;
        n->year_lo = t.year_lo;
        n->year_hi = t.year_hi;
        return n;
      case Token::Kind::venue:
        n->op = Node::Op::venue;
        n->venue = normalize_label(t.text);
        return n;
      case Token::Kind::lparen: {
        auto inner = parse_or();
        if (peek().kind != Token::Kind::rparen) fail(peek().pos, "expected ')'");
        take();
        return inner;
      }
      case Token::Kind::end:
        fail(t.pos, "unexpected end of query");
      default:
        fail(t.pos, "expected a phrase, predicate, NOT, or '('");
    }
  }

  std::vector<Token> toks_;
  std::size_t i_ = 0;
};

bool eval(const Node& n, const Document& doc, const std::vector<Segment>& segs) {
  switch (n.op) {
    case Node::Op::phrase: return contains_phrase(segs, n.tokens);
    case Node::Op::year: return doc.year >= n.year_lo && doc.year <= n.year_hi;
    case Node::Op::venue: return doc.venue && normalize_label(*doc.venue) == n.venue;
    case Node::Op::op_not: return !eval(*n.lhs, doc, segs);
    case Node::Op::op_and: return eval(*n.lhs, doc, segs) && eval(*n.rhs, doc, segs);
    case Node::Op::op_or: return eval(*n.lhs, doc, segs) || eval(*n.rhs, doc, segs);
  }
  return false;
}

}  // namespace

Query::Query(Query&&) noexcept = default;
Query& Query::operator=(Query&&) noexcept = default;
Query::~Query() = default;

Query Query::parse(std::string_view text) {
  Query q;
  q.text_ = std::string(text);
  q.root_ = Parser(Lexer(text).run()).parse();
  return q;
}

bool Query::matches(const Document& doc) const { return matches(doc, doc.segments()); }

bool Query::matches(const Document& doc, const std::vector<Segment>& segments) const {
  return eval(*root_, doc, segments);
}

Corpus filter_corpus(const Corpus& corpus, const Query& query) {
  const auto& docs = corpus.documents();
  std::vector<char> keep(docs.size(), 0);
  parallel_for(docs.size(), [&](std::size_t i) { keep[i] = query.matches(docs[i]) ? 1 : 0; });
  std::vector<Document> out;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    if (keep[i]) out.push_back(docs[i]);
  }
  return Corpus::from_documents(std::move(out));
}

}  // namespace topicflow
