#include "topicflow/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>

#include "topicflow/common.hpp"

namespace topicflow {

namespace {

double norm_of(std::span<const float> v) {
  double s = 0.0;
  for (float x : v) s += static_cast<double>(x) * x;
  return std::sqrt(s);
}

}  // namespace

EmbeddingModel EmbeddingModel::from_vectors(std::vector<std::string> words, std::size_t dim,
                                            std::vector<float> values) {
  if (dim == 0) throw Error(ErrorCode::validation, "embedding dimension must be positive");
  if (values.size() != words.size() * dim) {
    throw Error(ErrorCode::validation, "embedding value count does not match vocabulary x dim");
  }
  EmbeddingModel m;
  m.dim_ = dim;
  m.words_ = std::move(words);
  m.values_ = std::move(values);
  m.norms_.resize(m.words_.size());
  for (std::size_t i = 0; i < m.words_.size(); ++i) {
    if (m.words_[i].empty()) throw Error(ErrorCode::validation, "empty embedding token");
    if (!m.index_.emplace(m.words_[i], i).second) {
      throw Error(ErrorCode::validation, "duplicate embedding token '" + m.words_[i] + "'");
    }
    m.norms_[i] = norm_of(m.vector(i));
  }
  return m;
}

EmbeddingModel EmbeddingModel::read(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::size_t count = 0;
  std::size_t dim = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.find_first_not_of(" \t\r") != std::string::npos) break;
  }
  {
    std::istringstream header(line);
    if (!(header >> count >> dim) || dim == 0) {
      throw ParseError("embedding line " + std::to_string(line_no) +
                           ": expected header '<count> <dim>'",
                       line_no);
    }
  }
  std::vector<std::string> words;
  std::vector<float> values;
  words.reserve(count);
  values.reserve(count * dim);
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream row(line);
    std::string word;
    if (!(row >> word)) continue;
    std::size_t got = 0;
    float v = 0.0f;
    while (row >> v) {
      values.push_back(v);
      ++got;
    }
    if (!row.eof()) {
      throw ParseError("embedding line " + std::to_string(line_no) + ": non-numeric component",
                       line_no);
    }
    if (got != dim) {
      throw ParseError("embedding line " + std::to_string(line_no) + ": expected " +
                           std::to_string(dim) + " components, got " + std::to_string(got),
                       line_no);
    }
    words.push_back(std::move(word));
  }
  if (words.size() != count) {
    throw ParseError("embedding header declares " + std::to_string(count) + " vectors, file has " +
                         std::to_string(words.size()),
                     1);
  }
  return from_vectors(std::move(words), dim, std::move(values));
}

EmbeddingModel EmbeddingModel::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot open embedding file '" + path + "'");
  return read(in);
}

std::optional<std::size_t> EmbeddingModel::find(std::string_view word) const {
  auto it = index_.find(std::string(word));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

double cosine_similarity(std::span<const double> a, std::span<const float> b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += static_cast<double>(b[i]) * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

std::vector<EmbeddingModel::Neighbour> EmbeddingModel::nearest(std::span<const double> query,
                                                               std::size_t k,
                                                               double floor) const {
  if (query.size() != dim_) {
    throw Error(ErrorCode::invalid_argument, "query dimension " + std::to_string(query.size()) +
                                                 " does not match model dimension " +
                                                 std::to_string(dim_));
  }
  double qn = 0.0;
  for (double x : query) qn += x * x;
  qn = std::sqrt(qn);
  std::vector<Neighbour> hits;
  if (qn == 0.0 || k == 0) return hits;
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (norms_[i] == 0.0) continue;
    const float* v = values_.data() + i * dim_;
    double dot = 0.0;
    for (std::size_t j = 0; j < dim_; ++j) dot += query[j] * v[j];
    const double sim = dot / (qn * norms_[i]);
    if (sim >= floor) hits.push_back({i, sim});
  }
  auto better = [](const Neighbour& a, const Neighbour& b) {
    return a.similarity != b.similarity ? a.similarity > b.similarity : a.index < b.index;
  };
  if (hits.size() > k) {
    std::partial_sort(hits.begin(), hits.begin() + static_cast<std::ptrdiff_t>(k), hits.end(), better);
    hits.resize(k);
  } else {
    std::sort(hits.begin(), hits.end(), better);
  }
  return hits;
}

}  // namespace topicflow
