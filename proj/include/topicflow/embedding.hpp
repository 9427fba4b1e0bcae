#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace topicflow {

// Pre-trained word vectors in the classic text format:
//
//   <count> <dim>
//   word v1 v2 ... vdim
//
// Multiword entries are joined with underscores ("semantic_web").
class EmbeddingModel {
 public:
  EmbeddingModel() = default;

  static EmbeddingModel load(const std::string& path);
  static EmbeddingModel read(std::istream& in);
  static EmbeddingModel from_vectors(std::vector<std::string> words, std::size_t dim,
                                     std::vector<float> values);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return words_.size(); }
  bool empty() const noexcept { return words_.empty(); }

  std::optional<std::size_t> find(std::string_view word) const;
  const std::string& word(std::size_t i) const { return words_[i]; }
  std::span<const float> vector(std::size_t i) const {
    return {values_.data() + i * dim_, dim_};
  }

  struct Neighbour {
    std::size_t index;
    double similarity;
  };

  // Up to `k` vocabulary entries with cosine similarity >= `floor`, best
  // first; ties go to the lower vocabulary index. The query itself is not
  // excluded when it is a vocabulary word.
  std::vector<Neighbour> nearest(std::span<const double> query, std::size_t k,
                                 double floor) const;

 private:
  std::size_t dim_ = 0;
  std::vector<std::string> words_;
  std::vector<float> values_;
  std::vector<double> norms_;
  std::unordered_map<std::string, std::size_t> index_;
};

double cosine_similarity(std::span<const double> a, std::span<const float> b);

}  // namespace topicflow
