#pragma once

#include <random>
#include <string>
#include <vector>

#include "topicflow/classifier.hpp"
#include "topicflow/corpus.hpp"

namespace tfx {

// Technologies spreading between sibling topics. Each technology starts in
// one topic of a pair, three papers a year, and reaches the sibling three
// years later. Other topics see an occasional stray mention.
struct TtfWorld {
  topicflow::Corpus corpus;
  std::vector<topicflow::TopicAnnotation> annotations;
  std::vector<std::string> technologies;
  int first_year = 2000;
  int last_year = 2019;
};

inline TtfWorld propagation_world(std::size_t n_techs, std::size_t n_pairs, std::uint64_t seed) {
  TtfWorld w;
  std::mt19937_64 rng(seed);
  std::vector<topicflow::Document> docs;
  auto emit = [&](const std::string& tech, int year, const std::string& topic) {
    topicflow::Document d;
    d.id = "p" + std::to_string(docs.size());
    d.kind = topicflow::DocumentKind::publication;
    d.year = year;
    d.title = "a study of " + tech + " methods";
    topicflow::TopicAnnotation a;
    a.doc_id = d.id;
    a.all = {topicflow::TopicId(topic)};
    docs.push_back(std::move(d));
    w.annotations.push_back(std::move(a));
  };
  auto topic_name = [](std::size_t pair, int side) {
    return "field " + std::to_string(pair) + (side ? " applied" : " theory");
  };
  for (std::size_t t = 0; t < n_techs; ++t) {
    const std::string tech = "gizmo " + std::to_string(t);
    w.technologies.push_back(tech);
    const std::size_t pair = rng() % n_pairs;
    const int side = static_cast<int>(rng() % 2);
    const int start = w.first_year + 2 + static_cast<int>(rng() % 10);
    for (int y = start; y <= w.last_year; ++y) {
      for (int k = 0; k < 3; ++k) emit(tech, y, topic_name(pair, side));
      if (y >= start + 3) {
        for (int k = 0; k < 3; ++k) emit(tech, y, topic_name(pair, 1 - side));
      }
    }
    for (int y = w.first_year; y <= w.last_year; ++y) {
      if (rng() % 10 == 0) emit(tech, y, topic_name(rng() % n_pairs, static_cast<int>(rng() % 2)));
    }
  }
  w.corpus = topicflow::Corpus::from_documents(std::move(docs));
  return w;
}

}  // namespace tfx
