#include "topicflow/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <span>
#include <unordered_map>

#include "json.hpp"

namespace topicflow {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Edit distance

std::size_t levenshtein_distance(std::string_view a, std::string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

double levenshtein_similarity(std::string_view a, std::string_view b) {
  const std::size_t longest = std::max(a.size(), b.size());
  if (longest == 0) return 1.0;
  return 1.0 - static_cast<double>(levenshtein_distance(a, b)) / static_cast<double>(longest);
}

namespace {

// Distance if it is <= limit, otherwise limit + 1. Rows stop early once
// every cell exceeds the limit.
std::size_t bounded_distance(std::string_view a, std::string_view b, std::size_t limit) {
  if (a.size() < b.size()) std::swap(a, b);
  if (a.size() - b.size() > limit) return limit + 1;
  thread_local std::vector<std::size_t> prev, cur;
  prev.resize(b.size() + 1);
  cur.resize(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    std::size_t row_min = cur[0];
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
      row_min = std::min(row_min, cur[j]);
    }
    if (row_min > limit) return limit + 1;
    std::swap(prev, cur);
  }
  return std::min(prev[b.size()], limit + 1);
}

std::array<std::uint8_t, 32> histogram(std::string_view s) {
  std::array<std::uint8_t, 32> h{};
  for (unsigned char c : s) {
    auto& slot = h[c & 31u];
    if (slot < 255) ++slot;
  }
  return h;
}

// Each insertion or deletion moves the histogram L1 norm by one, each
// substitution by at most two.
std::size_t histogram_bound(const std::array<std::uint8_t, 32>& a,
                            const std::array<std::uint8_t, 32>& b) {
  unsigned l1 = 0;
  for (std::size_t i = 0; i < 32; ++i) {
    l1 += a[i] > b[i] ? a[i] - b[i] : b[i] - a[i];
  }
  return (l1 + 1) / 2;
}

// Largest distance d with 1 - d/longest >= threshold, using the same
// floating-point expression as levenshtein_similarity.
std::size_t max_allowed_distance(std::size_t longest, double threshold) {
  const double L = static_cast<double>(longest);
  auto d = static_cast<std::size_t>(std::floor((1.0 - threshold) * L)) + 1;
  while (d > 0 && 1.0 - static_cast<double>(d) / L < threshold) --d;
  return d;
}

bool is_number(const std::string& t) {
  return std::all_of(t.begin(), t.end(), [](char c) { return c >= '0' && c <= '9'; });
}

// ---------------------------------------------------------------------------
// N-gram extraction

std::vector<std::string> syntactic_grams(const std::vector<Segment>& segments) {
  std::vector<std::string> grams;
  for (const auto& seg : segments) {
    for (std::size_t n = 1; n <= 3; ++n) {
      for (std::size_t i = 0; i + n <= seg.size(); ++i) grams.push_back(join(seg, " ", i, n));
    }
  }
  std::sort(grams.begin(), grams.end());
  grams.erase(std::unique(grams.begin(), grams.end()), grams.end());
  return grams;
}

struct SemanticGram {
  std::string key;  // tokens joined by spaces
  std::size_t occurrences = 0;
};

// Candidate terms are maximal runs of tokens that are neither stopwords nor
// numbers; each run is decomposed into its 1/2/3-grams.
std::vector<SemanticGram> semantic_grams(const std::vector<Segment>& segments,
                                         const std::unordered_set<std::string>& stopwords) {
  std::map<std::string, std::size_t> counts;
  for (const auto& seg : segments) {
    std::size_t i = 0;
    while (i < seg.size()) {
      while (i < seg.size() && (stopwords.count(seg[i]) || is_number(seg[i]))) ++i;
      std::size_t j = i;
      while (j < seg.size() && !stopwords.count(seg[j]) && !is_number(seg[j])) ++j;
      for (std::size_t n = 1; n <= 3; ++n) {
        for (std::size_t s = i; s + n <= j; ++s) ++counts[join(seg, " ", s, n)];
      }
      i = j;
    }
  }
  std::vector<SemanticGram> out;
  out.reserve(counts.size());
  for (auto& [k, c] : counts) out.push_back({k, c});
  return out;
}

// Maps embedding-space neighbours of n-grams onto ontology topics.
class SemanticIndex {
 public:
  SemanticIndex(const TopicOntology& ontology, const EmbeddingModel& model,
                const ClassifierConfig& config)
      : model_(model), config_(config), word_topic_(model.size(), kNone) {
    if (model.empty()) throw Error(ErrorCode::validation, "embedding model has an empty vocabulary");
    if (model.dim() == 0) throw Error(ErrorCode::validation, "embedding model has dimension 0");
    for (std::size_t i = 0; i < model.size(); ++i) {
      std::string spaced = model.word(i);
      std::replace(spaced.begin(), spaced.end(), '_', ' ');
      if (auto t = ontology.canonical_topic(spaced)) word_topic_[i] = *ontology.index_of(*t);
    }
  }

  // Sorted, de-duplicated topic indices reached from one n-gram.
  std::vector<std::size_t> topics_for(const std::string& gram) const {
    std::string glued = gram;
    std::replace(glued.begin(), glued.end(), ' ', '_');
    std::vector<double> query(model_.dim(), 0.0);
    if (auto idx = model_.find(glued)) {
      auto v = model_.vector(*idx);
      for (std::size_t d = 0; d < v.size(); ++d) query[d] = v[d];
    } else {
      const auto tokens = tokenize(gram);
      if (tokens.size() < 2) return {};
      std::size_t found = 0;
      for (const auto& tok : tokens) {
        if (auto ti = model_.find(tok)) {
          auto v = model_.vector(*ti);
          for (std::size_t d = 0; d < v.size(); ++d) query[d] += v[d];
          ++found;
        }
      }
      if (found == 0) return {};
      for (double& x : query) x /= static_cast<double>(found);
    }
    std::vector<std::size_t> topics;
    for (const auto& nb : model_.nearest(query, config_.top_k, config_.cosine_floor)) {
      if (word_topic_[nb.index] != kNone) topics.push_back(word_topic_[nb.index]);
    }
    std::sort(topics.begin(), topics.end());
    topics.erase(std::unique(topics.begin(), topics.end()), topics.end());
    return topics;
  }

 private:
  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  const EmbeddingModel& model_;
  const ClassifierConfig& config_;
  std::vector<std::size_t> word_topic_;
};

std::vector<ScoredTopic> score_semantic(
    const TopicOntology& ontology, const std::vector<SemanticGram>& grams,
    const std::vector<const std::vector<std::size_t>*>& gram_topics) {
  // frequency: n-gram occurrences that led to the topic
  // diversity: distinct n-grams that led to it
  std::map<std::size_t, std::pair<std::size_t, std::size_t>> tally;
  for (std::size_t g = 0; g < grams.size(); ++g) {
    for (std::size_t t : *gram_topics[g]) {
      auto& [freq, div] = tally[t];
      freq += grams[g].occurrences;
      div += 1;
    }
  }
  std::vector<ScoredTopic> scored;
  scored.reserve(tally.size());
  for (const auto& [t, fd] : tally) {
    scored.push_back({ontology.at(t), static_cast<double>(fd.first) * static_cast<double>(fd.second)});
  }
  return scored;
}

std::vector<ScoredTopic> keep_selected(const std::vector<ScoredTopic>& scored) {
  const auto chosen = elbow_select(scored);
  std::vector<ScoredTopic> out;
  for (const auto& s : scored) {
    if (std::binary_search(chosen.begin(), chosen.end(), s.topic)) out.push_back(s);
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Label matcher

LabelMatcher::LabelMatcher(const TopicOntology& ontology) {
  std::map<std::string, std::vector<std::size_t>> keys;
  for (const auto& [label, topic] : ontology.label_table()) {
    std::string key = join(tokenize(label), " ");
    if (key.empty()) continue;
    keys[key].push_back(topic);
  }
  for (auto& [key, topics] : keys) {
    std::sort(topics.begin(), topics.end());
    topics.erase(std::unique(topics.begin(), topics.end()), topics.end());
    if (by_length_.size() <= key.size()) by_length_.resize(key.size() + 1);
    Entry e;
    e.hist = histogram(key);
    e.key = key;
    e.topics = std::move(topics);
    by_length_[key.size()].push_back(std::move(e));
  }
}

std::vector<std::pair<std::size_t, double>> LabelMatcher::match(std::string_view ngram,
                                                                double threshold) const {
  std::vector<std::pair<std::size_t, double>> hits;
  const std::size_t n = ngram.size();
  if (n == 0 || by_length_.empty()) return hits;
  const auto qhist = histogram(ngram);
  // |n - m| <= (1 - t) * max(n, m) bounds the candidate label lengths.
  const auto lo = static_cast<std::size_t>(std::max(0.0, std::floor(threshold * static_cast<double>(n)) - 1));
  const auto hi = std::min<std::size_t>(
      by_length_.size() - 1, static_cast<std::size_t>(std::ceil(static_cast<double>(n) / threshold)) + 1);
  for (std::size_t m = std::max<std::size_t>(lo, 1); m <= hi; ++m) {
    const std::size_t longest = std::max(n, m);
    const std::size_t allowed = max_allowed_distance(longest, threshold);
    const std::size_t gap = n > m ? n - m : m - n;
    if (gap > allowed) continue;
    for (const auto& e : by_length_[m]) {
      std::size_t d = 0;
      if (allowed == 0) {
        if (e.key != ngram) continue;
      } else {
        if (histogram_bound(qhist, e.hist) > allowed) continue;
        d = bounded_distance(ngram, e.key, allowed);
        if (d > allowed) continue;
      }
      const double sim = 1.0 - static_cast<double>(d) / static_cast<double>(longest);
      if (sim < threshold) continue;
      for (std::size_t t : e.topics) hits.emplace_back(t, sim);
    }
  }
  std::sort(hits.begin(), hits.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first < b.first : a.second > b.second;
  });
  hits.erase(std::unique(hits.begin(), hits.end(),
                         [](const auto& a, const auto& b) { return a.first == b.first; }),
             hits.end());
  return hits;
}

// ---------------------------------------------------------------------------
// Stages

std::vector<ScoredTopic> syntactic_classify(const Document& doc, const TopicOntology& ontology,
                                            double threshold) {
  ClassifierConfig cfg;
  cfg.syntactic_threshold = threshold;
  cfg.validate();
  return Classifier(ontology, nullptr, cfg).classify(doc).syntactic;
}

std::vector<ScoredTopic> semantic_classify(const Document& doc, const TopicOntology& ontology,
                                           const EmbeddingModel& model,
                                           const ClassifierConfig& config) {
  SemanticIndex index(ontology, model, config);
  const auto grams = semantic_grams(doc.segments(), config.stopwords);
  std::vector<std::vector<std::size_t>> topics(grams.size());
  std::vector<const std::vector<std::size_t>*> refs(grams.size());
  for (std::size_t g = 0; g < grams.size(); ++g) {
    topics[g] = index.topics_for(grams[g].key);
    refs[g] = &topics[g];
  }
  return keep_selected(score_semantic(ontology, grams, refs));
}

std::vector<TopicId> elbow_select(std::vector<ScoredTopic> scores) {
  std::sort(scores.begin(), scores.end(), [](const ScoredTopic& a, const ScoredTopic& b) {
    return a.score != b.score ? a.score > b.score : a.topic < b.topic;
  });
  std::size_t distinct = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (i == 0 || scores[i].score != scores[i - 1].score) ++distinct;
  }
  std::size_t cut = scores.size();
  if (distinct > 2) {
    const double n1 = static_cast<double>(scores.size() - 1);
    const double y0 = scores.front().score;
    const double dy = scores.back().score - y0;
    double best = -1.0;
    // Perpendicular distance to the chord, up to the constant chord length.
    for (std::size_t i = 0; i < scores.size(); ++i) {
      const double dist = std::abs(dy * static_cast<double>(i) - n1 * (scores[i].score - y0));
      if (dist > best) {
        best = dist;
        cut = i + 1;
      }
    }
  }
  std::vector<TopicId> out;
  out.reserve(cut);
  for (std::size_t i = 0; i < cut; ++i) out.push_back(scores[i].topic);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<TopicId> enrich(const std::vector<TopicId>& topics, const TopicOntology& ontology) {
  std::vector<std::size_t> input;
  for (const auto& t : topics) {
    auto idx = ontology.index_of(t);
    if (!idx) throw Error(ErrorCode::not_found, "unknown topic '" + t.value + "'");
    input.push_back(*idx);
  }
  std::sort(input.begin(), input.end());
  std::vector<std::size_t> added;
  for (std::size_t i : input) {
    for (std::size_t a : ontology.ancestors_of(i)) {
      if (!std::binary_search(input.begin(), input.end(), a)) added.push_back(a);
    }
  }
  std::sort(added.begin(), added.end());
  added.erase(std::unique(added.begin(), added.end()), added.end());
  std::vector<TopicId> out;
  out.reserve(added.size());
  for (std::size_t a : added) out.push_back(ontology.at(a));
  return out;
}

// ---------------------------------------------------------------------------
// Configuration

std::unordered_set<std::string> ClassifierConfig::default_stopwords() {
  static const char* const kWords[] = {
      "a", "about", "above", "after", "again", "against", "all", "also", "am", "an", "and",
      "any", "are", "as", "at", "be", "because", "been", "before", "being", "below",
      "between", "both", "but", "by", "can", "could", "did", "do", "does", "doing", "down",
      "during", "each", "few", "for", "from", "further", "had", "has", "have", "having", "he",
      "her", "here", "hers", "herself", "him", "himself", "his", "how", "however", "i", "if",
      "in", "into", "is", "it", "its", "itself", "just", "may", "me", "might", "more", "most",
      "must", "my", "myself", "no", "nor", "not", "now", "of", "off", "on", "once", "only",
      "or", "other", "our", "ours", "ourselves", "out", "over", "own", "same", "shall", "she",
      "should", "so", "some", "such", "than", "that", "the", "their", "theirs", "them",
      "themselves", "then", "there", "these", "they", "this", "those", "through", "thus", "to",
      "too", "under", "until", "up", "upon", "us", "very", "was", "we", "were", "what", "when",
      "where", "which", "while", "who", "whom", "why", "will", "with", "within", "without",
      "would", "you", "your", "yours", "yourself", "yourselves"};
  return {std::begin(kWords), std::end(kWords)};
}

ClassifierConfig ClassifierConfig::from_json(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("classifier config: ") + e.what(), 0);
  }
  if (!j.is_object()) throw Error(ErrorCode::validation, "classifier config must be a JSON object");
  ClassifierConfig cfg;
  try {
    if (j.contains("threshold")) cfg.syntactic_threshold = j.at("threshold").get<double>();
    if (j.contains("top_k")) cfg.top_k = j.at("top_k").get<std::size_t>();
    if (j.contains("cosine_floor")) cfg.cosine_floor = j.at("cosine_floor").get<double>();
    if (j.contains("stopwords_path") && !j.at("stopwords_path").is_null()) {
      const auto path = j.at("stopwords_path").get<std::string>();
      std::ifstream in(path);
      if (!in) throw Error(ErrorCode::io, "cannot open stopword list '" + path + "'");
      cfg.stopwords.clear();
      std::string w;
      while (std::getline(in, w)) {
        auto t = trim(w);
        if (!t.empty()) cfg.stopwords.insert(normalize_label(t));
      }
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::validation, std::string("classifier config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

void ClassifierConfig::validate() const {
  if (!(syntactic_threshold > 0.0 && syntactic_threshold <= 1.0)) {
    throw Error(ErrorCode::invalid_argument, "syntactic threshold must lie in (0, 1]");
  }
  if (!(cosine_floor >= -1.0 && cosine_floor <= 1.0)) {
    throw Error(ErrorCode::invalid_argument, "cosine floor must lie in [-1, 1]");
  }
}

// ---------------------------------------------------------------------------
// Pipeline

Classifier::Classifier(const TopicOntology& ontology, const EmbeddingModel* model,
                       ClassifierConfig config)
    : ontology_(ontology), model_(model), config_(std::move(config)), matcher_(ontology) {
  config_.validate();
  if (model_ && model_->empty()) {
    throw Error(ErrorCode::validation, "embedding model has an empty vocabulary");
  }
}

TopicAnnotation Classifier::classify(const Document& doc) const {
  return classify_documents(std::span<const Document>(&doc, 1)).front();
}

std::vector<TopicAnnotation> Classifier::classify_corpus(const Corpus& corpus) const {
  return classify_documents(corpus.documents());
}

std::vector<TopicAnnotation> Classifier::classify_documents(std::span<const Document> docs) const {
  std::vector<TopicAnnotation> result(docs.size());
  std::unique_ptr<SemanticIndex> semantic;
  if (model_) semantic = std::make_unique<SemanticIndex>(ontology_, *model_, config_);

  // Batches bound the memory held by per-document n-gram lists.
  constexpr std::size_t kBatch = 2048;
  for (std::size_t begin = 0; begin < docs.size(); begin += kBatch) {
    const std::size_t end = std::min(docs.size(), begin + kBatch);
    const std::size_t count = end - begin;

    std::vector<std::vector<std::string>> syn(count);
    std::vector<std::vector<SemanticGram>> sem(count);
    parallel_for(count, [&](std::size_t i) {
      const auto segments = docs[begin + i].segments();
      syn[i] = syntactic_grams(segments);
      if (semantic) sem[i] = semantic_grams(segments, config_.stopwords);
    });

    std::unordered_map<std::string_view, std::size_t> syn_slot;
    std::vector<std::string_view> syn_unique;
    for (const auto& grams : syn) {
      for (const auto& g : grams) {
        if (syn_slot.emplace(g, syn_unique.size()).second) syn_unique.push_back(g);
      }
    }
    std::vector<std::vector<std::pair<std::size_t, double>>> syn_hits(syn_unique.size());
    parallel_for(syn_unique.size(), [&](std::size_t u) {
      syn_hits[u] = matcher_.match(syn_unique[u], config_.syntactic_threshold);
    });

    std::unordered_map<std::string_view, std::size_t> sem_slot;
    std::vector<std::string_view> sem_unique;
    for (const auto& grams : sem) {
      for (const auto& g : grams) {
        if (sem_slot.emplace(g.key, sem_unique.size()).second) sem_unique.push_back(g.key);
      }
    }
    std::vector<std::vector<std::size_t>> sem_topics(sem_unique.size());
    if (semantic) {
      parallel_for(sem_unique.size(), [&](std::size_t u) {
        sem_topics[u] = semantic->topics_for(std::string(sem_unique[u]));
      });
    }

    parallel_for(count, [&](std::size_t i) {
      TopicAnnotation& a = result[begin + i];
      a.doc_id = docs[begin + i].id;

      std::map<std::size_t, double> best;
      for (const auto& g : syn[i]) {
        for (const auto& [t, sim] : syn_hits[syn_slot.at(g)]) {
          auto [it, inserted] = best.emplace(t, sim);
          if (!inserted && sim > it->second) it->second = sim;
        }
      }
      for (const auto& [t, sim] : best) a.syntactic.push_back({ontology_.at(t), sim});

      if (semantic) {
        std::vector<const std::vector<std::size_t>*> refs;
        refs.reserve(sem[i].size());
        for (const auto& g : sem[i]) refs.push_back(&sem_topics[sem_slot.at(g.key)]);
        a.semantic = keep_selected(score_semantic(ontology_, sem[i], refs));
      }

      std::vector<TopicId> found;
      for (const auto& s : a.syntactic) found.push_back(s.topic);
      for (const auto& s : a.semantic) found.push_back(s.topic);
      std::sort(found.begin(), found.end());
      found.erase(std::unique(found.begin(), found.end()), found.end());
      a.enhanced = enrich(found, ontology_);
      a.all = found;
      a.all.insert(a.all.end(), a.enhanced.begin(), a.enhanced.end());
      std::sort(a.all.begin(), a.all.end());
    });
  }
  return result;
}

TopicAnnotation classify(const Document& doc, const TopicOntology& ontology,
                         const EmbeddingModel* model, const ClassifierConfig& config) {
  return Classifier(ontology, model, config).classify(doc);
}

// ---------------------------------------------------------------------------
// JSONL

std::string annotation_to_json(const TopicAnnotation& a) {
  json j = json::object();
  j["doc_id"] = a.doc_id;
  j["syntactic"] = json::array();
  for (const auto& s : a.syntactic) j["syntactic"].push_back({{"topic", s.topic.value}, {"score", s.score}});
  j["semantic"] = json::array();
  for (const auto& s : a.semantic) j["semantic"].push_back({{"topic", s.topic.value}, {"relevance", s.score}});
  j["enhanced"] = json::array();
  for (const auto& t : a.enhanced) j["enhanced"].push_back(t.value);
  j["union"] = json::array();
  for (const auto& t : a.all) j["union"].push_back(t.value);
  return j.dump();
}

TopicAnnotation annotation_from_json(std::string_view line, std::size_t line_no) {
  const std::string where = "annotation line " + std::to_string(line_no) + ": ";
  try {
    const json j = json::parse(line);
    TopicAnnotation a;
    a.doc_id = j.at("doc_id").get<std::string>();
    for (const auto& s : j.at("syntactic")) {
      a.syntactic.push_back({TopicId(s.at("topic").get<std::string>()), s.at("score").get<double>()});
    }
    for (const auto& s : j.at("semantic")) {
      a.semantic.push_back({TopicId(s.at("topic").get<std::string>()), s.at("relevance").get<double>()});
    }
    for (const auto& t : j.at("enhanced")) a.enhanced.emplace_back(t.get<std::string>());
    for (const auto& t : j.at("union")) a.all.emplace_back(t.get<std::string>());
    return a;
  } catch (const json::exception& e) {
    throw ParseError(where + e.what(), line_no);
  }
}

void write_annotations(std::ostream& out, const std::vector<TopicAnnotation>& annotations) {
  for (const auto& a : annotations) out << annotation_to_json(a) << '\n';
}

std::vector<TopicAnnotation> read_annotations(std::istream& in) {
  std::vector<TopicAnnotation> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    out.push_back(annotation_from_json(line, line_no));
  }
  return out;
}

std::vector<TopicAnnotation> load_annotations(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot open annotations file '" + path + "'");
  return read_annotations(in);
}

}  // namespace topicflow
