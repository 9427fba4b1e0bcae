// Prints one PASS/FAIL line per acceptance criterion; exits non-zero if any fail.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numeric>
#include <queue>
#include <set>

#include "fixture_files.hpp"
#include "planted.hpp"
#include "support.hpp"
#include "topicflow/analytics.hpp"
#include "topicflow/classifier.hpp"
#include "topicflow/emergence.hpp"
#include "topicflow/forecast.hpp"
#include "topicflow/ml.hpp"
#include "topicflow/ttf.hpp"

using namespace tfx;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::vector<std::string> words(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      cur += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    } else if (!cur.empty()) {
      out.push_back(cur);
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

bool has_run(const std::vector<std::string>& text, const std::vector<std::string>& p) {
  for (std::size_t i = 0; i + p.size() <= text.size(); ++i) {
    if (std::equal(p.begin(), p.end(), text.begin() + static_cast<std::ptrdiff_t>(i))) return true;
  }
  return false;
}

// ---- 1

Outcome classifier_fidelity() {
  const std::vector<std::string> extra = {
      "computer vision", "image segmentation", "object detection", "speech recognition", "robotics",
      "motion planning", "reinforcement learning", "graph databases", "data mining", "association rules",
      "recommender systems", "collaborative filtering", "natural language processing", "machine translation",
      "sentiment analysis", "knowledge graphs", "graph embeddings"};
  std::string csv(kCsOntology);
  const char* parents[] = {"artificial intelligence", "computer vision", "computer vision", "artificial intelligence",
                           "artificial intelligence", "robotics", "machine learning", "databases", "databases",
                           "data mining", "information retrieval", "recommender systems", "artificial intelligence",
                           "natural language processing", "natural language processing", "semantic web",
                           "knowledge graphs"};
  for (std::size_t i = 0; i < extra.size(); ++i) csv += std::string(parents[i]) + ",superTopicOf," + extra[i] + "\n";
  const auto onto = ontology_from_csv(csv);
  if (onto.size() != 30) return {false, "fixture has " + std::to_string(onto.size()) + " topics"};

  std::vector<std::string> labels;
  for (const auto& [label, idx] : onto.label_table()) labels.push_back(label);
  const char* filler[] = {"we", "study", "a", "novel", "approach", "for", "large", "scale", "results", "show"};
  std::mt19937 rng(21);
  std::vector<Document> docs;
  for (int i = 0; i < 20; ++i) {
    std::string title, abstract;
    for (int k = 0; k < 1 + i % 3; ++k) {
      title += std::string(filler[rng() % 10]) + " " + labels[rng() % labels.size()] + ". ";
    }
    for (int k = 0; k < 4; ++k) abstract += std::string(filler[rng() % 10]) + " ";
    abstract += labels[rng() % labels.size()] + ".";
    docs.push_back(doc("d" + std::to_string(i), DocumentKind::publication, 2010, title, abstract));
  }
  docs.push_back(doc("nn", DocumentKind::publication, 2010, "neural networks"));
  ClassifierConfig cfg;
  cfg.syntactic_threshold = 1.0;
  const auto t0 = Clock::now();
  const Classifier classifier(onto, nullptr, cfg);
  auto ann = classifier.classify_corpus(Corpus::from_documents(docs));
  const double secs = seconds_since(t0);

  std::size_t mismatches = 0;
  for (std::size_t i = 0; i < 20; ++i) {
    std::set<TopicId> expect;
    for (const std::string& field : {docs[i].title, docs[i].abstract}) {
      // Sentences are separate clauses; scan each on its own.
      std::size_t start = 0;
      while (start < field.size()) {
        const auto stop = std::min(field.find('.', start), field.size());
        const auto text = words(field.substr(start, stop - start));
        for (const auto& [label, idx] : onto.label_table()) {
          if (has_run(text, words(label))) expect.insert(onto.at(idx));
        }
        start = stop + 1;
      }
    }
    std::set<TopicId> got;
    for (const auto& s : ann[i].syntactic) got.insert(s.topic);
    mismatches += got != expect;
  }
  const auto& nn = ann[20].all;
  const bool enriched = std::count(nn.begin(), nn.end(), TopicId("machine learning")) &&
                        std::count(nn.begin(), nn.end(), TopicId("artificial intelligence"));
  return {mismatches == 0 && enriched && secs < 1.0,
          std::to_string(mismatches) + " mismatched documents, enrichment " + (enriched ? "ok" : "missing") +
              ", " + fmt(secs) + " s"};
}

// ---- 2

std::size_t dp_distance(const std::string& a, const std::string& b) {
  std::vector<std::vector<std::size_t>> d(a.size() + 1, std::vector<std::size_t>(b.size() + 1));
  for (std::size_t i = 0; i <= a.size(); ++i) d[i][0] = i;
  for (std::size_t j = 0; j <= b.size(); ++j) d[0][j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1, d[i - 1][j - 1] + (a[i - 1] != b[j - 1])});
    }
  }
  return d[a.size()][b.size()];
}

Outcome levenshtein_kernel() {
  std::mt19937 rng(2);
  auto rand_str = [&] {
    std::string s(rng() % 31, 'a');
    for (char& c : s) c = "abcde fgh"[rng() % 9];
    return s;
  };
  std::size_t bad = 0;
  const auto t0 = Clock::now();
  for (int i = 0; i < 10000; ++i) {
    const auto a = rand_str(), b = rand_str();
    bad += levenshtein_distance(a, b) != dp_distance(a, b);
  }
  const double secs = seconds_since(t0);
  return {bad == 0 && secs < 5.0, std::to_string(bad) + " mismatches in 10000 pairs, " + fmt(secs) + " s"};
}

// ---- 3

Outcome closure_correctness() {
  std::mt19937 rng(3);
  std::size_t bad = 0;
  for (int round = 0; round < 50; ++round) {
    const int n = 2 + static_cast<int>(rng() % 199);
    std::string csv;
    std::vector<std::vector<int>> parents(n);
    for (int child = 1; child < n; ++child) {
      for (int k = 0; k < 3; ++k) {
        if (rng() % 2) continue;
        const int p = static_cast<int>(rng() % child);
        if (std::count(parents[child].begin(), parents[child].end(), p)) continue;
        parents[child].push_back(p);
        csv += "t" + std::to_string(p) + ",superTopicOf,t" + std::to_string(child) + "\n";
      }
    }
    for (int i = 0; i < n; ++i) csv += "t" + std::to_string(i) + ",,\n";
    const auto o = ontology_from_csv(csv);
    for (int i = 0; i < n; ++i) {
      std::set<std::string> seen;
      std::queue<int> q;
      q.push(i);
      while (!q.empty()) {
        const int x = q.front();
        q.pop();
        for (int p : parents[x]) {
          if (seen.insert("t" + std::to_string(p)).second) q.push(p);
        }
      }
      std::vector<TopicId> expect;
      for (const auto& s : seen) expect.emplace_back(s);
      std::sort(expect.begin(), expect.end());
      bad += o.super_topics(TopicId("t" + std::to_string(i)), true) != expect;
    }
  }
  return {bad == 0, std::to_string(bad) + " mismatched closures over 50 DAGs"};
}

// ---- 4

Outcome index_semantics() {
  std::mt19937 rng(4);
  const AffiliationType affs[] = {AffiliationType::academic, AffiliationType::industrial,
                                  AffiliationType::collaborative, AffiliationType::other_typed,
                                  AffiliationType::unknown};
  std::string csv;
  for (int t = 0; t < 100; ++t) csv += "t" + std::to_string(t) + ",,\n";
  std::vector<GDoc> docs;
  for (int i = 0; i < 5000; ++i) {
    std::vector<std::string> ts;
    for (int k = 0; k < 1 + static_cast<int>(rng() % 3); ++k) {
      auto t = "t" + std::to_string(rng() % 100);
      if (!std::count(ts.begin(), ts.end(), t)) ts.push_back(t);
    }
    docs.push_back({"d" + std::to_string(i), rng() % 3 ? DocumentKind::publication : DocumentKind::patent,
                    2000 + static_cast<int>(rng() % 10), affs[rng() % 5], ts});
  }
  const auto g = graph_of(shared_ontology(csv), docs);
  std::size_t bad = 0;
  for (int t = 0; t < 100; ++t) {
    const std::string label = "t" + std::to_string(t);
    double aca = 0, ind = 0, pap = 0, pat = 0, n = 0;
    for (const auto& d : docs) {
      if (!std::count(d.topics.begin(), d.topics.end(), label)) continue;
      ++n;
      aca += d.affiliation == AffiliationType::academic || d.affiliation == AffiliationType::collaborative;
      ind += d.affiliation == AffiliationType::industrial || d.affiliation == AffiliationType::collaborative;
      (d.kind == DocumentKind::publication ? pap : pat) += 1;
    }
    const double ai = academia_industry_index(g, TopicId(label));
    const double pp = papers_patents_index(g, TopicId(label));
    bad += std::abs(ai - (aca - ind) / n) > 1e-12 || std::abs(pp - (pap - pat) / n) > 1e-12;
    bad += ai < -1 || ai > 1 || pp < -1 || pp > 1;
    bad += (ai > 0) != (aca > ind) || (ai < 0) != (aca < ind) || (pp > 0) != (pap > pat) || (pp < 0) != (pap < pat);
  }
  return {bad == 0, std::to_string(bad) + " failed checks over 100 topics"};
}

// ---- 5

Outcome emergence_ordering() {
  std::mt19937 rng(5);
  std::string csv;
  std::vector<GDoc> docs;
  for (int t = 0; t < 40; ++t) {
    const std::string label = "t" + std::to_string(t);
    csv += label + ",,\n";
    const int y0 = 1995 + static_cast<int>(rng() % 10);
    for (int i = 0; i < 10; ++i) {
      docs.push_back({label + "a" + std::to_string(i), DocumentKind::publication, y0, AffiliationType::academic, {label}});
      docs.push_back({label + "i" + std::to_string(i), DocumentKind::publication, y0 + 3, AffiliationType::industrial, {label}});
    }
  }
  const auto r = lag_report(graph_of(shared_ontology(csv), docs));
  const double share = r.first_share[static_cast<int>(Stream::RA)];
  for (const auto& p : r.pairs) {
    if (p.from == Stream::RA && p.to == Stream::RI) {
      const bool ok = share == 1.0 && p.topics == 40 && p.mean_years == 3.0 && p.std_years == 0.0;
      return {ok, "RA first share " + fmt(share) + ", RA->RI " + fmt(p.mean_years) + "±" + fmt(p.std_years) +
                      " years over " + std::to_string(p.topics) + " topics"};
    }
  }
  return {false, "no RA->RI pair in the report"};
}

// ---- 6

std::vector<Community> cpm_oracle(const TopicNetwork& n, std::size_t k) {
  std::vector<TopicId> nodes;
  for (const auto& [t, w] : n.node_weight) nodes.push_back(t);
  auto adjacent = [&](std::size_t i, std::size_t j) {
    auto a = nodes[i], b = nodes[j];
    if (b < a) std::swap(a, b);
    return n.edge_weight.count({a, b}) > 0;
  };
  std::vector<std::vector<std::size_t>> cliques;
  std::vector<std::size_t> cur;
  std::function<void(std::size_t)> rec = [&](std::size_t start) {
    if (cur.size() == k) {
      cliques.push_back(cur);
      return;
    }
    for (std::size_t v = start; v < nodes.size(); ++v) {
      bool ok = true;
      for (std::size_t u : cur) ok = ok && adjacent(u, v);
      if (!ok) continue;
      cur.push_back(v);
      rec(v + 1);
      cur.pop_back();
    }
  };
  rec(0);
  std::vector<std::size_t> parent(cliques.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
    return parent[x] == x ? x : parent[x] = find(parent[x]);
  };
  for (std::size_t i = 0; i < cliques.size(); ++i) {
    for (std::size_t j = i + 1; j < cliques.size(); ++j) {
      std::vector<std::size_t> common;
      std::set_intersection(cliques[i].begin(), cliques[i].end(), cliques[j].begin(), cliques[j].end(),
                            std::back_inserter(common));
      if (common.size() + 1 >= k) parent[find(i)] = find(j);
    }
  }
  std::map<std::size_t, std::set<TopicId>> groups;
  for (std::size_t i = 0; i < cliques.size(); ++i) {
    for (std::size_t v : cliques[i]) groups[find(i)].insert(nodes[v]);
  }
  std::vector<Community> out;
  for (const auto& [r, g] : groups) out.emplace_back(g.begin(), g.end());
  std::sort(out.begin(), out.end());
  return out;
}

TopicNetwork network_of(const std::vector<std::pair<std::string, std::string>>& edges) {
  TopicNetwork n;
  for (const auto& [x, y] : edges) {
    TopicId a(x), b(y);
    if (b < a) std::swap(a, b);
    n.edge_weight[{a, b}] = 1;
    ++n.node_weight[a];
    ++n.node_weight[b];
  }
  return n;
}

Outcome clique_percolation_check() {
  std::mt19937 rng(6);
  std::size_t bad = 0;
  for (int round = 0; round < 200; ++round) {
    const int n = 2 + static_cast<int>(rng() % 29);
    const unsigned density = 2 + rng() % 5;
    std::vector<std::pair<std::string, std::string>> edges;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (rng() % 10 < density) edges.push_back({"v" + std::to_string(i), "v" + std::to_string(j)});
      }
    }
    const auto net = network_of(edges);
    for (std::size_t k : {3u, 4u}) bad += clique_percolation(net, k) != cpm_oracle(net, k);
  }
  const auto bowtie = network_of({{"a", "b"}, {"b", "c"}, {"a", "c"}, {"b", "d"}, {"c", "d"}});
  const bool one = clique_percolation(bowtie, 3) == std::vector<Community>{ids({"a", "b", "c", "d"})};
  return {bad == 0 && one, std::to_string(bad) + " mismatches over 400 runs, shared-edge triangles " +
                               (one ? "form one community" : "split")};
}

// ---- 7

Outcome augur_detection() {
  std::mt19937 rng(7);
  std::size_t detected = 0, correct = 0, found = 0;
  for (int w = 0; w < 50; ++w) {
    const int n = 20;
    std::vector<std::pair<std::string, std::string>> noise;
    std::vector<long> base, drop;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (rng() % 3) continue;
        noise.push_back({"n" + std::to_string(i), "n" + std::to_string(j)});
        base.push_back(5 + static_cast<long>(rng() % 10));
        drop.push_back(static_cast<long>(rng() % 2));
      }
    }
    const std::size_t size = 3 + rng() % 2;
    std::vector<std::string> plant;
    for (std::size_t i = 0; i < size; ++i) plant.push_back("p" + std::to_string(w) + "_" + std::to_string(i));
    // The plant's edges share one growth rate; only their offsets differ.
    const long slope = 1 + static_cast<long>(rng() % 3);
    std::vector<long> offset;
    for (std::size_t i = 0; i < size * size; ++i) offset.push_back(1 + static_cast<long>(rng() % 4));
    std::vector<TopicNetwork> nets;
    for (int y = 0; y < 5; ++y) {
      TopicNetwork net;
      net.year = 2000 + y;
      auto add = [&](const std::string& x, const std::string& z, long weight) {
        TopicId a(x), b(z);
        if (b < a) std::swap(a, b);
        net.edge_weight[{a, b}] = weight;
        net.node_weight[a] += weight;
        net.node_weight[b] += weight;
      };
      // Flat or shrinking noise.
      for (std::size_t e = 0; e < noise.size(); ++e) add(noise[e].first, noise[e].second, base[e] - drop[e] * y);
      for (std::size_t i = 0; i < size; ++i) {
        for (std::size_t j = i + 1; j < size; ++j) add(plant[i], plant[j], offset[i * size + j] + slope * y);
      }
      add(plant[0], "n0", 3);
      nets.push_back(std::move(net));
    }
    std::vector<TopicId> expect;
    for (const auto& p : plant) expect.emplace_back(p);
    std::sort(expect.begin(), expect.end());
    const auto got = detect_emerging(nets, 3);
    detected += got.size();
    for (const auto& c : got) correct += c == expect;
    found += std::count(got.begin(), got.end(), expect) > 0;
  }
  const double p = detected ? static_cast<double>(correct) / static_cast<double>(detected) : 0.0;
  const double r = static_cast<double>(found) / 50.0;
  return {p >= 0.9 && r >= 0.9, "precision " + fmt(p) + ", recall " + fmt(r) + " over 50 windows"};
}

// ---- 8

Outcome forecast_harness() {
  std::mt19937_64 rng(8);
  std::poisson_distribution<long> noise(3.0);
  std::vector<ForecastSample> samples;
  for (int i = 0; i < 2000; ++i) {
    ForecastSample s;
    s.topic = TopicId("t" + std::to_string(i));
    s.window_start = 2000;
    s.label = rng() % 3 == 0;
    for (auto& v : s.streams) v.resize(5);
    const long slope = s.label ? 1 + static_cast<long>(rng() % 3) : 0;
    for (int y = 0; y < 5; ++y) {
      s.streams[0][y] = noise(rng);
      s.streams[1][y] = noise(rng) + slope * y;
      s.streams[2][y] = noise(rng);
      s.streams[3][y] = noise(rng) + slope * y;
    }
    samples.push_back(std::move(s));
  }
  ExperimentParams p;
  const auto t0 = Clock::now();
  const auto r = run_experiment(samples, {"RA-RI-PA-PI", "PA"}, p);
  const double secs = seconds_since(t0);
  const double gap = r[0].metrics.f1 - r[1].metrics.f1;
  return {gap >= 0.10 && secs < 60.0, "RA-RI-PA-PI F1 " + fmt(100 * r[0].metrics.f1) + ", PA F1 " +
                                          fmt(100 * r[1].metrics.f1) + ", " + fmt(secs) + " s"};
}

// ---- 9

Outcome ml_kernel() {
  std::mt19937 rng(9);
  std::normal_distribution<double> g(0, 1);
  std::size_t bad = 0;
  for (int inst = 0; inst < 20; ++inst) {
    const std::size_t n = 5 + rng() % 20, d = 1 + rng() % 5;
    std::vector<std::vector<double>> rows(n, std::vector<double>(d));
    std::vector<int> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (auto& x : rows[i]) x = g(rng);
      y[i] = static_cast<int>(rng() % 2);
    }
    const auto data = ml::Dataset::from_rows(rows, y);
    std::vector<double> w(d);
    for (auto& x : w) x = g(rng);
    const double b = g(rng), l2 = 0.1;
    auto loss = [&](const std::vector<double>& ww, double bb) {
      double s = 0;
      for (std::size_t i = 0; i < n; ++i) {
        double z = bb;
        for (std::size_t j = 0; j < d; ++j) z += ww[j] * rows[i][j];
        s += (z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z))) - y[i] * z;
      }
      double reg = 0;
      for (double x : ww) reg += x * x;
      return s / static_cast<double>(n) + 0.5 * l2 * reg;
    };
    const auto grad = ml::LogisticRegression::gradient(data, w, b, l2);
    const double h = 1e-5;
    for (std::size_t j = 0; j <= d; ++j) {
      auto wp = w, wm = w;
      double bp = b, bm = b;
      if (j < d) {
        wp[j] += h;
        wm[j] -= h;
      } else {
        bp += h;
        bm -= h;
      }
      const double fd = (loss(wp, bp) - loss(wm, bm)) / (2 * h);
      bad += std::abs(grad[j] - fd) > 1e-6 * std::max(1.0, std::abs(fd));
    }
  }
  const std::vector<int> yt = {1, 1, 1, 1, 1, 0, 0}, yp = {1, 1, 1, 0, 0, 1, 0};
  const auto m = ml::prf(yt, yp);
  const bool prf_ok = std::abs(m.precision - 0.75) < 1e-12 && std::abs(m.recall - 0.6) < 1e-12 &&
                      std::abs(m.f1 - 0.6667) < 1e-4;
  return {bad == 0 && prf_ok, std::to_string(bad) + " gradient mismatches; prf " + fmt(m.precision) + "/" +
                                  fmt(m.recall) + "/" + fmt(m.f1)};
}

// ---- 10

Outcome ttf_cube() {
  std::mt19937_64 rng(10);
  const char* pool[] = {"bloom", "filter", "hash", "table", "graph", "index", "neural", "net"};
  const std::vector<std::string> techs = {"bloom filter", "hash table", "graph index", "neural net"};
  const char* topics[] = {"databases", "semantic web", "deep learning"};
  std::size_t bad = 0;
  for (int round = 0; round < 20; ++round) {
    std::vector<Document> docs;
    std::vector<TopicAnnotation> ann;
    for (int i = 0; i < 100; ++i) {
      std::string title;
      for (int w = 0; w < 5; ++w) title += std::string(pool[rng() % 8]) + " ";
      docs.push_back(doc("d" + std::to_string(i), rng() % 4 ? DocumentKind::publication : DocumentKind::patent,
                         2000 + static_cast<int>(rng() % 5), title));
      TopicAnnotation a;
      a.doc_id = docs.back().id;
      for (const char* t : topics) {
        if (rng() % 2) a.all.emplace_back(t);
      }
      ann.push_back(a);
    }
    const auto cube = build_cube(Corpus::from_documents(docs), ann, techs, {2000, 2004, 1});
    for (std::size_t t = 0; t < cube.technologies.size(); ++t) {
      for (std::size_t k = 0; k < cube.topics.size(); ++k) {
        for (std::size_t y = 0; y < cube.years(); ++y) {
          long expect = 0;
          for (std::size_t i = 0; i < docs.size(); ++i) {
            const auto& d = docs[i];
            if (d.kind != DocumentKind::publication || d.year != 2000 + static_cast<int>(y)) continue;
            if (!has_run(words(d.title), words(cube.technologies[t]))) continue;
            expect += std::count(ann[i].all.begin(), ann[i].all.end(), cube.topics[k]);
          }
          bad += cube.at(t, k, y) != expect;
        }
      }
    }
  }
  const auto w = propagation_world(60, 4, 17);
  const auto cube = build_cube(w.corpus, w.annotations, w.technologies, {w.first_year, w.last_year, 10});
  PredictParams p;
  p.min_positives = 5;
  const auto r = predict_adoption(cube, adoption_samples(cube), p);
  bool sorted = !r.per_topic.empty();
  for (std::size_t i = 1; i < r.per_topic.size(); ++i) sorted &= r.per_topic[i - 1].metrics.f1 >= r.per_topic[i].metrics.f1;
  const bool layout = adoption_to_csv(r).rfind("topic,samples,positives,precision,recall,f1\n", 0) == 0;
  return {bad == 0 && sorted && layout && r.overall.f1 > r.baseline.f1,
          std::to_string(bad) + " cube mismatches; per-topic table " + (sorted ? "sorted" : "unsorted") +
              "; F1 " + fmt(100 * r.overall.f1) + " vs baseline " + fmt(100 * r.baseline.f1)};
}

// ---- CLI helpers

int cli(const std::string& args) {
  const std::string cmd = std::string("\"") + TF_CLI_PATH + "\" " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

struct World {
  fs::path dir;
  std::string onto, corpus, reg, first_topic;
  World(const std::string& name, std::size_t topics, std::size_t docs) : dir(scratch_dir(name)) {
    auto w = synthetic_world(topics, docs, 12);
    onto = write_file(dir / "onto.csv", w.ontology_csv).string();
    corpus = write_file(dir / "corpus.jsonl", w.corpus_jsonl).string();
    reg = write_file(dir / "reg.csv", kRegistryCsv).string();
    first_topic = w.labels[0];
  }
  ~World() { fs::remove_all(dir); }
  std::string p(const std::string& f) const { return (dir / f).string(); }

  // classify -> build-kg -> trends -> emergence -> forecast; false on the first failure.
  bool pipeline(const std::string& extra, const std::string& forecast_args) const {
    const std::string g = " --ontology " + onto + " --corpus " + corpus + " --graph " + p("kg.nt");
    return cli(extra + "classify --ontology " + onto + " --corpus " + corpus + " --out " + p("ann.jsonl")) == 0 &&
           cli(extra + "build-kg --ontology " + onto + " --corpus " + corpus + " --annotations " + p("ann.jsonl") +
               " --registry " + reg + " --out " + p("kg.nt")) == 0 &&
           cli(extra + "trends" + g + " --topic \"" + first_topic + "\" --indexes " + p("idx.csv") + " --lags " +
               p("lags.json") + " --out " + p("trends.csv")) == 0 &&
           cli(extra + "emergence" + g + " --networks " + p("nets.csv") + " --out " + p("emergence.json")) == 0 &&
           cli(extra + "forecast" + g + " " + forecast_args + " --samples " +
               p("samples.csv") + " --out " + p("forecast.csv")) == 0;
  }

  std::map<std::string, std::string> outputs() const {
    std::map<std::string, std::string> out;
    for (const auto& e : fs::directory_iterator(dir)) out[e.path().filename().string()] = read_file(e.path());
    return out;
  }
};

// ---- 11

Outcome determinism() {
  World w("accept11", 200, 2000);
  const std::string forecast = "--emerged-lt 3 --label-gt 3 --combo RA-RI-PA-PI --combo RI --model random_forest --n-trees 15 --folds 5";
  if (!w.pipeline("--threads 1 ", forecast)) return {false, "pipeline failed with 1 thread"};
  const auto one = w.outputs();
  if (!w.pipeline("--threads 4 ", forecast)) return {false, "pipeline failed with 4 threads"};
  const auto four = w.outputs();
  std::size_t differ = 0;
  for (const auto& [name, body] : one) differ += !four.count(name) || four.at(name) != body;
  return {differ == 0 && one.size() == four.size(),
          std::to_string(one.size()) + " files compared, " + std::to_string(differ) + " differ"};
}

// ---- 12

Outcome desk_scale() {
  World w("accept12", 1000, 10000);
  const auto t0 = Clock::now();
  const bool ok = w.pipeline("", "");
  const double secs = seconds_since(t0);
  return {ok && secs < 60.0, std::string(ok ? "completed" : "failed") + " in " + fmt(secs) + " s"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"classifier fidelity", classifier_fidelity},
      {"levenshtein kernel", levenshtein_kernel},
      {"closure correctness", closure_correctness},
      {"index semantics", index_semantics},
      {"emergence ordering", emergence_ordering},
      {"clique percolation", clique_percolation_check},
      {"accelerating-clique detection", augur_detection},
      {"forecast harness", forecast_harness},
      {"ml kernel", ml_kernel},
      {"ttf cube", ttf_cube},
      {"determinism", determinism},
      {"end-to-end desk scale", desk_scale},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS " : "FAIL ") << i + 1 << " " << criteria[i].first << ": " << o.detail << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
