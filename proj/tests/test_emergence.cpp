#include <algorithm>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "support.hpp"
#include "topicflow/emergence.hpp"

using namespace tfx;

namespace {

using Edge = std::pair<std::string, std::string>;

TopicNetwork net(int year, const std::vector<std::pair<Edge, long>>& edges) {
  TopicNetwork n;
  n.year = year;
  for (const auto& [e, w] : edges) {
    TopicId a(e.first), b(e.second);
    if (b < a) std::swap(a, b);
    n.edge_weight[{a, b}] = w;
    n.node_weight[a] += w;
    n.node_weight[b] += w;
  }
  return n;
}

struct UnionFind {
  std::vector<std::size_t> p;
  explicit UnionFind(std::size_t n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  std::size_t find(std::size_t x) { return p[x] == x ? x : p[x] = find(p[x]); }
  void join(std::size_t a, std::size_t b) { p[find(a)] = find(b); }
};

// Every k-subset that is a clique, adjacency by k-1 shared nodes, components.
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
  UnionFind uf(cliques.size());
  for (std::size_t i = 0; i < cliques.size(); ++i) {
    for (std::size_t j = i + 1; j < cliques.size(); ++j) {
      std::vector<std::size_t> common;
      std::set_intersection(cliques[i].begin(), cliques[i].end(), cliques[j].begin(), cliques[j].end(),
                            std::back_inserter(common));
      if (common.size() + 1 >= k) uf.join(i, j);
    }
  }
  std::map<std::size_t, std::set<TopicId>> groups;
  for (std::size_t i = 0; i < cliques.size(); ++i) {
    for (std::size_t v : cliques[i]) groups[uf.find(i)].insert(nodes[v]);
  }
  std::vector<Community> out;
  for (const auto& [r, g] : groups) out.emplace_back(g.begin(), g.end());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<TopicNetwork> window(int first, const std::vector<std::vector<std::pair<Edge, long>>>& years) {
  std::vector<TopicNetwork> out;
  for (std::size_t i = 0; i < years.size(); ++i) out.push_back(net(first + static_cast<int>(i), years[i]));
  return out;
}

GoldStandard gold_of(std::vector<std::vector<const char*>> ancestor_sets) {
  GoldStandard g;
  int i = 0;
  for (const auto& a : ancestor_sets) {
    GoldEntry e;
    e.emerging_topic = "e" + std::to_string(i++);
    e.debut_year = 2000;
    for (const char* x : a) e.ancestors.emplace_back(x);
    std::sort(e.ancestors.begin(), e.ancestors.end());
    g.entries.push_back(e);
  }
  return g;
}

}  // namespace

TEST_CASE("one paper with three topics") {
  auto onto = shared_ontology("a,,\nb,,\nc,,\nd,,\n");
  auto g = graph_of(onto, {{"p", DocumentKind::publication, 2001, AffiliationType::academic, {"a", "b", "c"}}});
  auto n = build_topic_network(g, 2001);
  CHECK(n.year == 2001);
  CHECK(n.node_weight == std::map<TopicId, long>{{TopicId("a"), 1}, {TopicId("b"), 1}, {TopicId("c"), 1}});
  CHECK(n.edge_weight.size() == 3);
  for (const auto& [e, w] : n.edge_weight) {
    CHECK(e.first < e.second);
    CHECK(w == 1);
  }
  CHECK(build_topic_network(g, 2002).node_weight.empty());
}

TEST_CASE("network weights equal a pairwise recount") {
  auto onto = shared_ontology("a,,\nb,,\nc,,\nd,,\ne,,\n");
  const std::vector<std::string> all = {"a", "b", "c", "d", "e"};
  std::mt19937 rng(12);
  std::vector<GDoc> docs;
  for (int i = 0; i < 300; ++i) {
    std::vector<std::string> ts;
    for (const auto& t : all) {
      if (rng() % 3 == 0) ts.push_back(t);
    }
    docs.push_back({"d" + std::to_string(i), rng() % 4 ? DocumentKind::publication : DocumentKind::patent,
                    2000 + static_cast<int>(rng() % 3), AffiliationType::unknown, ts});
  }
  auto g = graph_of(onto, docs);
  auto nets = build_topic_networks(g, 2000, 2002);
  REQUIRE(nets.size() == 3);
  for (const auto& n : nets) {
    std::map<TopicId, long> nodes;
    std::map<std::pair<TopicId, TopicId>, long> edges;
    std::size_t max_topics = 0;
    for (const auto& d : docs) {
      if (d.year != n.year || d.kind != DocumentKind::publication) continue;
      max_topics = std::max(max_topics, d.topics.size());
      for (std::size_t i = 0; i < d.topics.size(); ++i) {
        ++nodes[TopicId(d.topics[i])];
        for (std::size_t j = i + 1; j < d.topics.size(); ++j) {
          ++edges[{TopicId(d.topics[i]), TopicId(d.topics[j])}];
        }
      }
    }
    CHECK(n.node_weight == nodes);
    CHECK(n.edge_weight == edges);
    CHECK(n == build_topic_network(g, n.year));
    for (const auto& [t, w] : n.node_weight) {
      long incident = 0;
      for (const auto& [e, ew] : n.edge_weight) {
        if (e.first == t || e.second == t) incident += ew;
      }
      CHECK(incident <= w * static_cast<long>(max_topics - 1));
    }
  }
}

TEST_CASE("two papers sharing a pair") {
  auto onto = shared_ontology("a,,\nb,,\nc,,\n");
  auto g = graph_of(onto, {{"p1", DocumentKind::publication, 2001, AffiliationType::unknown, {"a", "b"}},
                           {"p2", DocumentKind::publication, 2001, AffiliationType::unknown, {"a", "b", "c"}}});
  auto n = build_topic_network(g, 2001);
  CHECK(n.edge_weight.at({TopicId("a"), TopicId("b")}) == 2);
}

TEST_CASE("least-squares slope") {
  CHECK(trend_slope({1, 2, 3, 4, 5}) == doctest::Approx(1.0));
  CHECK(trend_slope({3, 3, 3, 3, 3}) == 0.0);
  std::mt19937 rng(2);
  for (int i = 0; i < 100; ++i) {
    std::vector<double> y(5);
    for (double& v : y) v = rng() % 10;
    // Closed form for x = 0..4: sum((x - 2) * y) / 10.
    double num = 0;
    for (int x = 0; x < 5; ++x) num += (x - 2) * y[x];
    CHECK(trend_slope(y) == doctest::Approx(num / 10.0));
  }
}

TEST_CASE("acceleration graph keeps growing edges only") {
  auto nets = window(2000, {
                               {{{"a", "b"}, 1}, {{"c", "d"}, 3}, {{"e", "f"}, 4}},
                               {{{"a", "b"}, 2}, {{"c", "d"}, 3}},
                               {{{"a", "b"}, 3}, {{"c", "d"}, 3}},
                               {{{"a", "b"}, 4}, {{"c", "d"}, 3}},
                               {{{"a", "b"}, 5}, {{"c", "d"}, 3}},
                           });
  for (double pct : {0.0, 0.5, 1.0}) {
    AccelerationOptions opt;
    opt.growth_percentile = pct;
    auto acc = acceleration_graph(nets, opt);
    CHECK(acc.year == 2004);
    REQUIRE(acc.edge_weight.size() == 1);
    CHECK(acc.edge_weight.at({TopicId("a"), TopicId("b")}) == 1000);
    CHECK(acc.node_weight.at(TopicId("a")) == 1000);
  }
  // Two years of support is enough; one is not.
  auto once = window(2000, {{{{"e", "f"}, 1}}, {}, {}, {}, {{{"e", "f"}, 9}}});
  CHECK(acceleration_graph(once).edge_weight.size() == 1);
  auto single = window(2000, {{}, {}, {}, {}, {{{"e", "f"}, 9}}});
  CHECK(acceleration_graph(single).edge_weight.empty());
  CHECK_THROWS_AS(acceleration_graph(std::vector<TopicNetwork>(nets.begin(), nets.begin() + 4)), Error);
  auto gap = nets;
  gap[2].year = 2010;
  CHECK_THROWS_AS(acceleration_graph(gap), Error);
  AccelerationOptions bad;
  bad.growth_percentile = 1.5;
  CHECK_THROWS_AS(acceleration_graph(nets, bad), Error);
}

TEST_CASE("raising the percentile never adds edges") {
  std::mt19937 rng(31);
  for (int round = 0; round < 30; ++round) {
    std::vector<std::vector<std::pair<Edge, long>>> years(5);
    for (int e = 0; e < 40; ++e) {
      Edge edge{"n" + std::to_string(rng() % 12), "m" + std::to_string(rng() % 12)};
      for (auto& y : years) {
        if (rng() % 3) y.push_back({edge, 1 + static_cast<long>(rng() % 7)});
      }
    }
    auto nets = window(1990, years);
    std::set<std::pair<TopicId, TopicId>> prev;
    bool first = true;
    for (double pct = 0.0; pct <= 1.0; pct += 0.1) {
      AccelerationOptions opt;
      opt.growth_percentile = pct;
      std::set<std::pair<TopicId, TopicId>> cur;
      for (const auto& [e, w] : acceleration_graph(nets, opt).edge_weight) cur.insert(e);
      if (!first) CHECK(std::includes(prev.begin(), prev.end(), cur.begin(), cur.end()));
      prev = cur;
      first = false;
    }
  }
}

TEST_CASE("clique percolation examples") {
  auto tri = net(0, {{{"a", "b"}, 1}, {{"b", "c"}, 1}, {{"a", "c"}, 1}});
  CHECK(clique_percolation(tri, 3) == std::vector<Community>{ids({"a", "b", "c"})});
  auto shared = net(0, {{{"a", "b"}, 1}, {{"b", "c"}, 1}, {{"a", "c"}, 1}, {{"b", "d"}, 1}, {{"c", "d"}, 1}});
  CHECK(clique_percolation(shared, 3) == std::vector<Community>{ids({"a", "b", "c", "d"})});
  auto disjoint = net(0, {{{"a", "b"}, 1}, {{"b", "c"}, 1}, {{"a", "c"}, 1},
                          {{"x", "y"}, 1}, {{"y", "z"}, 1}, {{"x", "z"}, 1}});
  CHECK(clique_percolation(disjoint, 3) == std::vector<Community>{ids({"a", "b", "c"}), ids({"x", "y", "z"})});
  // Two triangles meeting at one node stay separate and share it.
  auto bowtie = net(0, {{{"a", "b"}, 1}, {{"b", "c"}, 1}, {{"a", "c"}, 1}, {{"c", "d"}, 1}, {{"d", "e"}, 1}, {{"c", "e"}, 1}});
  CHECK(clique_percolation(bowtie, 3) == std::vector<Community>{ids({"a", "b", "c"}), ids({"c", "d", "e"})});
  CHECK_THROWS_AS(clique_percolation(tri, 2), Error);
  CHECK(clique_percolation(tri, 4).empty());
}

TEST_CASE("clique percolation equals brute force on random graphs") {
  std::mt19937 rng(99);
  for (int round = 0; round < 60; ++round) {
    const int n = 4 + static_cast<int>(rng() % 20);
    const int density = 2 + static_cast<int>(rng() % 5);
    std::vector<std::pair<Edge, long>> edges;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (static_cast<int>(rng() % 10) < density) {
          edges.push_back({{"v" + std::to_string(i), "v" + std::to_string(j)}, 1});
        }
      }
    }
    auto g = net(0, edges);
    for (std::size_t k : {3u, 4u, 5u}) {
      auto got = clique_percolation(g, k);
      CHECK(got == cpm_oracle(g, k));
      for (const auto& c : got) CHECK(c.size() >= k);
    }
  }
}

TEST_CASE("planted accelerating triangle among flat noise") {
  std::mt19937 rng(5);
  std::vector<std::vector<std::pair<Edge, long>>> years(5);
  std::vector<std::pair<Edge, long>> flat;
  for (int i = 0; i < 12; ++i) {
    for (int j = i + 1; j < 12; ++j) {
      if (rng() % 2) flat.push_back({{"n" + std::to_string(i), "n" + std::to_string(j)}, 1 + static_cast<long>(rng() % 5)});
    }
  }
  for (int y = 0; y < 5; ++y) {
    years[y] = flat;
    for (Edge e : {Edge{"x", "y"}, Edge{"y", "z"}, Edge{"x", "z"}}) years[y].push_back({e, 1 + 2 * y});
    years[y].push_back({{"x", "n0"}, 2});
  }
  auto nets = window(2000, years);
  CHECK(detect_emerging(nets) == std::vector<Community>{ids({"x", "y", "z"})});
  std::vector<std::vector<std::pair<Edge, long>>> flat_years(5, flat);
  CHECK(detect_emerging(window(2000, flat_years)).empty());
}

TEST_CASE("gold evaluation") {
  auto gold = gold_of({{"a", "b", "c"}, {"x", "y"}});
  auto same = evaluate_against_gold({ids({"a", "b", "c"})}, gold, 1.0);
  CHECK(same.matched_clusters == 1);
  auto half = evaluate_against_gold({ids({"a", "b", "c"}), ids({"p", "q", "r"})}, gold);
  CHECK(half.precision == 0.5);
  CHECK(half.recall == 0.5);
  auto none = evaluate_against_gold({ids({"p", "q", "r"})}, gold);
  CHECK(none.matched_clusters == 0);
  CHECK(none.precision == 0.0);
  auto partial = evaluate_against_gold({ids({"a", "b", "z"})}, gold, 0.5);
  CHECK(partial.matched_entries == 1);
  CHECK(evaluate_against_gold({ids({"a", "b", "z"})}, gold, 0.9).matched_entries == 0);
  CHECK(evaluate_against_gold({}, gold).precision == 0.0);
  CHECK_THROWS_AS(evaluate_against_gold({}, GoldStandard{}), Error);
  CHECK_THROWS_AS(evaluate_against_gold({}, gold, 0.0), Error);
}

TEST_CASE("gold standard file") {
  auto onto = ontology_from_csv(kCsOntology);
  std::istringstream in(R"([
    {"topic": "knowledge graphs", "debut_year": 2012, "ancestors": ["Semantic Web", "ontology mapping", "graph theory"]}
  ])");
  auto g = GoldStandard::read(in, onto);
  REQUIRE(g.entries.size() == 1);
  CHECK(g.entries[0].debut_year == 2012);
  CHECK(g.entries[0].ancestors == ids({"graph theory", "ontology matching", "semantic web"}));
  std::istringstream empty_anc(R"([{"topic":"x","debut_year":2000,"ancestors":[]}])");
  CHECK_THROWS_AS(GoldStandard::read(empty_anc, onto), Error);
  std::istringstream not_array(R"({"topic":"x"})");
  CHECK_THROWS_AS(GoldStandard::read(not_array, onto), Error);
}

TEST_CASE("network csv and community json") {
  std::ostringstream out;
  write_network_csv(out, {net(2001, {{{"b", "a"}, 2}}), net(2002, {{{"c", "d"}, 1}})});
  CHECK(out.str() == "year,a,b,weight\n2001,a,b,2\n2002,c,d,1\n");
  auto j = nlohmann::json::parse(communities_to_json({ids({"a", "b", "c"})}));
  CHECK(j == nlohmann::json::parse(R"([["a","b","c"]])"));
}
