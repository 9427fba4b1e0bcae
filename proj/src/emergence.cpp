#include "topicflow/emergence.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <unordered_map>

#include "json.hpp"
#include "topicflow/text.hpp"

namespace topicflow {

TopicNetwork build_topic_network(const AidaGraph& graph, int year) {
  const auto& onto = graph.ontology();
  std::unordered_map<std::size_t, long> nodes;
  std::unordered_map<std::uint64_t, long> edges;
  for (const auto& [id, d] : graph.documents()) {
    if (d.kind != DocumentKind::publication || d.year != year) continue;
    for (std::size_t i = 0; i < d.topics.size(); ++i) {
      ++nodes[d.topics[i]];
      for (std::size_t j = i + 1; j < d.topics.size(); ++j) {
        ++edges[(static_cast<std::uint64_t>(d.topics[i]) << 32) | d.topics[j]];
      }
    }
  }
  TopicNetwork net;
  net.year = year;
  for (const auto& [t, w] : nodes) net.node_weight.emplace(onto.at(t), w);
  // Topic indices follow id order, so (lo, hi) is already (a < b).
  for (const auto& [key, w] : edges) {
    net.edge_weight.emplace(std::pair{onto.at(key >> 32), onto.at(key & 0xffffffffu)}, w);
  }
  return net;
}

std::vector<TopicNetwork> build_topic_networks(const AidaGraph& graph, int first_year,
                                               int last_year) {
  if (first_year > last_year) throw Error(ErrorCode::invalid_argument, "year range is empty");
  std::vector<TopicNetwork> out(static_cast<std::size_t>(last_year - first_year + 1));
  parallel_for(out.size(), [&](std::size_t i) {
    out[i] = build_topic_network(graph, first_year + static_cast<int>(i));
  });
  return out;
}

double trend_slope(const std::vector<double>& weights) {
  const std::size_t n = weights.size();
  if (n < 2) return 0.0;
  const double x_mean = static_cast<double>(n - 1) / 2.0;
  const double y_mean = std::accumulate(weights.begin(), weights.end(), 0.0) / static_cast<double>(n);
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = static_cast<double>(i) - x_mean;
    num += dx * (weights[i] - y_mean);
    den += dx * dx;
  }
  return num / den;
}

namespace {

double quantile(std::vector<double> values, double q) {
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

}  // namespace

TopicNetwork acceleration_graph(const std::vector<TopicNetwork>& networks,
                                const AccelerationOptions& options) {
  if (networks.size() != kAccelerationWindow) {
    throw Error(ErrorCode::invalid_argument, "acceleration window needs " +
                                                 std::to_string(kAccelerationWindow) +
                                                 " yearly networks, got " +
                                                 std::to_string(networks.size()));
  }
  for (std::size_t i = 1; i < networks.size(); ++i) {
    if (networks[i].year != networks[0].year + static_cast<int>(i)) {
      throw Error(ErrorCode::invalid_argument, "acceleration window years must be consecutive");
    }
  }
  if (!(options.growth_percentile >= 0.0 && options.growth_percentile <= 1.0)) {
    throw Error(ErrorCode::invalid_argument, "growth percentile must lie in [0, 1]");
  }

  std::map<std::pair<TopicId, TopicId>, std::vector<double>> series;
  for (std::size_t i = 0; i < networks.size(); ++i) {
    for (const auto& [edge, w] : networks[i].edge_weight) {
      auto& s = series[edge];
      s.resize(networks.size(), 0.0);
      s[i] = static_cast<double>(w);
    }
  }
  std::vector<std::pair<const std::pair<TopicId, TopicId>*, double>> rising;
  for (const auto& [edge, weights] : series) {
    const auto support = std::count_if(weights.begin(), weights.end(), [](double w) { return w > 0; });
    if (support < options.min_support) continue;
    const double slope = trend_slope(weights);
    if (slope > 0.0) rising.emplace_back(&edge, slope);
  }

  TopicNetwork out;
  out.year = networks.back().year;
  if (rising.empty()) return out;
  std::vector<double> slopes;
  slopes.reserve(rising.size());
  for (const auto& r : rising) slopes.push_back(r.second);
  const double cutoff = quantile(slopes, options.growth_percentile);
  for (const auto& [edge, slope] : rising) {
    if (slope < cutoff) continue;
    const long w = std::max(1L, static_cast<long>(std::trunc(slope * 1000.0)));
    out.edge_weight.emplace(*edge, w);
    out.node_weight[edge->first] += w;
    out.node_weight[edge->second] += w;
  }
  return out;
}

namespace {

using Bits = std::vector<std::uint64_t>;

struct CliqueSearch {
  std::size_t n;
  std::size_t min_size;
  std::vector<std::vector<std::size_t>> adj;
  std::vector<std::vector<std::size_t>> cliques;

  // Bron-Kerbosch with pivoting.
  void expand(std::vector<std::size_t>& r, std::vector<std::size_t> p, std::vector<std::size_t> x) {
    if (p.empty() && x.empty()) {
      if (r.size() >= min_size) cliques.push_back(r);
      return;
    }
    if (r.size() + p.size() < min_size) return;
    std::size_t pivot = p.empty() ? x.front() : p.front();
    std::size_t best = count_adjacent(pivot, p);
    for (const auto* set : {&p, &x}) {
      for (std::size_t u : *set) {
        const std::size_t c = count_adjacent(u, p);
        if (c > best) {
          best = c;
          pivot = u;
        }
      }
    }
    std::vector<std::size_t> candidates;
    for (std::size_t v : p) {
      if (!adjacent(pivot, v)) candidates.push_back(v);
    }
    for (std::size_t v : candidates) {
      r.push_back(v);
      expand(r, intersect(p, v), intersect(x, v));
      r.pop_back();
      p.erase(std::find(p.begin(), p.end(), v));
      x.insert(std::upper_bound(x.begin(), x.end(), v), v);
    }
  }

  bool adjacent(std::size_t a, std::size_t b) const {
    return std::binary_search(adj[a].begin(), adj[a].end(), b);
  }
  std::size_t count_adjacent(std::size_t u, const std::vector<std::size_t>& set) const {
    std::size_t c = 0;
    for (std::size_t v : set) c += adjacent(u, v) ? 1 : 0;
    return c;
  }
  std::vector<std::size_t> intersect(const std::vector<std::size_t>& set, std::size_t v) const {
    std::vector<std::size_t> out;
    std::set_intersection(set.begin(), set.end(), adj[v].begin(), adj[v].end(),
                          std::back_inserter(out));
    return out;
  }
};

std::size_t find_root(std::vector<std::size_t>& parent, std::size_t i) {
  while (parent[i] != i) {
    parent[i] = parent[parent[i]];
    i = parent[i];
  }
  return i;
}

}  // namespace

std::vector<Community> clique_percolation(const TopicNetwork& network, std::size_t k) {
  if (k < 3) throw Error(ErrorCode::invalid_argument, "clique size k must be >= 3");
  std::vector<TopicId> nodes;
  std::map<TopicId, std::size_t> index;
  auto node = [&](const TopicId& t) {
    auto [it, inserted] = index.emplace(t, nodes.size());
    if (inserted) nodes.push_back(t);
    return it->second;
  };
  for (const auto& [t, w] : network.node_weight) node(t);
  CliqueSearch search{0, k, {}, {}};
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (const auto& [e, w] : network.edge_weight) {
    if (e.first == e.second) continue;
    edges.emplace_back(node(e.first), node(e.second));
  }
  search.n = nodes.size();
  search.adj.resize(nodes.size());
  for (auto [a, b] : edges) {
    search.adj[a].push_back(b);
    search.adj[b].push_back(a);
  }
  for (auto& a : search.adj) {
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
  }
  std::vector<std::size_t> all(nodes.size());
  std::iota(all.begin(), all.end(), 0);
  std::vector<std::size_t> r;
  search.expand(r, all, {});

  // Maximal cliques sharing at least k-1 nodes hold adjacent k-cliques.
  auto& cliques = search.cliques;
  for (auto& c : cliques) std::sort(c.begin(), c.end());
  std::vector<std::size_t> parent(cliques.size());
  std::iota(parent.begin(), parent.end(), 0);
  for (std::size_t i = 0; i < cliques.size(); ++i) {
    for (std::size_t j = i + 1; j < cliques.size(); ++j) {
      std::vector<std::size_t> shared;
      std::set_intersection(cliques[i].begin(), cliques[i].end(), cliques[j].begin(),
                            cliques[j].end(), std::back_inserter(shared));
      if (shared.size() + 1 >= k) {
        parent[find_root(parent, i)] = find_root(parent, j);
      }
    }
  }
  std::map<std::size_t, std::set<TopicId>> groups;
  for (std::size_t i = 0; i < cliques.size(); ++i) {
    auto& g = groups[find_root(parent, i)];
    for (std::size_t v : cliques[i]) g.insert(nodes[v]);
  }
  std::vector<Community> out;
  for (auto& [root, members] : groups) out.emplace_back(members.begin(), members.end());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Community> detect_emerging(const std::vector<TopicNetwork>& networks, std::size_t k,
                                       const AccelerationOptions& options) {
  return clique_percolation(acceleration_graph(networks, options), k);
}

GoldStandard GoldStandard::read(std::istream& in, const TopicOntology& ontology) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("gold standard: ") + e.what(), e.byte);
  }
  if (!j.is_array()) throw Error(ErrorCode::validation, "gold standard must be a JSON array");
  GoldStandard gold;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto& e = j[i];
    const std::string where = "gold standard entry " + std::to_string(i) + ": ";
    if (!e.is_object() || !e.contains("topic") || !e["topic"].is_string() ||
        !e.contains("debut_year") || !e["debut_year"].is_number_integer() ||
        !e.contains("ancestors") || !e["ancestors"].is_array()) {
      throw Error(ErrorCode::validation,
                  where + "expected {\"topic\": str, \"debut_year\": int, \"ancestors\": [str]}");
    }
    GoldEntry entry;
    entry.emerging_topic = normalize_label(e["topic"].get<std::string>());
    entry.debut_year = e["debut_year"].get<int>();
    std::set<TopicId> ancestors;
    for (const auto& a : e["ancestors"]) {
      if (!a.is_string()) throw Error(ErrorCode::validation, where + "ancestor must be a string");
      const auto raw = a.get<std::string>();
      auto canonical = ontology.canonical_topic(raw);
      ancestors.insert(canonical ? *canonical : TopicId(normalize_label(raw)));
    }
    if (ancestors.empty()) throw Error(ErrorCode::validation, where + "ancestors must not be empty");
    entry.ancestors.assign(ancestors.begin(), ancestors.end());
    gold.entries.push_back(std::move(entry));
  }
  return gold;
}

GoldStandard GoldStandard::load(const std::string& path, const TopicOntology& ontology) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot open gold standard '" + path + "'");
  return read(in, ontology);
}

GoldEvaluation evaluate_against_gold(const std::vector<Community>& clusters,
                                     const GoldStandard& gold, double min_overlap) {
  if (gold.entries.empty()) throw Error(ErrorCode::invalid_argument, "gold standard is empty");
  if (!(min_overlap > 0.0 && min_overlap <= 1.0)) {
    throw Error(ErrorCode::invalid_argument, "min_overlap must lie in (0, 1]");
  }
  std::vector<bool> entry_hit(gold.entries.size(), false);
  GoldEvaluation ev;
  for (const auto& c : clusters) {
    std::vector<TopicId> sorted = c;
    std::sort(sorted.begin(), sorted.end());
    bool hit = false;
    for (std::size_t g = 0; g < gold.entries.size(); ++g) {
      const auto& anc = gold.entries[g].ancestors;
      std::vector<TopicId> shared;
      std::set_intersection(sorted.begin(), sorted.end(), anc.begin(), anc.end(),
                            std::back_inserter(shared));
      if (static_cast<double>(shared.size()) / static_cast<double>(anc.size()) >= min_overlap) {
        hit = true;
        entry_hit[g] = true;
      }
    }
    if (hit) ++ev.matched_clusters;
  }
  ev.matched_entries = static_cast<std::size_t>(std::count(entry_hit.begin(), entry_hit.end(), true));
  ev.precision = clusters.empty() ? 0.0
                                  : static_cast<double>(ev.matched_clusters) /
                                        static_cast<double>(clusters.size());
  ev.recall = static_cast<double>(ev.matched_entries) / static_cast<double>(gold.entries.size());
  return ev;
}

void write_network_csv(std::ostream& out, const std::vector<TopicNetwork>& networks) {
  out << "year,a,b,weight\n";
  for (const auto& net : networks) {
    for (const auto& [e, w] : net.edge_weight) {
      out << net.year << ',' << csv_escape(e.first.value) << ',' << csv_escape(e.second.value) << ','
          << w << '\n';
    }
  }
}

std::string communities_to_json(const std::vector<Community>& communities) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& c : communities) {
    nlohmann::json members = nlohmann::json::array();
    for (const auto& t : c) members.push_back(t.value);
    j.push_back(members);
  }
  return j.dump() + "\n";
}

}  // namespace topicflow
