#pragma once

// Brute-force reference implementations. They share no code with the
// library beyond the network accessors and are written for clarity, not
// speed: adjacency matrices, per-pair searches, explicit pair lists.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "collabnet/network.hpp"

namespace oracle {

using collabnet::CollaborationNetwork;
using collabnet::NodeId;

struct Dense {
  std::size_t n;
  std::vector<std::vector<char>> adj;
  std::vector<std::vector<NodeId>> nbr;

  explicit Dense(const CollaborationNetwork& g) : n(g.node_count()), adj(n, std::vector<char>(n, 0)), nbr(n) {
    for (const auto& e : g.edges()) {
      adj[e.source][e.target] = adj[e.target][e.source] = 1;
      nbr[e.source].push_back(e.target);
      nbr[e.target].push_back(e.source);
    }
  }
};

// BFS distances from s that skip `removed` (-1 = unreachable).
inline std::vector<int> bfs(const Dense& d, NodeId s, std::optional<NodeId> removed = std::nullopt) {
  std::vector<int> dist(d.n, -1);
  if (removed && *removed == s) return dist;
  std::deque<NodeId> q{s};
  dist[s] = 0;
  while (!q.empty()) {
    const NodeId u = q.front();
    q.pop_front();
    for (const NodeId w : d.nbr[u])
      if (dist[w] < 0 && (!removed || *removed != w)) {
        dist[w] = dist[u] + 1;
        q.push_back(w);
      }
  }
  return dist;
}

// Component label per node (smallest node id of the component), optionally
// with one node deleted (its label is -1).
inline std::vector<long> component_labels(const Dense& d, std::optional<NodeId> removed = std::nullopt) {
  std::vector<long> label(d.n, -2);
  if (removed) label[*removed] = -1;
  std::deque<NodeId> q;
  for (NodeId s = 0; s < d.n; ++s) {
    if (label[s] != -2) continue;
    label[s] = s;
    q.assign(1, s);
    while (!q.empty()) {
      const NodeId u = q.front();
      q.pop_front();
      for (const NodeId w : d.nbr[u])
        if (label[w] == -2) {
          label[w] = s;
          q.push_back(w);
        }
    }
  }
  return label;
}

inline std::vector<std::size_t> component_sizes(const Dense& d) {
  std::map<long, std::size_t> c;
  for (const long l : component_labels(d)) ++c[l];
  std::vector<std::size_t> s;
  for (const auto& [l, k] : c) s.push_back(k);
  std::sort(s.rbegin(), s.rend());
  return s;
}

inline std::vector<NodeId> articulation_points(const Dense& d) {
  std::vector<NodeId> out;
  const auto base = component_labels(d);
  const auto count = [](const std::vector<long>& l) {
    std::set<long> s;
    for (const long x : l)
      if (x >= 0) s.insert(x);
    return s.size();
  };
  const std::size_t c0 = count(base);
  for (NodeId v = 0; v < d.n; ++v)
    if (count(component_labels(d, v)) > c0) out.push_back(v);
  return out;
}

// Blocks as sorted node sets, sorted by (size desc, lexicographic). Two
// edges share a block iff no single node deletion separates them; each
// edge's vector of far-endpoint labels over all deletions is kept as a pair
// of 64-bit polynomial hashes.
inline std::vector<std::vector<NodeId>> blocks(const CollaborationNetwork& g) {
  const Dense d(g);
  const auto& edges = g.edges();
  std::vector<std::pair<std::uint64_t, std::uint64_t>> signature(edges.size(), {0, 0});
  for (NodeId v = 0; v < d.n; ++v) {
    const auto lab = component_labels(d, v);
    for (std::size_t i = 0; i < edges.size(); ++i) {
      const NodeId a = edges[i].source == v ? edges[i].target : edges[i].source;
      const auto x = static_cast<std::uint64_t>(lab[a] + 2);
      signature[i].first = signature[i].first * 1000003u + x;
      signature[i].second = signature[i].second * 0x9e3779b97f4a7c15ull + (x ^ 0x5bd1e995u);
    }
  }
  std::map<std::pair<std::uint64_t, std::uint64_t>, std::set<NodeId>> groups;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    groups[signature[i]].insert(edges[i].source);
    groups[signature[i]].insert(edges[i].target);
  }
  std::vector<std::vector<NodeId>> out;
  for (const auto& [sig, nodes] : groups) out.emplace_back(nodes.begin(), nodes.end());
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.size() != b.size() ? a.size() > b.size() : a < b;
  });
  return out;
}

inline std::vector<std::uint64_t> node_triangles(const Dense& d) {
  std::vector<std::uint64_t> t(d.n, 0);
  for (NodeId v = 0; v < d.n; ++v)
    for (std::size_t i = 0; i < d.nbr[v].size(); ++i)
      for (std::size_t j = i + 1; j < d.nbr[v].size(); ++j)
        if (d.adj[d.nbr[v][i]][d.nbr[v][j]]) ++t[v];
  return t;
}

inline std::optional<double> transitivity(const Dense& d) {
  const auto t = node_triangles(d);
  long double closed = 0, triples = 0;
  for (NodeId v = 0; v < d.n; ++v) {
    closed += static_cast<long double>(t[v]);
    const long double k = static_cast<long double>(d.nbr[v].size());
    triples += k * (k - 1) / 2;
  }
  if (triples == 0) return std::nullopt;
  return static_cast<double>(closed / triples);  // 3 * triangles = sum of per-node counts
}

inline double avg_clustering(const Dense& d, bool low_degree_as_zero = true) {
  const auto t = node_triangles(d);
  long double sum = 0;
  std::size_t counted = 0;
  for (NodeId v = 0; v < d.n; ++v) {
    const long double k = static_cast<long double>(d.nbr[v].size());
    if (k < 2) {
      if (low_degree_as_zero) ++counted;
      continue;
    }
    sum += static_cast<long double>(t[v]) / (k * (k - 1) / 2);
    ++counted;
  }
  return counted ? static_cast<double>(sum / counted) : 0.0;
}

inline long double pearson(const std::vector<long double>& x, const std::vector<long double>& y) {
  const long double n = static_cast<long double>(x.size());
  const long double mx = std::accumulate(x.begin(), x.end(), 0.0L) / n;
  const long double my = std::accumulate(y.begin(), y.end(), 0.0L) / n;
  long double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

inline std::vector<long double> average_ranks(const std::vector<long double>& x) {
  std::vector<std::size_t> idx(x.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<long double> r(x.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j < idx.size() && x[idx[j]] == x[idx[i]]) ++j;
    const long double avg = (static_cast<long double>(i + 1) + static_cast<long double>(j)) / 2;
    for (std::size_t k = i; k < j; ++k) r[idx[k]] = avg;
    i = j;
  }
  return r;
}

struct Assortativity {
  long double pearson, log_pearson, spearman;
};

// Correlations over the explicit list of 2m ordered endpoint-degree pairs.
inline Assortativity assortativity(const CollaborationNetwork& g) {
  std::vector<long double> x, y;
  for (const auto& e : g.edges()) {
    const long double a = g.degree(e.source), b = g.degree(e.target);
    x.push_back(a);
    y.push_back(b);
    x.push_back(b);
    y.push_back(a);
  }
  std::vector<long double> lx(x.size()), ly(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
  }
  // x and y hold the same multiset, so one rank table serves both.
  std::vector<long double> all = x;
  const auto rank_all = average_ranks(all);
  std::map<long double, long double> rank_of;
  for (std::size_t i = 0; i < all.size(); ++i) rank_of[all[i]] = rank_all[i];
  std::vector<long double> rx(x.size()), ry(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    rx[i] = rank_of[x[i]];
    ry[i] = rank_of[y[i]];
  }
  return {pearson(x, y), pearson(lx, ly), pearson(rx, ry)};
}

// Gini by the double sum over all pairs.
inline long double gini(const std::vector<std::uint32_t>& x) {
  long double diff = 0, total = 0;
  for (const auto a : x) {
    total += a;
    for (const auto b : x) diff += std::fabs(static_cast<long double>(a) - static_cast<long double>(b));
  }
  const long double n = static_cast<long double>(x.size());
  return diff / (2 * n * total);
}

struct Moments {
  long double mean, skewness;
};

inline Moments moments(const std::vector<std::uint32_t>& x) {
  const long double n = static_cast<long double>(x.size());
  long double m = 0;
  for (const auto v : x) m += v;
  m /= n;
  long double m2 = 0, m3 = 0;
  for (const auto v : x) {
    const long double dlt = v - m;
    m2 += dlt * dlt;
    m3 += dlt * dlt * dlt;
  }
  m2 /= n;
  m3 /= n;
  return {m, m2 == 0 ? 0 : m3 / std::pow(m2, 1.5L)};
}

// Sorted copy, element at rank ceil(p * n) (1-based).
inline std::uint32_t nearest_rank(std::vector<std::uint32_t> x, long double p) {
  std::sort(x.begin(), x.end());
  auto rank = static_cast<std::size_t>(std::ceil(p * static_cast<long double>(x.size()) - 1e-12L));
  rank = std::clamp<std::size_t>(rank, 1, x.size());
  return x[rank - 1];
}

struct Distances {
  std::map<int, std::uint64_t> counts;  // unordered pairs
  int diameter = 0;
  std::uint64_t diameter_pairs = 0;
  std::uint64_t diameter_paths = 0;
  long double mean = 0;
};

// All-pairs BFS; shortest-path counts by summing over predecessors on the
// previous BFS layer.
inline Distances distances(const Dense& d) {
  Distances out;
  long double sum = 0, pairs = 0;
  std::vector<std::vector<int>> dist(d.n);
  for (NodeId s = 0; s < d.n; ++s) dist[s] = bfs(d, s);
  for (NodeId s = 0; s < d.n; ++s)
    for (NodeId t = s + 1; t < d.n; ++t)
      if (dist[s][t] > 0) {
        ++out.counts[dist[s][t]];
        sum += dist[s][t];
        ++pairs;
        out.diameter = std::max(out.diameter, dist[s][t]);
      }
  out.mean = pairs > 0 ? sum / pairs : 0;
  for (NodeId s = 0; s < d.n; ++s) {
    std::vector<NodeId> order(d.n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](NodeId a, NodeId b) { return dist[s][a] < dist[s][b]; });
    std::vector<std::uint64_t> sigma(d.n, 0);
    sigma[s] = 1;
    for (const NodeId v : order) {
      if (dist[s][v] <= 0) continue;
      for (const NodeId u : d.nbr[v])
        if (dist[s][u] == dist[s][v] - 1) sigma[v] += sigma[u];
    }
    for (NodeId t = s + 1; t < d.n; ++t)
      if (dist[s][t] == out.diameter && out.diameter > 0) {
        ++out.diameter_pairs;
        out.diameter_paths += sigma[t];
      }
  }
  return out;
}

// Lexicographic optimum over all simple paths s -> t with at most
// `max_hops` edges, by exhaustive DFS. Returns {hops, scaled weight} for the
// (weight, hops) objective when `weight_first`, else for (hops, weight).
inline std::optional<std::pair<std::uint32_t, std::int64_t>> best_path(const CollaborationNetwork& g, NodeId s,
                                                                       NodeId t, std::uint32_t max_hops,
                                                                       bool weight_first, std::int64_t scale) {
  std::optional<std::pair<std::uint32_t, std::int64_t>> best;
  std::vector<char> on_path(g.node_count(), 0);
  const auto better = [&](std::uint32_t h, std::int64_t w) {
    if (!best) return true;
    return weight_first ? std::make_pair(w, static_cast<std::int64_t>(h)) <
                              std::make_pair(best->second, static_cast<std::int64_t>(best->first))
                        : std::make_pair(static_cast<std::int64_t>(h), w) <
                              std::make_pair(static_cast<std::int64_t>(best->first), best->second);
  };
  const auto dfs = [&](auto&& self, NodeId u, std::uint32_t h, std::int64_t w) -> void {
    if (u == t) {
      if (better(h, w)) best = {h, w};
      return;
    }
    if (h == max_hops) return;
    on_path[u] = 1;
    const auto nb = g.neighbors(u);
    const auto mu = g.multiplicities(u);
    for (std::size_t i = 0; i < nb.size(); ++i) {
      if (on_path[nb[i]]) continue;
      const std::int64_t step = (scale + mu[i] / 2) / mu[i];
      self(self, nb[i], h + 1, w + step);
    }
    on_path[u] = 0;
  };
  dfs(dfs, s, 0, 0);
  return best;
}

}  // namespace oracle
