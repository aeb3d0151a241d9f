#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "collabnet/network.hpp"
#include "collabnet/parallel.hpp"

namespace collabnet {

struct TriadCensus {
  std::uint64_t n_triangles = 0;
  std::uint64_t n_connected_triples = 0;
};

// Triangles through each node. Each triangle u < v < w is found once from
// its lowest edge (u, v) by merging the sorted neighbour rows.
inline std::vector<std::uint64_t> node_triangles(const CollaborationNetwork& g, unsigned threads = 0) {
  const std::size_t n = g.node_count();
  if (threads == 0) threads = thread_budget();
  std::vector<std::vector<std::uint64_t>> partial(std::max(1u, threads));
  parallel_blocks(n, threads, [&](unsigned worker, std::size_t begin, std::size_t end) {
    auto& t = partial[worker];
    t.assign(n, 0);
    for (std::size_t uu = begin; uu < end; ++uu) {
      const auto u = static_cast<NodeId>(uu);
      const auto nu = g.neighbors(u);
      for (const NodeId v : nu) {
        if (v <= u) continue;
        const auto nv = g.neighbors(v);
        auto a = std::upper_bound(nu.begin(), nu.end(), v);
        auto b = std::upper_bound(nv.begin(), nv.end(), v);
        while (a != nu.end() && b != nv.end()) {
          if (*a < *b) {
            ++a;
          } else if (*b < *a) {
            ++b;
          } else {
            ++t[u];
            ++t[v];
            ++t[*a];
            ++a;
            ++b;
          }
        }
      }
    }
  });
  std::vector<std::uint64_t> total(n, 0);
  for (const auto& t : partial)
    for (std::size_t i = 0; i < t.size(); ++i) total[i] += t[i];
  return total;
}

inline TriadCensus triad_census(const CollaborationNetwork& g, const std::vector<std::uint64_t>& triangles) {
  TriadCensus c;
  std::uint64_t sum = 0;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    const std::uint64_t k = g.degree(v);
    c.n_connected_triples += k * (k - (k > 0 ? 1 : 0)) / 2;
    sum += triangles[v];
  }
  c.n_triangles = sum / 3;
  return c;
}

struct TransitivityResult {
  std::optional<double> value;  // empty when the graph has no connected triple
  TriadCensus census;
};

// T = 3 * triangles / connected triples.
inline TransitivityResult transitivity(const CollaborationNetwork& g, unsigned threads = 0) {
  TransitivityResult r;
  r.census = triad_census(g, node_triangles(g, threads));
  if (r.census.n_connected_triples > 0)
    r.value = static_cast<double>(3 * r.census.n_triangles) / static_cast<double>(r.census.n_connected_triples);
  return r;
}

struct ClusteringOptions {
  // Nodes of degree < 2 get C_i = 0 and stay in the average; when false
  // they are left out of it.
  bool low_degree_as_zero = true;
  // Smallest degree at which a complete neighbourhood enters the clique census.
  std::uint32_t census_min_degree = 2;
};

struct ClusteringResult {
  double average = 0.0;
  std::vector<double> local;        // C_i per node
  std::size_t counted_nodes = 0;    // denominator of the average
  std::size_t ones = 0;             // nodes with degree >= 2 and C_i == 1
  double ones_share = 0.0;          // ones / counted_nodes
  std::array<std::size_t, 11> histogram{};  // bins [0,.1), ..., [.9,1), {1}
};

// C = (1/n) sum_i C_i.
inline ClusteringResult avg_clustering(const CollaborationNetwork& g, const ClusteringOptions& options = {},
                                       unsigned threads = 0) {
  const auto tri = node_triangles(g, threads);
  ClusteringResult r;
  r.local.assign(g.node_count(), 0.0);
  long double sum = 0;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    const std::uint64_t k = g.degree(v);
    if (k < 2) {
      if (options.low_degree_as_zero) {
        ++r.counted_nodes;
        ++r.histogram[0];
      }
      continue;
    }
    const std::uint64_t pairs = k * (k - 1) / 2;
    const double c = tri[v] == pairs ? 1.0 : static_cast<double>(tri[v]) / static_cast<double>(pairs);
    r.local[v] = c;
    sum += c;
    ++r.counted_nodes;
    if (tri[v] == pairs) {
      ++r.ones;
      ++r.histogram[10];
    } else {
      ++r.histogram[std::min<std::size_t>(9, static_cast<std::size_t>(c * 10.0))];
    }
  }
  if (r.counted_nodes > 0) {
    r.average = static_cast<double>(sum / static_cast<long double>(r.counted_nodes));
    r.ones_share = static_cast<double>(r.ones) / static_cast<double>(r.counted_nodes);
  }
  return r;
}

// Histogram of |{i} u N(i)| over nodes whose neighbourhood is complete.
inline std::map<std::size_t, std::size_t> clique_neighborhood_census(const CollaborationNetwork& g,
                                                                     const ClusteringOptions& options = {},
                                                                     unsigned threads = 0) {
  const auto tri = node_triangles(g, threads);
  std::map<std::size_t, std::size_t> census;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    const std::uint64_t k = g.degree(v);
    if (k < std::max<std::uint32_t>(1, options.census_min_degree)) continue;
    if (tri[v] == k * (k - 1) / 2) ++census[k + 1];
  }
  return census;
}

struct BaselineTransitivity {
  std::optional<double> random;         // m / (n (n-1) / 2)
  std::optional<double> configuration;  // (<k^2> - <k>)^2 / (n <k>^3)
};

inline BaselineTransitivity baseline_transitivity(std::size_t n, std::size_t m,
                                                  std::span<const std::uint32_t> degrees) {
  if (n < 2) throw ArgumentError("graph_metrics", "baseline_transitivity", "need at least two nodes");
  BaselineTransitivity b;
  const long double nn = static_cast<long double>(n);
  b.random = static_cast<double>(static_cast<long double>(m) / (nn * (nn - 1) / 2));
  long double k1 = 0, k2 = 0;
  for (const auto d : degrees) {
    k1 += d;
    k2 += static_cast<long double>(d) * d;
  }
  const long double count = static_cast<long double>(degrees.size());
  if (count > 0 && k1 > 0) {
    k1 /= count;
    k2 /= count;
    const long double num = (k2 - k1) * (k2 - k1);
    b.configuration = static_cast<double>(num / (k1 * k1 * k1) / nn);
  }
  return b;
}

struct AssortativityResult {
  std::optional<double> pearson;
  std::optional<double> log_pearson;
  std::optional<double> spearman;
};

namespace detail {

// Pearson correlation over the 2m ordered endpoint pairs. Both orientations
// are present, so the two marginals coincide and
// r = (N sum xy - (sum x)^2) / (N sum x^2 - (sum x)^2).
template <typename T>
std::optional<double> symmetric_pearson(T N, T sxy, T sx, T sxx) {
  const T num = N * sxy - sx * sx;
  const T den = N * sxx - sx * sx;
  if (den == T{0}) return std::nullopt;
  return static_cast<double>(static_cast<long double>(num) / static_cast<long double>(den));
}

}  // namespace detail

inline AssortativityResult assortativity(const CollaborationNetwork& g) {
  AssortativityResult r;
  if (g.edge_count() == 0) return r;
  using i128 = __int128;
  const i128 N = 2 * static_cast<i128>(g.edge_count());

  i128 sxy = 0, sx = 0, sxx = 0;
  long double lxy = 0, lx = 0, lxx = 0;
  for (const auto& e : g.edges()) {
    const i128 a = g.degree(e.source), b = g.degree(e.target);
    sxy += 2 * a * b;
    sx += a + b;
    sxx += a * a + b * b;
    const long double la = std::log(static_cast<long double>(a)), lb = std::log(static_cast<long double>(b));
    lxy += 2 * la * lb;
    lx += la + lb;
    lxx += la * la + lb * lb;
  }
  r.pearson = detail::symmetric_pearson<i128>(N, sxy, sx, sxx);
  const long double Nl = static_cast<long double>(N);
  const long double lden = Nl * lxx - lx * lx;
  if (std::fabs(lden) > 1e-12L * Nl * lxx) r.log_pearson = static_cast<double>((Nl * lxy - lx * lx) / lden);

  // Average ranks among the 2m endpoint degrees, doubled to stay integral.
  std::map<std::uint32_t, i128> endpoint_count;
  for (NodeId v = 0; v < g.node_count(); ++v) endpoint_count[g.degree(v)] += g.degree(v);
  std::map<std::uint32_t, i128> rank2;
  i128 below = 0;
  for (const auto& [d, c] : endpoint_count) {
    rank2[d] = 2 * below + c + 1;
    below += c;
  }
  std::vector<i128> node_rank(g.node_count());
  for (NodeId v = 0; v < g.node_count(); ++v) node_rank[v] = rank2[g.degree(v)];
  i128 rxy = 0, rx = 0, rxx = 0;
  for (const auto& e : g.edges()) {
    const i128 a = node_rank[e.source], b = node_rank[e.target];
    rxy += 2 * a * b;
    rx += a + b;
    rxx += a * a + b * b;
  }
  r.spearman = detail::symmetric_pearson<i128>(N, rxy, rx, rxx);
  return r;
}

}  // namespace collabnet
