#pragma once

// Synthetic graphs for tests and benchmarks.

#include <algorithm>
#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "collabnet/error.hpp"
#include "collabnet/network.hpp"

namespace collabnet::generators {

inline std::vector<std::string> numbered_names(std::size_t n) {
  std::vector<std::string> names(n);
  for (std::size_t i = 0; i < n; ++i) names[i] = "v" + std::to_string(i);
  return names;
}

inline CollaborationNetwork from_pairs(std::size_t n, const std::vector<std::pair<NodeId, NodeId>>& pairs) {
  std::vector<WeightedEdge> edges;
  edges.reserve(pairs.size());
  for (const auto& [u, v] : pairs) edges.push_back({u, v, 1});
  return CollaborationNetwork::from_edges(numbered_names(n), std::move(edges));
}

inline CollaborationNetwork complete(std::size_t n) {
  std::vector<std::pair<NodeId, NodeId>> pairs;
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = u + 1; v < n; ++v) pairs.emplace_back(u, v);
  return from_pairs(n, pairs);
}

// Center is node 0.
inline CollaborationNetwork star(std::size_t leaves) {
  std::vector<std::pair<NodeId, NodeId>> pairs;
  for (NodeId v = 1; v <= leaves; ++v) pairs.emplace_back(0, v);
  return from_pairs(leaves + 1, pairs);
}

inline CollaborationNetwork path(std::size_t n) {
  std::vector<std::pair<NodeId, NodeId>> pairs;
  for (NodeId v = 1; v < n; ++v) pairs.emplace_back(v - 1, v);
  return from_pairs(n, pairs);
}

inline CollaborationNetwork cycle(std::size_t n) {
  auto pairs = std::vector<std::pair<NodeId, NodeId>>{};
  for (NodeId v = 0; v < n; ++v) pairs.emplace_back(v, static_cast<NodeId>((v + 1) % n));
  return from_pairs(n, pairs);
}

// Each node joins its `k/2` nearest neighbours on either side.
inline CollaborationNetwork ring_lattice(std::size_t n, std::size_t k) {
  if (k % 2 != 0 || k >= n) throw ArgumentError("generators", "ring_lattice", "k must be even and below n");
  std::vector<std::pair<NodeId, NodeId>> pairs;
  for (NodeId v = 0; v < n; ++v)
    for (std::size_t j = 1; j <= k / 2; ++j) pairs.emplace_back(v, static_cast<NodeId>((v + j) % n));
  return from_pairs(n, pairs);
}

// Uniform random recursive tree.
inline CollaborationNetwork random_tree(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::pair<NodeId, NodeId>> pairs;
  for (NodeId v = 1; v < n; ++v) pairs.emplace_back(std::uniform_int_distribution<NodeId>(0, v - 1)(rng), v);
  return from_pairs(n, pairs);
}

// G(n, m) with multiplicities drawn from 1..max_multiplicity. Isolated
// nodes are dropped by the network constructor.
inline CollaborationNetwork gnm(std::size_t n, std::size_t m, std::uint64_t seed, std::uint32_t max_multiplicity = 1) {
  if (n < 2 || m > n * (n - 1) / 2) throw ArgumentError("generators", "gnm", "edge count out of range");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<NodeId> node(0, static_cast<NodeId>(n - 1));
  std::uniform_int_distribution<std::uint32_t> mult(1, max_multiplicity);
  std::set<std::pair<NodeId, NodeId>> seen;
  std::vector<WeightedEdge> edges;
  while (edges.size() < m) {
    NodeId u = node(rng), v = node(rng);
    if (u == v) continue;
    if (u > v) std::swap(u, v);
    if (!seen.insert({u, v}).second) continue;
    edges.push_back({u, v, mult(rng)});
  }
  return CollaborationNetwork::from_edges(numbered_names(n), std::move(edges));
}

// Preferential attachment: starts from a clique on m + 1 nodes, then every
// new node attaches to m distinct existing nodes chosen proportionally to
// degree.
inline CollaborationNetwork preferential_attachment(std::size_t n, std::size_t m, std::uint64_t seed,
                                                    std::uint32_t max_multiplicity = 1) {
  if (m < 1 || n <= m) throw ArgumentError("generators", "preferential_attachment", "need n > m >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint32_t> mult(1, max_multiplicity);
  std::vector<NodeId> endpoints;  // every node appears once per incident edge
  std::vector<WeightedEdge> edges;
  for (NodeId u = 0; u <= m; ++u)
    for (NodeId v = u + 1; v <= m; ++v) {
      edges.push_back({u, v, mult(rng)});
      endpoints.push_back(u);
      endpoints.push_back(v);
    }
  std::vector<NodeId> targets;
  for (NodeId v = static_cast<NodeId>(m + 1); v < n; ++v) {
    targets.clear();
    while (targets.size() < m) {
      const NodeId t = endpoints[std::uniform_int_distribution<std::size_t>(0, endpoints.size() - 1)(rng)];
      if (std::find(targets.begin(), targets.end(), t) == targets.end()) targets.push_back(t);
    }
    for (const NodeId t : targets) {
      edges.push_back({t, v, mult(rng)});
      endpoints.push_back(t);
      endpoints.push_back(v);
    }
  }
  return CollaborationNetwork::from_edges(numbered_names(n), std::move(edges));
}

}  // namespace collabnet::generators
