#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <vector>

#include "collabnet/network.hpp"

namespace collabnet {

struct ComponentDecomposition {
  // Component ids are ranks by descending size (ties: smallest member first),
  // so component 0 is the giant component.
  std::vector<std::uint32_t> membership;
  std::vector<std::size_t> sizes;
  double giant_share = 0.0;
  std::size_t count() const { return sizes.size(); }

  // size -> number of components of that size
  std::map<std::size_t, std::size_t> size_histogram() const {
    std::map<std::size_t, std::size_t> h;
    for (const auto s : sizes) ++h[s];
    return h;
  }
};

inline ComponentDecomposition connected_components(const CollaborationNetwork& g) {
  const std::size_t n = g.node_count();
  constexpr std::uint32_t kUnseen = ~std::uint32_t{0};
  std::vector<std::uint32_t> label(n, kUnseen);
  std::vector<std::size_t> raw_sizes;
  std::vector<NodeId> queue;
  queue.reserve(n);
  for (NodeId s = 0; s < n; ++s) {
    if (label[s] != kUnseen) continue;
    const auto id = static_cast<std::uint32_t>(raw_sizes.size());
    queue.clear();
    queue.push_back(s);
    label[s] = id;
    for (std::size_t head = 0; head < queue.size(); ++head)
      for (const NodeId w : g.neighbors(queue[head]))
        if (label[w] == kUnseen) {
          label[w] = id;
          queue.push_back(w);
        }
    raw_sizes.push_back(queue.size());
  }
  // Discovery order already breaks ties by smallest member.
  std::vector<std::uint32_t> order(raw_sizes.size());
  std::iota(order.begin(), order.end(), 0u);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::uint32_t a, std::uint32_t b) { return raw_sizes[a] > raw_sizes[b]; });
  std::vector<std::uint32_t> rank(order.size());
  for (std::uint32_t r = 0; r < order.size(); ++r) rank[order[r]] = r;

  ComponentDecomposition out;
  out.membership.resize(n);
  for (NodeId v = 0; v < n; ++v) out.membership[v] = rank[label[v]];
  out.sizes.resize(order.size());
  for (std::uint32_t r = 0; r < order.size(); ++r) out.sizes[r] = raw_sizes[order[r]];
  out.giant_share = n == 0 ? 0.0 : static_cast<double>(out.sizes.front()) / static_cast<double>(n);
  return out;
}

// Nodes of the largest connected component, ascending.
inline std::vector<NodeId> giant_component_nodes(const CollaborationNetwork& g) {
  std::vector<NodeId> nodes;
  if (g.empty()) return nodes;
  const auto cc = connected_components(g);
  for (NodeId v = 0; v < g.node_count(); ++v)
    if (cc.membership[v] == 0) nodes.push_back(v);
  return nodes;
}

struct BiconnectedDecomposition {
  // Each block's nodes ascending; blocks by descending size, then lexicographic.
  std::vector<std::vector<NodeId>> blocks;
  std::vector<NodeId> articulation_points;
  double largest_share = 0.0;
};

// Hopcroft-Tarjan with an explicit stack. Bridges come out as 2-node blocks.
inline BiconnectedDecomposition biconnected_components(const CollaborationNetwork& g) {
  const std::size_t n = g.node_count();
  constexpr std::uint32_t kUnseen = ~std::uint32_t{0};
  std::vector<std::uint32_t> disc(n, kUnseen), low(n, 0);
  std::vector<NodeId> parent(n, 0);
  std::vector<bool> is_cut(n, false);
  std::vector<std::pair<NodeId, NodeId>> edge_stack;
  struct Frame {
    NodeId v;
    std::size_t next;
  };
  std::vector<Frame> stack;
  BiconnectedDecomposition out;
  std::vector<std::uint32_t> mark(n, kUnseen);
  std::uint32_t timer = 0;

  const auto pop_block = [&](NodeId v, NodeId w) {
    std::vector<NodeId> block;
    const auto id = static_cast<std::uint32_t>(out.blocks.size());
    for (;;) {
      const auto [a, b] = edge_stack.back();
      edge_stack.pop_back();
      for (const NodeId x : {a, b})
        if (mark[x] != id) {
          mark[x] = id;
          block.push_back(x);
        }
      if (a == v && b == w) break;
    }
    std::sort(block.begin(), block.end());
    out.blocks.push_back(std::move(block));
  };

  for (NodeId root = 0; root < n; ++root) {
    if (disc[root] != kUnseen) continue;
    disc[root] = low[root] = timer++;
    parent[root] = root;
    std::size_t root_children = 0;
    stack.push_back({root, 0});
    while (!stack.empty()) {
      auto& frame = stack.back();
      const NodeId v = frame.v;
      const auto nb = g.neighbors(v);
      if (frame.next < nb.size()) {
        const NodeId w = nb[frame.next++];
        if (disc[w] == kUnseen) {
          parent[w] = v;
          disc[w] = low[w] = timer++;
          edge_stack.emplace_back(v, w);
          if (v == root) ++root_children;
          stack.push_back({w, 0});
        } else if (w != parent[v] && disc[w] < disc[v]) {
          low[v] = std::min(low[v], disc[w]);
          edge_stack.emplace_back(v, w);
        }
        continue;
      }
      stack.pop_back();
      if (stack.empty()) break;
      const NodeId u = stack.back().v;
      low[u] = std::min(low[u], low[v]);
      if (low[v] >= disc[u]) {
        if (u != root) is_cut[u] = true;
        pop_block(u, v);
      }
    }
    if (root_children > 1) is_cut[root] = true;
  }
  std::sort(out.blocks.begin(), out.blocks.end(), [](const auto& a, const auto& b) {
    return a.size() != b.size() ? a.size() > b.size() : a < b;
  });
  for (NodeId v = 0; v < n; ++v)
    if (is_cut[v]) out.articulation_points.push_back(v);
  out.largest_share =
      (n == 0 || out.blocks.empty()) ? 0.0 : static_cast<double>(out.blocks.front().size()) / static_cast<double>(n);
  return out;
}

}  // namespace collabnet
