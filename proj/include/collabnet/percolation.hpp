#pragma once

// Node-removal experiments on a collaboration network.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "collabnet/components.hpp"
#include "collabnet/degree.hpp"
#include "collabnet/error.hpp"
#include "collabnet/network.hpp"
#include "collabnet/parallel.hpp"

namespace collabnet {

enum class PercolationStrategy { Random, DegreeDriven, EigenvectorDriven };

inline std::string to_string(PercolationStrategy s) {
  switch (s) {
    case PercolationStrategy::Random: return "random";
    case PercolationStrategy::DegreeDriven: return "degree";
    case PercolationStrategy::EigenvectorDriven: return "eigenvector";
  }
  return "unknown";
}

inline PercolationStrategy percolation_strategy_from_string(const std::string& s) {
  if (s == "random") return PercolationStrategy::Random;
  if (s == "degree") return PercolationStrategy::DegreeDriven;
  if (s == "eigenvector") return PercolationStrategy::EigenvectorDriven;
  throw ArgumentError("percolation", "strategy", "unknown strategy '" + s + "'");
}

enum class CentralityScope { WholeGraph, GiantComponent };

struct EigenvectorOptions {
  CentralityScope scope = CentralityScope::WholeGraph;
  double tolerance = 1e-8;
  int max_iterations = 10000;
};

// Dominant eigenvector by power iteration, scaled to unit maximum. The
// iteration runs on A + I: same eigenvectors as A, but the spectral shift
// keeps bipartite graphs (stars, trees) from oscillating.
inline std::vector<double> eigenvector_centrality(const CollaborationNetwork& g,
                                                  const EigenvectorOptions& options = {}) {
  const std::size_t n = g.node_count();
  std::vector<double> x(n, 1.0), next(n);
  if (n == 0) return x;
  if (options.scope == CentralityScope::GiantComponent) {
    const auto cc = connected_components(g);
    for (NodeId v = 0; v < n; ++v) x[v] = cc.membership[v] == 0 ? 1.0 : 0.0;
  }
  double residual = 0.0;
  for (int it = 1; it <= options.max_iterations; ++it) {
    double peak = 0.0;
    for (NodeId v = 0; v < n; ++v) {
      double s = x[v];
      for (const NodeId w : g.neighbors(v)) s += x[w];
      next[v] = s;
      peak = std::max(peak, s);
    }
    residual = 0.0;
    for (NodeId v = 0; v < n; ++v) {
      next[v] /= peak;
      residual = std::max(residual, std::fabs(next[v] - x[v]));
    }
    x.swap(next);
    if (residual < options.tolerance) return x;
  }
  throw ConvergenceError("percolation", "eigenvector_centrality", options.max_iterations, residual);
}

// Static removal order computed on the original graph. Ties break by
// ascending node id.
inline std::vector<NodeId> removal_order(const CollaborationNetwork& g, PercolationStrategy strategy,
                                         std::uint64_t seed, const EigenvectorOptions& eigen = {}) {
  std::vector<NodeId> order(g.node_count());
  std::iota(order.begin(), order.end(), NodeId{0});
  switch (strategy) {
    case PercolationStrategy::Random: {
      std::mt19937_64 rng(seed);
      std::shuffle(order.begin(), order.end(), rng);
      break;
    }
    case PercolationStrategy::DegreeDriven:
      std::stable_sort(order.begin(), order.end(), [&](NodeId a, NodeId b) { return g.degree(a) > g.degree(b); });
      break;
    case PercolationStrategy::EigenvectorDriven: {
      const auto c = eigenvector_centrality(g, eigen);
      std::stable_sort(order.begin(), order.end(), [&](NodeId a, NodeId b) { return c[a] > c[b]; });
      break;
    }
  }
  return order;
}

struct PercolationPlan {
  PercolationStrategy strategy = PercolationStrategy::DegreeDriven;
  std::size_t steps = 20;
  // Nodes removed per step. When unset, step_fraction of the node count
  // (rounded) is used instead.
  std::optional<std::size_t> step_nodes;
  double step_fraction = 0.0075;
  std::size_t repetitions = 10;
  std::uint64_t seed = 1;
  EigenvectorOptions eigenvector;
  unsigned threads = 0;

  // Removed-node counts at every grid point, starting with 0.
  std::vector<std::size_t> grid(std::size_t n) const {
    if (steps == 0) throw ArgumentError("percolation", "plan", "steps must be at least 1");
    if (repetitions == 0) throw ArgumentError("percolation", "plan", "repetitions must be at least 1");
    std::vector<std::size_t> counts{0};
    if (step_nodes) {
      if (*step_nodes == 0) throw ArgumentError("percolation", "plan", "step size must be positive");
      if (steps * *step_nodes > n)
        throw ArgumentError("percolation", "plan", "steps * step_size exceeds the node count");
      for (std::size_t i = 1; i <= steps; ++i) counts.push_back(i * *step_nodes);
    } else {
      if (!(step_fraction > 0.0) || static_cast<double>(steps) * step_fraction > 1.0 + 1e-12)
        throw ArgumentError("percolation", "plan", "steps * step_fraction must lie in (0, 1]");
      for (std::size_t i = 1; i <= steps; ++i) {
        const auto c = std::min<std::size_t>(
            n, static_cast<std::size_t>(std::llround(static_cast<double>(i) * step_fraction * static_cast<double>(n))));
        if (c > counts.back()) counts.push_back(c);
      }
    }
    return counts;
  }
};

struct PercolationPoint {
  double removed_fraction = 0.0;
  double giant_share = 0.0;
  double second_share = 0.0;
};

struct PercolationTrace {
  PercolationStrategy strategy = PercolationStrategy::DegreeDriven;
  std::vector<PercolationPoint> points;  // mean over repetitions for Random
  std::vector<std::vector<PercolationPoint>> repetitions;
  std::vector<double> giant_min;  // envelopes over repetitions
  std::vector<double> giant_max;
  std::uint64_t seed = 0;
};

namespace percolation_detail {

// Union-find over nodes re-inserted in reverse removal order; component
// sizes are kept in a multiset so the two largest are available at every
// grid point.
class ReverseUnionFind {
 public:
  explicit ReverseUnionFind(std::size_t n) : parent_(n), size_(n, 0), active_(n, false) {
    std::iota(parent_.begin(), parent_.end(), NodeId{0});
  }

  void activate(const CollaborationNetwork& g, NodeId v) {
    active_[v] = true;
    size_[v] = 1;
    add_size(1);
    for (const NodeId w : g.neighbors(v))
      if (active_[w]) unite(v, w);
  }

  std::size_t largest() const { return sizes_.empty() ? 0 : sizes_.rbegin()->first; }

  std::size_t second() const {
    if (sizes_.empty()) return 0;
    auto it = sizes_.rbegin();
    if (it->second > 1) return it->first;
    ++it;
    return it == sizes_.rend() ? 0 : it->first;
  }

 private:
  NodeId find(NodeId v) {
    while (parent_[v] != v) {
      parent_[v] = parent_[parent_[v]];
      v = parent_[v];
    }
    return v;
  }

  void unite(NodeId a, NodeId b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (size_[a] < size_[b]) std::swap(a, b);
    remove_size(size_[a]);
    remove_size(size_[b]);
    parent_[b] = a;
    size_[a] += size_[b];
    add_size(size_[a]);
  }

  void add_size(std::size_t s) { ++sizes_[s]; }
  void remove_size(std::size_t s) {
    auto it = sizes_.find(s);
    if (--it->second == 0) sizes_.erase(it);
  }

  std::vector<NodeId> parent_;
  std::vector<std::size_t> size_;
  std::vector<bool> active_;
  std::map<std::size_t, std::size_t> sizes_;
};

}  // namespace percolation_detail

// Giant and second-component shares after removing the first k nodes of
// `order`, for every k in `removed_counts` (ascending). Shares are relative
// to the original node count.
inline std::vector<PercolationPoint> percolate_order(const CollaborationNetwork& g, const std::vector<NodeId>& order,
                                                     const std::vector<std::size_t>& removed_counts) {
  const std::size_t n = g.node_count();
  if (order.size() != n) throw ArgumentError("percolation", "percolate", "removal order must cover every node");
  std::vector<PercolationPoint> pts(removed_counts.size());
  if (n == 0) return pts;
  percolation_detail::ReverseUnionFind uf(n);
  std::size_t active_from = n;  // nodes order[active_from..n) are present
  for (std::size_t i = removed_counts.size(); i-- > 0;) {
    const std::size_t k = removed_counts[i];
    if (k > n) throw ArgumentError("percolation", "percolate", "removed count exceeds the node count");
    while (active_from > k) uf.activate(g, order[--active_from]);
    const double dn = static_cast<double>(n);
    pts[i] = {static_cast<double>(k) / dn, static_cast<double>(uf.largest()) / dn,
              static_cast<double>(uf.second()) / dn};
  }
  return pts;
}

inline PercolationTrace percolate(const CollaborationNetwork& g, const PercolationPlan& plan) {
  const auto grid = plan.grid(g.node_count());
  PercolationTrace trace;
  trace.strategy = plan.strategy;
  trace.seed = plan.seed;
  if (plan.strategy != PercolationStrategy::Random) {
    trace.points = percolate_order(g, removal_order(g, plan.strategy, plan.seed, plan.eigenvector), grid);
    trace.repetitions = {trace.points};
    for (const auto& p : trace.points) {
      trace.giant_min.push_back(p.giant_share);
      trace.giant_max.push_back(p.giant_share);
    }
    return trace;
  }
  // Repetition r shuffles with its own substream seeded by (seed, r).
  trace.repetitions.resize(plan.repetitions);
  parallel_for(plan.repetitions, plan.threads, [&](std::size_t r) {
    std::seed_seq seq{plan.seed, static_cast<std::uint64_t>(r)};
    std::mt19937_64 rng(seq);
    std::vector<NodeId> order(g.node_count());
    std::iota(order.begin(), order.end(), NodeId{0});
    std::shuffle(order.begin(), order.end(), rng);
    trace.repetitions[r] = percolate_order(g, order, grid);
  });
  const double reps = static_cast<double>(plan.repetitions);
  trace.points.resize(grid.size());
  trace.giant_min.assign(grid.size(), 1.0);
  trace.giant_max.assign(grid.size(), 0.0);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double giant = 0.0, second = 0.0;
    for (const auto& rep : trace.repetitions) {
      giant += rep[i].giant_share;
      second += rep[i].second_share;
      trace.giant_min[i] = std::min(trace.giant_min[i], rep[i].giant_share);
      trace.giant_max[i] = std::max(trace.giant_max[i], rep[i].giant_share);
    }
    trace.points[i] = {trace.repetitions[0][i].removed_fraction, giant / reps, second / reps};
  }
  return trace;
}

// First removal fraction at which the giant share drops below epsilon,
// interpolated linearly between the bracketing grid points.
inline std::optional<double> tipping_point(const std::vector<PercolationPoint>& points, double epsilon = 0.01) {
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!(points[i].giant_share < epsilon)) continue;
    if (i == 0) return points[0].removed_fraction;
    const auto& a = points[i - 1];
    const auto& b = points[i];
    const double t = (a.giant_share - epsilon) / (a.giant_share - b.giant_share);
    return a.removed_fraction + t * (b.removed_fraction - a.removed_fraction);
  }
  return std::nullopt;
}

inline std::optional<double> tipping_point(const PercolationTrace& trace, double epsilon = 0.01) {
  return tipping_point(trace.points, epsilon);
}

struct HubAnalysis {
  double percentile = 99.0;
  std::uint32_t threshold_degree = 0;
  std::size_t hub_count = 0;
  double giant_share_before = 0.0;
  double giant_share_after = 0.0;
};

// Removes every node whose degree reaches the nearest-rank percentile of the
// degree sequence.
inline HubAnalysis hub_analysis(const CollaborationNetwork& g, double percentile = 99.0) {
  if (!(percentile > 0.0 && percentile <= 100.0))
    throw ArgumentError("percolation", "hub_analysis", "percentile must lie in (0, 100]");
  HubAnalysis out;
  out.percentile = percentile;
  const std::size_t n = g.node_count();
  if (n == 0) return out;
  auto degrees = g.degree_sequence();
  std::sort(degrees.begin(), degrees.end());
  // Percentile as an exact rational in units of 1e-6.
  const auto num = static_cast<std::uint64_t>(std::llround(percentile * 1e6));
  out.threshold_degree = nearest_rank(degrees, num, 100'000'000);
  std::vector<NodeId> order, rest;
  for (NodeId v = 0; v < n; ++v) (g.degree(v) >= out.threshold_degree ? order : rest).push_back(v);
  out.hub_count = order.size();
  order.insert(order.end(), rest.begin(), rest.end());
  const auto pts = percolate_order(g, order, {0, out.hub_count});
  out.giant_share_before = pts[0].giant_share;
  out.giant_share_after = pts[1].giant_share;
  return out;
}

}  // namespace collabnet
