#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <queue>
#include <random>
#include <vector>

#include "collabnet/components.hpp"
#include "collabnet/error.hpp"
#include "collabnet/network.hpp"
#include "collabnet/parallel.hpp"

namespace collabnet {

struct DistanceHistogram {
  std::map<std::uint32_t, std::uint64_t> counts;  // length -> unordered connected pairs
  std::uint64_t connected_pairs = 0;
  double connected_pair_share = 0.0;
  double mean = 0.0;
  std::uint32_t diameter = 0;
  std::uint64_t diameter_pair_count = 0;
  std::uint64_t diameter_geodesic_count = 0;  // distinct shortest paths of length `diameter`
  bool geodesic_count_saturated = false;
};

namespace detail {

inline std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b, bool& saturated) {
  std::uint64_t r;
  if (__builtin_add_overflow(a, b, &r)) {
    saturated = true;
    return std::numeric_limits<std::uint64_t>::max();
  }
  return r;
}

}  // namespace detail

// All-pairs BFS with shortest-path counting. Sources are split across
// threads; per-thread integer accumulators make the result order-independent.
inline DistanceHistogram distance_histogram(const CollaborationNetwork& g, unsigned threads = 0) {
  const std::size_t n = g.node_count();
  if (threads == 0) threads = thread_budget();
  struct Acc {
    std::vector<std::uint64_t> pairs;  // by length
    std::vector<std::uint64_t> paths;  // by length, saturating
    bool saturated = false;
  };
  std::vector<Acc> acc(std::max(1u, threads));
  parallel_blocks(n, threads, [&](unsigned worker, std::size_t begin, std::size_t end) {
    auto& a = acc[worker];
    std::vector<std::uint32_t> dist(n);
    std::vector<std::uint64_t> sigma(n);
    std::vector<NodeId> queue;
    queue.reserve(n);
    constexpr std::uint32_t kInf = ~std::uint32_t{0};
    for (std::size_t ss = begin; ss < end; ++ss) {
      const auto s = static_cast<NodeId>(ss);
      std::fill(dist.begin(), dist.end(), kInf);
      queue.clear();
      queue.push_back(s);
      dist[s] = 0;
      sigma[s] = 1;
      for (std::size_t head = 0; head < queue.size(); ++head) {
        const NodeId u = queue[head];
        for (const NodeId w : g.neighbors(u)) {
          if (dist[w] == kInf) {
            dist[w] = dist[u] + 1;
            sigma[w] = sigma[u];
            queue.push_back(w);
          } else if (dist[w] == dist[u] + 1) {
            sigma[w] = detail::saturating_add(sigma[w], sigma[u], a.saturated);
          }
        }
      }
      for (const NodeId t : queue) {
        if (t <= s) continue;
        const auto d = dist[t];
        if (a.pairs.size() <= d) {
          a.pairs.resize(d + 1, 0);
          a.paths.resize(d + 1, 0);
        }
        ++a.pairs[d];
        a.paths[d] = detail::saturating_add(a.paths[d], sigma[t], a.saturated);
      }
    }
  });
  std::vector<std::uint64_t> pairs, paths;
  bool saturated = false;
  for (const auto& a : acc) {
    if (pairs.size() < a.pairs.size()) {
      pairs.resize(a.pairs.size(), 0);
      paths.resize(a.pairs.size(), 0);
    }
    for (std::size_t d = 0; d < a.pairs.size(); ++d) {
      pairs[d] += a.pairs[d];
      paths[d] = detail::saturating_add(paths[d], a.paths[d], saturated);
    }
    saturated = saturated || a.saturated;
  }
  DistanceHistogram h;
  std::uint64_t length_sum = 0;
  for (std::size_t d = 1; d < pairs.size(); ++d) {
    if (pairs[d] == 0) continue;
    h.counts[static_cast<std::uint32_t>(d)] = pairs[d];
    h.connected_pairs += pairs[d];
    length_sum += pairs[d] * d;
    h.diameter = static_cast<std::uint32_t>(d);
  }
  if (h.connected_pairs > 0) {
    h.mean = static_cast<double>(length_sum) / static_cast<double>(h.connected_pairs);
    h.diameter_pair_count = pairs[h.diameter];
    h.diameter_geodesic_count = paths[h.diameter];
  }
  const long double all_pairs = static_cast<long double>(n) * (static_cast<long double>(n) - 1) / 2;
  h.connected_pair_share = n < 2 ? 0.0 : static_cast<double>(h.connected_pairs / all_pairs);
  h.geodesic_count_saturated = saturated;
  return h;
}

// Path weights are kept in fixed point with denominator lcm(1..20), so the
// weight 1/m of any edge with m <= 20 is exact and ties between paths are
// detected exactly. Larger multiplicities are rounded to the nearest unit.
inline constexpr std::int64_t kWeightScale = 232792560;

inline std::int64_t fixed_weight(std::uint32_t multiplicity) {
  return (kWeightScale + multiplicity / 2) / multiplicity;
}

inline double weight_from_fixed(std::int64_t w) {
  return static_cast<double>(w) / static_cast<double>(kWeightScale);
}

struct GeodesicMeasure {
  std::uint32_t hops = 0;
  std::int64_t weight = 0;  // fixed point, see kWeightScale
  double weight_value() const { return weight_from_fixed(weight); }
};

// Reusable buffers for repeated single-pair searches.
class PathSearch {
 public:
  explicit PathSearch(const CollaborationNetwork& g)
      : g_(g), stamp_(g.node_count(), 0), hops_(g.node_count()), weight_(g.node_count()) {}

  // Fewest hops; among hop-minimal paths the lightest.
  std::optional<GeodesicMeasure> unweighted(NodeId s, NodeId t) {
    next_epoch();
    queue_.clear();
    visit(s, 0, 0);
    queue_.push_back(s);
    for (std::size_t head = 0; head < queue_.size(); ++head) {
      const NodeId u = queue_[head];
      if (u == t) return GeodesicMeasure{hops_[u], weight_[u]};
      const auto nb = g_.neighbors(u);
      const auto ms = g_.multiplicities(u);
      for (std::size_t i = 0; i < nb.size(); ++i) {
        const NodeId w = nb[i];
        const std::int64_t cand = weight_[u] + fixed_weight(ms[i]);
        if (stamp_[w] != epoch_) {
          visit(w, hops_[u] + 1, cand);
          queue_.push_back(w);
        } else if (hops_[w] == hops_[u] + 1 && cand < weight_[w]) {
          weight_[w] = cand;
        }
      }
    }
    return std::nullopt;
  }

  // Lightest path by summed 1/m; among those the one with fewest hops.
  std::optional<GeodesicMeasure> weighted(NodeId s, NodeId t) {
    next_epoch();
    using Key = std::tuple<std::int64_t, std::uint32_t, NodeId>;
    std::priority_queue<Key, std::vector<Key>, std::greater<>> heap;
    visit(s, 0, 0);
    heap.emplace(0, 0, s);
    while (!heap.empty()) {
      const auto [w, h, u] = heap.top();
      heap.pop();
      if (w != weight_[u] || h != hops_[u]) continue;
      if (u == t) return GeodesicMeasure{h, w};
      const auto nb = g_.neighbors(u);
      const auto ms = g_.multiplicities(u);
      for (std::size_t i = 0; i < nb.size(); ++i) {
        const NodeId x = nb[i];
        const std::int64_t cw = w + fixed_weight(ms[i]);
        const std::uint32_t ch = h + 1;
        if (stamp_[x] != epoch_ || cw < weight_[x] || (cw == weight_[x] && ch < hops_[x])) {
          visit(x, ch, cw);
          heap.emplace(cw, ch, x);
        }
      }
    }
    return std::nullopt;
  }

  // Hop distance only.
  std::optional<std::uint32_t> hops(NodeId s, NodeId t) {
    const auto r = unweighted(s, t);
    if (!r) return std::nullopt;
    return r->hops;
  }

 private:
  void next_epoch() {
    if (++epoch_ == 0) {
      std::fill(stamp_.begin(), stamp_.end(), 0);
      epoch_ = 1;
    }
  }
  void visit(NodeId v, std::uint32_t h, std::int64_t w) {
    stamp_[v] = epoch_;
    hops_[v] = h;
    weight_[v] = w;
  }

  const CollaborationNetwork& g_;
  std::vector<std::uint32_t> stamp_;
  std::vector<std::uint32_t> hops_;
  std::vector<std::int64_t> weight_;
  std::vector<NodeId> queue_;
  std::uint32_t epoch_ = 0;
};

// Uniform unordered pairs of distinct giant-component nodes, with replacement.
inline std::vector<std::pair<NodeId, NodeId>> sample_giant_pairs(const std::vector<NodeId>& giant,
                                                                 std::size_t count, std::mt19937_64& rng) {
  std::vector<std::pair<NodeId, NodeId>> pairs;
  pairs.reserve(count);
  std::uniform_int_distribution<std::size_t> pick(0, giant.size() - 1);
  while (pairs.size() < count) {
    const auto a = pick(rng), b = pick(rng);
    if (a != b) pairs.emplace_back(giant[a], giant[b]);
  }
  return pairs;
}

struct SampledDistanceEstimate {
  double mean = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double stddev = 0.0;
  std::size_t sample_size = 0;
  std::uint64_t seed = 0;
  bool exhaustive = false;
};

// Mean geodesic distance of the giant component from `sample_pairs` random
// pairs, with a normal-approximation 95% interval mean +- 1.96 s / sqrt(N).
// sample_pairs == 0 enumerates every pair of the giant component instead; the
// result is then exact and the interval collapses to the mean.
inline SampledDistanceEstimate sampled_mean_distance(const CollaborationNetwork& g, std::size_t sample_pairs,
                                                     std::uint64_t seed, unsigned threads = 0) {
  const auto giant = giant_component_nodes(g);
  if (giant.size() < 2)
    throw ArgumentError("distances", "sampled_mean_distance", "giant component has fewer than two nodes");
  SampledDistanceEstimate est;
  est.seed = seed;
  if (sample_pairs == 0) {
    // Exhaustive: BFS from every giant node, pairs counted once.
    std::uint64_t total = 0, pairs = 0;
    std::vector<std::uint32_t> dist(g.node_count());
    std::vector<NodeId> queue;
    for (const NodeId s : giant) {
      std::fill(dist.begin(), dist.end(), ~std::uint32_t{0});
      queue.assign(1, s);
      dist[s] = 0;
      for (std::size_t head = 0; head < queue.size(); ++head)
        for (const NodeId w : g.neighbors(queue[head]))
          if (dist[w] == ~std::uint32_t{0}) {
            dist[w] = dist[queue[head]] + 1;
            queue.push_back(w);
          }
      for (const NodeId t : queue)
        if (t > s) {
          total += dist[t];
          ++pairs;
        }
    }
    est.exhaustive = true;
    est.sample_size = pairs;
    est.mean = static_cast<double>(total) / static_cast<double>(pairs);
    est.ci_low = est.ci_high = est.mean;
    return est;
  }
  std::mt19937_64 rng(seed);
  const auto pairs = sample_giant_pairs(giant, sample_pairs, rng);
  std::vector<std::uint32_t> d(pairs.size());
  if (threads == 0) threads = thread_budget();
  parallel_blocks(pairs.size(), threads, [&](unsigned, std::size_t b, std::size_t e) {
    PathSearch search(g);
    for (std::size_t i = b; i < e; ++i) {
      const auto r = search.hops(pairs[i].first, pairs[i].second);
      if (!r) throw Error("distances", "sampled_mean_distance", "sampled giant-component pair is disconnected");
      d[i] = *r;
    }
  });
  std::uint64_t s1 = 0, s2 = 0;
  for (const auto x : d) {
    s1 += x;
    s2 += std::uint64_t{x} * x;
  }
  const long double N = static_cast<long double>(d.size());
  const long double mean = static_cast<long double>(s1) / N;
  const long double var = d.size() > 1 ? (static_cast<long double>(s2) - N * mean * mean) / (N - 1) : 0.0L;
  est.sample_size = d.size();
  est.mean = static_cast<double>(mean);
  est.stddev = static_cast<double>(std::sqrt(std::max(var, 0.0L)));
  const double half = 1.96 * est.stddev / std::sqrt(static_cast<double>(d.size()));
  est.ci_low = est.mean - half;
  est.ci_high = est.mean + half;
  return est;
}

struct SmallWorldIndex {
  double k = 0.0;                       // 2m / n
  std::optional<double> expected_d;     // ln n / ln k, undefined for k <= 1
  std::optional<bool> is_small_world;   // observed <= expected
};

inline SmallWorldIndex small_world_index(std::size_t n, std::size_t m, double observed_mean) {
  SmallWorldIndex r;
  if (n == 0) return r;
  r.k = 2.0 * static_cast<double>(m) / static_cast<double>(n);
  if (r.k > 1.0 && n > 1) {
    r.expected_d = std::log(static_cast<double>(n)) / std::log(r.k);
    r.is_small_world = observed_mean <= *r.expected_d;
  }
  return r;
}

struct WeightedComparison {
  double mean_weighted_distance = 0.0;
  double mean_hops_of_weighted_geodesic = 0.0;
  double mean_unweighted_distance = 0.0;
  double mean_weight_of_unweighted_geodesic = 0.0;
  std::size_t sample_size = 0;
  std::uint64_t seed = 0;
  bool paired = false;
};

// Weighted (w = 1/m) versus hop geodesics on the giant component. By default
// the two searches use independent pair samples; `paired` reuses the first
// sample for both, which makes the optimality inequalities hold exactly.
inline WeightedComparison weighted_comparison(const CollaborationNetwork& g, std::size_t sample_pairs,
                                              std::uint64_t seed, bool paired = false, unsigned threads = 0) {
  const auto giant = giant_component_nodes(g);
  if (giant.size() < 2)
    throw ArgumentError("distances", "weighted_comparison", "giant component has fewer than two nodes");
  if (sample_pairs == 0) throw ArgumentError("distances", "weighted_comparison", "sample_pairs must be >= 1");
  std::seed_seq seq_a{seed, std::uint64_t{1}}, seq_b{seed, std::uint64_t{2}};
  std::mt19937_64 rng_a(seq_a), rng_b(seq_b);
  const auto sample_a = sample_giant_pairs(giant, sample_pairs, rng_a);
  const auto sample_b = paired ? sample_a : sample_giant_pairs(giant, sample_pairs, rng_b);
  std::vector<GeodesicMeasure> wres(sample_pairs), ures(sample_pairs);
  if (threads == 0) threads = thread_budget();
  parallel_blocks(sample_pairs, threads, [&](unsigned, std::size_t b, std::size_t e) {
    PathSearch search(g);
    for (std::size_t i = b; i < e; ++i) {
      const auto w = search.weighted(sample_a[i].first, sample_a[i].second);
      const auto u = search.unweighted(sample_b[i].first, sample_b[i].second);
      if (!w || !u) throw Error("distances", "weighted_comparison", "sampled giant-component pair is disconnected");
      wres[i] = *w;
      ures[i] = *u;
    }
  });
  std::int64_t ww = 0, uw = 0;
  std::uint64_t wh = 0, uh = 0;
  for (std::size_t i = 0; i < sample_pairs; ++i) {
    ww += wres[i].weight;
    wh += wres[i].hops;
    uw += ures[i].weight;
    uh += ures[i].hops;
  }
  const double N = static_cast<double>(sample_pairs);
  WeightedComparison r;
  r.mean_weighted_distance = weight_from_fixed(ww) / N;
  r.mean_hops_of_weighted_geodesic = static_cast<double>(wh) / N;
  r.mean_unweighted_distance = static_cast<double>(uh) / N;
  r.mean_weight_of_unweighted_geodesic = weight_from_fixed(uw) / N;
  r.sample_size = sample_pairs;
  r.seed = seed;
  r.paired = paired;
  return r;
}

}  // namespace collabnet
