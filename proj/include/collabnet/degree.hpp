#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "collabnet/error.hpp"
#include "collabnet/network.hpp"

namespace collabnet {

struct DegreeStats {
  double mean = 0.0;
  std::uint32_t median = 0;
  std::uint32_t q3 = 0;
  std::uint32_t max = 0;
  // Population third standardized central moment; 0 for a point mass.
  double skewness = 0.0;
};

// Nearest-rank quantile of an ascending sequence: element at rank ceil(q*n).
inline std::uint32_t nearest_rank(std::span<const std::uint32_t> sorted, std::uint64_t num, std::uint64_t den) {
  const std::uint64_t n = sorted.size();
  std::uint64_t rank = (n * num + den - 1) / den;
  rank = std::clamp<std::uint64_t>(rank, 1, n);
  return sorted[rank - 1];
}

// Moments are accumulated in exact integer arithmetic so symmetric degree
// multisets give a skewness of exactly zero.
inline DegreeStats degree_stats(std::span<const std::uint32_t> degrees) {
  if (degrees.empty()) throw ArgumentError("graph_metrics", "degree_stats", "empty degree sequence");
  std::vector<std::uint32_t> sorted(degrees.begin(), degrees.end());
  std::sort(sorted.begin(), sorted.end());
  using i128 = __int128;
  i128 s1 = 0, s2 = 0, s3 = 0;
  for (const auto d : sorted) {
    const i128 x = d;
    s1 += x;
    s2 += x * x;
    s3 += x * x * x;
  }
  const i128 n = static_cast<i128>(sorted.size());
  DegreeStats out;
  out.mean = static_cast<double>(static_cast<long double>(s1) / static_cast<long double>(n));
  out.median = nearest_rank(sorted, 1, 2);
  out.q3 = nearest_rank(sorted, 3, 4);
  out.max = sorted.back();
  // n^2 * M2 and n^3 * M3
  const i128 c2 = n * s2 - s1 * s1;
  const i128 c3 = n * n * s3 - 3 * n * s1 * s2 + 2 * s1 * s1 * s1;
  if (c2 > 0) {
    const long double v = static_cast<long double>(c2);
    out.skewness = static_cast<double>(static_cast<long double>(c3) / (v * std::sqrt(v)));
  }
  return out;
}

inline DegreeStats degree_stats(const CollaborationNetwork& g) {
  const auto d = g.degree_sequence();
  return degree_stats(d);
}

struct ConcentrationResult {
  // (share of most collaborative scholars, share of collaborations they hold)
  std::vector<std::pair<double, double>> lorenz_points;
  double gini = 0.0;

  // Collaboration share held by the top `fraction` of scholars.
  double share_at(double fraction) const {
    for (const auto& [f, s] : lorenz_points)
      if (f >= fraction) return s;
    return 1.0;
  }
};

// Lorenz curve (scholars sorted by decreasing degree) sampled at every 1%
// and at every tie-group boundary, plus the Gini coefficient
// G = sum_i sum_j |x_i - x_j| / (2 n^2 mean), computed exactly in O(n log n).
inline ConcentrationResult concentration(std::span<const std::uint32_t> degrees) {
  if (degrees.empty()) throw ArgumentError("graph_metrics", "concentration", "empty degree sequence");
  std::vector<std::uint32_t> x(degrees.begin(), degrees.end());
  if (*std::min_element(x.begin(), x.end()) < 1)
    throw ArgumentError("graph_metrics", "concentration", "degrees must be >= 1");
  std::sort(x.begin(), x.end());
  const std::uint64_t n = x.size();
  using i128 = __int128;
  i128 weighted = 0, total = 0;
  for (std::uint64_t i = 0; i < n; ++i) {
    weighted += static_cast<i128>(2 * (i + 1)) * x[i] - static_cast<i128>(n + 1) * x[i];
    total += x[i];
  }
  ConcentrationResult out;
  out.gini = static_cast<double>(static_cast<long double>(weighted) /
                                 (static_cast<long double>(n) * static_cast<long double>(total)));

  std::reverse(x.begin(), x.end());
  std::vector<std::uint64_t> cum(n + 1, 0);
  for (std::uint64_t i = 0; i < n; ++i) cum[i + 1] = cum[i] + x[i];
  // Positions in units of 1/100 of a scholar.
  std::vector<std::uint64_t> keys;
  keys.reserve(101 + 64);
  for (std::uint64_t k = 0; k <= 100; ++k) keys.push_back(k * n);
  for (std::uint64_t i = 1; i <= n; ++i)
    if (i == n || x[i] != x[i - 1]) keys.push_back(i * 100);
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  const long double S = static_cast<long double>(cum[n]);
  for (const auto key : keys) {
    const std::uint64_t i = key / 100, r = key % 100;
    long double held = static_cast<long double>(cum[i]);
    if (r != 0) held += static_cast<long double>(r) / 100.0L * static_cast<long double>(x[i]);
    out.lorenz_points.emplace_back(static_cast<double>(static_cast<long double>(key) / (100.0L * n)),
                                   static_cast<double>(held / S));
  }
  return out;
}

}  // namespace collabnet
