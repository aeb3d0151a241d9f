#pragma once

#include <cstdint>
#include <map>
#include <ostream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "collabnet/network.hpp"

namespace collabnet {

// Frequency table over non-negative integers.
struct DiscreteDistribution {
  std::map<std::uint64_t, std::uint64_t> counts;
  std::uint64_t n = 0;
  double mean = 0.0;
  // Observations at value 0 kept out of `counts`, `n` and `mean`
  // (authorless proceedings volumes in the collaboration-level table).
  std::uint64_t zero_count = 0;

  void add(std::uint64_t value, std::uint64_t times = 1) {
    if (value == 0) {
      zero_count += times;
      return;
    }
    counts[value] += times;
    n += times;
  }

  void finalize() {
    long double total = 0;
    for (const auto& [v, c] : counts) total += static_cast<long double>(v) * static_cast<long double>(c);
    mean = n == 0 ? 0.0 : static_cast<double>(total / static_cast<long double>(n));
  }

  double relative(std::uint64_t value) const {
    const auto it = counts.find(value);
    return it == counts.end() || n == 0 ? 0.0 : static_cast<double>(it->second) / static_cast<double>(n);
  }

  std::uint64_t max_value() const { return counts.empty() ? 0 : counts.rbegin()->first; }

  std::uint64_t weighted_sum() const {
    std::uint64_t s = 0;
    for (const auto& [v, c] : counts) s += v * c;
    return s;
  }
};

// Papers per author: author-node degrees of the affiliation network.
inline DiscreteDistribution productivity_distribution(const AffiliationNetwork& affiliation) {
  DiscreteDistribution d;
  for (const auto deg : affiliation.author_degrees()) d.add(deg);
  d.finalize();
  return d;
}

// Authors per paper for papers of the selected classes.
inline DiscreteDistribution collaboration_level_distribution(const AffiliationNetwork& affiliation,
                                                             ClassSet classes) {
  if (classes.empty())
    throw ArgumentError("bibliometrics", "collaboration_level_distribution", "class set must be non-empty");
  DiscreteDistribution d;
  for (std::size_t p = 0; p < affiliation.paper_count(); ++p)
    if (classes.contains(affiliation.paper_class(p))) d.add(affiliation.paper_degree(p));
  d.finalize();
  return d;
}

// value,count,relative_frequency with the frequency rounded to 0.1%.
inline void write_distribution_csv(const DiscreteDistribution& d, std::ostream& out) {
  out << "value,count,relative_frequency\n";
  for (const auto& [v, c] : d.counts)
    out << fmt::format("{},{},{:.3f}\n", v, c, static_cast<double>(c) / static_cast<double>(d.n));
}

inline nlohmann::json to_json(const DiscreteDistribution& d) {
  nlohmann::json counts = nlohmann::json::array();
  for (const auto& [v, c] : d.counts) counts.push_back({v, c});
  return {{"n", d.n}, {"mean", d.mean}, {"max", d.max_value()}, {"zero_count", d.zero_count}, {"counts", counts}};
}

}  // namespace collabnet
