#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "collabnet/corpus.hpp"
#include "collabnet/error.hpp"

namespace collabnet {

using NodeId = std::uint32_t;

// Bipartite author/paper graph. Paper incidences are stored as CSR rows:
// the authors of paper p are paper_authors[paper_offsets[p] .. paper_offsets[p+1]).
class AffiliationNetwork {
 public:
  std::size_t author_count() const { return author_names_.size(); }
  std::size_t paper_count() const { return paper_keys_.size(); }
  std::size_t edge_count() const { return paper_authors_.size(); }

  const std::string& author_name(NodeId a) const { return author_names_[a]; }
  const std::string& paper_key(std::size_t p) const { return paper_keys_[p]; }
  PublicationClass paper_class(std::size_t p) const { return paper_class_[p]; }
  int paper_year(std::size_t p) const { return paper_year_[p]; }

  std::span<const NodeId> authors_of(std::size_t p) const {
    return {paper_authors_.data() + paper_offsets_[p], paper_authors_.data() + paper_offsets_[p + 1]};
  }
  std::size_t paper_degree(std::size_t p) const { return paper_offsets_[p + 1] - paper_offsets_[p]; }
  std::uint32_t author_degree(NodeId a) const { return author_degree_[a]; }
  const std::vector<std::uint32_t>& author_degrees() const { return author_degree_; }
  const std::vector<std::string>& author_names() const { return author_names_; }

 private:
  friend class AffiliationBuilder;
  std::vector<std::string> author_names_;
  std::vector<std::uint32_t> author_degree_;
  std::vector<std::string> paper_keys_;
  std::vector<PublicationClass> paper_class_;
  std::vector<int> paper_year_;
  std::vector<std::size_t> paper_offsets_{0};
  std::vector<NodeId> paper_authors_;
};

// Incremental construction so records can be consumed straight off the parser.
// Ids are assigned in first-appearance order.
class AffiliationBuilder {
 public:
  void add(const PublicationRecord& record) {
    if (!keys_.emplace(record.key, net_.paper_keys_.size()).second)
      throw ArgumentError("network_build", "build_affiliation",
                          "duplicate publication key '" + record.key + "'");
    net_.paper_keys_.push_back(record.key);
    net_.paper_class_.push_back(record.publication_class);
    net_.paper_year_.push_back(record.year);
    for (const auto& name : record.authors) {
      auto [it, inserted] = authors_.try_emplace(name, static_cast<NodeId>(net_.author_names_.size()));
      if (inserted) {
        net_.author_names_.push_back(name);
        net_.author_degree_.push_back(0);
      }
      net_.paper_authors_.push_back(it->second);
      ++net_.author_degree_[it->second];
    }
    net_.paper_offsets_.push_back(net_.paper_authors_.size());
  }

  AffiliationNetwork finish() && {
    keys_.clear();
    authors_.clear();
    return std::move(net_);
  }

 private:
  AffiliationNetwork net_;
  std::unordered_map<std::string, std::size_t> keys_;
  std::unordered_map<std::string, NodeId> authors_;
};

inline AffiliationNetwork build_affiliation(const std::vector<PublicationRecord>& records) {
  AffiliationBuilder builder;
  for (const auto& r : records) builder.add(r);
  return std::move(builder).finish();
}

struct WeightedEdge {
  NodeId source;
  NodeId target;
  std::uint32_t multiplicity;
  friend bool operator==(const WeightedEdge&, const WeightedEdge&) = default;
};

struct GraphSummary {
  std::size_t n_nodes = 0;
  std::size_t n_edges = 0;
  double mean_degree = 0.0;
  std::vector<std::uint32_t> degree_sequence;
};

// Undirected simple graph over authors; each edge carries the number of
// co-authored papers m >= 1 and the derived distance weight 1/m. Immutable
// after construction, so it may be shared freely across threads.
class CollaborationNetwork {
 public:
  CollaborationNetwork() = default;

  // Builds from an edge list. Parallel edges are merged by summing
  // multiplicities; nodes left without edges are dropped and the remaining
  // ids compacted in their original order. Self-loops are rejected.
  static CollaborationNetwork from_edges(std::vector<std::string> names, std::vector<WeightedEdge> edges) {
    for (auto& e : edges) {
      if (e.source == e.target)
        throw ArgumentError("network_build", "from_edges",
                            "self-loop on node " + std::to_string(e.source));
      if (e.source >= names.size() || e.target >= names.size())
        throw ArgumentError("network_build", "from_edges", "edge endpoint out of range");
      if (e.multiplicity == 0)
        throw ArgumentError("network_build", "from_edges", "edge multiplicity must be >= 1");
      if (e.source > e.target) std::swap(e.source, e.target);
    }
    std::sort(edges.begin(), edges.end(), [](const WeightedEdge& a, const WeightedEdge& b) {
      return a.source != b.source ? a.source < b.source : a.target < b.target;
    });
    std::vector<WeightedEdge> merged;
    merged.reserve(edges.size());
    for (const auto& e : edges) {
      if (!merged.empty() && merged.back().source == e.source && merged.back().target == e.target)
        merged.back().multiplicity += e.multiplicity;
      else
        merged.push_back(e);
    }
    std::vector<NodeId> remap(names.size(), kNone);
    for (const auto& e : merged) remap[e.source] = remap[e.target] = 0;
    CollaborationNetwork g;
    NodeId next = 0;
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (remap[i] == kNone) continue;
      remap[i] = next++;
      g.names_.push_back(std::move(names[i]));
    }
    for (auto& e : merged) {
      e.source = remap[e.source];
      e.target = remap[e.target];
    }
    g.edges_ = std::move(merged);
    g.build_adjacency();
    return g;
  }

  std::size_t node_count() const { return names_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  bool empty() const { return names_.empty(); }

  const std::string& name(NodeId v) const { return names_[v]; }
  const std::vector<std::string>& names() const { return names_; }

  // Canonical edge list: source < target, sorted lexicographically.
  const std::vector<WeightedEdge>& edges() const { return edges_; }

  std::uint32_t degree(NodeId v) const { return static_cast<std::uint32_t>(offsets_[v + 1] - offsets_[v]); }
  std::span<const NodeId> neighbors(NodeId v) const {
    return {adj_.data() + offsets_[v], adj_.data() + offsets_[v + 1]};
  }
  std::span<const std::uint32_t> multiplicities(NodeId v) const {
    return {mult_.data() + offsets_[v], mult_.data() + offsets_[v + 1]};
  }

  static double weight_of(std::uint32_t multiplicity) { return 1.0 / static_cast<double>(multiplicity); }

  // Multiplicity of edge (u, v), 0 if absent.
  std::uint32_t multiplicity(NodeId u, NodeId v) const {
    const auto nb = neighbors(u);
    const auto it = std::lower_bound(nb.begin(), nb.end(), v);
    if (it == nb.end() || *it != v) return 0;
    return multiplicities(u)[static_cast<std::size_t>(it - nb.begin())];
  }
  bool adjacent(NodeId u, NodeId v) const { return multiplicity(u, v) != 0; }

  std::vector<std::uint32_t> degree_sequence() const {
    std::vector<std::uint32_t> d(node_count());
    for (NodeId v = 0; v < d.size(); ++v) d[v] = degree(v);
    return d;
  }

  double mean_degree() const {
    return node_count() == 0 ? 0.0 : 2.0 * static_cast<double>(edge_count()) / static_cast<double>(node_count());
  }

  GraphSummary summary() const { return {node_count(), edge_count(), mean_degree(), degree_sequence()}; }

 private:
  static constexpr NodeId kNone = ~NodeId{0};

  void build_adjacency() {
    const std::size_t n = names_.size();
    offsets_.assign(n + 1, 0);
    for (const auto& e : edges_) {
      ++offsets_[e.source + 1];
      ++offsets_[e.target + 1];
    }
    std::partial_sum(offsets_.begin(), offsets_.end(), offsets_.begin());
    adj_.resize(2 * edges_.size());
    mult_.resize(2 * edges_.size());
    std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
    // Canonical edge order makes every adjacency row come out sorted.
    for (const auto& e : edges_) {
      adj_[cursor[e.target]] = e.source;
      mult_[cursor[e.target]++] = e.multiplicity;
    }
    for (const auto& e : edges_) {
      adj_[cursor[e.source]] = e.target;
      mult_[cursor[e.source]++] = e.multiplicity;
    }
  }

  std::vector<std::string> names_;
  std::vector<WeightedEdge> edges_;
  std::vector<std::size_t> offsets_{0};
  std::vector<NodeId> adj_;
  std::vector<std::uint32_t> mult_;
};

// Projects the affiliation network on authors, counting for every author
// pair the papers (of the selected classes) they share.
inline CollaborationNetwork project_collaboration(const AffiliationNetwork& affiliation, ClassSet classes) {
  if (classes.empty())
    throw ArgumentError("network_build", "project_collaboration", "class set must be non-empty");
  std::vector<std::uint64_t> pairs;
  for (std::size_t p = 0; p < affiliation.paper_count(); ++p) {
    if (!classes.contains(affiliation.paper_class(p))) continue;
    const auto authors = affiliation.authors_of(p);
    for (std::size_t i = 0; i < authors.size(); ++i) {
      for (std::size_t j = i + 1; j < authors.size(); ++j) {
        const NodeId a = std::min(authors[i], authors[j]);
        const NodeId b = std::max(authors[i], authors[j]);
        pairs.push_back((std::uint64_t{a} << 32) | b);
      }
    }
  }
  std::sort(pairs.begin(), pairs.end());
  std::vector<WeightedEdge> edges;
  for (std::size_t i = 0; i < pairs.size();) {
    std::size_t j = i;
    while (j < pairs.size() && pairs[j] == pairs[i]) ++j;
    edges.push_back({static_cast<NodeId>(pairs[i] >> 32), static_cast<NodeId>(pairs[i] & 0xffffffffu),
                     static_cast<std::uint32_t>(j - i)});
    i = j;
  }
  return CollaborationNetwork::from_edges(affiliation.author_names(), std::move(edges));
}

}  // namespace collabnet
