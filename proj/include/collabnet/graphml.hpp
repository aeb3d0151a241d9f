#pragma once

#include <charconv>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include <fmt/format.h>

#include "collabnet/network.hpp"
#include "collabnet/xml.hpp"

namespace collabnet {

// Writes GraphML with node attribute "name" and edge attributes
// "multiplicity" (co-authored papers) and "weight" (1/multiplicity).
inline void export_graphml(const CollaborationNetwork& g, std::ostream& out) {
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
         "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
         "  <key id=\"name\" for=\"node\" attr.name=\"name\" attr.type=\"string\"/>\n"
         "  <key id=\"multiplicity\" for=\"edge\" attr.name=\"multiplicity\" attr.type=\"int\"/>\n"
         "  <key id=\"weight\" for=\"edge\" attr.name=\"weight\" attr.type=\"double\"/>\n"
         "  <graph id=\"G\" edgedefault=\"undirected\">\n";
  for (NodeId v = 0; v < g.node_count(); ++v)
    out << fmt::format("    <node id=\"n{}\"><data key=\"name\">{}</data></node>\n", v, xml::escape(g.name(v)));
  for (const auto& e : g.edges())
    out << fmt::format(
        "    <edge source=\"n{}\" target=\"n{}\"><data key=\"multiplicity\">{}</data>"
        "<data key=\"weight\">{}</data></edge>\n",
        e.source, e.target, e.multiplicity, CollaborationNetwork::weight_of(e.multiplicity));
  out << "  </graph>\n</graphml>\n";
  if (!out) throw IoError("network_build", "export_graphml", "write failure");
}

// Sorted edge list for external oracle scripts: src_id,dst_id,multiplicity.
inline void export_edge_csv(const CollaborationNetwork& g, std::ostream& out) {
  out << "src_id,dst_id,multiplicity\n";
  for (const auto& e : g.edges()) out << e.source << ',' << e.target << ',' << e.multiplicity << '\n';
  if (!out) throw IoError("network_build", "export_edge_csv", "write failure");
}

struct GraphmlOptions {
  // Strict: self-loops, duplicate edges and isolated nodes are errors.
  // Lenient: self-loops and isolated nodes are dropped, duplicates merged.
  bool strict = true;
};

namespace detail {

class GraphmlHandler final : public xml::Handler {
 public:
  explicit GraphmlHandler(const xml::StreamingParser& parser) : parser_(parser) {}

  void start_element(std::string_view name, const XML_Char** attrs) override {
    if (name == "key") {
      const char* id = xml::find_attribute(attrs, "id");
      const char* attr_name = xml::find_attribute(attrs, "attr.name");
      if (id) key_names_[id] = attr_name ? attr_name : id;
    } else if (name == "node") {
      const char* id = xml::find_attribute(attrs, "id");
      if (!id) fail("node without id");
      if (!node_index_.emplace(id, static_cast<NodeId>(node_names_.size())).second)
        fail(std::string("duplicate node id '") + id + "'");
      node_names_.emplace_back(id);
      in_node_ = true;
    } else if (name == "edge") {
      const char* s = xml::find_attribute(attrs, "source");
      const char* t = xml::find_attribute(attrs, "target");
      if (!s || !t) fail("edge without source/target");
      edge_source_ = s;
      edge_target_ = t;
      edge_multiplicity_ = 1;
      in_edge_ = true;
    } else if (name == "data") {
      const char* key = xml::find_attribute(attrs, "key");
      data_key_.clear();
      if (key) {
        const auto it = key_names_.find(key);
        data_key_ = it == key_names_.end() ? key : it->second;
      }
      text_.clear();
      in_data_ = true;
    }
  }

  void end_element(std::string_view name) override {
    if (name == "data") {
      in_data_ = false;
      if (in_node_ && data_key_ == "name") {
        node_labels_.resize(node_names_.size());
        node_labels_.back() = text_;
      } else if (in_edge_ && data_key_ == "multiplicity") {
        unsigned long long m = 0;
        const auto* b = text_.data();
        const auto* e = b + text_.size();
        const auto [ptr, ec] = std::from_chars(b, e, m);
        if (ec != std::errc{} || ptr != e || m == 0 || m > 0xffffffffull)
          fail("invalid multiplicity '" + text_ + "'");
        edge_multiplicity_ = static_cast<std::uint32_t>(m);
      }
    } else if (name == "node") {
      in_node_ = false;
    } else if (name == "edge") {
      in_edge_ = false;
      raw_edges_.push_back({edge_source_, edge_target_, edge_multiplicity_});
    }
  }

  void characters(std::string_view text) override {
    if (in_data_) text_.append(text);
  }

  CollaborationNetwork finish(const GraphmlOptions& options) {
    std::vector<WeightedEdge> edges;
    std::set<std::pair<NodeId, NodeId>> seen;
    for (const auto& raw : raw_edges_) {
      const auto s = node_index_.find(raw.source);
      const auto t = node_index_.find(raw.target);
      if (s == node_index_.end() || t == node_index_.end())
        throw ParseError("network_build", "import_graphml",
                         "edge references unknown node '" + raw.source + "' or '" + raw.target + "'", -1);
      if (s->second == t->second) {
        if (options.strict)
          throw ArgumentError("network_build", "import_graphml", "self-loop on node '" + raw.source + "'");
        continue;
      }
      const auto key = std::minmax(s->second, t->second);
      if (!seen.insert(key).second && options.strict)
        throw ArgumentError("network_build", "import_graphml",
                            "duplicate edge '" + raw.source + "'-'" + raw.target + "'");
      edges.push_back({s->second, t->second, raw.multiplicity});
    }
    if (options.strict) {
      std::vector<bool> touched(node_names_.size(), false);
      for (const auto& e : edges) touched[e.source] = touched[e.target] = true;
      for (std::size_t i = 0; i < touched.size(); ++i)
        if (!touched[i])
          throw ArgumentError("network_build", "import_graphml", "isolated node '" + node_names_[i] + "'");
    }
    std::vector<std::string> names = node_names_;
    node_labels_.resize(names.size());
    for (std::size_t i = 0; i < names.size(); ++i)
      if (!node_labels_[i].empty()) names[i] = node_labels_[i];
    return CollaborationNetwork::from_edges(std::move(names), std::move(edges));
  }

 private:
  struct RawEdge {
    std::string source, target;
    std::uint32_t multiplicity;
  };

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("network_build", "import_graphml", what, parser_.byte_offset());
  }

  const xml::StreamingParser& parser_;
  std::map<std::string, std::string> key_names_;
  std::unordered_map<std::string, NodeId> node_index_;
  std::vector<std::string> node_names_;
  std::vector<std::string> node_labels_;
  std::vector<RawEdge> raw_edges_;
  std::string edge_source_, edge_target_, data_key_, text_;
  std::uint32_t edge_multiplicity_ = 1;
  bool in_node_ = false, in_edge_ = false, in_data_ = false;
};

}  // namespace detail

inline CollaborationNetwork import_graphml(xml::ByteSource& source, const GraphmlOptions& options = {}) {
  xml::StreamingParser parser("network_build", "import_graphml");
  detail::GraphmlHandler handler(parser);
  parser.run(source, handler);
  return handler.finish(options);
}

inline CollaborationNetwork import_graphml_string(std::string text, const GraphmlOptions& options = {}) {
  auto src = xml::from_string(std::move(text));
  return import_graphml(*src, options);
}

}  // namespace collabnet
