#pragma once

// Per-network metric report and field-by-field report comparison.

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "collabnet/clustering.hpp"
#include "collabnet/components.hpp"
#include "collabnet/degree.hpp"
#include "collabnet/distances.hpp"
#include "collabnet/error.hpp"
#include "collabnet/network.hpp"

namespace collabnet {

inline constexpr const char* kMetricReportSchema = "collabnet.metric_report/1";

struct MetricReport {
  std::string schema_version = kMetricReportSchema;
  std::string network;
  std::uint64_t nodes = 0;
  std::uint64_t edges = 0;

  double giant_share = 0.0;
  std::uint64_t component_count = 0;
  double bicomponent_share = 0.0;
  std::uint64_t articulation_points = 0;
  double mean_degree = 0.0;
  std::uint32_t median_degree = 0;
  std::uint32_t q3_degree = 0;
  std::uint32_t max_degree = 0;
  double skewness = 0.0;
  double gini = 0.0;
  std::optional<double> transitivity;
  double avg_clustering = 0.0;
  double clustering_ones_share = 0.0;
  std::optional<double> assortativity_pearson;
  std::optional<double> assortativity_log;
  std::optional<double> assortativity_spearman;
  std::optional<double> baseline_random;
  std::optional<double> baseline_configuration;

  // Filled from the distances stage: "exact", "sampled" or "none".
  std::string distance_method = "none";
  std::optional<double> mean_distance;
  std::optional<std::uint32_t> diameter;
  std::optional<double> small_world_expected;
  std::optional<bool> small_world;

  std::map<std::uint64_t, std::uint64_t> degree_histogram;
  std::map<std::uint64_t, std::uint64_t> component_size_histogram;
  std::map<std::uint64_t, std::uint64_t> clique_census;
};

struct MetricOptions {
  ClusteringOptions clustering;
  unsigned threads = 0;
};

inline MetricReport compute_metric_report(const CollaborationNetwork& g, std::string network_name,
                                          const MetricOptions& options = {}) {
  if (g.empty()) throw ArgumentError("graph_metrics", "report", "network '" + network_name + "' has no edges");
  MetricReport r;
  r.network = std::move(network_name);
  r.nodes = g.node_count();
  r.edges = g.edge_count();

  const auto cc = connected_components(g);
  r.giant_share = cc.giant_share;
  r.component_count = cc.count();
  for (const auto& [size, count] : cc.size_histogram()) r.component_size_histogram[size] = count;
  const auto bc = biconnected_components(g);
  r.bicomponent_share = bc.largest_share;
  r.articulation_points = bc.articulation_points.size();

  const auto degrees = g.degree_sequence();
  const auto ds = degree_stats(degrees);
  r.mean_degree = ds.mean;
  r.median_degree = ds.median;
  r.q3_degree = ds.q3;
  r.max_degree = ds.max;
  r.skewness = ds.skewness;
  r.gini = concentration(degrees).gini;
  for (const auto d : degrees) ++r.degree_histogram[d];

  r.transitivity = transitivity(g, options.threads).value;
  const auto cl = avg_clustering(g, options.clustering, options.threads);
  r.avg_clustering = cl.average;
  r.clustering_ones_share = cl.ones_share;
  for (const auto& [size, count] : clique_neighborhood_census(g, options.clustering, options.threads))
    r.clique_census[size] = count;
  if (g.node_count() >= 2) {
    const auto base = baseline_transitivity(g.node_count(), g.edge_count(), degrees);
    r.baseline_random = base.random;
    r.baseline_configuration = base.configuration;
  }
  const auto as = assortativity(g);
  r.assortativity_pearson = as.pearson;
  r.assortativity_log = as.log_pearson;
  r.assortativity_spearman = as.spearman;
  return r;
}

inline void apply_distances(MetricReport& r, const DistanceHistogram& h) {
  r.distance_method = "exact";
  r.mean_distance = h.mean;
  r.diameter = h.diameter;
  const auto sw = small_world_index(r.nodes, r.edges, h.mean);
  r.small_world_expected = sw.expected_d;
  r.small_world = sw.is_small_world;
}

inline void apply_distances(MetricReport& r, const SampledDistanceEstimate& e) {
  r.distance_method = e.exhaustive ? "exact" : "sampled";
  r.mean_distance = e.mean;
  r.diameter.reset();
  const auto sw = small_world_index(r.nodes, r.edges, e.mean);
  r.small_world_expected = sw.expected_d;
  r.small_world = sw.is_small_world;
}

namespace report_detail {

template <typename T>
nlohmann::json optional_json(const std::optional<T>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

template <typename T>
std::optional<T> optional_from(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<T>();
}

inline nlohmann::json histogram_json(const std::map<std::uint64_t, std::uint64_t>& h) {
  auto a = nlohmann::json::array();
  for (const auto& [k, v] : h) a.push_back({k, v});
  return a;
}

inline std::map<std::uint64_t, std::uint64_t> histogram_from(const nlohmann::json& j) {
  std::map<std::uint64_t, std::uint64_t> h;
  for (const auto& e : j) h[e.at(0).get<std::uint64_t>()] = e.at(1).get<std::uint64_t>();
  return h;
}

}  // namespace report_detail

inline nlohmann::json to_json(const MetricReport& r) {
  using report_detail::histogram_json;
  using report_detail::optional_json;
  nlohmann::json j;
  j["schema_version"] = r.schema_version;
  j["network"] = r.network;
  j["nodes"] = r.nodes;
  j["edges"] = r.edges;
  j["giant_share"] = r.giant_share;
  j["component_count"] = r.component_count;
  j["bicomponent_share"] = r.bicomponent_share;
  j["articulation_points"] = r.articulation_points;
  j["mean_degree"] = r.mean_degree;
  j["median_degree"] = r.median_degree;
  j["q3_degree"] = r.q3_degree;
  j["max_degree"] = r.max_degree;
  j["skewness"] = r.skewness;
  j["gini"] = r.gini;
  j["transitivity"] = optional_json(r.transitivity);
  j["avg_clustering"] = r.avg_clustering;
  j["clustering_ones_share"] = r.clustering_ones_share;
  j["assortativity_pearson"] = optional_json(r.assortativity_pearson);
  j["assortativity_log"] = optional_json(r.assortativity_log);
  j["assortativity_spearman"] = optional_json(r.assortativity_spearman);
  j["baseline_random"] = optional_json(r.baseline_random);
  j["baseline_configuration"] = optional_json(r.baseline_configuration);
  j["distance_method"] = r.distance_method;
  j["mean_distance"] = optional_json(r.mean_distance);
  j["diameter"] = optional_json(r.diameter);
  j["small_world_expected"] = optional_json(r.small_world_expected);
  j["small_world"] = optional_json(r.small_world);
  j["degree_histogram"] = histogram_json(r.degree_histogram);
  j["component_size_histogram"] = histogram_json(r.component_size_histogram);
  j["clique_census"] = histogram_json(r.clique_census);
  j["table1"] = {{"deg", r.mean_degree},
                 {"com", r.giant_share},
                 {"dis", optional_json(r.mean_distance)},
                 {"dia", optional_json(r.diameter)},
                 {"tra", optional_json(r.transitivity)},
                 {"clu", r.avg_clustering},
                 {"mix", optional_json(r.assortativity_pearson)}};
  return j;
}

inline MetricReport metric_report_from_json(const nlohmann::json& j) {
  using report_detail::histogram_from;
  using report_detail::optional_from;
  MetricReport r;
  try {
    r.schema_version = j.at("schema_version").get<std::string>();
    if (r.schema_version != kMetricReportSchema)
      throw SchemaError("cli", "read_report", "unsupported report schema '" + r.schema_version + "'");
    r.network = j.at("network").get<std::string>();
    r.nodes = j.at("nodes").get<std::uint64_t>();
    r.edges = j.at("edges").get<std::uint64_t>();
    r.giant_share = j.at("giant_share").get<double>();
    r.component_count = j.at("component_count").get<std::uint64_t>();
    r.bicomponent_share = j.at("bicomponent_share").get<double>();
    r.articulation_points = j.at("articulation_points").get<std::uint64_t>();
    r.mean_degree = j.at("mean_degree").get<double>();
    r.median_degree = j.at("median_degree").get<std::uint32_t>();
    r.q3_degree = j.at("q3_degree").get<std::uint32_t>();
    r.max_degree = j.at("max_degree").get<std::uint32_t>();
    r.skewness = j.at("skewness").get<double>();
    r.gini = j.at("gini").get<double>();
    r.transitivity = optional_from<double>(j, "transitivity");
    r.avg_clustering = j.at("avg_clustering").get<double>();
    r.clustering_ones_share = j.at("clustering_ones_share").get<double>();
    r.assortativity_pearson = optional_from<double>(j, "assortativity_pearson");
    r.assortativity_log = optional_from<double>(j, "assortativity_log");
    r.assortativity_spearman = optional_from<double>(j, "assortativity_spearman");
    r.baseline_random = optional_from<double>(j, "baseline_random");
    r.baseline_configuration = optional_from<double>(j, "baseline_configuration");
    r.distance_method = j.at("distance_method").get<std::string>();
    r.mean_distance = optional_from<double>(j, "mean_distance");
    r.diameter = optional_from<std::uint32_t>(j, "diameter");
    r.small_world_expected = optional_from<double>(j, "small_world_expected");
    r.small_world = optional_from<bool>(j, "small_world");
    r.degree_histogram = histogram_from(j.at("degree_histogram"));
    r.component_size_histogram = histogram_from(j.at("component_size_histogram"));
    r.clique_census = histogram_from(j.at("clique_census"));
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError("cli", "read_report", std::string("malformed report: ") + e.what());
  }
  return r;
}

struct Tolerance {
  double abs = 0.0;
  double rel = 0.0;
};

// Tolerances keyed by JSON pointer ("/table1/dis"); unlisted numeric fields
// use `fallback`.
struct ReportTolerances {
  Tolerance fallback;
  std::map<std::string, Tolerance> fields;

  Tolerance for_field(const std::string& path) const {
    const auto it = fields.find(path);
    return it == fields.end() ? fallback : it->second;
  }
};

struct FieldDiff {
  std::string path;
  nlohmann::json a;
  nlohmann::json b;
  std::optional<double> delta;  // b - a for numeric fields
  bool within_tolerance = false;
};

struct ReportDiff {
  std::vector<FieldDiff> fields;  // every field that is not identical

  bool passed() const {
    for (const auto& f : fields)
      if (!f.within_tolerance) return false;
    return true;
  }
  bool empty() const { return fields.empty(); }
};

namespace report_detail {

inline void compare_node(const std::string& path, const nlohmann::json& a, const nlohmann::json& b,
                         const ReportTolerances& tol, ReportDiff& out) {
  if (a == b) return;
  if (a.is_number() && b.is_number()) {
    const double x = a.get<double>(), y = b.get<double>();
    const auto t = tol.for_field(path);
    const double bound = t.abs + t.rel * std::max(std::fabs(x), std::fabs(y));
    out.fields.push_back({path, a, b, y - x, std::fabs(y - x) <= bound});
    return;
  }
  if (a.is_object() && b.is_object()) {
    for (const auto& [k, v] : a.items())
      compare_node(path + "/" + k, v, b.contains(k) ? b.at(k) : nlohmann::json(), tol, out);
    for (const auto& [k, v] : b.items())
      if (!a.contains(k)) compare_node(path + "/" + k, nlohmann::json(), v, tol, out);
    return;
  }
  if (a.is_array() && b.is_array() && a.size() == b.size()) {
    for (std::size_t i = 0; i < a.size(); ++i) compare_node(path + "/" + std::to_string(i), a[i], b[i], tol, out);
    return;
  }
  out.fields.push_back({path, a, b, std::nullopt, false});
}

}  // namespace report_detail

inline ReportDiff compare_reports(const nlohmann::json& a, const nlohmann::json& b, const ReportTolerances& tol = {}) {
  const auto version = [](const nlohmann::json& j) {
    return j.is_object() && j.contains("schema_version") && j.at("schema_version").is_string()
               ? j.at("schema_version").get<std::string>()
               : std::string();
  };
  if (version(a).empty() || version(a) != version(b))
    throw SchemaError("cli", "compare_reports",
                      "schema mismatch: '" + version(a) + "' vs '" + version(b) + "'");
  ReportDiff diff;
  report_detail::compare_node("", a, b, tol, diff);
  return diff;
}

inline nlohmann::json to_json(const ReportDiff& d) {
  nlohmann::json fields = nlohmann::json::array();
  for (const auto& f : d.fields) {
    nlohmann::json e{{"path", f.path}, {"a", f.a}, {"b", f.b}, {"within_tolerance", f.within_tolerance}};
    e["delta"] = f.delta ? nlohmann::json(*f.delta) : nlohmann::json(nullptr);
    fields.push_back(std::move(e));
  }
  return {{"passed", d.passed()}, {"differences", fields}};
}

}  // namespace collabnet
