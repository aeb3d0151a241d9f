#pragma once

// End-to-end pipeline: configuration, per-stage artifact writers and the
// hashed output manifest. The CLI subcommands call the same stage functions
// as run_pipeline, so partial runs produce the same files.

#include <openssl/evp.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "collabnet/bibliometrics.hpp"
#include "collabnet/components.hpp"
#include "collabnet/corpus.hpp"
#include "collabnet/degree.hpp"
#include "collabnet/distances.hpp"
#include "collabnet/error.hpp"
#include "collabnet/graphml.hpp"
#include "collabnet/network.hpp"
#include "collabnet/percolation.hpp"
#include "collabnet/powerlaw.hpp"
#include "collabnet/report.hpp"

namespace collabnet {

inline constexpr const char* kManifestSchema = "collabnet.manifest/1";

namespace fs = std::filesystem;

// ---------------------------------------------------------------- config

struct PercolationConfig {
  std::vector<PercolationStrategy> strategies = {PercolationStrategy::Random, PercolationStrategy::DegreeDriven,
                                                 PercolationStrategy::EigenvectorDriven};
  std::size_t steps = 20;
  std::optional<std::size_t> step_nodes;
  double step_fraction = 0.0075;
  std::size_t repetitions = 10;
  std::uint64_t seed = 1;
  CentralityScope eigenvector_scope = CentralityScope::WholeGraph;
  double tipping_epsilon = 0.01;
  double hub_percentile = 99.0;
};

struct RunConfig {
  std::string corpus;                  // DBLP-dialect XML, optionally gzip-compressed
  std::optional<std::string> graphml;  // analyse this graph instead of ingesting a corpus
  std::string graph_name = "whole";    // network name used with `graphml`
  int year_min = 1936;
  int year_max = 2008;
  std::vector<std::string> networks = {"whole", "conference", "journal"};
  std::string output_dir = "out";

  bool run_metrics = true;
  bool run_distances = true;
  bool run_weighted = true;
  bool run_powerlaw = true;
  bool run_percolation = true;

  std::size_t sample_pairs = 10000;
  std::uint64_t distance_seed = 1;
  std::uint64_t weighted_seed = 1;
  bool weighted_paired = false;
  std::size_t exact_node_limit = 100000;
  bool force_exact = false;

  std::size_t bootstrap_count = 1000;
  std::uint64_t powerlaw_seed = 1;

  PercolationConfig percolation;
  ClusteringOptions clustering;
  unsigned threads = 0;

  void validate() const {
    if (year_min > year_max)
      throw ArgumentError("cli", "validate_config",
                          fmt::format("year_min {} exceeds year_max {}", year_min, year_max));
    if (!graphml && corpus.empty()) throw ArgumentError("cli", "validate_config", "no corpus or graphml input");
    if (networks.empty() && !graphml) throw ArgumentError("cli", "validate_config", "no network selected");
    for (const auto& n : networks)
      if (n != "whole" && n != "conference" && n != "journal")
        throw ArgumentError("cli", "validate_config", "unknown network '" + n + "'");
    if (output_dir.empty()) throw ArgumentError("cli", "validate_config", "empty output directory");
    if (percolation.repetitions == 0 || percolation.steps == 0)
      throw ArgumentError("cli", "validate_config", "percolation steps and repetitions must be positive");
  }
};

inline ClassSet network_classes(const std::string& network) {
  if (network == "whole") return ClassSet::all();
  ClassSet s;
  if (network == "conference") s.insert(PublicationClass::Conference);
  else if (network == "journal") s.insert(PublicationClass::Journal);
  else throw ArgumentError("cli", "network_classes", "unknown network '" + network + "'");
  return s;
}

inline nlohmann::json to_json(const RunConfig& c) {
  nlohmann::json strategies = nlohmann::json::array();
  for (const auto s : c.percolation.strategies) strategies.push_back(to_string(s));
  nlohmann::json j{
      {"corpus", c.corpus},
      {"graphml", c.graphml ? nlohmann::json(*c.graphml) : nlohmann::json(nullptr)},
      {"graph_name", c.graph_name},
      {"year_min", c.year_min},
      {"year_max", c.year_max},
      {"networks", c.networks},
      {"output_dir", c.output_dir},
      {"run_metrics", c.run_metrics},
      {"run_distances", c.run_distances},
      {"run_weighted", c.run_weighted},
      {"run_powerlaw", c.run_powerlaw},
      {"run_percolation", c.run_percolation},
      {"sample_pairs", c.sample_pairs},
      {"distance_seed", c.distance_seed},
      {"weighted_seed", c.weighted_seed},
      {"weighted_paired", c.weighted_paired},
      {"exact_node_limit", c.exact_node_limit},
      {"force_exact", c.force_exact},
      {"bootstrap_count", c.bootstrap_count},
      {"powerlaw_seed", c.powerlaw_seed},
      {"clustering_low_degree_as_zero", c.clustering.low_degree_as_zero},
      {"clique_census_min_degree", c.clustering.census_min_degree},
      {"percolation",
       {{"strategies", strategies},
        {"steps", c.percolation.steps},
        {"step_nodes", c.percolation.step_nodes ? nlohmann::json(*c.percolation.step_nodes) : nlohmann::json(nullptr)},
        {"step_fraction", c.percolation.step_fraction},
        {"repetitions", c.percolation.repetitions},
        {"seed", c.percolation.seed},
        {"eigenvector_scope",
         c.percolation.eigenvector_scope == CentralityScope::WholeGraph ? "whole" : "giant"},
        {"tipping_epsilon", c.percolation.tipping_epsilon},
        {"hub_percentile", c.percolation.hub_percentile}}},
  };
  return j;
}

// Reads a config object; absent keys keep their defaults, unknown keys are
// rejected.
inline RunConfig run_config_from_json(const nlohmann::json& j, RunConfig c = {}) {
  static const std::set<std::string> top = {
      "corpus", "graphml", "graph_name", "year_min", "year_max", "networks", "output_dir", "run_metrics",
      "run_distances", "run_weighted", "run_powerlaw", "run_percolation", "sample_pairs", "distance_seed",
      "weighted_seed", "weighted_paired", "exact_node_limit", "force_exact", "bootstrap_count", "powerlaw_seed",
      "clustering_low_degree_as_zero", "clique_census_min_degree", "percolation"};
  static const std::set<std::string> perc = {"strategies", "steps", "step_nodes", "step_fraction", "repetitions",
                                             "seed", "eigenvector_scope", "tipping_epsilon", "hub_percentile"};
  if (!j.is_object()) throw ArgumentError("cli", "read_config", "config must be a JSON object");
  try {
    for (const auto& [k, v] : j.items())
      if (!top.count(k)) throw ArgumentError("cli", "read_config", "unknown config key '" + k + "'");
    const auto get = [&](const char* key, auto& field) {
      if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
    };
    get("corpus", c.corpus);
    if (j.contains("graphml"))
      c.graphml = j.at("graphml").is_null() ? std::nullopt : std::optional(j.at("graphml").get<std::string>());
    get("graph_name", c.graph_name);
    get("year_min", c.year_min);
    get("year_max", c.year_max);
    get("networks", c.networks);
    get("output_dir", c.output_dir);
    get("run_metrics", c.run_metrics);
    get("run_distances", c.run_distances);
    get("run_weighted", c.run_weighted);
    get("run_powerlaw", c.run_powerlaw);
    get("run_percolation", c.run_percolation);
    get("sample_pairs", c.sample_pairs);
    get("distance_seed", c.distance_seed);
    get("weighted_seed", c.weighted_seed);
    get("weighted_paired", c.weighted_paired);
    get("exact_node_limit", c.exact_node_limit);
    get("force_exact", c.force_exact);
    get("bootstrap_count", c.bootstrap_count);
    get("powerlaw_seed", c.powerlaw_seed);
    get("clustering_low_degree_as_zero", c.clustering.low_degree_as_zero);
    get("clique_census_min_degree", c.clustering.census_min_degree);
    if (j.contains("percolation")) {
      const auto& p = j.at("percolation");
      for (const auto& [k, v] : p.items())
        if (!perc.count(k)) throw ArgumentError("cli", "read_config", "unknown percolation key '" + k + "'");
      if (p.contains("strategies")) {
        c.percolation.strategies.clear();
        for (const auto& s : p.at("strategies")) c.percolation.strategies.push_back(percolation_strategy_from_string(s));
      }
      if (p.contains("steps")) c.percolation.steps = p.at("steps").get<std::size_t>();
      if (p.contains("step_nodes"))
        c.percolation.step_nodes =
            p.at("step_nodes").is_null() ? std::nullopt : std::optional(p.at("step_nodes").get<std::size_t>());
      if (p.contains("step_fraction")) c.percolation.step_fraction = p.at("step_fraction").get<double>();
      if (p.contains("repetitions")) c.percolation.repetitions = p.at("repetitions").get<std::size_t>();
      if (p.contains("seed")) c.percolation.seed = p.at("seed").get<std::uint64_t>();
      if (p.contains("eigenvector_scope")) {
        const auto s = p.at("eigenvector_scope").get<std::string>();
        if (s == "whole") c.percolation.eigenvector_scope = CentralityScope::WholeGraph;
        else if (s == "giant") c.percolation.eigenvector_scope = CentralityScope::GiantComponent;
        else throw ArgumentError("cli", "read_config", "eigenvector_scope must be 'whole' or 'giant'");
      }
      if (p.contains("tipping_epsilon")) c.percolation.tipping_epsilon = p.at("tipping_epsilon").get<double>();
      if (p.contains("hub_percentile")) c.percolation.hub_percentile = p.at("hub_percentile").get<double>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw ArgumentError("cli", "read_config", std::string("invalid config value: ") + e.what());
  }
  return c;
}

inline RunConfig read_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cli", "read_config", "cannot open config '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ArgumentError("cli", "read_config", std::string("config is not valid JSON: ") + e.what());
  }
  return run_config_from_json(j);
}

// ---------------------------------------------------------------- files

inline std::string sha256_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cli", "hash", "cannot read '" + path.string() + "'");
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  std::vector<char> buf(1 << 16);
  while (in) {
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    EVP_DigestUpdate(ctx, buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, digest, &len);
  EVP_MD_CTX_free(ctx);
  std::string hex;
  for (unsigned i = 0; i < len; ++i) hex += fmt::format("{:02x}", digest[i]);
  return hex;
}

struct Artifact {
  std::string path;  // relative to the output directory
  std::string sha256;
  std::uint64_t bytes = 0;
};

// Collects the artifacts written under one output directory. Every file is
// written to a temporary sibling and renamed into place.
class ArtifactWriter {
 public:
  explicit ArtifactWriter(fs::path root) : root_(std::move(root)) {
    std::error_code ec;
    fs::create_directories(root_, ec);
    if (ec) throw IoError("cli", "write", "cannot create '" + root_.string() + "': " + ec.message());
  }

  const fs::path& root() const { return root_; }

  template <typename Fn>
  void write(const std::string& relative, Fn&& fill) {
    const fs::path target = root_ / relative;
    std::error_code ec;
    fs::create_directories(target.parent_path(), ec);
    if (ec) throw IoError("cli", "write", "cannot create '" + target.parent_path().string() + "'");
    const fs::path tmp = target.string() + ".tmp";
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw IoError("cli", "write", "cannot open '" + tmp.string() + "'");
      fill(out);
      out.flush();
      if (!out) throw IoError("cli", "write", "write failure on '" + tmp.string() + "'");
    }
    fs::rename(tmp, target, ec);
    if (ec) throw IoError("cli", "write", "cannot rename into '" + target.string() + "': " + ec.message());
    artifacts_[relative] = {relative, sha256_file(target), static_cast<std::uint64_t>(fs::file_size(target))};
  }

  void write_json(const std::string& relative, const nlohmann::json& j) {
    write(relative, [&](std::ostream& o) { o << j.dump(2) << '\n'; });
  }

  std::vector<Artifact> artifacts() const {
    std::vector<Artifact> out;
    for (const auto& [k, a] : artifacts_) out.push_back(a);
    return out;
  }

 private:
  fs::path root_;
  std::map<std::string, Artifact> artifacts_;
};

// Stage timing on stderr; never written to artifacts.
class StageTimer {
 public:
  explicit StageTimer(std::string name) : name_(std::move(name)), start_(std::chrono::steady_clock::now()) {}
  ~StageTimer() {
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    fmt::print(stderr, "[collabnet] {:<36} {:9.3f} s\n", name_, s);
  }

 private:
  std::string name_;
  std::chrono::steady_clock::time_point start_;
};

// ---------------------------------------------------------------- csv

inline void write_degree_csv(const CollaborationNetwork& g, std::ostream& out) {
  std::map<std::uint32_t, std::uint64_t> h;
  for (NodeId v = 0; v < g.node_count(); ++v) ++h[g.degree(v)];
  out << "degree,count,share\n";
  for (const auto& [d, c] : h)
    out << fmt::format("{},{},{}\n", d, c, static_cast<double>(c) / static_cast<double>(g.node_count()));
}

inline void write_lorenz_csv(const ConcentrationResult& c, std::ostream& out) {
  out << "top_share,collaboration_share\n";
  for (const auto& [f, s] : c.lorenz_points) out << fmt::format("{},{}\n", f, s);
}

inline void write_size_count_csv(const std::map<std::uint64_t, std::uint64_t>& h, std::ostream& out) {
  out << "size,count\n";
  for (const auto& [s, c] : h) out << s << ',' << c << '\n';
}

inline void write_distances_csv(const DistanceHistogram& h, std::ostream& out) {
  out << "length,count,share\n";
  for (const auto& [len, c] : h.counts)
    out << fmt::format("{},{},{}\n", len, c, static_cast<double>(c) / static_cast<double>(h.connected_pairs));
}

inline void write_ccdf_csv(const std::vector<CcdfPoint>& pts, std::ostream& out) {
  out << "degree,ccdf\n";
  for (const auto& p : pts) out << fmt::format("{},{}\n", p.degree, p.ccdf);
}

inline void write_percolation_csv(const std::vector<PercolationTrace>& traces, std::ostream& out) {
  out << "strategy,repetition,removed_fraction,giant_share,second_share\n";
  for (const auto& t : traces)
    for (std::size_t r = 0; r < t.repetitions.size(); ++r)
      for (const auto& p : t.repetitions[r])
        out << fmt::format("{},{},{},{},{}\n", to_string(t.strategy), r, p.removed_fraction, p.giant_share,
                           p.second_share);
}

// ---------------------------------------------------------------- json

inline nlohmann::json to_json(const DistanceHistogram& h) {
  nlohmann::json counts = nlohmann::json::array();
  for (const auto& [len, c] : h.counts) counts.push_back({len, c});
  return {{"method", "exact"},
          {"mean", h.mean},
          {"diameter", h.diameter},
          {"diameter_pair_count", h.diameter_pair_count},
          {"diameter_geodesic_count", h.diameter_geodesic_count},
          {"geodesic_count_saturated", h.geodesic_count_saturated},
          {"connected_pairs", h.connected_pairs},
          {"connected_pair_share", h.connected_pair_share},
          {"counts", counts}};
}

inline nlohmann::json to_json(const SampledDistanceEstimate& e) {
  return {{"method", e.exhaustive ? "exhaustive" : "sampled"},
          {"mean", e.mean},
          {"ci95", {e.ci_low, e.ci_high}},
          {"stddev", e.stddev},
          {"sample_size", e.sample_size},
          {"seed", e.seed}};
}

inline nlohmann::json to_json(const WeightedComparison& w) {
  return {{"mean_weighted_distance", w.mean_weighted_distance},
          {"mean_hops_of_weighted_geodesic", w.mean_hops_of_weighted_geodesic},
          {"mean_unweighted_distance", w.mean_unweighted_distance},
          {"mean_weight_of_unweighted_geodesic", w.mean_weight_of_unweighted_geodesic},
          {"sample_size", w.sample_size},
          {"seed", w.seed},
          {"paired", w.paired}};
}

inline nlohmann::json to_json(const PowerLawFit& f) {
  nlohmann::json near = nlohmann::json::array();
  for (const auto& c : f.near_optimal)
    near.push_back({{"xmin", c.xmin}, {"alpha", c.alpha}, {"ks_statistic", c.ks_statistic}, {"tail_size", c.tail_size}});
  return {{"status", "fitted"},
          {"xmin", f.xmin},
          {"alpha", f.alpha},
          {"tail_size", f.tail_size},
          {"tail_share", f.tail_share},
          {"ks_statistic", f.ks_statistic},
          {"p_value", f.p_value},
          {"plausible", f.plausible},
          {"bootstrap_count", f.bootstrap_count},
          {"low_bootstrap_warning", f.low_bootstrap_warning},
          {"seed", f.seed},
          {"n", f.n},
          {"near_optimal", near}};
}

inline nlohmann::json to_json(const HubAnalysis& h) {
  return {{"percentile", h.percentile},
          {"threshold_degree", h.threshold_degree},
          {"hub_count", h.hub_count},
          {"giant_share_before", h.giant_share_before},
          {"giant_share_after", h.giant_share_after}};
}

inline nlohmann::json error_json(const Error& e) {
  return {{"error", {{"module", e.module()}, {"operation", e.operation()}, {"message", e.what()}}}};
}

// ---------------------------------------------------------------- stages

struct IngestResult {
  AffiliationNetwork affiliation;
  CorpusSummary summary;
};

inline IngestResult ingest_corpus(const std::string& path, int year_min, int year_max) {
  CorpusFilter filter;
  filter.year_min = year_min;
  filter.year_max = year_max;
  filter.validate();
  auto source = xml::open_file(path);
  AffiliationBuilder builder;
  const auto summary = parse_corpus(*source, filter, [&](PublicationRecord&& r) { builder.add(r); });
  return {std::move(builder).finish(), summary};
}

inline void write_bibliometrics(ArtifactWriter& w, const IngestResult& in, const std::vector<std::string>& networks) {
  w.write_json("corpus_summary.json", in.summary);
  w.write("productivity.csv",
          [&](std::ostream& o) { write_distribution_csv(productivity_distribution(in.affiliation), o); });
  for (const auto& n : networks)
    w.write("collaboration_level_" + n + ".csv", [&](std::ostream& o) {
      write_distribution_csv(collaboration_level_distribution(in.affiliation, network_classes(n)), o);
    });
}

inline void write_graph(ArtifactWriter& w, const std::string& dir, const CollaborationNetwork& g) {
  w.write(dir + "/graph.graphml", [&](std::ostream& o) { export_graphml(g, o); });
  w.write(dir + "/edges.csv", [&](std::ostream& o) { export_edge_csv(g, o); });
}

inline CollaborationNetwork load_graphml(const std::string& path) {
  auto source = xml::open_file(path);
  return import_graphml(*source);
}

// Seeds used by one network's analyses, recorded in the manifest.
using SeedLog = std::map<std::string, std::uint64_t>;

inline MetricReport run_metrics_stage(ArtifactWriter& w, const std::string& dir, const std::string& name,
                                      const CollaborationNetwork& g, const RunConfig& c) {
  MetricOptions mo;
  mo.clustering = c.clustering;
  mo.threads = c.threads;
  auto report = compute_metric_report(g, name, mo);
  w.write(dir + "/degree.csv", [&](std::ostream& o) { write_degree_csv(g, o); });
  const auto degrees = g.degree_sequence();
  w.write(dir + "/lorenz.csv", [&](std::ostream& o) { write_lorenz_csv(concentration(degrees), o); });
  w.write(dir + "/components.csv", [&](std::ostream& o) { write_size_count_csv(report.component_size_histogram, o); });
  w.write(dir + "/clique_census.csv", [&](std::ostream& o) { write_size_count_csv(report.clique_census, o); });
  return report;
}

inline void run_distance_stage(ArtifactWriter& w, const std::string& dir, const CollaborationNetwork& g,
                               const RunConfig& c, MetricReport* report, SeedLog& seeds) {
  const bool exact = c.force_exact || g.node_count() <= c.exact_node_limit;
  const auto est = sampled_mean_distance(g, c.sample_pairs, c.distance_seed, c.threads);
  seeds["distance_seed"] = c.distance_seed;
  nlohmann::json j{{"sampled", to_json(est)}};
  if (exact) {
    const auto h = distance_histogram(g, c.threads);
    w.write(dir + "/distances.csv", [&](std::ostream& o) { write_distances_csv(h, o); });
    j["exact"] = to_json(h);
    if (report) apply_distances(*report, h);
  } else if (report) {
    apply_distances(*report, est);
  }
  j["small_world"] = [&] {
    const double observed = exact ? j["exact"]["mean"].get<double>() : est.mean;
    const auto sw = small_world_index(g.node_count(), g.edge_count(), observed);
    return nlohmann::json{{"k", sw.k},
                          {"expected_d", sw.expected_d ? nlohmann::json(*sw.expected_d) : nlohmann::json(nullptr)},
                          {"is_small_world", sw.is_small_world ? nlohmann::json(*sw.is_small_world)
                                                               : nlohmann::json(nullptr)}};
  }();
  w.write_json(dir + "/distances.json", j);
}

inline void run_weighted_stage(ArtifactWriter& w, const std::string& dir, const CollaborationNetwork& g,
                               const RunConfig& c, SeedLog& seeds) {
  const auto cmp = weighted_comparison(g, c.sample_pairs, c.weighted_seed, c.weighted_paired, c.threads);
  seeds["weighted_seed"] = c.weighted_seed;
  w.write_json(dir + "/weighted_comparison.json", to_json(cmp));
}

inline void run_powerlaw_stage(ArtifactWriter& w, const std::string& dir, const CollaborationNetwork& g,
                               const RunConfig& c, SeedLog& seeds) {
  const auto h = SampleHistogram::from_samples(g.degree_sequence());
  w.write(dir + "/ccdf.csv", [&](std::ostream& o) { write_ccdf_csv(ccdf(h), o); });
  seeds["powerlaw_seed"] = c.powerlaw_seed;
  nlohmann::json j;
  try {
    TailFitOptions o;
    o.bootstrap_count = c.bootstrap_count;
    o.seed = c.powerlaw_seed;
    o.threads = c.threads;
    j = to_json(fit_tail(h, o));
  } catch (const InsufficientSamplesError& e) {
    j = {{"status", "not_applicable"}, {"reason", e.what()}, {"n", h.total()}};
  } catch (const UnboundedFitError& e) {
    j = {{"status", "not_applicable"}, {"reason", e.what()}, {"n", h.total()}};
  }
  w.write_json(dir + "/powerlaw.json", j);
}

inline void run_percolation_stage(ArtifactWriter& w, const std::string& dir, const CollaborationNetwork& g,
                                  const RunConfig& c, SeedLog& seeds) {
  std::vector<PercolationTrace> traces;
  nlohmann::json summary = nlohmann::json::object();
  for (const auto s : c.percolation.strategies) {
    PercolationPlan plan;
    plan.strategy = s;
    plan.steps = c.percolation.steps;
    plan.step_nodes = c.percolation.step_nodes;
    plan.step_fraction = c.percolation.step_fraction;
    plan.repetitions = c.percolation.repetitions;
    plan.seed = c.percolation.seed;
    plan.eigenvector.scope = c.percolation.eigenvector_scope;
    plan.threads = c.threads;
    auto t = percolate(g, plan);
    const auto tip = tipping_point(t, c.percolation.tipping_epsilon);
    nlohmann::json mean = nlohmann::json::array();
    for (std::size_t i = 0; i < t.points.size(); ++i)
      mean.push_back({{"removed_fraction", t.points[i].removed_fraction},
                      {"giant_share", t.points[i].giant_share},
                      {"second_share", t.points[i].second_share},
                      {"giant_min", t.giant_min[i]},
                      {"giant_max", t.giant_max[i]}});
    summary[to_string(s)] = {{"tipping_point", tip ? nlohmann::json(*tip) : nlohmann::json(nullptr)},
                             {"repetitions", t.repetitions.size()},
                             {"trace", mean}};
    traces.push_back(std::move(t));
  }
  seeds["percolation_seed"] = c.percolation.seed;
  w.write(dir + "/percolation.csv", [&](std::ostream& o) { write_percolation_csv(traces, o); });
  summary["tipping_epsilon"] = c.percolation.tipping_epsilon;
  w.write_json(dir + "/percolation.json", summary);
  w.write_json(dir + "/hubs.json", to_json(hub_analysis(g, c.percolation.hub_percentile)));
}

// Every enabled analysis of one network into `dir`.
inline SeedLog analyse_network(ArtifactWriter& w, const std::string& dir, const std::string& name,
                               const CollaborationNetwork& g, const RunConfig& c) {
  SeedLog seeds;
  write_graph(w, dir, g);
  std::optional<MetricReport> report;
  if (c.run_metrics) {
    StageTimer t(name + ": metrics");
    report = run_metrics_stage(w, dir, name, g, c);
  }
  if (c.run_distances) {
    StageTimer t(name + ": distances");
    run_distance_stage(w, dir, g, c, report ? &*report : nullptr, seeds);
  }
  if (c.run_weighted) {
    StageTimer t(name + ": weighted geodesics");
    run_weighted_stage(w, dir, g, c, seeds);
  }
  if (c.run_powerlaw) {
    StageTimer t(name + ": power-law fit");
    run_powerlaw_stage(w, dir, g, c, seeds);
  }
  if (c.run_percolation) {
    StageTimer t(name + ": percolation");
    run_percolation_stage(w, dir, g, c, seeds);
  }
  if (report) w.write_json(dir + "/report.json", to_json(*report));
  return seeds;
}

inline nlohmann::json manifest_json(const RunConfig& c, const std::map<std::string, SeedLog>& seeds,
                                    const std::vector<Artifact>& artifacts) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& x : artifacts) a.push_back({{"path", x.path}, {"sha256", x.sha256}, {"bytes", x.bytes}});
  nlohmann::json s = nlohmann::json::object();
  for (const auto& [net, log] : seeds) s[net] = log;
  auto config = to_json(c);
  config.erase("output_dir");  // the manifest describes content, not location
  return {{"schema_version", kManifestSchema}, {"config", config}, {"seeds", s}, {"artifacts", a}};
}

struct PipelineResult {
  nlohmann::json manifest;
  fs::path manifest_path;
};

inline PipelineResult run_pipeline(const RunConfig& c) {
  c.validate();
  ArtifactWriter w(c.output_dir);
  std::map<std::string, SeedLog> seeds;
  if (c.graphml) {
    CollaborationNetwork g;
    {
      StageTimer t("import graphml");
      g = load_graphml(*c.graphml);
    }
    seeds[c.graph_name] = analyse_network(w, c.graph_name, c.graph_name, g, c);
  } else {
    IngestResult in;
    {
      StageTimer t("ingest");
      in = ingest_corpus(c.corpus, c.year_min, c.year_max);
    }
    write_bibliometrics(w, in, c.networks);
    for (const auto& name : c.networks) {
      CollaborationNetwork g;
      {
        StageTimer t(name + ": build");
        g = project_collaboration(in.affiliation, network_classes(name));
      }
      seeds[name] = analyse_network(w, name, name, g, c);
    }
  }
  PipelineResult r;
  r.manifest = manifest_json(c, seeds, w.artifacts());
  r.manifest_path = w.root() / "manifest.json";
  const fs::path tmp = r.manifest_path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << r.manifest.dump(2) << '\n';
    if (!out) throw IoError("cli", "run_pipeline", "cannot write manifest");
  }
  fs::rename(tmp, r.manifest_path);
  return r;
}

}  // namespace collabnet
