#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <string>

#include "collabnet/collabnet.hpp"

using namespace collabnet;

namespace {

void write_subcommand_manifest(const ArtifactWriter& w, const RunConfig& c, const std::string& name,
                               const SeedLog& seeds) {
  const auto m = manifest_json(c, {{name, seeds}}, w.artifacts());
  std::ofstream out(w.root() / "manifest.json", std::ios::binary | std::ios::trunc);
  out << m.dump(2) << '\n';
  if (!out) throw IoError("cli", "manifest", "cannot write manifest");
}

ReportTolerances parse_tolerances(const std::vector<std::string>& specs, double abs, double rel) {
  ReportTolerances t;
  t.fallback = {abs, rel};
  for (const auto& s : specs) {
    // FIELD=ABS[:REL]
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ArgumentError("cli", "compare", "tolerance '" + s + "' is not FIELD=ABS[:REL]");
    Tolerance tol;
    const auto rest = s.substr(eq + 1);
    const auto colon = rest.find(':');
    try {
      tol.abs = std::stod(rest.substr(0, colon));
      if (colon != std::string::npos) tol.rel = std::stod(rest.substr(colon + 1));
    } catch (const std::exception&) {
      throw ArgumentError("cli", "compare", "tolerance '" + s + "' is not numeric");
    }
    auto field = s.substr(0, eq);
    if (field.empty() || field[0] != '/') field = "/" + field;
    t.fields[field] = tol;
  }
  return t;
}

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cli", "compare", "cannot open '" + path + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError("cli", "compare", "'" + path + "' is not valid JSON: " + e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Collaboration network analysis pipeline"};
  app.require_subcommand(1);
  app.fallthrough();
  unsigned threads = 0;
  app.add_option("--threads", threads, "Worker threads (default: COLLABNET_THREADS or all cores)");

  RunConfig cfg;
  std::string graph_path, output_dir = "out", config_path, network_name = "whole";
  std::vector<std::string> networks;

  const auto add_years = [&](CLI::App* sub) {
    sub->add_option("--year-min", cfg.year_min, "First publication year kept")->capture_default_str();
    sub->add_option("--year-max", cfg.year_max, "Last publication year kept")->capture_default_str();
  };
  const auto add_graph_input = [&](CLI::App* sub) {
    sub->add_option("--graph", graph_path, "GraphML input")->required()->check(CLI::ExistingFile);
    sub->add_option("--name", network_name, "Network name recorded in the outputs")->capture_default_str();
    sub->add_option("-o,--output", output_dir, "Output directory")->capture_default_str();
  };

  // fixture
  auto* fixture = app.add_subcommand("fixture", "Generate a synthetic DBLP-dialect corpus");
  FixtureParams fp;
  std::string fixture_out;
  fixture->add_option("--seed", fp.seed)->capture_default_str();
  fixture->add_option("--authors", fp.n_authors)->capture_default_str();
  fixture->add_option("--papers", fp.n_papers)->capture_default_str();
  fixture->add_option("--mean-authors", fp.mean_authors_per_paper)->capture_default_str();
  fixture->add_option("--year-first", fp.year_first)->capture_default_str();
  fixture->add_option("--year-last", fp.year_last)->capture_default_str();
  fixture->add_option("-o,--output", fixture_out, "Output file (default: stdout)");

  // ingest
  auto* ingest = app.add_subcommand("ingest", "Parse a corpus and write bibliometric tables");
  ingest->add_option("corpus", cfg.corpus, "DBLP XML (optionally gzip-compressed)")->required();
  add_years(ingest);
  ingest->add_option("--network", networks, "Networks for collaboration-level tables");
  ingest->add_option("-o,--output", output_dir, "Output directory")->capture_default_str();

  // build
  auto* build = app.add_subcommand("build", "Build collaboration networks and export them");
  build->add_option("corpus", cfg.corpus, "DBLP XML (optionally gzip-compressed)")->required();
  add_years(build);
  build->add_option("--network", networks, "whole, conference and/or journal (default: all three)");
  build->add_option("-o,--output", output_dir, "Output directory")->capture_default_str();

  // metrics
  auto* metrics = app.add_subcommand("metrics", "Structural metrics report for one network");
  add_graph_input(metrics);
  bool count_low_degree = true;
  metrics->add_option("--clustering-low-degree-as-zero", count_low_degree,
                      "Count degree-0/1 nodes with C_i = 0 in the average")
      ->capture_default_str();
  metrics->add_option("--census-min-degree", cfg.clustering.census_min_degree)->capture_default_str();

  // distances
  auto* distances = app.add_subcommand("distances", "Geodesic statistics and the weighted comparison");
  add_graph_input(distances);
  distances->add_option("--sample-pairs", cfg.sample_pairs)->capture_default_str();
  distances->add_option("--seed", cfg.distance_seed, "Seed of the distance sample")->capture_default_str();
  distances->add_option("--weighted-seed", cfg.weighted_seed)->capture_default_str();
  distances->add_flag("--paired", cfg.weighted_paired, "Use one pair sample for both geodesic objectives");
  distances->add_flag("--force", cfg.force_exact, "Exact all-pairs distances even above the node limit");
  distances->add_option("--exact-node-limit", cfg.exact_node_limit)->capture_default_str();
  bool skip_weighted = false;
  distances->add_flag("--no-weighted", skip_weighted, "Skip the weighted geodesic comparison");

  // powerlaw
  auto* powerlaw = app.add_subcommand("powerlaw", "Degree CCDF and power-law tail fit");
  add_graph_input(powerlaw);
  powerlaw->add_option("--bootstrap", cfg.bootstrap_count)->capture_default_str();
  powerlaw->add_option("--seed", cfg.powerlaw_seed)->capture_default_str();

  // percolate
  auto* percolate_cmd = app.add_subcommand("percolate", "Node-removal percolation and hub analysis");
  add_graph_input(percolate_cmd);
  std::vector<std::string> strategies;
  std::size_t step_nodes = 0;
  std::string eigen_scope = "whole";
  percolate_cmd->add_option("--strategy", strategies, "random, degree and/or eigenvector (default: all)");
  percolate_cmd->add_option("--steps", cfg.percolation.steps)->capture_default_str();
  percolate_cmd->add_option("--step-fraction", cfg.percolation.step_fraction)->capture_default_str();
  percolate_cmd->add_option("--step-nodes", step_nodes, "Nodes removed per step (overrides --step-fraction)");
  percolate_cmd->add_option("--repetitions", cfg.percolation.repetitions)->capture_default_str();
  percolate_cmd->add_option("--seed", cfg.percolation.seed)->capture_default_str();
  percolate_cmd->add_option("--eigenvector-scope", eigen_scope)->check(CLI::IsMember({"whole", "giant"}))
      ->capture_default_str();
  percolate_cmd->add_option("--epsilon", cfg.percolation.tipping_epsilon)->capture_default_str();
  percolate_cmd->add_option("--percentile", cfg.percolation.hub_percentile)->capture_default_str();

  // report
  auto* report = app.add_subcommand("report", "Run the full pipeline from a config file");
  std::string corpus_override, graphml_override, output_override;
  report->add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
  report->add_option("--corpus", corpus_override, "Override the corpus path");
  report->add_option("--graphml", graphml_override, "Analyse this GraphML file instead of a corpus");
  report->add_option("-o,--output", output_override, "Override the output directory");
  bool dump_config = false;
  report->add_flag("--print-config", dump_config, "Print the effective configuration and exit");

  // compare
  auto* compare = app.add_subcommand("compare", "Compare two metric reports");
  std::string report_a, report_b;
  std::vector<std::string> tolerances;
  double abs_tol = 0.0, rel_tol = 0.0;
  compare->add_option("a", report_a)->required()->check(CLI::ExistingFile);
  compare->add_option("b", report_b)->required()->check(CLI::ExistingFile);
  compare->add_option("--tol", tolerances, "Per-field tolerance FIELD=ABS[:REL], e.g. table1/deg=0.01");
  compare->add_option("--abs", abs_tol, "Default absolute tolerance")->capture_default_str();
  compare->add_option("--rel", rel_tol, "Default relative tolerance")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    cfg.threads = threads;
    if (*fixture) {
      if (fixture_out.empty()) {
        generate_fixture(fp, std::cout);
      } else {
        const std::string tmp = fixture_out + ".tmp";
        {
          std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
          if (!out) throw IoError("cli", "fixture", "cannot open '" + tmp + "'");
          generate_fixture(fp, out);
        }
        fs::rename(tmp, fixture_out);
      }
      return 0;
    }
    if (*ingest || *build) {
      cfg.networks = networks.empty() ? std::vector<std::string>{"whole", "conference", "journal"} : networks;
      cfg.output_dir = output_dir;
      cfg.validate();
      IngestResult in;
      {
        StageTimer t("ingest");
        in = ingest_corpus(cfg.corpus, cfg.year_min, cfg.year_max);
      }
      ArtifactWriter w(output_dir);
      if (*ingest) {
        write_bibliometrics(w, in, cfg.networks);
      } else {
        for (const auto& n : cfg.networks) {
          StageTimer t(n + ": build");
          write_graph(w, n, project_collaboration(in.affiliation, network_classes(n)));
        }
      }
      write_subcommand_manifest(w, cfg, "corpus", {});
      return 0;
    }
    if (*metrics || *distances || *powerlaw || *percolate_cmd) {
      cfg.graphml = graph_path;
      cfg.graph_name = network_name;
      cfg.output_dir = output_dir;
      cfg.clustering.low_degree_as_zero = count_low_degree;
      if (step_nodes > 0) cfg.percolation.step_nodes = step_nodes;
      if (!strategies.empty()) {
        cfg.percolation.strategies.clear();
        for (const auto& s : strategies) cfg.percolation.strategies.push_back(percolation_strategy_from_string(s));
      }
      cfg.percolation.eigenvector_scope =
          eigen_scope == "giant" ? CentralityScope::GiantComponent : CentralityScope::WholeGraph;
      cfg.validate();
      CollaborationNetwork g;
      {
        StageTimer t("import graphml");
        g = load_graphml(graph_path);
      }
      ArtifactWriter w(output_dir);
      SeedLog seeds;
      if (*metrics) {
        StageTimer t("metrics");
        const auto r = run_metrics_stage(w, ".", network_name, g, cfg);
        w.write_json("report.json", to_json(r));
      }
      if (*distances) {
        StageTimer t("distances");
        run_distance_stage(w, ".", g, cfg, nullptr, seeds);
        if (!skip_weighted) run_weighted_stage(w, ".", g, cfg, seeds);
      }
      if (*powerlaw) {
        StageTimer t("power-law fit");
        run_powerlaw_stage(w, ".", g, cfg, seeds);
      }
      if (*percolate_cmd) {
        StageTimer t("percolation");
        run_percolation_stage(w, ".", g, cfg, seeds);
      }
      write_subcommand_manifest(w, cfg, network_name, seeds);
      return 0;
    }
    if (*report) {
      RunConfig rc = config_path.empty() ? RunConfig{} : read_run_config(config_path);
      if (!corpus_override.empty()) rc.corpus = corpus_override;
      if (!graphml_override.empty()) rc.graphml = graphml_override;
      if (!output_override.empty()) rc.output_dir = output_override;
      if (threads) rc.threads = threads;
      if (dump_config) {
        std::cout << to_json(rc).dump(2) << '\n';
        return 0;
      }
      const auto result = run_pipeline(rc);
      std::cout << result.manifest_path.string() << '\n';
      return 0;
    }
    if (*compare) {
      const auto diff = compare_reports(read_json_file(report_a), read_json_file(report_b),
                                        parse_tolerances(tolerances, abs_tol, rel_tol));
      std::cout << to_json(diff).dump(2) << '\n';
      return diff.passed() ? 0 : 1;
    }
  } catch (const Error& e) {
    std::cerr << error_json(e).dump() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << nlohmann::json{{"error", {{"module", "cli"}, {"operation", "main"}, {"message", e.what()}}}}.dump()
              << '\n';
    return 2;
  }
  return 0;
}
