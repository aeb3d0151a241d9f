#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "collabnet/pipeline.hpp"
#include "collabnet/report.hpp"
#include "oracles.hpp"

using namespace collabnet;
namespace fs = std::filesystem;

namespace {

const std::string kFixture = std::string(COLLABNET_SOURCE_DIR) + "/data/fixture_200.xml";

fs::path scratch_root() { return fs::temp_directory_path() / ("collabnet_test_" + std::to_string(::getpid())); }

class RemoveScratch : public ::testing::Environment {
 public:
  void TearDown() override { fs::remove_all(scratch_root()); }
};
const auto* const kRemoveScratch = ::testing::AddGlobalTestEnvironment(new RemoveScratch);

fs::path scratch(const std::string& name) {
  const auto p = scratch_root() / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

nlohmann::json read_json(const fs::path& p) { return nlohmann::json::parse(slurp(p)); }

RunConfig fixture_config(const fs::path& out) {
  RunConfig c;
  c.corpus = kFixture;
  c.output_dir = out.string();
  c.year_min = 1900;
  c.year_max = 2100;
  c.bootstrap_count = 200;
  c.sample_pairs = 2000;
  return c;
}

struct Command {
  int status;
  std::string err;
};

Command run_cli(const std::string& args, const fs::path& dir) {
  const auto err = dir / "stderr.txt";
  const std::string cmd = std::string(COLLABNET_CLI) + " " + args + " 2> " + err.string() + " > " +
                          (dir / "stdout.txt").string();
  const int raw = std::system(cmd.c_str());
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, slurp(err)};
}

// Last non-timing line of stderr.
nlohmann::json error_line(const std::string& err) {
  std::istringstream in(err);
  std::string line, last;
  while (std::getline(in, line))
    if (!line.empty() && line[0] == '{') last = line;
  return nlohmann::json::parse(last);
}

}  // namespace

TEST(RunConfig, JsonRoundTrip) {
  RunConfig c;
  c.corpus = "dblp.xml.gz";
  c.year_min = 1990;
  c.networks = {"journal"};
  c.bootstrap_count = 250;
  c.percolation.strategies = {PercolationStrategy::Random};
  c.percolation.step_nodes = 5000;
  c.percolation.eigenvector_scope = CentralityScope::GiantComponent;
  c.clustering.low_degree_as_zero = false;
  const auto j = to_json(c);
  EXPECT_EQ(to_json(run_config_from_json(j)), j);
  EXPECT_EQ(run_config_from_json(j).percolation.step_nodes, std::optional<std::size_t>(5000));
}

TEST(RunConfig, DefaultsMirrorProtocol) {
  const RunConfig c;
  EXPECT_EQ(c.year_min, 1936);
  EXPECT_EQ(c.year_max, 2008);
  EXPECT_EQ(c.sample_pairs, 10000u);
  EXPECT_EQ(c.percolation.steps, 20u);
  EXPECT_EQ(c.bootstrap_count, 1000u);
  EXPECT_NEAR(c.percolation.steps * c.percolation.step_fraction, 0.15, 1e-12);
}

TEST(RunConfig, UnknownKeyRejected) {
  EXPECT_THROW(run_config_from_json({{"corpus", "x"}, {"bootstap_count", 10}}), ArgumentError);
  EXPECT_THROW(run_config_from_json({{"percolation", {{"step", 3}}}}), ArgumentError);
  EXPECT_THROW(run_config_from_json({{"year_min", "soon"}}), ArgumentError);
}

TEST(RunConfig, YearRangeValidatedBeforeWork) {
  const auto out = scratch("years");
  auto c = fixture_config(out / "run");
  c.year_min = 2001;
  c.year_max = 2000;
  try {
    run_pipeline(c);
    FAIL() << "expected ArgumentError";
  } catch (const ArgumentError& e) {
    EXPECT_EQ(e.module(), "cli");
    EXPECT_EQ(e.operation(), "validate_config");
  }
  EXPECT_FALSE(fs::exists(out / "run"));
}

TEST(Pipeline, FixtureManifestDeterministic) {
  const auto base = scratch("determinism");
  auto a = fixture_config(base / "a");
  auto b = fixture_config(base / "b");
  b.threads = 3;
  a.threads = 1;
  const auto ra = run_pipeline(a);
  const auto rb = run_pipeline(b);
  EXPECT_EQ(slurp(ra.manifest_path), slurp(rb.manifest_path));
  const auto& m = ra.manifest;
  EXPECT_EQ(m.at("schema_version"), kManifestSchema);
  EXPECT_FALSE(m.at("config").contains("output_dir"));
  for (const auto* net : {"whole", "conference", "journal"}) {
    EXPECT_TRUE(m.at("seeds").contains(net));
    for (const auto* f : {"report.json", "graph.graphml", "edges.csv", "degree.csv", "lorenz.csv", "components.csv",
                          "clique_census.csv", "distances.csv", "distances.json", "weighted_comparison.json",
                          "ccdf.csv", "powerlaw.json", "percolation.csv", "percolation.json", "hubs.json"})
      EXPECT_TRUE(fs::exists(base / "a" / net / f)) << net << "/" << f;
  }
  EXPECT_EQ(m.at("seeds").at("whole").at("distance_seed"), 1);
  // Every listed artifact hashes to its recorded digest.
  for (const auto& art : m.at("artifacts")) {
    const auto p = base / "a" / art.at("path").get<std::string>();
    EXPECT_EQ(sha256_file(p), art.at("sha256").get<std::string>());
    EXPECT_EQ(fs::file_size(p), art.at("bytes").get<std::uint64_t>());
  }
  for (const auto& e : fs::recursive_directory_iterator(base / "a"))
    EXPECT_NE(e.path().extension(), ".tmp") << e.path();
}

TEST(Pipeline, ReportMatchesOracles) {
  const auto out = scratch("oracle");
  run_pipeline(fixture_config(out));
  const auto g = load_graphml((out / "whole" / "graph.graphml").string());
  const auto r = read_json(out / "whole" / "report.json");
  const oracle::Dense d(g);
  const auto sizes = oracle::component_sizes(d);
  const double n = static_cast<double>(g.node_count());
  EXPECT_EQ(r.at("nodes"), g.node_count());
  EXPECT_EQ(r.at("component_count"), sizes.size());
  EXPECT_NEAR(r.at("giant_share").get<double>(), static_cast<double>(sizes[0]) / n, 1e-15);
  EXPECT_NEAR(r.at("transitivity").get<double>(), *oracle::transitivity(d), 1e-12);
  EXPECT_NEAR(r.at("avg_clustering").get<double>(), oracle::avg_clustering(d), 1e-12);
  EXPECT_NEAR(r.at("gini").get<double>(), static_cast<double>(oracle::gini(g.degree_sequence())), 1e-12);
  EXPECT_NEAR(r.at("assortativity_pearson").get<double>(),
              static_cast<double>(oracle::assortativity(g).pearson), 1e-12);
  const auto dist = oracle::distances(d);
  EXPECT_EQ(r.at("distance_method"), "exact");
  EXPECT_NEAR(r.at("mean_distance").get<double>(), static_cast<double>(dist.mean), 1e-12);
  EXPECT_EQ(r.at("diameter"), dist.diameter);
  EXPECT_EQ(r.at("table1").at("deg"), r.at("mean_degree"));
  EXPECT_EQ(metric_report_from_json(r).network, "whole");
  EXPECT_EQ(to_json(metric_report_from_json(r)), r);
}

TEST(Pipeline, GraphmlPartialRunMatchesFullRun) {
  const auto base = scratch("partial");
  run_pipeline(fixture_config(base / "full"));
  RunConfig p = fixture_config(base / "partial");
  p.corpus.clear();
  p.graphml = (base / "full" / "whole" / "graph.graphml").string();
  p.graph_name = "whole";
  run_pipeline(p);
  for (const auto* f : {"report.json", "distances.json", "powerlaw.json", "percolation.csv", "hubs.json",
                        "weighted_comparison.json", "graph.graphml"})
    EXPECT_EQ(slurp(base / "full" / "whole" / f), slurp(base / "partial" / "whole" / f)) << f;
}

TEST(Pipeline, CsvHeaders) {
  const auto out = scratch("headers");
  run_pipeline(fixture_config(out));
  const auto header = [&](const fs::path& p) {
    std::ifstream in(out / p);
    std::string line;
    std::getline(in, line);
    return line;
  };
  EXPECT_EQ(header("productivity.csv"), "value,count,relative_frequency");
  EXPECT_EQ(header("collaboration_level_conference.csv"), "value,count,relative_frequency");
  EXPECT_EQ(header("whole/degree.csv"), "degree,count,share");
  EXPECT_EQ(header("whole/lorenz.csv"), "top_share,collaboration_share");
  EXPECT_EQ(header("whole/components.csv"), "size,count");
  EXPECT_EQ(header("whole/clique_census.csv"), "size,count");
  EXPECT_EQ(header("whole/distances.csv"), "length,count,share");
  EXPECT_EQ(header("whole/ccdf.csv"), "degree,ccdf");
  EXPECT_EQ(header("whole/percolation.csv"), "strategy,repetition,removed_fraction,giant_share,second_share");
  EXPECT_EQ(header("whole/edges.csv"), "src_id,dst_id,multiplicity");
}

TEST(Pipeline, PowerlawNotApplicableOnTinyGraph) {
  const auto out = scratch("tiny");
  {
    std::ofstream f(out / "tiny.xml");
    f << "<dblp><article key=\"a\"><author>A</author><author>B</author><author>C</author><year>2000</year>"
         "</article></dblp>";
  }
  RunConfig c;
  c.corpus = (out / "tiny.xml").string();
  c.output_dir = (out / "run").string();
  c.networks = {"whole"};
  c.bootstrap_count = 10;
  run_pipeline(c);
  EXPECT_EQ(read_json(out / "run" / "whole" / "powerlaw.json").at("status"), "not_applicable");
}

TEST(CompareReports, Cases) {
  const auto out = scratch("compare");
  run_pipeline(fixture_config(out));
  const auto a = read_json(out / "whole" / "report.json");
  EXPECT_TRUE(compare_reports(a, a).empty());
  EXPECT_TRUE(compare_reports(a, a).passed());

  auto b = a;
  b["mean_distance"] = a.at("mean_distance").get<double>() + 0.004;
  b["table1"]["dis"] = b["mean_distance"];
  ReportTolerances tol;
  tol.fields["/mean_distance"] = {0.01, 0.0};
  tol.fields["/table1/dis"] = {0.01, 0.0};
  const auto diff = compare_reports(a, b, tol);
  EXPECT_TRUE(diff.passed());
  ASSERT_EQ(diff.fields.size(), 2u);
  EXPECT_NEAR(*diff.fields[0].delta, 0.004, 1e-12);
  EXPECT_FALSE(compare_reports(a, b).passed());

  nlohmann::json x{{"schema_version", kMetricReportSchema}, {"table1", {{"deg", 6.63}}}};
  ReportTolerances t2;
  t2.fallback = {0.01, 0.0};
  EXPECT_TRUE(compare_reports(x, x, t2).empty());
  auto y = x;
  y["table1"]["deg"] = 6.635;
  EXPECT_TRUE(compare_reports(x, y, t2).passed());
  y["table1"]["deg"] = 6.7;
  EXPECT_FALSE(compare_reports(x, y, t2).passed());

  auto z = x;
  z["schema_version"] = "collabnet.metric_report/0";
  EXPECT_THROW(compare_reports(x, z), SchemaError);
  EXPECT_THROW(compare_reports(nlohmann::json::object(), x), SchemaError);
  EXPECT_THROW(metric_report_from_json({{"schema_version", kMetricReportSchema}}), SchemaError);
}

TEST(Cli, ErrorJsonAndExitCode) {
  const auto dir = scratch("cli_error");
  const auto r = run_cli("report --corpus " + (dir / "missing.xml").string() + " -o " + (dir / "out").string(), dir);
  EXPECT_EQ(r.status, 2);
  const auto j = error_line(r.err);
  EXPECT_TRUE(j.at("error").contains("module"));
  EXPECT_TRUE(j.at("error").contains("operation"));
  EXPECT_TRUE(j.at("error").contains("message"));
}

TEST(Cli, InvalidYearRangeFailsValidation) {
  const auto dir = scratch("cli_years");
  const auto r = run_cli("ingest " + kFixture + " --year-min 2005 --year-max 2000 -o " + (dir / "out").string(), dir);
  EXPECT_EQ(r.status, 2);
  const auto j = error_line(r.err);
  EXPECT_EQ(j.at("error").at("module"), "cli");
  EXPECT_EQ(j.at("error").at("operation"), "validate_config");
  EXPECT_FALSE(fs::exists(dir / "out"));
}

TEST(Cli, SubcommandsChain) {
  const auto dir = scratch("cli_chain");
  const auto d = dir.string();
  ASSERT_EQ(run_cli("fixture --seed 3 --authors 80 --papers 120 -o " + d + "/c.xml", dir).status, 0);
  ASSERT_EQ(run_cli("build " + d + "/c.xml --year-min 1900 --year-max 2100 --network whole -o " + d + "/g", dir).status,
            0);
  const std::string g = d + "/g/whole/graph.graphml";
  ASSERT_TRUE(fs::exists(g));
  EXPECT_EQ(run_cli("metrics --graph " + g + " -o " + d + "/m", dir).status, 0);
  EXPECT_EQ(run_cli("distances --graph " + g + " --sample-pairs 500 --paired -o " + d + "/d", dir).status, 0);
  EXPECT_EQ(run_cli("powerlaw --graph " + g + " --bootstrap 50 -o " + d + "/p", dir).status, 0);
  EXPECT_EQ(run_cli("percolate --graph " + g + " --strategy degree --steps 10 --step-fraction 0.05 -o " + d + "/q", dir)
                .status,
            0);
  EXPECT_TRUE(fs::exists(dir / "m" / "report.json"));
  EXPECT_TRUE(fs::exists(dir / "d" / "weighted_comparison.json"));
  EXPECT_TRUE(read_json(dir / "d" / "weighted_comparison.json").at("paired").get<bool>());
  EXPECT_TRUE(fs::exists(dir / "p" / "powerlaw.json"));
  EXPECT_TRUE(fs::exists(dir / "q" / "percolation.csv"));
  EXPECT_TRUE(fs::exists(dir / "q" / "manifest.json"));
  EXPECT_EQ(run_cli("compare " + d + "/m/report.json " + d + "/m/report.json", dir).status, 0);
  EXPECT_EQ(run_cli("--threads 2 report --corpus " + d + "/c.xml --print-config", dir).status, 0);
}

TEST(Cli, CompareExitStatus) {
  const auto dir = scratch("cli_compare");
  nlohmann::json a{{"schema_version", kMetricReportSchema}, {"table1", {{"deg", 6.63}, {"com", 0.85}}}};
  auto b = a;
  b["table1"]["deg"] = 6.64;
  std::ofstream(dir / "a.json") << a.dump();
  std::ofstream(dir / "b.json") << b.dump();
  const auto pa = (dir / "a.json").string(), pb = (dir / "b.json").string();
  EXPECT_EQ(run_cli("compare " + pa + " " + pb, dir).status, 1);
  EXPECT_EQ(run_cli("compare " + pa + " " + pb + " --tol table1/deg=0.02", dir).status, 0);
  EXPECT_EQ(run_cli("compare " + pa + " " + pb + " --rel 0.01", dir).status, 0);
  b["schema_version"] = "other/1";
  std::ofstream(dir / "b.json") << b.dump();
  EXPECT_EQ(run_cli("compare " + pa + " " + pb, dir).status, 2);
}
