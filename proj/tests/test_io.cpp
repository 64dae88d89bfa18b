#include <gtest/gtest.h>

#include <limits>
#include <sstream>

#include "hyperflow/config.hpp"
#include "hyperflow/io.hpp"
#include "hyperflow/pipeline.hpp"
#include "hyperflow/shapes.hpp"

using namespace hyperflow;

TEST(Config, MinimalDocumentGivesDefaults) {
  const Config c = parse_config(R"({"version": 1})");
  EXPECT_EQ(c.scenario.kind, "circle");
  EXPECT_EQ(c.n, 1);
  EXPECT_DOUBLE_EQ(c.c_cfl, 0.2);
  EXPECT_FALSE(c.s_bar.has_value());
}

TEST(Config, RejectsUnknownKeys) {
  EXPECT_THROW(parse_config(R"({"version": 1, "tend": 2})"), ConfigurationError);
  EXPECT_THROW(parse_config(R"({"version": 1, "scenario": {"kind": "circle", "radious": 1}})"), ConfigurationError);
  EXPECT_THROW(parse_config(R"({"version": 1, "speed": {"kind": "inverse_mean", "p": 1}})"), ConfigurationError);
}

TEST(Config, RejectsWrongTypes) {
  EXPECT_THROW(parse_config(R"({"version": 1, "t_end": "3"})"), ConfigurationError);
  EXPECT_THROW(parse_config(R"({"version": 1, "records": -1})"), ConfigurationError);
  EXPECT_THROW(parse_config(R"({"version": 1, "records": 2.5})"), ConfigurationError);
  EXPECT_THROW(parse_config(R"({"version": 1, "allow_inconclusive": 1})"), ConfigurationError);
  EXPECT_THROW(parse_config(R"({"version": 1, "scenario": []})"), ConfigurationError);
}

TEST(Config, RejectsMissingOrWrongVersion) {
  EXPECT_THROW(parse_config(R"({"t_end": 1})"), ConfigurationError);
  EXPECT_THROW(parse_config(R"({"version": 2})"), ConfigurationError);
  EXPECT_THROW(parse_config("{not json"), ConfigurationError);
}

TEST(Config, RejectsOutOfRangeValues) {
  EXPECT_THROW(parse_config(R"({"version": 1, "speed": {"power": 1.5}})"), ConfigurationError);
  EXPECT_THROW(parse_config(R"({"version": 1, "directions": 32})"), ConfigurationError);
  EXPECT_THROW(parse_config(R"({"version": 1, "scenario": {"kind": "square"}})"), ConfigurationError);
  EXPECT_THROW(parse_config(R"({"version": 1, "stepper": "rk4"})"), ConfigurationError);
}

TEST(Config, RoundTripsThroughJson) {
  for (const auto& [id, c] : shipped_fixtures()) {
    const Config back = parse_config(to_json(c));
    EXPECT_EQ(to_json(back), to_json(c)) << id;
    EXPECT_EQ(config_hash(back), config_hash(c)) << id;
  }
}

TEST(Config, HashIgnoresOutputAndThreadsOnly) {
  Config a;
  Config b = a;
  b.out_dir = "elsewhere";
  b.threads = 4;
  EXPECT_EQ(config_hash(a), config_hash(b));
  b.seed = 2;
  EXPECT_NE(config_hash(a), config_hash(b));
  Config d = a;
  d.s_bar = 0.2;
  EXPECT_NE(config_hash(a), config_hash(d));
  EXPECT_EQ(config_hash(a).size(), 16u);
}

TEST(Io, Fnv1aKnownValues) {
  EXPECT_EQ(io::fnv1a_hex(""), "cbf29ce484222325");
  EXPECT_EQ(io::fnv1a_hex("a"), "af63dc4c8601ec8c");
}

TEST(Config, FixturesBuild) {
  const auto fx = shipped_fixtures();
  EXPECT_EQ(fx.size(), 8u);
  for (const auto& [id, c] : fx) {
    const InitialState s = build_initial(c);
    EXPECT_EQ(std::holds_alternative<DiscreteCurve>(s), c.compact()) << id;
  }
}

TEST(Io, CurveSnapshotRoundTrip) {
  const DiscreteCurve c = shapes::circle(0.7, 64, 0.2);
  const auto j = io::snapshot_json(c, 0.5);
  EXPECT_EQ(j.at("model"), "disk");
  const DiscreteCurve back = io::curve_from_snapshot(io::json::parse(j.dump()));
  ASSERT_EQ(back.size(), c.size());
  for (std::size_t i = 0; i < c.size(); ++i) EXPECT_EQ(back[i], c[i]);
}

TEST(Io, GraphSnapshotRoundTrip) {
  const HoroGraph g = shapes::sine_horograph(0.3, 64);
  const HoroGraph back = io::graph_from_snapshot(io::json::parse(io::snapshot_json(g, 1.0).dump()));
  EXPECT_EQ(back.samples(), g.samples());
  EXPECT_EQ(back.period(), g.period());
  EXPECT_THROW(io::curve_from_snapshot(io::snapshot_json(g, 0.0)), ConfigurationError);
}

TEST(Io, TrajectoryAndPlotCsv) {
  Config c;
  c.scenario.resolution = 64;
  c.t_end = 0.2;
  c.records = 4;
  const FlowRun run = run_flow(c);
  std::stringstream ss;
  io::write_trajectory(ss, run.curve(), run.opts, config_hash(c));
  const io::LoadedTrajectory lt = io::read_trajectory(ss);
  EXPECT_EQ(lt.header.at("config_hash"), config_hash(c));
  EXPECT_EQ(lt.header.at("version"), io::kArtifactVersion);
  ASSERT_EQ(lt.snapshots.size(), run.curve().size());
  EXPECT_DOUBLE_EQ(lt.snapshots.back().at("time").get<double>(), 0.2);

  std::stringstream plot;
  io::write_plot_csv(plot, lt);
  std::string line;
  std::size_t rows = 0;
  std::getline(plot, line);
  EXPECT_EQ(line.rfind("# ", 0), 0u);
  std::getline(plot, line);
  EXPECT_EQ(line, "t,theta,r");
  while (std::getline(plot, line)) ++rows;
  EXPECT_EQ(rows, lt.snapshots.size() * 64);
}

TEST(Io, DiagnosticsCsvRows) {
  Config c;
  c.scenario.kind = "sine_horograph";
  c.scenario.resolution = 64;
  c.t_end = 0.1;
  c.records = 3;
  const FlowRun run = run_flow(c);
  std::stringstream ss;
  io::write_diagnostics_csv(ss, run.graph(), "h");
  std::string line;
  std::size_t rows = 0;
  while (std::getline(ss, line)) ++rows;
  EXPECT_EQ(rows, 2 + run.graph().diagnostics.size());
}

TEST(Io, ReadTrajectoryErrors) {
  std::stringstream bad("{\"kind\":\"curve\"}\n");
  EXPECT_THROW(io::read_trajectory(bad), ConfigurationError);
  std::stringstream broken("{\"record\":\"header\"}\n{oops\n");
  EXPECT_THROW(io::read_trajectory(broken), ConfigurationError);
}

TEST(Io, ReportJsonCarriesWitness) {
  VerificationReport r;
  r.suite = "gradient_estimate";
  r.status = Status::Fail;
  r.margin = -0.1;
  r.witness = Witness{0.0, "theta=1", "|dr| <= bound", 0.3, 0.2};
  r.metrics = {{"x", std::numeric_limits<double>::quiet_NaN()}};
  const auto j = io::report_json(r, "abc");
  EXPECT_EQ(j.at("status"), "fail");
  EXPECT_TRUE(j.at("metrics").at("x").is_null());
  EXPECT_EQ(j.at("witness").at("location"), "theta=1");
  EXPECT_NE(io::report_table({r}).find("witness"), std::string::npos);
}

TEST(Pipeline, CounterexampleFixtureFails) {
  for (const auto& [id, c] : shipped_fixtures()) {
    if (id != "counterexample_gradient") continue;
    const VerificationReport r = run_suite("gradient_estimate", c);
    EXPECT_EQ(r.status, Status::Fail);
    ASSERT_TRUE(r.witness.has_value());
  }
}

TEST(Pipeline, WrongScenarioKindIsInconclusive) {
  Config c;
  c.scenario.resolution = 64;
  c.t_end = 0.1;
  EXPECT_EQ(run_suite("barrier_trapping", c).status, Status::Inconclusive);
  EXPECT_THROW(run_suite("no_such_suite", c), ConfigurationError);
}
