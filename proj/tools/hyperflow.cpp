// hyperflow command-line tool: flow, admissible, verify, export-plot, fixtures.

#include <spdlog/spdlog.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hyperflow/config.hpp"
#include "hyperflow/io.hpp"
#include "hyperflow/pipeline.hpp"

namespace fs = std::filesystem;
using namespace hyperflow;

namespace {

enum Exit : int { kPass = 0, kFail = 1, kConfigError = 2, kHalt = 3, kInconclusive = 4 };

struct Common {
  std::string config_path;
  std::string fixture;
  std::string out;
  std::size_t threads = 0;
  std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* cmd, Common& o) {
  cmd->add_option("--config", o.config_path, "JSON config file");
  cmd->add_option("--fixture", o.fixture, "shipped fixture id (see `fixtures`)");
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_option("--threads", o.threads, "worker cap");
  cmd->add_option("--seed", o.seed, "override the config seed");
}

std::optional<Config> fixture_config(const std::string& id) {
  for (auto& [name, c] : shipped_fixtures())
    if (name == id) return c;
  return std::nullopt;
}

/// Fixture a suite runs on when neither --config nor --fixture is given.
const std::map<std::string, std::string>& default_fixture() {
  static const std::map<std::string, std::string> m{{"admissibility_preserved", "flower"},
                                                    {"gradient_estimate", "flower"},
                                                    {"starshaped_time", "flower"},
                                                    {"graphical", "sine_horograph_01"},
                                                    {"barrier_trapping", "sine_horograph_03"},
                                                    {"umbilic_convergence", "flower"},
                                                    {"lemma_equivalence", "origin_circle"}};
  return m;
}

/// Resolves the config and scenario label from the flags.
std::pair<Config, std::string> resolve(const Common& o, const std::string& fallback_fixture = "") {
  Config c;
  std::string label;
  if (!o.config_path.empty()) {
    if (!o.fixture.empty()) throw ConfigurationError("--config and --fixture are exclusive");
    c = load_config(o.config_path);
    label = fs::path(o.config_path).stem().string();
  } else {
    const std::string id = o.fixture.empty() ? fallback_fixture : o.fixture;
    if (id.empty()) throw ConfigurationError("one of --config or --fixture is required");
    auto fc = fixture_config(id);
    if (!fc) throw ConfigurationError("unknown fixture '" + id + "'");
    c = *fc;
    label = id;
  }
  if (!o.out.empty()) c.out_dir = o.out;
  if (o.threads > 0) c.threads = o.threads;
  if (o.seed) c.seed = *o.seed;
  validate(c);
  return {c, label};
}

std::ofstream open_out(const fs::path& p) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream f(p);
  if (!f) throw ConfigurationError("cannot write '" + p.string() + "'");
  f.precision(17);
  return f;
}

void write_run(const FlowRun& run, const Config& c, const fs::path& dir, const std::string& stem) {
  const std::string hash = config_hash(c);
  auto traj = open_out(dir / (stem + "trajectory.jsonl"));
  auto diag = open_out(dir / (stem + "diagnostics.csv"));
  if (run.compact()) {
    io::write_trajectory(traj, run.curve(), run.opts, hash);
    io::write_diagnostics_csv(diag, run.curve(), hash);
  } else {
    io::write_trajectory(traj, run.graph(), run.opts, hash);
    io::write_diagnostics_csv(diag, run.graph(), hash);
  }
}

int cmd_flow(const Common& o) {
  auto [c, label] = resolve(o);
  spdlog::info("flow: scenario {} ({}), t_end {}, config {}", label, c.scenario.kind, c.t_end, config_hash(c));
  FlowRun run;
  try {
    run = run_flow(c);
  } catch (const FlowHalt& e) {
    // The flow cannot start: keep the initial state as the partial output.
    const InitialState s0 = build_initial(c);
    run.opts = run_options(c);
    if (const auto* curve = std::get_if<DiscreteCurve>(&s0)) {
      CurveTrajectory tr;
      tr.speed = run.opts.speed;
      tr.states.push_back(*curve);
      CurveDiagnostics d;
      try {
        d = diagnose_curve(*curve, 0.0, 0.0, run.opts);
      } catch (const Error&) {
        d.kappa_min = d.kappa_max = std::numeric_limits<double>::quiet_NaN();
      }
      tr.diagnostics.push_back(d);
      tr.halt = detail::halt_info(e, 0.0);
      run.trajectory = std::move(tr);
    } else {
      GraphTrajectory tr;
      tr.speed = run.opts.speed;
      tr.states.push_back(std::get<HoroGraph>(s0));
      tr.diagnostics.push_back({});
      tr.halt = detail::halt_info(e, 0.0);
      run.trajectory = std::move(tr);
    }
  }
  write_run(run, c, c.out_dir, "");
  const std::size_t states = run.compact() ? run.curve().size() : run.graph().size();
  if (const auto& h = run.halt()) {
    spdlog::error("flow halted ({}) at t = {}: {}", h->kind, h->t, h->message);
    std::cout << "halted (" << h->kind << ") at t = " << h->t << " after " << states << " recorded states\n";
    return kHalt;
  }
  std::cout << "wrote " << states << " states to " << (fs::path(c.out_dir) / "trajectory.jsonl").string() << '\n';
  return kPass;
}

int cmd_admissible(const Common& o) {
  auto [c, label] = resolve(o);
  const std::string hash = config_hash(c);
  const InitialState s0 = build_initial(c);
  io::json report;
  if (const auto* curve = std::get_if<DiscreteCurve>(&s0)) {
    const OverallOptimal r = overall_optimal(*curve, c.directions, {}, c.threads);
    report = io::admissibility_json(r, AdmissibilityMethod::TripleBisection, hash);
    std::cout << "s_bar = " << io::csv_num(r.s_bar) << " over " << c.directions << " directions\n";
  } else {
    const OverallOptimalNc r = overall_optimal_nc(std::get<HoroGraph>(s0), c.points, {}, c.threads);
    report = io::admissibility_json(r, hash);
    std::cout << "s_bar = " << (std::isinf(r.s_bar) ? std::string("unbounded") : io::csv_num(r.s_bar)) << " over "
              << c.points << " boundary points\n";
  }
  report["scenario"] = label;
  open_out(fs::path(c.out_dir) / "admissibility.json") << report.dump(2) << '\n';
  return kPass;
}

int cmd_verify(const Common& o, const std::string& suite) {
  std::vector<std::string> suites;
  if (suite == "all") {
    suites = suite_names();
  } else {
    if (std::find(suite_names().begin(), suite_names().end(), suite) == suite_names().end())
      throw ConfigurationError("unknown suite '" + suite + "'");
    suites = {suite};
  }
  std::vector<VerificationReport> reports;
  bool allow_inconclusive = true;
  for (const std::string& s : suites) {
    auto [c, label] = resolve(o, default_fixture().at(s));
    allow_inconclusive = allow_inconclusive && c.allow_inconclusive;
    spdlog::info("verify: suite {} on {}", s, label);
    const fs::path dir = c.out_dir;
    FlowRun run;
    VerificationReport r;
    bool have_run = false;
    try {
      r = run_suite(s, c, &run);
      have_run = s != "lemma_equivalence";
    } catch (const FlowHalt& e) {
      r.suite = s;
      r.status = Status::Inconclusive;
      r.note = std::string("flow could not start: ") + e.what();
    }
    r.scenario = label;
    if (have_run) {
      write_run(run, c, dir, s + "_");
      r.artifacts.push_back((dir / (s + "_trajectory.jsonl")).string());
      r.artifacts.push_back((dir / (s + "_diagnostics.csv")).string());
    }
    open_out(dir / ("report_" + s + ".json")) << io::report_json(r, config_hash(c)).dump(2) << '\n';
    reports.push_back(std::move(r));
  }
  std::cout << io::report_table(reports);
  bool fail = false, inconclusive = false;
  for (const auto& r : reports) {
    fail = fail || r.status == Status::Fail;
    inconclusive = inconclusive || r.status == Status::Inconclusive;
  }
  if (fail) return kFail;
  if (inconclusive && !allow_inconclusive) return kInconclusive;
  return kPass;
}

int cmd_export_plot(const std::string& trajectory, const std::string& out) {
  std::ifstream in(trajectory);
  if (!in) throw ConfigurationError("cannot open trajectory '" + trajectory + "'");
  const io::LoadedTrajectory lt = io::read_trajectory(in);
  const fs::path dest = out.empty() ? fs::path(trajectory).replace_filename("plot.csv")
                        : fs::path(out).has_extension() ? fs::path(out)
                                                        : fs::path(out) / "plot.csv";
  auto f = open_out(dest);
  io::write_plot_csv(f, lt);
  std::cout << "wrote " << dest.string() << '\n';
  return kPass;
}

int cmd_fixtures(const std::string& out) {
  const fs::path dir = out.empty() ? fs::path("fixtures") : fs::path(out);
  for (const auto& [id, c] : shipped_fixtures()) {
    open_out(dir / (id + ".json")) << to_json(c).dump(2) << '\n';
    std::cout << (dir / (id + ".json")).string() << '\n';
  }
  return kPass;
}

void configure_logging() {
  spdlog::set_level(spdlog::level::warn);
  if (const char* lvl = std::getenv("HYPERFLOW_LOG")) spdlog::set_level(spdlog::level::from_str(lvl));
}

}  // namespace

int main(int argc, char** argv) {
  configure_logging();
  CLI::App app{"Inverse curvature flows in hyperbolic space: simulation and verification"};
  app.require_subcommand(1);

  Common flow_o, adm_o, ver_o;
  std::string suite = "all", trajectory, plot_out, fixtures_out;

  auto* flow = app.add_subcommand("flow", "run the flow; writes trajectory.jsonl and diagnostics.csv");
  add_common(flow, flow_o);
  auto* adm = app.add_subcommand("admissible", "optimal admissible values of the initial state; writes admissibility.json");
  add_common(adm, adm_o);
  auto* ver = app.add_subcommand("verify", "run verification suites; writes report_<suite>.json");
  add_common(ver, ver_o);
  ver->add_option("--suite", suite, "suite name or 'all'");
  auto* plot = app.add_subcommand("export-plot", "long-format plot CSV from a trajectory file");
  plot->add_option("trajectory", trajectory, "trajectory .jsonl")->required();
  plot->add_option("--out", plot_out, "output file or directory");
  auto* fix = app.add_subcommand("fixtures", "write the shipped scenario configs");
  fix->add_option("--out", fixtures_out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kConfigError;
  }

  try {
    if (*flow) return cmd_flow(flow_o);
    if (*adm) return cmd_admissible(adm_o);
    if (*ver) return cmd_verify(ver_o, suite);
    if (*plot) return cmd_export_plot(trajectory, plot_out);
    if (*fix) return cmd_fixtures(fixtures_out);
  } catch (const ConfigurationError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const PreconditionError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const FlowHalt& e) {
    std::cerr << "halted: " << e.what() << '\n';
    return kHalt;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kHalt;
  }
  return kPass;
}
