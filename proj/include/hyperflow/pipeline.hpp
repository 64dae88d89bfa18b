#pragma once

// Config-driven runs: flow a scenario, evaluate a verification suite on it.

#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "hyperflow/config.hpp"
#include "hyperflow/flow.hpp"
#include "hyperflow/reflection.hpp"
#include "hyperflow/verify.hpp"

namespace hyperflow {

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"admissibility_preserved", "gradient_estimate", "starshaped_time",
                                              "graphical",               "barrier_trapping",  "umbilic_convergence",
                                              "lemma_equivalence"};
  return names;
}

struct FlowRun {
  RunOptions opts;
  std::variant<CurveTrajectory, GraphTrajectory> trajectory;

  bool compact() const { return std::holds_alternative<CurveTrajectory>(trajectory); }
  const CurveTrajectory& curve() const { return std::get<CurveTrajectory>(trajectory); }
  const GraphTrajectory& graph() const { return std::get<GraphTrajectory>(trajectory); }
  const std::optional<HaltInfo>& halt() const {
    return compact() ? curve().halt : graph().halt;
  }
};

/// Flows the configured scenario to t_end. Explicit record times replace the uniform schedule.
inline FlowRun run_flow(const Config& c, std::vector<double> record_times = {}) {
  FlowRun out;
  out.opts = run_options(c);
  out.opts.record_times = std::move(record_times);
  const InitialState s0 = build_initial(c);
  if (const auto* curve = std::get_if<DiscreteCurve>(&s0)) {
    out.trajectory = run_compact(*curve, c.t_end, out.opts);
  } else {
    out.trajectory = run_noncompact(std::get<HoroGraph>(s0), c.t_end, out.opts);
  }
  return out;
}

namespace detail {

inline double compact_s_bar(const Config& c, const DiscreteCurve& curve) {
  if (c.s_bar) return *c.s_bar;
  AdmissibilityOptions a;
  a.compute_margin = false;
  return overall_optimal(curve, c.directions, a, c.threads).s_bar;
}

inline double noncompact_s_bar(const Config& c, const HoroGraph& g) {
  if (c.s_bar) return *c.s_bar;
  return overall_optimal_nc(g, c.points, {}, c.threads).s_bar;
}

inline VerificationReport halted(const std::string& suite, const HaltInfo& h) {
  VerificationReport r;
  r.suite = suite;
  r.status = Status::Inconclusive;
  r.note = "flow halted (" + h.kind + ") at t = " + fmt_num(h.t) + ": " + h.message;
  return r;
}

}  // namespace detail

/// Runs one suite on the configured scenario. A flow that cannot start (for example a
/// vertex with non-positive curvature) propagates its FlowHalt; a flow that halts
/// midway yields an Inconclusive report.
inline VerificationReport run_suite(const std::string& suite, const Config& c, FlowRun* keep = nullptr) {
  VerificationReport r;
  r.suite = suite;
  FlowRun local;
  auto wrong_kind = [&](const char* need) {
    return detail::inconclusive(r, std::string("suite needs a ") + need + " scenario");
  };

  if (suite == "lemma_equivalence") {
    LemmaOptions o;
    o.seed = c.seed;
    o.curves = c.lemma_curves;
    o.trials_per_curve = c.lemma_trials;
    o.resolution = c.raster;
    o.corpus = c.lemma_corpus == "circles" ? LemmaCorpus::Circles : LemmaCorpus::RandomSmooth;
    o.threads = c.threads;
    return suite_lemma_equivalence(o);
  }

  std::vector<double> records;
  if (suite == "starshaped_time" && c.compact()) {
    const InitialState s0 = build_initial(c);
    records = starshaped_record_times(std::get<DiscreteCurve>(s0), c.t_end, c.records);
  }
  if (!keep) keep = &local;
  *keep = run_flow(c, records);
  const FlowRun& run = *keep;
  if (run.halt()) return detail::halted(suite, *run.halt());

  if (suite == "admissibility_preserved") {
    if (!run.compact()) return wrong_kind("compact");
    AdmissibilityPreservedOptions o;
    o.directions = c.directions;
    o.tol_scale = c.tol_scale;
    o.threads = c.threads;
    r = suite_admissibility_preserved(run.curve(), o);
  } else if (suite == "gradient_estimate") {
    if (!run.compact()) return wrong_kind("compact");
    GradientOptions o;
    o.exclusion = c.exclusion;
    o.tol_scale = c.tol_scale;
    r = suite_gradient_estimate(run.curve(), detail::compact_s_bar(c, run.curve().states.front()), o);
  } else if (suite == "starshaped_time") {
    if (!run.compact()) return wrong_kind("compact");
    r = suite_starshaped_time(run.curve());
  } else if (suite == "graphical") {
    if (run.compact()) {
      GraphicalOptions o;
      o.directions = c.directions;
      r = suite_graphical(run.curve(), detail::compact_s_bar(c, run.curve().states.front()), o);
    } else {
      GraphicalNcOptions o;
      o.exclusion = c.exclusion;
      o.tol_scale = c.tol_scale;
      r = suite_graphical_nc(run.graph(), detail::noncompact_s_bar(c, run.graph().states.front()), o);
    }
  } else if (suite == "barrier_trapping") {
    if (run.compact()) return wrong_kind("non-compact");
    const HoroGraph& g0 = run.graph().states.front();
    r = suite_barrier_trapping(run.graph(), g0.min(), g0.max());
  } else if (suite == "umbilic_convergence") {
    UmbilicOptions o;
    r = run.compact() ? suite_umbilic_convergence(run.curve(), o) : suite_umbilic_convergence(run.graph(), o);
  } else {
    throw ConfigurationError("unknown suite '" + suite + "'");
  }
  return r;
}

}  // namespace hyperflow
