#pragma once

// Verification suites. Each suite turns one statement about the flow into
// a list of inequalities lhs <= rhs evaluated on simulated or closed-form data and
// reports the smallest slack rhs - lhs together with the worst offender.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "hyperflow/curve.hpp"
#include "hyperflow/error.hpp"
#include "hyperflow/flow.hpp"
#include "hyperflow/geometry.hpp"
#include "hyperflow/horograph.hpp"
#include "hyperflow/parallel.hpp"
#include "hyperflow/reflection.hpp"
#include "hyperflow/shapes.hpp"

namespace hyperflow {

enum class Status { Pass, Fail, Inconclusive };

inline std::string to_string(Status s) {
  switch (s) {
    case Status::Pass: return "pass";
    case Status::Fail: return "fail";
    case Status::Inconclusive: return "inconclusive";
  }
  return "?";
}

/// The violated (or tightest) inequality lhs <= rhs.
struct Witness {
  double t = 0.0;
  std::string location;
  std::string inequality;
  double lhs = 0.0;
  double rhs = 0.0;
};

using NamedValues = std::vector<std::pair<std::string, double>>;

struct VerificationReport {
  std::string suite;
  std::string scenario;
  Status status = Status::Inconclusive;
  /// Smallest slack rhs - lhs over all checked inequalities (NaN when nothing was checked).
  double margin = std::numeric_limits<double>::quiet_NaN();
  std::optional<Witness> witness;
  NamedValues tolerances;
  NamedValues metrics;
  std::vector<std::string> artifacts;
  std::string note;

  bool passed() const { return status == Status::Pass; }

  double metric(const std::string& name) const {
    for (const auto& [k, v] : metrics)
      if (k == name) return v;
    throw PreconditionError("VerificationReport: no metric '" + name + "'");
  }
};

namespace detail {

// Collects inequalities and keeps the one with the least slack.
class SlackTracker {
 public:
  explicit SlackTracker(std::string inequality) : inequality_(std::move(inequality)) {}

  void check(double lhs, double rhs, double t, const std::string& location) {
    ++count_;
    const double slack = rhs - lhs;
    if (!(slack >= worst_)) {
      worst_ = std::isnan(slack) ? -std::numeric_limits<double>::infinity() : slack;
      witness_ = Witness{t, location, inequality_, lhs, rhs};
    }
    if (!(slack >= 0.0)) ++violations_;
  }

  std::size_t count() const { return count_; }
  std::size_t violations() const { return violations_; }

  void finish(VerificationReport& r) const {
    r.metrics.emplace_back("checks", static_cast<double>(count_));
    r.metrics.emplace_back("violations", static_cast<double>(violations_));
    if (count_ == 0) {
      r.status = Status::Inconclusive;
      if (r.note.empty()) r.note = "nothing to check";
      return;
    }
    r.margin = worst_;
    r.witness = witness_;
    r.status = violations_ == 0 ? Status::Pass : Status::Fail;
  }

 private:
  std::string inequality_;
  double worst_ = std::numeric_limits<double>::infinity();
  std::optional<Witness> witness_;
  std::size_t count_ = 0;
  std::size_t violations_ = 0;
};

inline std::string fmt_num(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

inline VerificationReport inconclusive(VerificationReport r, std::string why) {
  r.status = Status::Inconclusive;
  r.note = std::move(why);
  return r;
}

inline double trajectory_max_edge(const CurveTrajectory& tr) {
  double h = 0.0;
  for (const auto& d : tr.diagnostics) h = std::max(h, d.edge_max);
  return h;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Admissibility is preserved: s_t(nu) <= s_0(nu) + tol.

struct AdmissibilityPreservedOptions {
  std::size_t directions = 64;
  /// Absolute tolerance; negative means tol_scale times the larger max edge of the two states.
  double tol = -1.0;
  double tol_scale = 5.0;
  std::size_t threads = 1;
};

inline VerificationReport suite_admissibility_preserved(const CurveTrajectory& tr,
                                                        const AdmissibilityPreservedOptions& opts = {}) {
  VerificationReport r;
  r.suite = "admissibility_preserved";
  if (tr.size() < 3) return detail::inconclusive(r, "need at least 3 recorded times");
  AdmissibilityOptions a;
  a.compute_margin = false;
  std::vector<OverallOptimal> per_state(tr.size());
  try {
    for (std::size_t i = 0; i < tr.size(); ++i) per_state[i] = overall_optimal(tr.states[i], opts.directions, a, opts.threads);
  } catch (const BracketError& e) {
    return detail::inconclusive(r, std::string("admissibility bracket failed: ") + e.what());
  }
  detail::SlackTracker track("s_t(nu) <= s_0(nu) + tol");
  double max_increase = -std::numeric_limits<double>::infinity();
  double max_tol = 0.0;
  bool non_increasing = true;
  for (std::size_t i = 1; i < tr.size(); ++i) {
    const double tol = opts.tol >= 0.0 ? opts.tol
                                       : opts.tol_scale * std::max(tr.diagnostics[0].edge_max, tr.diagnostics[i].edge_max);
    max_tol = std::max(max_tol, tol);
    for (std::size_t k = 0; k < per_state[i].per_direction.size(); ++k) {
      const double s0 = per_state[0].per_direction[k].value.s0;
      const double st = per_state[i].per_direction[k].value.s0;
      const double prev = per_state[i - 1].per_direction[k].value.s0;
      max_increase = std::max(max_increase, st - s0);
      if (st > prev + 1e-6) non_increasing = false;
      const Complex nu = per_state[i].per_direction[k].direction;
      track.check(st, s0 + tol, tr.time(i), "direction (" + detail::fmt_num(nu.real()) + ", " + detail::fmt_num(nu.imag()) + ")");
    }
  }
  r.tolerances = {{"tol", max_tol}, {"tol_scale", opts.tol_scale}, {"directions", static_cast<double>(opts.directions)}};
  r.metrics = {{"s_bar_initial", per_state.front().s_bar},
               {"s_bar_final", per_state.back().s_bar},
               {"max_increase", max_increase},
               {"non_increasing", non_increasing ? 1.0 : 0.0}};
  track.finish(r);
  return r;
}

// ---------------------------------------------------------------------------
// Gradient estimate |dr/dtheta| <= r tanh(s_bar) / sqrt(tanh^2 r - tanh^2 s_bar).

inline double gradient_bound(double r, double s_bar) {
  const double a = std::tanh(r);
  const double b = std::tanh(s_bar);
  if (!(a > b)) return std::numeric_limits<double>::infinity();
  return r * b / std::sqrt(a * a - b * b);
}

/// Exact polar profile about the origin of the circle of radius R centred at
/// distance a < R along e1: cosh R = cosh r cosh a - sinh r sinh a cos(theta).
inline RadialFunction circle_polar_profile(double radius, double offset, std::size_t samples) {
  if (!(offset >= 0.0) || !(radius > offset)) throw PreconditionError("circle_polar_profile: need 0 <= offset < radius");
  RadialFunction out;
  const double A = std::cosh(offset);
  const double C = std::cosh(radius);
  for (std::size_t j = 0; j < samples; ++j) {
    const double th = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(samples);
    const double B = std::sinh(offset) * std::cos(th);
    const double Bp = -std::sinh(offset) * std::sin(th);
    const double r = std::atanh(B / A) + std::acosh(C / std::sqrt(A * A - B * B));
    out.theta.push_back(th);
    out.r.push_back(r);
    out.dr.push_back(Bp * std::sinh(r) / (A * std::sinh(r) - B * std::cosh(r)));
  }
  return out;
}

struct GradientOptions {
  /// Angles with r <= s_bar + exclusion are skipped and counted.
  double exclusion = 1e-2;
  /// Absolute tolerance; negative means tol_scale times the max edge of the state.
  double tol = -1.0;
  double tol_scale = 5.0;
  /// Only states recorded at t >= from_time are tested.
  double from_time = 0.0;
  std::size_t samples = 0;
};

namespace detail {

inline void check_gradient(const RadialFunction& p, double s_bar, double tol, double exclusion, double t,
                           SlackTracker& track, std::size_t& excluded) {
  for (std::size_t j = 0; j < p.r.size(); ++j) {
    if (!(p.r[j] > s_bar + exclusion)) {
      ++excluded;
      continue;
    }
    track.check(std::abs(p.dr[j]), gradient_bound(p.r[j], s_bar) + tol, t, "theta " + fmt_num(p.theta[j]));
  }
}

}  // namespace detail

/// Checks a single radial profile (closed-form or sampled) at time t.
inline VerificationReport suite_gradient_profile(const RadialFunction& profile, double s_bar, double tol = 0.0,
                                                 double exclusion = 1e-2, double t = 0.0) {
  VerificationReport r;
  r.suite = "gradient_estimate";
  detail::SlackTracker track("|dr/dtheta| <= r tanh(s_bar)/sqrt(tanh^2 r - tanh^2 s_bar) + tol");
  std::size_t excluded = 0;
  detail::check_gradient(profile, s_bar, tol, exclusion, t, track, excluded);
  r.tolerances = {{"tol", tol}, {"exclusion", exclusion}};
  r.metrics = {{"s_bar", s_bar}, {"excluded", static_cast<double>(excluded)}};
  track.finish(r);
  return r;
}

inline VerificationReport suite_gradient_estimate(const CurveTrajectory& tr, double s_bar, const GradientOptions& opts = {}) {
  VerificationReport r;
  r.suite = "gradient_estimate";
  detail::SlackTracker track("|dr/dtheta| <= r tanh(s_bar)/sqrt(tanh^2 r - tanh^2 s_bar) + tol");
  std::size_t excluded = 0, states = 0, skipped = 0;
  double max_tol = 0.0;
  for (std::size_t i = 0; i < tr.size(); ++i) {
    if (tr.time(i) < opts.from_time) continue;
    const DiscreteCurve& c = tr.states[i];
    if (!c.encloses(0.0) || !is_starshaped(c).starshaped) {
      ++skipped;
      continue;
    }
    const double tol = opts.tol >= 0.0 ? opts.tol : opts.tol_scale * c.max_edge();
    max_tol = std::max(max_tol, tol);
    detail::check_gradient(radial_graph(c, opts.samples), s_bar, tol, opts.exclusion, tr.time(i), track, excluded);
    ++states;
  }
  r.tolerances = {{"tol", max_tol}, {"tol_scale", opts.tol_scale}, {"exclusion", opts.exclusion}};
  r.metrics = {{"s_bar", s_bar},
               {"states", static_cast<double>(states)},
               {"skipped_not_starshaped", static_cast<double>(skipped)},
               {"excluded", static_cast<double>(excluded)}};
  if (states == 0) return detail::inconclusive(r, "no star-shaped states");
  track.finish(r);
  return r;
}

// ---------------------------------------------------------------------------
// Star-shaped after T = n log(sinh r+ / sinh r-).

struct StarshapedOptions {
  /// Slack on T; negative means the largest time step of the run.
  double tol = -1.0;
};

/// Record times for a run meant for the star-shaped suite: `count` uniform times plus T itself.
inline std::vector<double> starshaped_record_times(const DiscreteCurve& c, double t_end, std::size_t count) {
  std::vector<double> out;
  for (std::size_t i = 1; i <= count; ++i) out.push_back(t_end * static_cast<double>(i) / static_cast<double>(count));
  if (c.encloses(0.0)) {
    const InOutRadius rr = in_out_radius(c);
    const double T = predicted_starshaped_time(rr.r_minus, rr.r_plus, 1);
    if (T > 0.0 && T < t_end) out.push_back(T);
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline VerificationReport suite_starshaped_time(const CurveTrajectory& tr, const StarshapedOptions& opts = {}) {
  VerificationReport r;
  r.suite = "starshaped_time";
  if (tr.size() == 0 || !tr.states[0].encloses(0.0)) return detail::inconclusive(r, "origin not inside the initial region");
  const InOutRadius r0 = in_out_radius(tr.states[0]);
  const int n = tr.speed.dimension();
  const double T = predicted_starshaped_time(r0.r_minus, r0.r_plus, n);
  double dt = 0.0;
  for (const auto& d : tr.diagnostics) dt = std::max(dt, d.dt);
  const double tol = opts.tol >= 0.0 ? opts.tol : dt;
  r.tolerances = {{"tol", tol}};
  r.metrics = {{"r_minus", r0.r_minus}, {"r_plus", r0.r_plus}, {"T", T}};
  if (tr.time(tr.size() - 1) < T) return detail::inconclusive(r, "trajectory ends before T = " + detail::fmt_num(T));

  // First recorded time from which every later record is star-shaped.
  double measured = std::numeric_limits<double>::infinity();
  for (std::size_t i = tr.size(); i-- > 0;) {
    if (!tr.diagnostics[i].starshaped) break;
    measured = tr.time(i);
  }
  // Inner barrier sphere swallowing the initial outer sphere.
  double inclusion = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 0; i < tr.size(); ++i) {
    if (tr.diagnostics[i].r_minus >= r0.r_plus) {
      inclusion = tr.time(i);
      break;
    }
  }
  detail::SlackTracker track("first star-shaped time <= T + tol");
  track.check(measured, T + tol, measured, "trajectory");
  r.metrics.emplace_back("measured_time", measured);
  r.metrics.emplace_back("barrier_inclusion_time", inclusion);
  track.finish(r);
  if (r.status == Status::Fail) {
    for (std::size_t i = 0; i < tr.size(); ++i) {
      if (tr.time(i) >= T + tol && !tr.diagnostics[i].starshaped) {
        r.witness = Witness{tr.time(i), "record " + std::to_string(i), "star-shaped at t >= T + tol", 0.0, 1.0};
        break;
      }
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Graphicality: compact case over P_nu(s_bar), non-compact slope bound below H(s_bar).

struct GraphicalOptions {
  std::size_t directions = 64;
};

inline VerificationReport suite_graphical(const CurveTrajectory& tr, double s_bar, const GraphicalOptions& opts = {}) {
  VerificationReport r;
  r.suite = "graphical";
  detail::SlackTracker track("projections of curve ∩ H_+(nu, s_bar) onto P_nu(s_bar) are distinct");
  double lipschitz = 0.0;
  const std::vector<Complex> dirs = direction_grid(opts.directions);
  for (std::size_t i = 0; i < tr.size(); ++i) {
    for (Complex nu : dirs) {
      const GraphicalResult g = graphical_over_plane(tr.states[i], nu, s_bar);
      std::string where = "direction (" + detail::fmt_num(nu.real()) + ", " + detail::fmt_num(nu.imag()) + ")";
      if (g.witness) where += " vertices " + std::to_string(g.witness->first) + ", " + std::to_string(g.witness->second);
      track.check(g.graphical ? 0.0 : 1.0, 0.0, tr.time(i), where);
      if (g.graphical) lipschitz = std::max(lipschitz, g.lipschitz);
    }
  }
  r.tolerances = {{"directions", static_cast<double>(opts.directions)}};
  r.metrics = {{"s_bar", s_bar}, {"max_lipschitz", lipschitz}};
  track.finish(r);
  return r;
}

struct GraphicalNcOptions {
  /// Samples with f >= s_bar - exclusion are skipped.
  double exclusion = 1e-2;
  /// Absolute tolerance; negative means tol_scale times the grid spacing.
  double tol = -1.0;
  double tol_scale = 5.0;
};

/// Hemisphere slope bound |f'| <= sqrt(s_bar^2 - f^2) / f.
inline double hemisphere_slope(double f, double s_bar) {
  return f < s_bar ? std::sqrt(s_bar * s_bar - f * f) / f : 0.0;
}

inline VerificationReport suite_graphical_nc(const GraphTrajectory& tr, double s_bar, const GraphicalNcOptions& opts = {}) {
  VerificationReport r;
  r.suite = "graphical_nc";
  if (tr.size() == 0) return detail::inconclusive(r, "empty trajectory");
  const double tol = opts.tol >= 0.0 ? opts.tol : opts.tol_scale * tr.states[0].spacing();
  detail::SlackTracker track("|f'| <= sqrt(s_bar^2 - f^2)/f + tol");
  std::size_t excluded = 0;
  for (std::size_t i = 0; i < tr.size(); ++i) {
    const HoroGraph& g = tr.states[i];
    for (std::size_t j = 0; j < g.size(); ++j) {
      if (!(g[j] < s_bar - opts.exclusion)) {
        ++excluded;
        continue;
      }
      track.check(std::abs(g.derivative(j)), hemisphere_slope(g[j], s_bar) + tol, tr.time(i), "x " + detail::fmt_num(g.x(j)));
    }
  }
  r.tolerances = {{"tol", tol}, {"exclusion", opts.exclusion}};
  r.metrics = {{"s_bar", s_bar}, {"excluded", static_cast<double>(excluded)}};
  track.finish(r);
  return r;
}

// ---------------------------------------------------------------------------
// Barrier trapping s-(t) <= f <= s+(t).

inline VerificationReport suite_barrier_trapping(const GraphTrajectory& tr, double s_minus, double s_plus, double tol = 0.0) {
  VerificationReport r;
  r.suite = "barrier_trapping";
  const BarrierEnvelope env(s_plus, s_minus, tr.speed.dimension());
  detail::SlackTracker track("s-(t) - tol <= f <= s+(t) + tol");
  double margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < tr.size(); ++i) {
    const HoroGraph& g = tr.states[i];
    const double t = tr.time(i);
    const double lo = env.lower(t), hi = env.upper(t);
    for (std::size_t j = 0; j < g.size(); ++j) {
      track.check(lo - tol, g[j], t, "x " + detail::fmt_num(g.x(j)) + " (lower)");
      track.check(g[j], hi + tol, t, "x " + detail::fmt_num(g.x(j)) + " (upper)");
      if (t > 0.0) margin = std::min({margin, g[j] - lo, hi - g[j]});
    }
  }
  r.tolerances = {{"tol", tol}};
  r.metrics = {{"s_minus", s_minus}, {"s_plus", s_plus}, {"envelope_margin", margin}};
  track.finish(r);
  return r;
}

// ---------------------------------------------------------------------------
// Umbilic convergence: sup |kappa - 1| decays.

struct UmbilicOptions {
  /// Log-linear slope over the final quarter must be <= -rate.
  double rate = 0.0;
  /// Final deviation must stay below this.
  double threshold = 1e-2;
  /// Relative slack for the monotonicity check.
  double monotone_tol = 1e-9;
};

namespace detail {

inline VerificationReport umbilic_series(const std::vector<double>& t, const std::vector<double>& dev, int n,
                                         const UmbilicOptions& opts) {
  VerificationReport r;
  r.suite = "umbilic_convergence";
  r.tolerances = {{"rate", opts.rate}, {"threshold", opts.threshold}, {"monotone_tol", opts.monotone_tol}};
  if (t.empty() || t.back() < 3.0 * n - 1e-12) return inconclusive(r, "run must reach t = 3n");
  std::vector<std::size_t> tail;
  for (std::size_t i = 0; i < t.size(); ++i)
    if (t[i] >= 0.75 * t.back() - 1e-12) tail.push_back(i);
  if (tail.size() < 3) return inconclusive(r, "fewer than 3 records in the final quarter");

  SlackTracker track("sup|kappa - 1| non-increasing, below threshold, decaying");
  for (std::size_t k = 1; k < tail.size(); ++k) {
    const std::size_t a = tail[k - 1], b = tail[k];
    track.check(dev[b], dev[a] * (1.0 + opts.monotone_tol), t[b], "record " + std::to_string(b) + " (monotone)");
  }
  track.check(dev.back(), opts.threshold, t.back(), "final record (threshold)");
  // Least-squares slope of log(dev) against t on the tail.
  double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
  for (std::size_t i : tail) {
    const double y = std::log(std::max(dev[i], 1e-300));
    st += t[i];
    sy += y;
    stt += t[i] * t[i];
    sty += t[i] * y;
  }
  const double m = static_cast<double>(tail.size());
  const double slope = (m * sty - st * sy) / (m * stt - st * st);
  track.check(slope, -opts.rate, t.back(), "final quarter (log-linear slope)");
  if (opts.rate == 0.0 && slope >= 0.0) track.check(1.0, 0.0, t.back(), "final quarter (slope must be negative)");
  r.metrics = {{"final_deviation", dev.back()}, {"slope", slope}};
  track.finish(r);
  return r;
}

}  // namespace detail

inline VerificationReport suite_umbilic_convergence(const CurveTrajectory& tr, const UmbilicOptions& opts = {}) {
  std::vector<double> t, dev;
  for (const auto& d : tr.diagnostics) {
    t.push_back(d.t);
    dev.push_back(std::max(std::abs(d.kappa_min - 1.0), std::abs(d.kappa_max - 1.0)));
  }
  return detail::umbilic_series(t, dev, tr.speed.dimension(), opts);
}

inline VerificationReport suite_umbilic_convergence(const GraphTrajectory& tr, const UmbilicOptions& opts = {}) {
  std::vector<double> t, dev;
  for (const auto& d : tr.diagnostics) {
    t.push_back(d.t);
    dev.push_back(d.umbilic_deviation);
  }
  return detail::umbilic_series(t, dev, tr.speed.dimension(), opts);
}

// ---------------------------------------------------------------------------
// Single-parameter reflection check vs. function-level check on signed distances.

enum class LemmaCorpus { RandomSmooth, Circles };

struct LemmaOptions {
  std::uint64_t seed = 1;
  std::size_t curves = 20;
  std::size_t trials_per_curve = 10;
  std::size_t vertices = 256;
  std::size_t resolution = 512;
  LemmaCorpus corpus = LemmaCorpus::RandomSmooth;
  double min_agreement = 0.99;
  /// Adds perturbation * Re(z) to the raster; a nonzero value breaks the checker on purpose.
  double perturbation = 0.0;
  std::size_t threads = 1;
};

inline VerificationReport suite_lemma_equivalence(const LemmaOptions& opts = {}) {
  if (opts.resolution < 512) throw PreconditionError("suite_lemma_equivalence: raster resolution must be >= 512");
  VerificationReport r;
  r.suite = "lemma_equivalence";
  struct Trial {
    bool agree = true;
    double margin = 0.0;
    double band = 0.0;
    Complex nu;
    double s = 0.0;
  };
  std::vector<std::vector<Trial>> results(opts.curves);
  // Draw every random quantity up front so the outcome does not depend on threads.
  std::mt19937_64 rng(opts.seed);
  std::vector<DiscreteCurve> curves;
  std::vector<std::vector<std::pair<Complex, double>>> params(opts.curves);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (std::size_t c = 0; c < opts.curves; ++c) {
    if (opts.corpus == LemmaCorpus::Circles) {
      const double radius = 0.5 + 1.0 * u01(rng);
      const double offset = 0.9 * radius * u01(rng);
      curves.push_back(shapes::circle(radius, opts.vertices, offset, std::polar(1.0, 2 * std::numbers::pi * u01(rng))));
    } else {
      curves.push_back(shapes::random_smooth(rng, opts.vertices));
    }
    for (std::size_t k = 0; k < opts.trials_per_curve; ++k) {
      const Complex nu = std::polar(1.0, 2 * std::numbers::pi * u01(rng));
      const auto [lo, hi] = leaf_range(curves.back(), nu);
      params[c].emplace_back(nu, lo + (hi - lo) * u01(rng));
    }
  }
  parallel_for(opts.curves, opts.threads, [&](std::size_t c) {
    const DiscreteCurve& curve = curves[c];
    RasterFunction u = signed_distance_raster(curve, opts.resolution);
    if (opts.perturbation != 0.0) {
      const double p = opts.perturbation;
      u = RasterFunction::sample(opts.resolution, [&](Complex z) {
        const double v = std::min(distance_to_curve(curve, z), 10.0);
        return (curve.encloses(z) ? -v : v) + p * z.real();
      });
    }
    const double band = inclusion_tolerance(curve);
    for (const auto& [nu, s] : params[c]) {
      const ReflectionCheck t = reflection_check_at(curve, nu, s, band);
      const FunctionCheck f = is_admissible_function(u, nu, s);
      results[c].push_back({t.admissible == f.admissible, t.margin, band, nu, s});
    }
  });
  detail::SlackTracker track("|reflection margin| <= tol_incl for every disagreement");
  std::size_t agree = 0, total = 0;
  for (std::size_t c = 0; c < results.size(); ++c) {
    for (const Trial& tr : results[c]) {
      ++total;
      if (tr.agree) {
        ++agree;
        continue;
      }
      track.check(std::abs(tr.margin), tr.band, 0.0,
                  "curve " + std::to_string(c) + " nu (" + detail::fmt_num(tr.nu.real()) + ", " + detail::fmt_num(tr.nu.imag()) +
                      ") s " + detail::fmt_num(tr.s));
    }
  }
  const double rate = total ? static_cast<double>(agree) / static_cast<double>(total) : 0.0;
  track.check(opts.min_agreement, rate, 0.0, "agreement rate");
  r.tolerances = {{"min_agreement", opts.min_agreement}, {"resolution", static_cast<double>(opts.resolution)}};
  r.metrics = {{"trials", static_cast<double>(total)}, {"agreement", rate}, {"disagreements", static_cast<double>(total - agree)}};
  track.finish(r);
  return r;
}

}  // namespace hyperflow
