#pragma once

// Expanding inverse curvature flows: closed-form isoparametric solutions, front
// tracking for closed curves in the disk, and the graph flow of perturbed horospheres.
// Fronts move outward (away from the enclosed region) with normal speed 1/F(kappa).

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hyperflow/curve.hpp"
#include "hyperflow/error.hpp"
#include "hyperflow/geometry.hpp"
#include "hyperflow/horograph.hpp"
#include "hyperflow/reflection.hpp"

namespace hyperflow {

enum class SpeedKind { InverseMean, InversePowerMean };

/// Normalized curvature function F with F(1,...,1) = n.
/// InverseMean: F = sum kappa_i. InversePowerMean(p): F = n (mean kappa_i^p)^(1/p), p = 0 the geometric mean.
class SpeedFunction {
 public:
  SpeedFunction() = default;

  static SpeedFunction inverse_mean(int n = 1) { return SpeedFunction(SpeedKind::InverseMean, n, 1.0); }
  static SpeedFunction inverse_power_mean(int n, double p) {
    if (!std::isfinite(p) || p > 1.0) throw PreconditionError("SpeedFunction: power must be finite and <= 1");
    return SpeedFunction(SpeedKind::InversePowerMean, n, p);
  }

  SpeedKind kind() const { return kind_; }
  int dimension() const { return n_; }
  double power() const { return p_; }

  /// Positive orthant.
  static bool in_cone(std::span<const double> kappa) {
    return std::all_of(kappa.begin(), kappa.end(), [](double k) { return k > 0.0; });
  }

  double operator()(std::span<const double> kappa) const {
    if (kappa.size() != static_cast<std::size_t>(n_)) throw PreconditionError("SpeedFunction: wrong number of curvatures");
    if (!in_cone(kappa)) throw PreconditionError("SpeedFunction: curvatures outside the positive cone");
    if (kind_ == SpeedKind::InverseMean) return std::accumulate(kappa.begin(), kappa.end(), 0.0);
    const double n = static_cast<double>(n_);
    if (p_ == 0.0) {
      double logs = 0.0;
      for (double k : kappa) logs += std::log(k);
      return n * std::exp(logs / n);
    }
    double sum = 0.0;
    for (double k : kappa) sum += std::pow(k, p_);
    return n * std::pow(sum / n, 1.0 / p_);
  }

  /// F(kappa, ..., kappa) = n kappa.
  double umbilic(double kappa) const { return static_cast<double>(n_) * kappa; }

  /// Curves (n = 1): every normalized F reduces to kappa.
  double curve(double kappa) const { return kappa; }

  std::string name() const {
    return kind_ == SpeedKind::InverseMean ? "inverse_mean" : "inverse_power_mean(" + std::to_string(p_) + ")";
  }

 private:
  SpeedFunction(SpeedKind kind, int n, double p) : kind_(kind), n_(n), p_(p) {
    if (n < 1) throw PreconditionError("SpeedFunction: dimension must be >= 1");
  }

  SpeedKind kind_ = SpeedKind::InverseMean;
  int n_ = 1;
  double p_ = 1.0;
};

// ---------------------------------------------------------------------------
// Closed forms

/// Geodesic sphere radius: sinh r(t) = e^{t/n} sinh r0.
inline double sphere_radius(double r0, int n, double t) {
  if (!(r0 > 0.0) || n < 1 || t < 0.0) throw PreconditionError("sphere_radius: need r0 > 0, n >= 1, t >= 0");
  return std::asinh(std::exp(t / n) * std::sinh(r0));
}

/// Equidistant distance: cosh d(t) = e^{t/n} cosh d0.
inline double equidistant_distance(double d0, int n, double t) {
  if (d0 < 0.0 || n < 1 || t < 0.0) throw PreconditionError("equidistant_distance: need d0 >= 0, n >= 1, t >= 0");
  return std::acosh(std::exp(t / n) * std::cosh(d0));
}

/// Horosphere height in the half-space: s(t) = s0 e^{-t/n}.
inline double horosphere_height(double s0, int n, double t) {
  if (!(s0 > 0.0) || n < 1) throw PreconditionError("horosphere_height: need s0 > 0, n >= 1");
  return s0 * std::exp(-t / n);
}

/// Waiting time after which the flow is star-shaped: n log(sinh r+ / sinh r-).
inline double predicted_starshaped_time(double r_minus, double r_plus, int n) {
  if (!(r_minus > 0.0) || r_plus < r_minus) throw PreconditionError("predicted_starshaped_time: need 0 < r- <= r+");
  return n * std::log(std::sinh(r_plus) / std::sinh(r_minus));
}

/// Time after which a perturbed horosphere is a global graph: n log(s+ / s_bar).
inline double predicted_graphical_time_nc(double s_plus, double s_bar, int n) {
  if (!(s_bar > 0.0) || s_plus < s_bar) throw PreconditionError("predicted_graphical_time_nc: need 0 < s_bar <= s+");
  return n * std::log(s_plus / s_bar);
}

/// Horosphere barriers trapping a perturbed horosphere between heights s- <= s+.
struct BarrierEnvelope {
  int n = 1;
  double s_minus = 1.0;
  double s_plus = 1.0;

  BarrierEnvelope(double s_plus_, double s_minus_, int n_) : n(n_), s_minus(s_minus_), s_plus(s_plus_) {
    if (!(s_minus > 0.0) || s_plus < s_minus || n < 1) throw PreconditionError("BarrierEnvelope: need 0 < s- <= s+");
  }

  double upper(double t) const { return s_plus * std::exp(-t / n); }
  double lower(double t) const {
    const double e = std::exp(-t / n);
    return s_minus * e / (1.0 + std::sqrt(std::max(0.0, 1.0 - e * e)));
  }
};

/// (s-(t), s+(t)).
inline std::pair<double, double> barrier_envelope(double s_plus, double s_minus, int n, double t) {
  const BarrierEnvelope env(s_plus, s_minus, n);
  return {env.lower(t), env.upper(t)};
}

// ---------------------------------------------------------------------------
// Options and trajectories

enum class Stepper { Euler, Midpoint };

struct RunOptions {
  double c_cfl = 0.2;
  Stepper stepper = Stepper::Midpoint;
  SpeedFunction speed = SpeedFunction::inverse_mean(1);
  /// Record times in (0, t_end]; empty means record_count uniform times.
  std::vector<double> record_times;
  std::size_t record_count = 10;
  std::size_t max_steps = 100'000'000;
  double dt_min = 1e-12;
  /// Compact flows: resample to more vertices when an edge exceeds this length.
  double h_max = std::numeric_limits<double>::infinity();
  /// Compact flows: > 0 computes s_bar over this many directions at every record.
  std::size_t admissibility_directions = 0;
  std::size_t threads = 1;
};

struct CurveDiagnostics {
  double t = 0.0;
  double dt = 0.0;
  std::size_t vertices = 0;
  double kappa_min = 0.0;
  double kappa_max = 0.0;
  double edge_min = 0.0;
  double edge_max = 0.0;
  double area = 0.0;
  bool starshaped = false;
  double s_bar = std::numeric_limits<double>::quiet_NaN();
  double r_minus = std::numeric_limits<double>::quiet_NaN();
  double r_plus = std::numeric_limits<double>::quiet_NaN();
};

struct GraphDiagnostics {
  double t = 0.0;
  double dt = 0.0;
  double kappa_min = 0.0;
  double kappa_max = 0.0;
  double f_min = 0.0;
  double f_max = 0.0;
  /// sup |kappa - 1|
  double umbilic_deviation = 0.0;
};

struct HaltInfo {
  std::string kind;  ///< flow_not_defined, surgery_needed, guard_band, dt_underflow, max_steps
  std::string message;
  double t = 0.0;
  std::optional<std::size_t> vertex;
};

template <class State, class Diagnostics>
struct Trajectory {
  SpeedFunction speed;
  std::vector<State> states;
  std::vector<Diagnostics> diagnostics;
  std::size_t steps = 0;
  std::optional<HaltInfo> halt;

  std::size_t size() const { return states.size(); }
  double time(std::size_t i) const { return diagnostics[i].t; }
  bool complete() const { return !halt.has_value(); }
};

using CurveTrajectory = Trajectory<DiscreteCurve, CurveDiagnostics>;
using GraphTrajectory = Trajectory<HoroGraph, GraphDiagnostics>;

namespace detail {

inline std::vector<double> record_schedule(double t_end, const RunOptions& opts) {
  std::vector<double> out;
  if (opts.record_times.empty()) {
    const std::size_t k = std::max<std::size_t>(opts.record_count, 1);
    for (std::size_t i = 1; i <= k; ++i) out.push_back(t_end * static_cast<double>(i) / static_cast<double>(k));
  } else {
    for (double t : opts.record_times)
      if (t > 0.0 && t <= t_end) out.push_back(t);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
  }
  return out;
}

inline HaltInfo halt_info(const FlowHalt& e, double t) {
  HaltInfo h{"", e.what(), t, std::nullopt};
  if (auto* f = dynamic_cast<const FlowNotDefined*>(&e)) {
    h.kind = "flow_not_defined";
    h.vertex = f->vertex();
  } else if (dynamic_cast<const SurgeryNeeded*>(&e)) {
    h.kind = "surgery_needed";
  } else if (dynamic_cast<const GuardBandHalt*>(&e)) {
    h.kind = "guard_band";
  } else if (dynamic_cast<const TimeStepUnderflow*>(&e)) {
    h.kind = "dt_underflow";
  } else {
    h.kind = "halt";
  }
  return h;
}

/// Generic driver: steps with the CFL step clipped to hit every record time.
template <class State, class Diagnostics, class Cfl, class Step, class Diagnose>
Trajectory<State, Diagnostics> run(State s0, double t_end, const RunOptions& opts, Cfl&& cfl, Step&& step,
                                   Diagnose&& diagnose) {
  if (!(t_end >= 0.0)) throw PreconditionError("run: t_end must be >= 0");
  Trajectory<State, Diagnostics> traj;
  traj.speed = opts.speed;
  const std::vector<double> records = record_schedule(t_end, opts);
  State state = std::move(s0);
  double t = 0.0;
  traj.diagnostics.push_back(diagnose(state, t, 0.0));
  traj.states.push_back(state);
  std::size_t next = 0;
  double last_dt = 0.0;
  try {
    while (next < records.size()) {
      if (records[next] <= t) {
        ++next;
        continue;
      }
      if (traj.steps >= opts.max_steps) {
        traj.halt = HaltInfo{"max_steps", "step budget exhausted", t, std::nullopt};
        break;
      }
      double dt = cfl(state);
      if (!(dt >= opts.dt_min)) throw TimeStepUnderflow("time step " + std::to_string(dt) + " below the underflow threshold");
      bool hit = false;
      if (t + dt >= records[next]) {
        dt = records[next] - t;
        hit = true;
      }
      state = step(state, dt);
      last_dt = dt;
      ++traj.steps;
      t = hit ? records[next] : t + dt;
      if (hit) {
        traj.diagnostics.push_back(diagnose(state, t, last_dt));
        traj.states.push_back(state);
        ++next;
      }
    }
  } catch (const FlowHalt& e) {
    traj.halt = halt_info(e, t);
  }
  return traj;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Front tracking for closed curves

/// CFL step c min_j (h_j F(kappa_j))^2, h_j the shorter adjacent edge. The flow is
/// parabolic with diffusion 1/F^2, so the step scales with the squared edge.
inline double cfl_step(const DiscreteCurve& curve, const SpeedFunction& speed, double c_cfl) {
  const auto h = curve.edge_lengths();
  const auto k = curvature(curve).kappa;
  const std::size_t n = curve.size();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < n; ++j) {
    const double hj = std::min(h[j], h[(j + n - 1) % n]);
    const double f = speed.curve(std::max(k[j], 0.0));
    best = std::min(best, hj * hj * f * f);
  }
  return c_cfl * best;
}

namespace detail {

/// Outward unit direction times speed 1/F at each vertex.
inline std::vector<Complex> curve_velocity(std::span<const Complex> v, const SpeedFunction& speed) {
  const std::size_t n = v.size();
  std::vector<Complex> out(n);
  for (std::size_t j = 0; j < n; ++j) {
    const Complex a = v[(j + n - 1) % n];
    const Complex c = v[(j + 1) % n];
    if (disk::dist(a, v[j]) < kDegenerateEdge || disk::dist(v[j], c) < kDegenerateEdge)
      throw ResampleRequired("step_compact: degenerate edge at vertex " + std::to_string(j));
    const VertexFrame f = vertex_frame(a, v[j], c);
    if (!(f.kappa > 0.0))
      throw FlowNotDefined("step_compact: curvature " + std::to_string(f.kappa) + " outside the cone at vertex " +
                               std::to_string(j),
                           j);
    out[j] = -f.inward / speed.curve(f.kappa);
  }
  return out;
}

inline std::vector<Complex> advance(std::span<const Complex> v, std::span<const Complex> vel, double dt) {
  std::vector<Complex> out(v.size());
  for (std::size_t j = 0; j < v.size(); ++j) {
    const double speed = std::sqrt(std::norm(vel[j]));
    const double len = speed * dt;
    out[j] = len > 0.0 ? disk::exp(v[j], vel[j] / speed, len) : v[j];
    if (!disk::inside(out[j])) throw GuardBandHalt("step_compact: vertex " + std::to_string(j) + " reached the guard band");
  }
  return out;
}

}  // namespace detail

/// One step of the curve flow: every vertex moves dt/F(kappa) along the outward
/// normal geodesic. Resamples when the edge-ratio invariant breaks.
inline DiscreteCurve step_compact(const DiscreteCurve& curve, double dt, const SpeedFunction& speed = {},
                                  Stepper stepper = Stepper::Midpoint) {
  if (!(dt > 0.0)) throw PreconditionError("step_compact: dt must be > 0");
  const auto& v = curve.vertices();
  std::vector<Complex> vel = detail::curve_velocity(v, speed);
  if (stepper == Stepper::Midpoint) {
    const std::vector<Complex> half = detail::advance(v, vel, 0.5 * dt);
    vel = detail::curve_velocity(half, speed);
  }
  DiscreteCurve next = DiscreteCurve::make(detail::advance(v, vel, dt));
  if (!next.satisfies_edge_ratio()) next = resample(next);
  return next;
}

inline CurveDiagnostics diagnose_curve(const DiscreteCurve& c, double t, double dt, const RunOptions& opts = {}) {
  CurveDiagnostics d;
  d.t = t;
  d.dt = dt;
  d.vertices = c.size();
  const CurvatureField k = curvature(c);
  d.kappa_min = k.min();
  d.kappa_max = k.max();
  const auto h = c.edge_lengths();
  d.edge_min = *std::min_element(h.begin(), h.end());
  d.edge_max = *std::max_element(h.begin(), h.end());
  d.area = enclosed_area(c);
  if (c.encloses(0.0)) {
    d.starshaped = is_starshaped(c).starshaped;
    const InOutRadius r = in_out_radius(c);
    d.r_minus = r.r_minus;
    d.r_plus = r.r_plus;
  }
  if (opts.admissibility_directions > 0) {
    AdmissibilityOptions a;
    a.compute_margin = false;
    d.s_bar = overall_optimal(c, opts.admissibility_directions, a, opts.threads).s_bar;
  }
  return d;
}

/// Runs the curve flow to t_end, recording states at the scheduled times. Halting
/// conditions end the run early with the partial trajectory and the halt recorded.
inline CurveTrajectory run_compact(const DiscreteCurve& curve, double t_end, const RunOptions& opts = {}) {
  if (opts.speed.dimension() != 1) throw PreconditionError("run_compact: curves need a speed with n = 1");
  if (!(opts.c_cfl > 0.0)) throw PreconditionError("run_compact: c_cfl must be > 0");
  if (curvature(curve).min() <= 0.0) {
    const auto k = curvature(curve).kappa;
    const auto it = std::find_if(k.begin(), k.end(), [](double x) { return x <= 0.0; });
    throw FlowNotDefined("run_compact: initial curvature outside the cone",
                         static_cast<std::size_t>(std::distance(k.begin(), it)));
  }
  return detail::run<DiscreteCurve, CurveDiagnostics>(
      curve, t_end, opts, [&](const DiscreteCurve& c) { return cfl_step(c, opts.speed, opts.c_cfl); },
      [&](const DiscreteCurve& c, double dt) {
        DiscreteCurve next = step_compact(c, dt, opts.speed, opts.stepper);
        if (next.max_edge() > opts.h_max) next = resample(next, {0, 0.0, opts.h_max});
        return next;
      },
      [&](const DiscreteCurve& c, double t, double dt) { return diagnose_curve(c, t, dt, opts); });
}

// ---------------------------------------------------------------------------
// Graph flow of perturbed horospheres

inline double cfl_step(const HoroGraph& g, const SpeedFunction& speed, double c_cfl) {
  double best = std::numeric_limits<double>::infinity();
  const double h = g.spacing();
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double fp = g.derivative(j);
    const double k = graph_curvature(g[j], fp, g.second_derivative(j));
    // Hyperbolic length of one grid cell along the graph.
    const double hh = h * std::sqrt(1.0 + fp * fp) / g[j];
    const double f = speed.curve(std::max(k, 0.0));
    best = std::min(best, hh * hh * f * f);
  }
  return c_cfl * best;
}

namespace detail {

struct GraphVelocity {
  std::vector<Complex> dir;  // unit downward normal
  std::vector<double> speed;
};

inline GraphVelocity graph_velocity(const HoroGraph& g, const SpeedFunction& speed) {
  GraphVelocity out;
  out.dir.resize(g.size());
  out.speed.resize(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double fp = g.derivative(j);
    const double k = graph_curvature(g[j], fp, g.second_derivative(j));
    if (!(k > 0.0))
      throw FlowNotDefined("step_noncompact: curvature " + std::to_string(k) + " outside the cone at sample " +
                               std::to_string(j),
                           j);
    out.dir[j] = Complex(fp, -1.0) / std::sqrt(1.0 + fp * fp);
    out.speed[j] = 1.0 / speed.curve(k);
  }
  return out;
}

inline HoroGraph advance_graph(const HoroGraph& g, const GraphVelocity& vel, double dt) {
  const std::size_t m = g.size();
  std::vector<double> X(m), Y(m);
  for (std::size_t j = 0; j < m; ++j) {
    const Complex q = upper::exp(Complex(g.x(j), g[j]), vel.dir[j], vel.speed[j] * dt);
    if (!(q.imag() >= kGuardBand)) throw GuardBandHalt("step_noncompact: sample " + std::to_string(j) + " reached the guard band");
    X[j] = q.real();
    Y[j] = q.imag();
  }
  // Throws SurgeryNeeded if the moved points no longer form a graph.
  const PeriodicPchip p(std::move(X), std::move(Y), g.period());
  std::vector<double> f(m);
  for (std::size_t j = 0; j < m; ++j) f[j] = p(g.x(j));
  return HoroGraph::make(g.period(), std::move(f));
}

}  // namespace detail

/// One step of the graph flow: every sample moves dt/F(kappa) along the downward
/// normal geodesic, then the moved points are re-sampled on the fixed grid.
inline HoroGraph step_noncompact(const HoroGraph& g, double dt, const SpeedFunction& speed = {},
                                 Stepper stepper = Stepper::Midpoint) {
  if (!(dt > 0.0)) throw PreconditionError("step_noncompact: dt must be > 0");
  detail::GraphVelocity vel = detail::graph_velocity(g, speed);
  if (stepper == Stepper::Midpoint) vel = detail::graph_velocity(detail::advance_graph(g, vel, 0.5 * dt), speed);
  return detail::advance_graph(g, vel, dt);
}

inline GraphDiagnostics diagnose_graph(const HoroGraph& g, double t, double dt) {
  GraphDiagnostics d;
  d.t = t;
  d.dt = dt;
  const CurvatureField k = curvature_horograph(g);
  d.kappa_min = k.min();
  d.kappa_max = k.max();
  d.umbilic_deviation = k.sup_deviation(1.0);
  d.f_min = g.min();
  d.f_max = g.max();
  return d;
}

inline GraphTrajectory run_noncompact(const HoroGraph& g, double t_end, const RunOptions& opts = {}) {
  if (opts.speed.dimension() != 1) throw PreconditionError("run_noncompact: graphs in the half-plane need n = 1");
  if (!(opts.c_cfl > 0.0)) throw PreconditionError("run_noncompact: c_cfl must be > 0");
  return detail::run<HoroGraph, GraphDiagnostics>(
      g, t_end, opts, [&](const HoroGraph& s) { return cfl_step(s, opts.speed, opts.c_cfl); },
      [&](const HoroGraph& s, double dt) { return step_noncompact(s, dt, opts.speed, opts.stepper); },
      [](const HoroGraph& s, double t, double dt) { return diagnose_graph(s, t, dt); });
}

}  // namespace hyperflow
