#pragma once

// Aleksandrov reflection: admissible values of a closed curve (compact foliation),
// of a function sampled on a disk raster, and of a periodic horospherical graph
// (hemisphere foliation).

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

#include "hyperflow/curve.hpp"
#include "hyperflow/error.hpp"
#include "hyperflow/geometry.hpp"
#include "hyperflow/horograph.hpp"
#include "hyperflow/isometry.hpp"
#include "hyperflow/parallel.hpp"

namespace hyperflow {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class AdmissibilityMethod { TripleBisection, FunctionGrid };

inline const char* to_string(AdmissibilityMethod m) {
  return m == AdmissibilityMethod::TripleBisection ? "triple_bisection" : "function_grid";
}

/// Inclusion slack for reflected points: twice the largest geodesic-chord sagitta.
inline double inclusion_tolerance(const DiscreteCurve& curve) {
  const auto h = curve.edge_lengths();
  const auto k = curvature(curve).kappa;
  double tol = 0.0;
  for (std::size_t j = 0; j < h.size(); ++j) {
    const double kap = std::max(std::abs(k[j]), std::abs(k[(j + 1) % k.size()]));
    tol = std::max(tol, h[j] * h[j] * kap / 4.0);
  }
  return std::max(tol, 1e-10);
}

/// Range [lowest, highest] of leaf parameters met by the curve in direction nu.
/// For s at or above the top, H_+(nu, s) misses the curve.
inline std::pair<double, double> leaf_range(const DiscreteCurve& curve, Complex nu) {
  nu /= std::abs(nu);
  double lo = kInfinity, hi = -kInfinity;
  // tanh of the leaf parameter is linear in Klein coordinates, so extremes sit at vertices.
  for (Complex k : curve.klein_vertices()) {
    const double t = dot(k, nu);
    lo = std::min(lo, t);
    hi = std::max(hi, t);
  }
  return {std::atanh(lo), std::atanh(hi)};
}

struct AdmissibilityOptions {
  std::size_t ladder = 32;        ///< parameters checked above s
  double ladder_ratio = 1.15;     ///< geometric growth of the ladder gaps
  double tol_incl = -1.0;         ///< < 0: inclusion_tolerance(curve)
  std::size_t sweep_steps = 64;   ///< coarse downward sweep before bisection
  double tol = 1e-6;              ///< bisection bracket width
  std::size_t interior_checks = 3;
  bool compute_margin = true;
};

struct ReflectionCheck {
  bool admissible = true;
  /// -(largest signed distance of a reflected point); +inf when H_+ misses the curve.
  double margin = kInfinity;
  double worst_s = 0.0;
  std::optional<Complex> worst_point;
};

namespace detail {

/// Vertices of the curve in H_+(nu, s) and Klein midpoints of edges inside it.
inline void plus_points(const DiscreteCurve& curve, Complex nu, double s, std::vector<Complex>& out) {
  out.clear();
  const double ts = std::tanh(s);
  const auto& k = curve.klein_vertices();
  const std::size_t n = k.size();
  for (std::size_t j = 0; j < n; ++j) {
    const Complex a = k[j];
    const Complex b = k[(j + 1) % n];
    const bool ina = hyperflow::dot(a, nu) > ts;
    if (ina) out.push_back(curve[j]);
    const Complex mid = 0.5 * (a + b);
    if (hyperflow::dot(mid, nu) > ts) out.push_back(klein::to_disk(mid));
  }
}

/// Boolean single-parameter test: every reflected H_+ point is in the closed region
/// or within tol of the curve.
inline bool reflects_inside(const DiscreteCurve& curve, Complex nu, double s, double tol, std::vector<Complex>& buf) {
  plus_points(curve, nu, s, buf);
  const DiskReflection refl(nu, s);
  for (Complex p : buf) {
    const Complex q = refl(p);
    if (curve.encloses(q)) continue;
    if (local_distance(curve, q, tol) <= tol) continue;
    return false;
  }
  return true;
}

}  // namespace detail

/// Single-parameter test: R_{nu,s}(Sigma ∩ H_+) ⊂ closure of Omega, with exact signed-distance margin.
inline ReflectionCheck reflection_check_at(const DiscreteCurve& curve, Complex nu, double s, double tol_incl) {
  nu /= std::abs(nu);
  ReflectionCheck out;
  out.worst_s = s;
  std::vector<Complex> pts;
  detail::plus_points(curve, nu, s, pts);
  // Sorted by leaf parameter: points near the leaf have images near the curve.
  std::sort(pts.begin(), pts.end(), [nu](Complex a, Complex b) {
    return DiskReflection::leaf_tanh(a, nu) < DiskReflection::leaf_tanh(b, nu);
  });
  const DiskReflection refl(nu, s);
  double worst = -kInfinity;
  std::vector<Complex> inside;
  // Outside images, farthest from the leaf first. dist(q, p) bounds the distance of
  // q = R(p) to the curve, which prunes most exact searches.
  for (auto it = pts.rbegin(); it != pts.rend(); ++it) {
    const Complex q = refl(*it);
    if (curve.encloses(q)) {
      inside.push_back(q);
      continue;
    }
    if (disk::dist(q, *it) <= worst) continue;
    const double d = distance_to_curve(curve, q);
    if (d > worst) {
      worst = d;
      out.worst_point = q;
    }
  }
  if (worst < 0.0) {
    // All images inside: the margin is the smallest distance to the curve. Images near
    // the leaf come first so the search radius shrinks quickly.
    for (auto it = inside.rbegin(); it != inside.rend(); ++it) {
      const double d = worst == -kInfinity ? distance_to_curve(curve, *it) : local_distance(curve, *it, -worst);
      if (std::isfinite(d) && -d > worst) {
        worst = -d;
        out.worst_point = *it;
      }
    }
  }
  if (!pts.empty()) out.margin = -worst;
  out.admissible = out.margin >= -tol_incl;
  return out;
}

/// Admissibility in direction nu: the single-parameter test at s and on a geometric
/// ladder of larger parameters up to the top leaf met by the curve.
inline ReflectionCheck is_admissible_triple(const DiscreteCurve& curve, Complex nu, double s,
                                            const AdmissibilityOptions& opts = {}) {
  nu /= std::abs(nu);
  const double tol = opts.tol_incl >= 0.0 ? opts.tol_incl : inclusion_tolerance(curve);
  const double top = leaf_range(curve, nu).second;
  ReflectionCheck out;
  out.worst_s = s;
  if (s >= top) return out;
  const std::size_t k = std::max<std::size_t>(opts.ladder, 2);
  const double q = opts.ladder_ratio;
  const double denom = std::pow(q, static_cast<double>(k - 1)) - 1.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double st = s + (top - s) * (std::pow(q, static_cast<double>(i)) - 1.0) / denom;
    const ReflectionCheck c = reflection_check_at(curve, nu, st, tol);
    if (c.margin < out.margin) {
      out.margin = c.margin;
      out.worst_s = st;
      out.worst_point = c.worst_point;
    }
  }
  out.admissible = out.margin >= -tol;
  return out;
}

struct OptimalValue {
  double s0 = 0.0;
  /// Final bisection bracket: lo fails, hi passes.
  double lo = 0.0;
  double hi = 0.0;
  /// Margin of is_admissible_triple at hi (NaN when not computed).
  double margin = std::numeric_limits<double>::quiet_NaN();
  std::size_t checks = 0;
};

/// s_0(nu): sweep the single-parameter test downward from the top leaf to the first
/// failure, then bisect; each bisection midpoint is accepted only if it and a few
/// parameters between it and the passing end all pass.
inline OptimalValue optimal_admissible(const DiscreteCurve& curve, Complex nu, const AdmissibilityOptions& opts = {}) {
  nu /= std::abs(nu);
  const double tol_incl = opts.tol_incl >= 0.0 ? opts.tol_incl : inclusion_tolerance(curve);
  const auto [bottom, top] = leaf_range(curve, nu);
  std::vector<Complex> buf;
  OptimalValue out;
  auto pass = [&](double s) {
    ++out.checks;
    return detail::reflects_inside(curve, nu, s, tol_incl, buf);
  };
  const std::size_t steps = std::max<std::size_t>(opts.sweep_steps, 4);
  const double width = top - bottom;
  double hi = top, lo = top;
  bool failed = false;
  for (std::size_t i = 1; i <= steps; ++i) {
    const double s = top - width * static_cast<double>(i) / static_cast<double>(steps);
    if (!pass(s)) {
      lo = s;
      failed = true;
      break;
    }
    hi = s;
  }
  if (!failed) {
    // Below the lowest leaf the whole region reflects out of itself; reaching this means
    // the tolerance swallowed the test.
    throw BracketError("optimal_admissible: no failing parameter found down to the lowest leaf");
  }
  while (hi - lo > opts.tol) {
    const double mid = 0.5 * (lo + hi);
    bool ok = pass(mid);
    for (std::size_t c = 1; ok && c <= opts.interior_checks; ++c)
      ok = pass(mid + (hi - mid) * static_cast<double>(c) / static_cast<double>(opts.interior_checks + 1));
    (ok ? hi : lo) = mid;
  }
  out.lo = lo;
  out.hi = hi;
  out.s0 = 0.5 * (lo + hi);
  if (opts.compute_margin) out.margin = is_admissible_triple(curve, nu, hi, opts).margin;
  return out;
}

inline std::vector<Complex> direction_grid(std::size_t count) {
  std::vector<Complex> out(count);
  for (std::size_t k = 0; k < count; ++k)
    out[k] = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(count));
  return out;
}

struct DirectionalValue {
  Complex direction;
  OptimalValue value;
};

struct OverallOptimal {
  double s_bar = -kInfinity;
  Complex argmax{1.0, 0.0};
  std::vector<DirectionalValue> per_direction;
  /// min over antipodal pairs of s_0(nu) + s_0(-nu) (even grids only; +inf otherwise).
  double antipodal_slack = kInfinity;
};

/// s̄ = max over a uniform direction grid of s_0(nu).
inline OverallOptimal overall_optimal(const DiscreteCurve& curve, std::size_t directions = 256,
                                      AdmissibilityOptions opts = {}, std::size_t threads = 1) {
  if (directions < 64) throw PreconditionError("overall_optimal: need at least 64 directions");
  if (opts.tol_incl < 0.0) opts.tol_incl = inclusion_tolerance(curve);
  const auto grid = direction_grid(directions);
  OverallOptimal out;
  out.per_direction.resize(directions);
  parallel_for(directions, threads, [&](std::size_t k) {
    out.per_direction[k] = {grid[k], optimal_admissible(curve, grid[k], opts)};
  });
  for (const auto& d : out.per_direction) {
    if (d.value.s0 > out.s_bar) {
      out.s_bar = d.value.s0;
      out.argmax = d.direction;
    }
  }
  if (directions % 2 == 0) {
    for (std::size_t k = 0; k < directions / 2; ++k)
      out.antipodal_slack = std::min(out.antipodal_slack, out.per_direction[k].value.s0 +
                                                              out.per_direction[k + directions / 2].value.s0);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Function-level admissibility on a raster of the disk

/// Values of a function on the nodes x_ij = (-1 + i d, -1 + j d), d = 2/(res-1);
/// nodes with |x| > valid_radius carry no value.
class RasterFunction {
 public:
  static RasterFunction sample(std::size_t res, const std::function<double(Complex)>& u, double valid_radius = 0.99,
                               std::size_t threads = 1) {
    if (res < 32) throw ResolutionError("RasterFunction: resolution below 32");
    if (!(valid_radius > 0.0 && valid_radius < 1.0 - kGuardBand))
      throw PreconditionError("RasterFunction: valid radius must lie in (0, 1)");
    RasterFunction r;
    r.res_ = res;
    r.d_ = 2.0 / static_cast<double>(res - 1);
    r.valid_radius_ = valid_radius;
    r.v_.assign(res * res, std::numeric_limits<double>::quiet_NaN());
    parallel_for(res, threads, [&](std::size_t j) {
      for (std::size_t i = 0; i < res; ++i) {
        const Complex z = r.node(i, j);
        if (std::abs(z) <= valid_radius) r.v_[j * res + i] = u(z);
      }
    });
    return r;
  }

  std::size_t resolution() const { return res_; }
  double spacing() const { return d_; }
  double valid_radius() const { return valid_radius_; }
  Complex node(std::size_t i, std::size_t j) const {
    return {-1.0 + d_ * static_cast<double>(i), -1.0 + d_ * static_cast<double>(j)};
  }
  double at(std::size_t i, std::size_t j) const { return v_[j * res_ + i]; }
  bool valid(std::size_t i, std::size_t j) const { return !std::isnan(at(i, j)); }

  /// Whether all four nodes around z carry values.
  bool interpolable(Complex z) const {
    const auto [i, j, fx, fy] = locate(z);
    if (i + 1 >= res_ || j + 1 >= res_) return false;
    return valid(i, j) && valid(i + 1, j) && valid(i, j + 1) && valid(i + 1, j + 1);
  }

  /// Bilinear interpolation.
  double operator()(Complex z) const {
    if (!interpolable(z)) throw ResolutionError("RasterFunction: point outside the interpolable region");
    const auto [i, j, fx, fy] = locate(z);
    return (1 - fx) * (1 - fy) * at(i, j) + fx * (1 - fy) * at(i + 1, j) + (1 - fx) * fy * at(i, j + 1) +
           fx * fy * at(i + 1, j + 1);
  }

  /// Bound on the bilinear interpolation error in the cell containing z, from the
  /// largest second differences on the cell and its neighbours (h^2/8 (|u_xx| + |u_yy|)).
  /// Falls back to `fallback` where the stencil leaves the valid region.
  double interpolation_error(Complex z, double fallback) const {
    const auto [i, j, fx, fy] = locate(z);
    if (i < 1 || j < 1 || i + 2 >= res_ || j + 2 >= res_) return fallback;
    double dxx = 0.0, dyy = 0.0;
    for (std::size_t b = j; b <= j + 1; ++b) {
      for (std::size_t a = i; a <= i + 1; ++a) {
        const double c = at(a, b);
        const double h = at(a - 1, b) - 2 * c + at(a + 1, b);
        const double v = at(a, b - 1) - 2 * c + at(a, b + 1);
        if (std::isnan(h) || std::isnan(v)) return fallback;
        dxx = std::max(dxx, std::abs(h));
        dyy = std::max(dyy, std::abs(v));
      }
    }
    return (dxx + dyy) / 8.0;
  }

 private:
  struct Cell {
    std::size_t i, j;
    double fx, fy;
  };
  Cell locate(Complex z) const {
    const double gx = (z.real() + 1.0) / d_;
    const double gy = (z.imag() + 1.0) / d_;
    const double cx = std::clamp(std::floor(gx), 0.0, static_cast<double>(res_ - 1));
    const double cy = std::clamp(std::floor(gy), 0.0, static_cast<double>(res_ - 1));
    return {static_cast<std::size_t>(cx), static_cast<std::size_t>(cy), gx - cx, gy - cy};
  }

  std::size_t res_ = 0;
  double d_ = 0.0;
  double valid_radius_ = 0.0;
  std::vector<double> v_;
};

/// Raster of the truncated signed distance to the curve.
inline RasterFunction signed_distance_raster(const DiscreteCurve& curve, std::size_t res, double cap = 10.0,
                                             double valid_radius = 0.99, std::size_t threads = 1) {
  return RasterFunction::sample(res, [&](Complex z) { return signed_distance(curve, z, cap); }, valid_radius, threads);
}

struct FunctionCheck {
  bool admissible = true;
  /// min over tested nodes of u(x) - u(x*).
  double margin = kInfinity;
  std::optional<Complex> worst;
  /// Node where u(x) - u(x*) + tol is smallest.
  std::optional<Complex> critical;
  double critical_excess = kInfinity;
  std::size_t tested = 0;
  /// Nodes of H_+ whose reflection leaves the interpolable region.
  std::size_t skipped = 0;
};

/// Interpolation slack at z: the local bilinear error bound, or one raster spacing in
/// the hyperbolic metric where no full stencil is available.
inline double raster_tolerance(const RasterFunction& u, Complex z) {
  return u.interpolation_error(z, 2.0 * u.spacing() / (1.0 - std::norm(z)));
}

/// u(x) >= u(x*) - tol at every valid raster node x of H_+(nu, s).
inline FunctionCheck is_admissible_function(const RasterFunction& u, Complex nu, double s, double tol_scale = 1.0) {
  nu /= std::abs(nu);
  const DiskReflection refl(nu, s);
  FunctionCheck out;
  for (std::size_t j = 0; j < u.resolution(); ++j) {
    for (std::size_t i = 0; i < u.resolution(); ++i) {
      if (!u.valid(i, j)) continue;
      const Complex x = u.node(i, j);
      if (refl.side(x) != Side::Plus) continue;
      const Complex xs = refl(x);
      if (!u.interpolable(xs)) {
        ++out.skipped;
        continue;
      }
      ++out.tested;
      const double diff = u.at(i, j) - u(xs);
      if (diff < out.margin) {
        out.margin = diff;
        out.worst = x;
      }
      const double excess = diff + tol_scale * raster_tolerance(u, xs);
      if (excess < out.critical_excess) {
        out.critical_excess = excess;
        out.critical = x;
      }
      if (excess < 0.0) out.admissible = false;
    }
  }
  return out;
}

struct MonotonicityCheck {
  bool monotone = true;
  /// Largest decrease u(z1) - u(z2) with z1 before z2 on one normal geodesic.
  double worst_drop = 0.0;
  std::optional<std::pair<Complex, Complex>> worst_pair;
};

/// Marches normal geodesics of P_nu(s) into H_+ and checks u is non-decreasing along them.
inline MonotonicityCheck monotone_along_normals(const RasterFunction& u, Complex nu, double s, std::size_t feet = 64,
                                                double step = 0.02, double tol_scale = 1.0) {
  nu /= std::abs(nu);
  MonotonicityCheck out;
  // Foot points spread over the part of the leaf inside the raster's valid disk.
  const double reach = 2.0 * std::atanh(u.valid_radius()) - std::abs(s);
  for (std::size_t f = 0; f < feet; ++f) {
    const double along = reach * (2.0 * (static_cast<double>(f) + 0.5) / static_cast<double>(feet) - 1.0);
    // Compare against the running maximum so slow steady decreases are caught too.
    Complex top_z = fermi_to_disk(nu, s, {along, 0.0});
    if (!u.interpolable(top_z)) continue;
    double top = u(top_z);
    for (double r = step;; r += step) {
      const Complex z = fermi_to_disk(nu, s, {along, r});
      if (!u.interpolable(z)) break;
      const double cur = u(z);
      const double drop = top - cur;
      const double tol = tol_scale * (raster_tolerance(u, z) + raster_tolerance(u, top_z));
      if (drop > out.worst_drop) {
        out.worst_drop = drop;
        out.worst_pair = std::pair{top_z, z};
      }
      if (drop > tol) out.monotone = false;
      if (cur > top) {
        top = cur;
        top_z = z;
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Hemisphere foliation of the half-plane: periodic horospherical graphs

struct NoncompactOptions {
  double ratio = 1.02;         ///< geometric sweep factor for s
  double coarse_from = 100.0;  ///< in periods: beyond this the sweep uses coarse_ratio
  double coarse_ratio = 1.5;
  double cap_periods = 1e4;    ///< s_cap = cap_periods * period
  double tol = 1e-6;           ///< relative bisection width
  double tol_incl = -1.0;      ///< hyperbolic inclusion slack; < 0: from the sampling
};

/// Hyperbolic inclusion slack for a sampled graph: twice the largest chord sagitta
/// measured in the 1/y^2 metric.
inline double inclusion_tolerance(const HoroGraph& g) {
  const double h = g.spacing();
  double tol = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) tol = std::max(tol, h * h * std::abs(g.second_derivative(j)) / (4.0 * g[j]));
  return std::max(tol, 1e-10);
}

struct OptimalValueNc {
  double s0 = kInfinity;
  double lo = 0.0;
  double hi = kInfinity;
  /// True when every tested s up to s_cap was admissible (s0 = +inf sentinel).
  bool unbounded = true;
  double s_cap = 0.0;
};

namespace detail {

struct GraphSampler {
  const HoroGraph& g;
  PeriodicPchip interp;
  double fmin, fmax;

  explicit GraphSampler(const HoroGraph& graph)
      : g(graph), interp(grid(graph), with_midpoints(graph), graph.period()), fmin(graph.min()), fmax(graph.max()) {}

  static std::vector<double> grid(const HoroGraph& graph) {
    std::vector<double> x(2 * graph.size());
    for (std::size_t j = 0; j < x.size(); ++j) x[j] = 0.5 * graph.spacing() * static_cast<double>(j);
    return x;
  }
  // Samples doubled with monotone-cubic midpoints, so reflected graph points include
  // points between the grid nodes.
  static std::vector<double> with_midpoints(const HoroGraph& graph) {
    std::vector<double> xs(graph.size());
    for (std::size_t j = 0; j < xs.size(); ++j) xs[j] = graph.x(j);
    PeriodicPchip p(std::move(xs), graph.samples(), graph.period());
    std::vector<double> y(2 * graph.size());
    for (std::size_t j = 0; j < y.size(); ++j) y[j] = j % 2 == 0 ? graph[j / 2] : p(0.5 * graph.spacing() * static_cast<double>(j));
    return y;
  }
};

/// Closest Euclidean approach of the sampled graph to the boundary point (x, 0).
inline double nearest_graph_distance(const HoroGraph& g, double x) {
  const double L = g.period();
  double best = kInfinity;
  for (std::size_t j = 0; j < g.size(); ++j) {
    double dx = std::fmod(g.x(j) - x, L);
    if (dx > 0.5 * L) dx -= L;
    if (dx < -0.5 * L) dx += L;
    best = std::min(best, std::hypot(dx, g[j]));
  }
  return best;
}

/// Single-parameter test for the hemisphere of radius s over (x, 0): every graph point
/// inside it reflects to a point above the graph (up to a hyperbolic slack tol).
inline bool hemisphere_reflects_inside(const GraphSampler& gs, double x, double s, double tol) {
  const HoroGraph& g = gs.g;
  const double h = 0.5 * g.spacing();
  const std::size_t m = 2 * g.size();
  // Points with d^2 <= s^2 y / fmax reflect to height >= fmax: no need to test them.
  const double inner = s * std::sqrt(gs.fmin / gs.fmax);
  const double inner_x = inner > gs.fmax ? std::sqrt(inner * inner - gs.fmax * gs.fmax) : 0.0;
  const double shrink = std::exp(-tol);
  auto test_range = [&](double a, double b) {
    // Samples with X in [a, b].
    const long first = static_cast<long>(std::ceil(a / h));
    const long last = static_cast<long>(std::floor(b / h));
    for (long k = first; k <= last; ++k) {
      const double X = h * static_cast<double>(k);
      long idx = k % static_cast<long>(m);
      if (idx < 0) idx += static_cast<long>(m);
      const double Y = gs.interp(h * static_cast<double>(idx));
      const double dx = X - x;
      const double d2 = dx * dx + Y * Y;
      if (d2 >= s * s || d2 * gs.fmax <= s * s * Y) continue;
      const double f = s * s / d2;
      const double Xr = x + f * dx;
      const double Yr = f * Y;
      if (Yr < gs.interp(Xr) * shrink) return false;
    }
    return true;
  };
  return test_range(x - s, x - inner_x) && test_range(x + inner_x, x + s);
}

}  // namespace detail

/// s_0(x) for the hemisphere foliation over the boundary point (x, 0).
inline OptimalValueNc optimal_admissible_nc(const HoroGraph& g, double x, const NoncompactOptions& opts = {}) {
  const detail::GraphSampler gs(g);
  const double tol = opts.tol_incl >= 0.0 ? opts.tol_incl : inclusion_tolerance(g);
  OptimalValueNc out;
  out.s_cap = opts.cap_periods * g.period();
  const double start = detail::nearest_graph_distance(g, x);
  double hi = start;  // below the nearest approach H_+ misses the graph
  double lo = kInfinity;
  for (double s = start;;) {
    const double ratio = s < opts.coarse_from * g.period() ? opts.ratio : opts.coarse_ratio;
    const double next = std::min(s * ratio, out.s_cap);
    if (!detail::hemisphere_reflects_inside(gs, x, next, tol)) {
      lo = next;
      break;
    }
    hi = next;
    if (next >= out.s_cap) break;
    s = next;
  }
  out.lo = hi;
  if (lo == kInfinity) {
    out.hi = kInfinity;
    return out;  // admissible up to the cap: +inf sentinel
  }
  out.unbounded = false;
  // Here admissibility holds below `hi` and fails at `lo` > hi.
  double pass = hi, fail = lo;
  while (fail - pass > opts.tol * pass) {
    const double mid = 0.5 * (pass + fail);
    (detail::hemisphere_reflects_inside(gs, x, mid, tol) ? pass : fail) = mid;
  }
  out.lo = pass;
  out.hi = fail;
  out.s0 = 0.5 * (pass + fail);
  return out;
}

struct OverallOptimalNc {
  double s_bar = kInfinity;
  double argmin = 0.0;
  std::vector<std::pair<double, OptimalValueNc>> per_point;
};

/// s̄ = inf over a uniform grid of boundary points in one period.
inline OverallOptimalNc overall_optimal_nc(const HoroGraph& g, std::size_t points = 128, const NoncompactOptions& opts = {},
                                           std::size_t threads = 1) {
  if (points == 0) throw PreconditionError("overall_optimal_nc: need at least one boundary point");
  OverallOptimalNc out;
  out.per_point.resize(points);
  parallel_for(points, threads, [&](std::size_t k) {
    const double x = g.period() * static_cast<double>(k) / static_cast<double>(points);
    out.per_point[k] = {x, optimal_admissible_nc(g, x, opts)};
  });
  for (const auto& [x, v] : out.per_point) {
    if (v.s0 < out.s_bar) {
      out.s_bar = v.s0;
      out.argmin = x;
    }
  }
  return out;
}

}  // namespace hyperflow
