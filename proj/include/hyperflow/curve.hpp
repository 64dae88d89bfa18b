#pragma once

// Closed discrete curves in the Poincare disk (n = 1 hypersurfaces of H^2).
//
// A DiscreteCurve is a geodesic polygon: consecutive vertices are joined by
// geodesic segments. Point-in-polygon and simplicity tests run in Klein
// coordinates where those segments are straight chords.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "hyperflow/error.hpp"
#include "hyperflow/geometry.hpp"
#include "hyperflow/isometry.hpp"

namespace hyperflow {

inline constexpr std::size_t kMinCurveResolution = 16;
inline constexpr double kDegenerateEdge = 1e-10;
inline constexpr double kEdgeRatioLimit = 4.0;

namespace detail {

// Uniform-cell spatial index over the straight (Klein) edges of a closed polygon.
class PolygonIndex {
 public:
  PolygonIndex() = default;

  explicit PolygonIndex(std::vector<Complex> pts) : pts_(std::move(pts)) {
    const std::size_t n = pts_.size();
    lo_ = hi_ = pts_.front();
    double max_edge = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const Complex a = pts_[i];
      lo_ = {std::min(lo_.real(), a.real()), std::min(lo_.imag(), a.imag())};
      hi_ = {std::max(hi_.real(), a.real()), std::max(hi_.imag(), a.imag())};
      max_edge = std::max(max_edge, std::abs(pts_[(i + 1) % n] - a));
    }
    const double extent = std::max({hi_.real() - lo_.real(), hi_.imag() - lo_.imag(), 1e-12});
    const double max_cells = 4.0 * std::sqrt(static_cast<double>(n)) + 4.0;
    cell_ = std::max({max_edge, extent / max_cells, 1e-12});
    nx_ = static_cast<std::size_t>((hi_.real() - lo_.real()) / cell_) + 1;
    ny_ = static_cast<std::size_t>((hi_.imag() - lo_.imag()) / cell_) + 1;
    start_.assign(nx_ * ny_ + 1, 0);
    auto edge_cells = [&](std::size_t i) {
      const Complex a = pts_[i];
      const Complex b = pts_[(i + 1) % n];
      const auto [x0, y0] = cell_of({std::min(a.real(), b.real()), std::min(a.imag(), b.imag())});
      const auto [x1, y1] = cell_of({std::max(a.real(), b.real()), std::max(a.imag(), b.imag())});
      return std::array<std::size_t, 4>{x0, y0, x1, y1};
    };
    for (std::size_t i = 0; i < n; ++i) {
      const auto [x0, y0, x1, y1] = edge_cells(i);
      for (std::size_t y = y0; y <= y1; ++y)
        for (std::size_t x = x0; x <= x1; ++x) ++start_[y * nx_ + x + 1];
    }
    for (std::size_t k = 1; k < start_.size(); ++k) start_[k] += start_[k - 1];
    edges_.resize(start_.back());
    std::vector<unsigned> fill(start_.begin(), start_.end() - 1);
    for (std::size_t i = 0; i < n; ++i) {
      const auto [x0, y0, x1, y1] = edge_cells(i);
      for (std::size_t y = y0; y <= y1; ++y)
        for (std::size_t x = x0; x <= x1; ++x) edges_[fill[y * nx_ + x]++] = static_cast<unsigned>(i);
    }
  }

  const std::vector<Complex>& points() const { return pts_; }

  /// Even-odd crossing test against a ray towards +x.
  bool contains(Complex p) const {
    if (p.imag() < lo_.imag() || p.imag() > hi_.imag() || p.real() > hi_.real()) return false;
    if (p.real() < lo_.real()) return false;
    const std::size_t n = pts_.size();
    const auto [cx, cy] = cell_of(p);
    bool inside = false;
    for (std::size_t x = cx; x < nx_; ++x) {
      for (unsigned e : cell(cy * nx_ + x)) {
        const Complex a = pts_[e];
        const Complex b = pts_[(e + 1) % n];
        if ((a.imag() > p.imag()) == (b.imag() > p.imag())) continue;
        const double xi = a.real() + (p.imag() - a.imag()) * (b.real() - a.real()) / (b.imag() - a.imag());
        // An edge is listed in every cell its bounding box touches; count the crossing
        // only in the cell that contains it.
        if (p.real() < xi && cell_of({xi, p.imag()}).first == x) inside = !inside;
      }
    }
    return inside;
  }

  /// Calls fn(edge) for every edge whose cell lies within `radius` of p (duplicates possible).
  template <class Fn>
  void for_each_edge_near(Complex p, double radius, Fn&& fn) const {
    if (p.real() + radius < lo_.real() || p.real() - radius > hi_.real() || p.imag() + radius < lo_.imag() ||
        p.imag() - radius > hi_.imag())
      return;
    const auto [x0, y0] = cell_of(p - Complex(radius, radius));
    const auto [x1, y1] = cell_of(p + Complex(radius, radius));
    for (std::size_t y = y0; y <= y1; ++y)
      for (std::size_t x = x0; x <= x1; ++x)
        for (unsigned e : cell(y * nx_ + x)) fn(static_cast<std::size_t>(e));
  }

  /// Index pair of two non-adjacent intersecting edges, if any.
  std::optional<std::pair<std::size_t, std::size_t>> find_self_intersection() const {
    const std::size_t n = pts_.size();
    for (std::size_t k = 0; k + 1 < start_.size(); ++k) {
      const std::span<const unsigned> c = cell(k);
      for (std::size_t u = 0; u < c.size(); ++u) {
        for (std::size_t v = u + 1; v < c.size(); ++v) {
          const std::size_t i = c[u];
          const std::size_t j = c[v];
          if (i == j || (i + 1) % n == j || (j + 1) % n == i) continue;
          if (segments_intersect(pts_[i], pts_[(i + 1) % n], pts_[j], pts_[(j + 1) % n])) return std::pair{i, j};
        }
      }
    }
    return std::nullopt;
  }

  static bool segments_intersect(Complex a, Complex b, Complex c, Complex d) {
    const double d1 = cross(b - a, c - a);
    const double d2 = cross(b - a, d - a);
    const double d3 = cross(d - c, a - c);
    const double d4 = cross(d - c, b - c);
    if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) return true;
    auto on_segment = [](Complex p, Complex q, Complex r) {
      return std::min(p.real(), q.real()) <= r.real() && r.real() <= std::max(p.real(), q.real()) &&
             std::min(p.imag(), q.imag()) <= r.imag() && r.imag() <= std::max(p.imag(), q.imag());
    };
    if (d1 == 0 && on_segment(a, b, c)) return true;
    if (d2 == 0 && on_segment(a, b, d)) return true;
    if (d3 == 0 && on_segment(c, d, a)) return true;
    if (d4 == 0 && on_segment(c, d, b)) return true;
    return false;
  }

 private:
  std::pair<std::size_t, std::size_t> cell_of(Complex p) const {
    auto clampi = [](double v, std::size_t n) {
      if (!(v > 0.0)) return std::size_t{0};
      const auto i = static_cast<std::size_t>(v);
      return std::min(i, n - 1);
    };
    return {clampi((p.real() - lo_.real()) / cell_, nx_), clampi((p.imag() - lo_.imag()) / cell_, ny_)};
  }

  std::vector<Complex> pts_;
  Complex lo_{}, hi_{};
  double cell_ = 1.0;
  std::size_t nx_ = 1, ny_ = 1;
  std::span<const unsigned> cell(std::size_t k) const {
    return {edges_.data() + start_[k], edges_.data() + start_[k + 1]};
  }

  std::vector<unsigned> start_;
  std::vector<unsigned> edges_;
};

inline double signed_area_euclid(std::span<const Complex> pts) {
  double a = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) a += cross(pts[i], pts[(i + 1) % pts.size()]);
  return 0.5 * a;
}

}  // namespace detail

/// Hyperbolic distance from p to the geodesic segment [a, b] (disk model).
inline double segment_distance(Complex p, Complex a, Complex b) {
  const Complex ka = klein::from_disk(disk::to_origin(a, p));
  const Complex kb = klein::from_disk(disk::to_origin(b, p));
  const Complex e = kb - ka;
  const double len2 = std::norm(e);
  double t = len2 > 0.0 ? -dot(ka, e) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::atanh(std::min(std::abs(ka + t * e), 1.0 - 1e-16));
}

/// Closed, simple, positively oriented geodesic polygon in the Poincare disk.
class DiscreteCurve {
 public:
  /// Validates the vertices, reverses them if clockwise, and checks simplicity.
  static DiscreteCurve make(std::vector<Complex> vertices) {
    if (vertices.size() < kMinCurveResolution) throw PreconditionError("DiscreteCurve: need at least 16 vertices");
    for (Complex z : vertices) {
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw DomainError("DiscreteCurve: non-finite vertex");
      if (!disk::inside(z)) throw DomainError("DiscreteCurve: vertex outside the disk guard band");
    }
    std::vector<Complex> kv(vertices.size());
    std::transform(vertices.begin(), vertices.end(), kv.begin(), klein::from_disk);
    if (detail::signed_area_euclid(kv) < 0.0) {
      std::reverse(vertices.begin(), vertices.end());
      std::reverse(kv.begin(), kv.end());
    }
    DiscreteCurve c;
    c.vertices_ = std::move(vertices);
    c.index_ = detail::PolygonIndex(std::move(kv));
    c.build_blocks();
    if (auto hit = c.index_.find_self_intersection())
      throw SurgeryNeeded("DiscreteCurve: edges " + std::to_string(hit->first) + " and " + std::to_string(hit->second) +
                          " intersect");
    return c;
  }

  const std::vector<Complex>& vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }
  Complex operator[](std::size_t i) const { return vertices_[i]; }
  Complex next(std::size_t i) const { return vertices_[(i + 1) % size()]; }
  Complex prev(std::size_t i) const { return vertices_[(i + size() - 1) % size()]; }

  /// Klein-coordinate copy of the vertices.
  const std::vector<Complex>& klein_vertices() const { return index_.points(); }
  const detail::PolygonIndex& index() const { return index_; }

  /// Hyperbolic length of edge i = [v_i, v_{i+1}].
  std::vector<double> edge_lengths() const {
    std::vector<double> out(size());
    for (std::size_t i = 0; i < size(); ++i) out[i] = disk::dist(vertices_[i], next(i));
    return out;
  }

  double max_edge() const {
    const auto e = edge_lengths();
    return *std::max_element(e.begin(), e.end());
  }

  double min_edge() const {
    const auto e = edge_lengths();
    return *std::min_element(e.begin(), e.end());
  }

  double length() const {
    double s = 0.0;
    for (double e : edge_lengths()) s += e;
    return s;
  }

  /// Largest ratio between consecutive edge lengths.
  double edge_ratio() const {
    const auto e = edge_lengths();
    double worst = 1.0;
    for (std::size_t i = 0; i < e.size(); ++i) {
      const double a = e[i];
      const double b = e[(i + 1) % e.size()];
      worst = std::max(worst, std::max(a, b) / std::max(std::min(a, b), 1e-300));
    }
    return worst;
  }

  bool satisfies_edge_ratio(double limit = kEdgeRatioLimit) const { return edge_ratio() <= limit; }

  /// Whether p lies in the open region Omega bounded by the curve (up to the polygon boundary).
  bool encloses(Complex p) const { return index_.contains(klein::from_disk(p)); }

  /// Runs of consecutive edges with an enclosing hyperbolic ball (center, radius).
  struct EdgeBlock {
    std::size_t first, last;  // edges [first, last)
    Complex center;
    double radius;
  };
  const std::vector<EdgeBlock>& edge_blocks() const { return blocks_; }

  /// Hyperbolic circumradius about the origin: max vertex distance.
  double circumradius() const {
    double r = 0.0;
    for (Complex z : vertices_) r = std::max(r, disk::radius_of(z));
    return r;
  }

 private:
  DiscreteCurve() = default;

  void build_blocks() {
    const std::size_t n = size();
    const std::size_t len = std::max<std::size_t>(8, static_cast<std::size_t>(std::sqrt(static_cast<double>(n))));
    for (std::size_t first = 0; first < n; first += len) {
      const std::size_t last = std::min(n, first + len);
      const Complex c = vertices_[(first + (last - first) / 2) % n];
      double r = 0.0;
      // Balls are convex, so the geodesic edges stay inside.
      for (std::size_t j = first; j <= last; ++j) r = std::max(r, disk::dist(c, vertices_[j % n]));
      blocks_.push_back({first, last, c, r});
    }
  }

  std::vector<Complex> vertices_;
  detail::PolygonIndex index_;
  std::vector<EdgeBlock> blocks_;
};

// ---------------------------------------------------------------------------
// Curvature

/// Per-vertex geodesic curvature; positive on circles w.r.t. the inward normal.
struct CurvatureField {
  std::vector<double> kappa;

  double min() const { return *std::min_element(kappa.begin(), kappa.end()); }
  double max() const { return *std::max_element(kappa.begin(), kappa.end()); }
  /// sup_j |kappa_j - value|
  double sup_deviation(double value = 1.0) const {
    double d = 0.0;
    for (double k : kappa) d = std::max(d, std::abs(k - value));
    return d;
  }
};

/// Curvature and inward unit normal (Euclidean components at the vertex).
struct VertexFrame {
  double kappa;
  Complex inward;
};

/// Three-point frame at b with neighbours a, c: the triple is moved so that b sits
/// at the origin, where hyperbolic curvature is half the Euclidean one.
inline VertexFrame vertex_frame(Complex a, Complex b, Complex c) {
  const Complex pa = disk::to_origin(a, b);
  const Complex pc = disk::to_origin(c, b);
  const double la = std::sqrt(std::norm(pa));
  const double lc = std::sqrt(std::norm(pc));
  const double lac = std::sqrt(std::norm(pc - pa));
  if (la < 1e-300 || lc < 1e-300) throw ResampleRequired("curvature: degenerate edge");
  const double kappa = cross(-pa, pc) / (la * lc * lac);
  // Inverting through the origin maps the circumcircle to a line parallel to its tangent at 0.
  const Complex tangent = pc / (lc * lc) - pa / (la * la);
  const Complex unit_t = tangent / std::sqrt(std::norm(tangent));
  return {kappa, unit_t * Complex(0.0, 1.0)};
}

inline std::vector<VertexFrame> vertex_frames(const DiscreteCurve& curve) {
  const std::size_t n = curve.size();
  std::vector<VertexFrame> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (disk::dist(curve[i], curve.next(i)) < kDegenerateEdge)
      throw ResampleRequired("curvature: edge " + std::to_string(i) + " is degenerate; resample first");
    out[i] = vertex_frame(curve.prev(i), curve[i], curve.next(i));
  }
  return out;
}

inline CurvatureField curvature(const DiscreteCurve& curve) {
  CurvatureField f;
  for (const VertexFrame& v : vertex_frames(curve)) f.kappa.push_back(v.kappa);
  return f;
}

/// Curvature at the interior vertices of an open polyline (used for arcs).
inline std::vector<double> curvature_open(std::span<const Complex> pts) {
  std::vector<double> out;
  for (std::size_t i = 1; i + 1 < pts.size(); ++i) out.push_back(vertex_frame(pts[i - 1], pts[i], pts[i + 1]).kappa);
  return out;
}

// ---------------------------------------------------------------------------
// Distances and radii

/// Smallest distance from p to the edges lying within Klein-Euclidean distance `radius`
/// of klein(p); +inf if there are none. Klein lengths never exceed hyperbolic ones, so
/// a result <= radius is the true distance to the curve.
inline double local_distance(const DiscreteCurve& curve, Complex p, double radius) {
  double best = std::numeric_limits<double>::infinity();
  const auto& v = curve.vertices();
  curve.index().for_each_edge_near(klein::from_disk(p), radius, [&](std::size_t e) {
    best = std::min(best, segment_distance(p, v[e], v[(e + 1) % v.size()]));
  });
  return best;
}

/// Unsigned hyperbolic distance from p to the polygon.
inline double distance_to_curve(const DiscreteCurve& curve, Complex p) {
  const double near = local_distance(curve, p, 0.02);
  if (near <= 0.02) return near;
  // Branch and bound over edge blocks, nearest lower bound first.
  const auto& blocks = curve.edge_blocks();
  thread_local std::vector<std::pair<double, std::size_t>> order;
  order.clear();
  for (std::size_t b = 0; b < blocks.size(); ++b)
    order.emplace_back(disk::dist(p, blocks[b].center) - blocks[b].radius, b);
  std::sort(order.begin(), order.end());
  double best = std::numeric_limits<double>::infinity();
  for (const auto& [lower, b] : order) {
    if (lower >= best) break;
    for (std::size_t j = blocks[b].first; j < blocks[b].last; ++j)
      best = std::min(best, segment_distance(p, curve[j], curve.next(j)));
  }
  return best;
}

/// Truncated signed distance: -d inside Omega, min(d, K) outside.
inline double signed_distance(const DiscreteCurve& curve, Complex p, double cap) {
  if (!(cap > 0.0)) throw PreconditionError("signed_distance: cap must be > 0");
  const double d = distance_to_curve(curve, p);
  return curve.encloses(p) ? -d : std::min(d, cap);
}

inline double signed_distance(const DiscreteCurve& curve, const HPoint& p, double cap) {
  return signed_distance(curve, convert(p, Model::Ball).as_complex(), cap);
}

struct InOutRadius {
  double r_minus;
  double r_plus;
};

/// Geodesic in/out radius of Omega about the origin.
inline InOutRadius in_out_radius(const DiscreteCurve& curve) {
  if (!curve.encloses(0.0)) throw ConfigurationError("in_out_radius: origin is not inside the curve");
  const auto& k = curve.klein_vertices();
  double rmin = std::numeric_limits<double>::infinity();
  double rmax = 0.0;
  for (std::size_t i = 0; i < k.size(); ++i) {
    const Complex a = k[i];
    const Complex e = k[(i + 1) % k.size()] - a;
    const double t = std::clamp(-dot(a, e) / std::norm(e), 0.0, 1.0);
    rmin = std::min(rmin, std::atanh(std::abs(a + t * e)));
    rmax = std::max(rmax, std::atanh(std::abs(a)));
  }
  return {rmin, rmax};
}

/// Hyperbolic area of the geodesic polygon (Gauss-Bonnet: turning excess).
inline double enclosed_area(const DiscreteCurve& curve) {
  double turning = 0.0;
  for (std::size_t i = 0; i < curve.size(); ++i) {
    const Complex a = disk::to_origin(curve.prev(i), curve[i]);
    const Complex c = disk::to_origin(curve.next(i), curve[i]);
    turning += std::arg(c / (-a));
  }
  return turning - 2.0 * std::numbers::pi;
}

// ---------------------------------------------------------------------------
// Star-shapedness and radial graphs

struct StarShapedResult {
  bool starshaped = false;
  /// Offending angular interval [lo, hi] when not star-shaped.
  std::optional<std::pair<double, double>> witness;
};

/// Every ray from the origin meets the curve once iff the vertex arguments increase strictly.
inline StarShapedResult is_starshaped(const DiscreteCurve& curve) {
  if (!curve.encloses(0.0)) throw ConfigurationError("is_starshaped: origin is not inside the curve");
  StarShapedResult out;
  double total = 0.0;
  for (std::size_t i = 0; i < curve.size(); ++i) {
    const double step = std::arg(curve.next(i) / curve[i]);
    if (!(step > 0.0)) {
      out.witness = std::pair{std::arg(curve.next(i)), std::arg(curve[i])};
      return out;
    }
    total += step;
  }
  if (std::abs(total - 2.0 * std::numbers::pi) > 1e-9) {
    out.witness = std::pair{-std::numbers::pi, std::numbers::pi};
    return out;
  }
  out.starshaped = true;
  return out;
}

/// r(theta) on a uniform angular grid with the centered-difference slope dr/dtheta.
struct RadialFunction {
  std::vector<double> theta;
  std::vector<double> r;
  std::vector<double> dr;

  double max_abs_gradient() const {
    double m = 0.0;
    for (double g : dr) m = std::max(m, std::abs(g));
    return m;
  }
};

inline RadialFunction radial_graph(const DiscreteCurve& curve, std::size_t samples = 0) {
  const StarShapedResult star = is_starshaped(curve);
  if (!star.starshaped)
    throw NotStarShaped("radial_graph: curve is not star-shaped", star.witness->first, star.witness->second);
  const std::size_t m = samples == 0 ? curve.size() : samples;
  const auto& k = curve.klein_vertices();
  const std::size_t n = k.size();
  // Lifted, strictly increasing vertex angles starting at vertex 0.
  std::vector<double> ang(n + 1);
  ang[0] = std::arg(k[0]);
  for (std::size_t i = 0; i < n; ++i) ang[i + 1] = ang[i] + std::arg(k[(i + 1) % n] / k[i]);

  RadialFunction out;
  out.theta.resize(m);
  out.r.resize(m);
  out.dr.resize(m);
  const double two_pi = 2.0 * std::numbers::pi;
  for (std::size_t j = 0; j < m; ++j) {
    const double th = two_pi * static_cast<double>(j) / static_cast<double>(m);
    double lifted = th;
    while (lifted < ang[0]) lifted += two_pi;
    while (lifted >= ang[0] + two_pi) lifted -= two_pi;
    auto it = std::upper_bound(ang.begin(), ang.end(), lifted);
    const std::size_t e = static_cast<std::size_t>(std::distance(ang.begin(), it)) - 1;
    const Complex a = k[e % n];
    const Complex b = k[(e + 1) % n];
    const Complex dir = std::polar(1.0, th);
    const double t = -cross(a, dir) / cross(b - a, dir);
    out.theta[j] = th;
    out.r[j] = std::atanh(std::abs(a + t * (b - a)));
  }
  const double h = two_pi / static_cast<double>(m);
  for (std::size_t j = 0; j < m; ++j) out.dr[j] = (out.r[(j + 1) % m] - out.r[(j + m - 1) % m]) / (2.0 * h);
  return out;
}

// ---------------------------------------------------------------------------
// Graphicality over a compact-foliation leaf

struct GraphicalResult {
  bool graphical = false;
  double lipschitz = 0.0;
  /// Vertex pair whose normal projections collide (when not graphical).
  std::optional<std::pair<std::size_t, std::size_t>> witness;
};

/// Whether curve ∩ H_+(nu, s) projects injectively to P_nu(s) along normal geodesics;
/// when it does, also the largest secant slope |d2 - d1| / G(y1, y2, d1).
inline GraphicalResult graphical_over_plane(const DiscreteCurve& curve, Complex nu, double s) {
  const std::size_t n = curve.size();
  std::vector<FermiCoord> f(n);
  for (std::size_t i = 0; i < n; ++i) f[i] = disk_to_fermi(nu, s, curve[i]);

  GraphicalResult out;
  out.graphical = true;
  std::vector<std::size_t> plus;
  for (std::size_t i = 0; i < n; ++i)
    if (f[i].normal > 0.0) plus.push_back(i);
  if (plus.empty()) return out;

  // Split the H_+ vertices into arcs (maximal cyclic runs).
  std::size_t start = 0;
  while (start < n && f[start].normal > 0.0) ++start;
  if (start == n) {
    out.graphical = false;  // the whole closed curve sits in H_+: its projection is not injective
    out.witness = std::pair{std::size_t{0}, n / 2};
    return out;
  }
  struct Arc {
    std::size_t first, last;
    double lo, hi;
  };
  std::vector<Arc> arcs;
  for (std::size_t step = 1; step <= n; ++step) {
    const std::size_t i = (start + step) % n;
    if (f[i].normal <= 0.0) continue;
    const std::size_t prev = (i + n - 1) % n;
    if (f[prev].normal <= 0.0) arcs.push_back({i, i, f[i].along, f[i].along});
    Arc& arc = arcs.back();
    if (i != arc.first) {
      // Along-coordinates must move monotonically within an arc.
      const double d_prev = f[i].along - f[prev].along;
      if (arc.last != arc.first) {
        const std::size_t pp = (prev + n - 1) % n;
        const double d_before = f[prev].along - f[pp].along;
        if (d_prev == 0.0 || (d_prev > 0.0) != (d_before > 0.0)) {
          out.graphical = false;
          out.witness = std::pair{pp, i};
          return out;
        }
      } else if (d_prev == 0.0) {
        out.graphical = false;
        out.witness = std::pair{prev, i};
        return out;
      }
      arc.last = i;
    }
    arc.lo = std::min(arc.lo, f[i].along);
    arc.hi = std::max(arc.hi, f[i].along);
  }
  std::sort(arcs.begin(), arcs.end(), [](const Arc& a, const Arc& b) { return a.lo < b.lo; });
  for (std::size_t a = 1; a < arcs.size(); ++a) {
    if (arcs[a].lo <= arcs[a - 1].hi) {
      out.graphical = false;
      out.witness = std::pair{arcs[a - 1].first, arcs[a].first};
      return out;
    }
  }
  for (std::size_t a = 0; a < plus.size(); ++a) {
    for (std::size_t b = a + 1; b < plus.size(); ++b) {
      const FermiCoord p = f[plus[a]];
      const FermiCoord q = f[plus[b]];
      const double base = std::abs(p.along - q.along);
      const double summit = saccheri_summit(base, std::min(p.normal, q.normal));
      if (summit > 0.0) out.lipschitz = std::max(out.lipschitz, std::abs(p.normal - q.normal) / summit);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Resampling

struct ResampleOptions {
  /// Target vertex count; 0 keeps the current count unless the bounds below force a change.
  std::size_t count = 0;
  double h_min = 0.0;
  double h_max = std::numeric_limits<double>::infinity();
};

/// Redistributes vertices to uniform hyperbolic arclength (cubic Hermite in arclength).
inline DiscreteCurve resample(const DiscreteCurve& curve, const ResampleOptions& opts = {}) {
  const std::size_t n = curve.size();
  const auto& v = curve.vertices();
  const std::vector<double> h = curve.edge_lengths();
  std::vector<double> s(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) s[i + 1] = s[i] + h[i];
  const double total = s[n];

  std::size_t m = opts.count ? opts.count : n;
  if (total / static_cast<double>(m) > opts.h_max) m = static_cast<std::size_t>(std::ceil(total / opts.h_max));
  if (opts.h_min > 0.0 && total / static_cast<double>(m) < opts.h_min)
    m = static_cast<std::size_t>(std::floor(total / opts.h_min));
  m = std::max(m, kMinCurveResolution);

  // Second-order tangents dP/ds at the vertices.
  std::vector<Complex> tangent(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double hm = h[(i + n - 1) % n];
    const double hp = h[i];
    const Complex dm = v[i] - curve.prev(i);
    const Complex dp = curve.next(i) - v[i];
    tangent[i] = (hm * hm * dp + hp * hp * dm) / (hm * hp * (hm + hp));
  }

  std::vector<Complex> out(m);
  std::size_t e = 0;
  for (std::size_t j = 0; j < m; ++j) {
    const double target = total * static_cast<double>(j) / static_cast<double>(m);
    while (e + 1 < n && s[e + 1] <= target) ++e;
    const double len = h[e];
    const double u = (target - s[e]) / len;
    const Complex p0 = v[e];
    const Complex p1 = v[(e + 1) % n];
    const double u2 = u * u;
    const double u3 = u2 * u;
    out[j] = (2 * u3 - 3 * u2 + 1) * p0 + (u3 - 2 * u2 + u) * len * tangent[e] + (-2 * u3 + 3 * u2) * p1 +
             (u3 - u2) * len * tangent[(e + 1) % n];
  }
  return DiscreteCurve::make(std::move(out));
}

}  // namespace hyperflow
