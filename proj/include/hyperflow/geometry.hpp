#pragma once

// Hyperbolic space H^{n+1} in the Poincare ball and upper half-space models.
//
// General-dimension points are `HPoint` values; the planar hot paths used by the
// curve machinery (n = 1) work on std::complex<double> in the `disk`, `upper`
// and `klein` namespaces below.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "hyperflow/error.hpp"

namespace hyperflow {

using Complex = std::complex<double>;

/// Points with |x| > 1 - kGuardBand (ball) or y < kGuardBand (half-space) are rejected.
inline constexpr double kGuardBand = 1e-9;
/// Largest ambient dimension n + 1 accepted by the analytic operations.
inline constexpr std::size_t kMaxAmbientDim = 8;

enum class Model { Ball, HalfSpace };

inline std::string to_string(Model m) { return m == Model::Ball ? "ball" : "half_space"; }

namespace detail {

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm2(std::span<const double> a) { return dot(a, a); }

inline double dist2(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

inline void require_unit(std::span<const double> v, const char* who) {
  if (v.empty() || v.size() > kMaxAmbientDim) throw PreconditionError(std::string(who) + ": bad dimension");
  if (std::abs(std::sqrt(norm2(v)) - 1.0) > 1e-12) throw PreconditionError(std::string(who) + ": direction is not a unit vector");
}

// Ball <-> half-space map: inversion in the sphere about -e_{n+1} of radius sqrt(2).
// It is an involution, sends 0 to e_{n+1} and -e_{n+1} to infinity.
inline std::vector<double> cayley(std::span<const double> x) {
  std::vector<double> y(x.begin(), x.end());
  y.back() += 1.0;
  const double r2 = norm2(y);
  for (double& c : y) c *= 2.0 / r2;
  y.back() -= 1.0;
  return y;
}

}  // namespace detail

/// A point of H^{n+1} tagged with its model. Always valid once constructed.
class HPoint {
 public:
  static HPoint ball(std::vector<double> coords) { return HPoint(Model::Ball, std::move(coords)); }
  static HPoint half_space(std::vector<double> coords) { return HPoint(Model::HalfSpace, std::move(coords)); }
  /// Planar points given as complex numbers.
  static HPoint disk(Complex z) { return ball(std::vector<double>{z.real(), z.imag()}); }
  static HPoint upper(Complex z) { return half_space(std::vector<double>{z.real(), z.imag()}); }
  static HPoint origin(std::size_t dim) { return ball(std::vector<double>(dim, 0.0)); }

  HPoint(Model model, std::vector<double> coords) : model_(model), coords_(std::move(coords)) { validate(); }

  Model model() const { return model_; }
  std::span<const double> coords() const { return coords_; }
  std::size_t dim() const { return coords_.size(); }
  double operator[](std::size_t i) const { return coords_[i]; }

  /// Planar view; only meaningful for dim() == 2.
  Complex as_complex() const { return {coords_[0], coords_[1]}; }

  bool operator==(const HPoint&) const = default;

 private:
  void validate() const {
    if (coords_.empty() || coords_.size() > kMaxAmbientDim) throw DomainError("HPoint: dimension must be in [1, 8]");
    for (double c : coords_) {
      if (!std::isfinite(c)) throw DomainError("HPoint: non-finite coordinate");
    }
    if (model_ == Model::Ball) {
      if (std::sqrt(detail::norm2(coords_)) > 1.0 - kGuardBand) throw DomainError("HPoint: outside the ball guard band");
    } else if (coords_.back() < kGuardBand) {
      throw DomainError("HPoint: outside the half-space guard band");
    }
  }

  Model model_;
  std::vector<double> coords_;
};

/// Convert to the requested model; identity when the model already matches.
inline HPoint convert(const HPoint& p, Model target) {
  if (p.model() == target) return p;
  return HPoint(target, detail::cayley(p.coords()));
}

/// Hyperbolic distance (curvature -1); points are brought to a common model.
inline double dist(const HPoint& p, const HPoint& q) {
  if (p.dim() != q.dim()) throw PreconditionError("dist: dimension mismatch");
  if (p.model() != q.model()) return dist(p, convert(q, p.model()));
  const double e = std::sqrt(detail::dist2(p.coords(), q.coords()));
  if (p.model() == Model::Ball) {
    const double a = 1.0 - detail::norm2(p.coords());
    const double b = 1.0 - detail::norm2(q.coords());
    return 2.0 * std::asinh(e / std::sqrt(a * b));
  }
  return 2.0 * std::asinh(e / (2.0 * std::sqrt(p.coords().back() * q.coords().back())));
}

/// Geodesic polar coordinates about the ball origin.
struct PolarCoord {
  std::vector<double> direction;
  double radius = 0.0;
};

/// exp_0(r nu) in the ball: tanh(r/2) nu.
inline HPoint exp_polar(std::span<const double> direction, double r) {
  detail::require_unit(direction, "exp_polar");
  if (!(r >= 0.0)) throw PreconditionError("exp_polar: radius must be >= 0");
  const double rho = std::tanh(0.5 * r);
  std::vector<double> x(direction.begin(), direction.end());
  for (double& c : x) c *= rho;
  return HPoint::ball(std::move(x));
}

inline PolarCoord log_polar(const HPoint& p) {
  const HPoint b = convert(p, Model::Ball);
  const double rho = std::sqrt(detail::norm2(b.coords()));
  if (rho == 0.0) throw UndefinedDirectionError("log_polar: direction undefined at the origin");
  PolarCoord out;
  out.direction.assign(b.coords().begin(), b.coords().end());
  for (double& c : out.direction) c /= rho;
  out.radius = 2.0 * std::atanh(rho);
  return out;
}

/// Summit of a Saccheri quadrilateral with base b and legs l:
/// arccosh(cosh b cosh^2 l - sinh^2 l).
inline double saccheri_summit(double base, double leg) {
  if (!(base >= 0.0) || !(leg >= 0.0)) throw PreconditionError("saccheri_summit: lengths must be >= 0");
  // cosh S - 1 = (cosh b - 1) cosh^2 l, written with sinh^2 to keep precision for small b.
  const double sh = std::sinh(0.5 * base) * std::cosh(leg);
  return 2.0 * std::asinh(sh);
}

// ---------------------------------------------------------------------------
// Isoparametric hypersurfaces (umbilic: one principal curvature value)

struct GeodesicSphere {
  HPoint center;
  double radius;
};

/// Totally geodesic leaf P_nu(s) of the compact foliation.
struct TotallyGeodesic {
  std::vector<double> normal;
  double s = 0.0;
};

/// Hypersurface at signed distance `distance` from P_nu(s).
struct Equidistant {
  std::vector<double> normal;
  double s = 0.0;
  double distance = 0.0;
};

/// Horizontal horosphere {y = height} of the half-space model.
struct Horosphere {
  double height;
};

class IsoparametricSurface {
 public:
  using Kind = std::variant<GeodesicSphere, TotallyGeodesic, Equidistant, Horosphere>;

  explicit IsoparametricSurface(Kind kind) : kind_(std::move(kind)) {
    if (const auto* s = std::get_if<GeodesicSphere>(&kind_); s && !(s->radius > 0.0))
      throw PreconditionError("geodesic sphere radius must be > 0");
    if (const auto* h = std::get_if<Horosphere>(&kind_); h && !(h->height > 0.0))
      throw PreconditionError("horosphere height must be > 0");
  }

  const Kind& kind() const { return kind_; }

  /// coth r, 0, tanh d, 1 (inward normal for spheres, normal into the horoball).
  double principal_curvature() const {
    struct Visitor {
      double operator()(const GeodesicSphere& s) const { return 1.0 / std::tanh(s.radius); }
      double operator()(const TotallyGeodesic&) const { return 0.0; }
      double operator()(const Equidistant& e) const { return std::tanh(e.distance); }
      double operator()(const Horosphere&) const { return 1.0; }
    };
    return std::visit(Visitor{}, kind_);
  }

  double mean_curvature(int n) const { return n * principal_curvature(); }

 private:
  Kind kind_;
};

// ---------------------------------------------------------------------------
// Planar fast paths (n = 1).

inline double cross(Complex a, Complex b) { return a.real() * b.imag() - a.imag() * b.real(); }
inline double dot(Complex a, Complex b) { return a.real() * b.real() + a.imag() * b.imag(); }

namespace disk {

inline bool inside(Complex z) { return std::sqrt(std::norm(z)) <= 1.0 - kGuardBand; }

inline double dist(Complex a, Complex b) {
  const double e = std::sqrt(std::norm(a - b));
  return 2.0 * std::asinh(e / std::sqrt((1.0 - std::norm(a)) * (1.0 - std::norm(b))));
}

/// Isometry sending p to the origin; its derivative at p is a positive real,
/// so Euclidean directions at p are preserved.
inline Complex to_origin(Complex z, Complex p) {
  const Complex d = 1.0 - std::conj(p) * z;
  return (z - p) * std::conj(d) / std::norm(d);
}
/// Inverse of to_origin: sends the origin to p.
inline Complex from_origin(Complex w, Complex p) {
  const Complex d = 1.0 + std::conj(p) * w;
  return (w + p) * std::conj(d) / std::norm(d);
}

/// Geodesic exponential from p along the Euclidean unit direction u.
inline Complex exp(Complex p, Complex u, double length) { return from_origin(std::tanh(0.5 * length) * u, p); }

/// Disk -> upper half-plane via the fixed inversion (0 -> i, -i -> infinity).
inline Complex to_upper(Complex z) { return Complex(0.0, -1.0) + 2.0 / std::conj(z + Complex(0.0, 1.0)); }
inline Complex from_upper(Complex w) { return to_upper(w); }

inline double radius_of(Complex z) { return 2.0 * std::atanh(std::abs(z)); }

}  // namespace disk

namespace klein {

inline Complex from_disk(Complex z) { return 2.0 * z / (1.0 + std::norm(z)); }
inline Complex to_disk(Complex k) { return k / (1.0 + std::sqrt(std::max(0.0, 1.0 - std::norm(k)))); }

}  // namespace klein

namespace upper {

inline double dist(Complex a, Complex b) {
  return 2.0 * std::asinh(std::abs(a - b) / (2.0 * std::sqrt(a.imag() * b.imag())));
}

/// Geodesic exponential from p along the Euclidean unit direction u.
inline Complex exp(Complex p, Complex u, double length) {
  // Affine map z -> (z - x)/y sends p to i; the Cayley disk map sends i to 0 and
  // rotates tangent directions at i by -pi/2.
  const Complex dir = u * Complex(0.0, -1.0);
  const Complex zeta = std::tanh(0.5 * length) * dir;
  const Complex w = Complex(0.0, 1.0) * (1.0 + zeta) / (1.0 - zeta);
  return Complex(p.real(), 0.0) + p.imag() * w;
}

}  // namespace upper

}  // namespace hyperflow
