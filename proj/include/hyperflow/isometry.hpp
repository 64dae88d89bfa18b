#pragma once

// Reflection foliations.
//
// Compact case (ball model): leaves P_nu(s) orthogonal to the diameter through nu,
//   H_+(nu, s) = { <x,nu> > tanh(s) (1 + |x|^2) / 2 }.
// Non-compact case (half-space model): hemispheres P_x(s) = { |p - (x,0)| = s },
//   H_+(x, s) = { |p - (x,0)| < s }  (Plus is the bounded side here).

#include <cmath>
#include <complex>
#include <span>
#include <vector>

#include "hyperflow/error.hpp"
#include "hyperflow/geometry.hpp"

namespace hyperflow {

enum class Side { Plus, Minus, On };

inline const char* to_string(Side s) {
  switch (s) {
    case Side::Plus: return "plus";
    case Side::Minus: return "minus";
    default: return "on";
  }
}

/// Tolerance on the defining-equation residual used to classify a point as On.
inline constexpr double kOnTolerance = 1e-12;
/// Below this |s| the compact reflection uses the linear (s = 0) formula.
inline constexpr double kLinearReflectionZone = 1e-8;

/// Leaf P_nu(s) of the compact foliation together with its reflection.
class CompactFoliationPlane {
 public:
  CompactFoliationPlane(std::vector<double> direction, double s) : nu_(std::move(direction)), s_(s) {
    detail::require_unit(nu_, "CompactFoliationPlane");
  }

  std::span<const double> direction() const { return nu_; }
  double parameter() const { return s_; }

  /// Euclidean center coth(s) nu and radius 1/sinh(s) of the inversion sphere (s != 0).
  std::vector<double> inversion_center() const {
    std::vector<double> c(nu_);
    for (double& v : c) v /= std::tanh(s_);
    return c;
  }
  double inversion_radius() const { return 1.0 / std::abs(std::sinh(s_)); }

  /// <x,nu> - tanh(s)(1+|x|^2)/2; positive on H_+.
  double residual(std::span<const double> x) const {
    return detail::dot(x, nu_) - 0.5 * std::tanh(s_) * (1.0 + detail::norm2(x));
  }

  Side side(const HPoint& p) const {
    const HPoint b = convert(p, Model::Ball);
    check_dim(b);
    const double r = residual(b.coords());
    if (std::abs(r) <= kOnTolerance) return Side::On;
    return r > 0.0 ? Side::Plus : Side::Minus;
  }

  HPoint reflect(const HPoint& p) const {
    const HPoint b = convert(p, Model::Ball);
    check_dim(b);
    std::vector<double> x(b.coords().begin(), b.coords().end());
    if (std::abs(s_) < kLinearReflectionZone) {
      const double k = 2.0 * detail::dot(x, nu_);
      for (std::size_t i = 0; i < x.size(); ++i) x[i] -= k * nu_[i];
    } else {
      const std::vector<double> c = inversion_center();
      const double r = inversion_radius();
      std::vector<double> d(x.size());
      for (std::size_t i = 0; i < x.size(); ++i) d[i] = x[i] - c[i];
      const double k = r * r / detail::norm2(d);
      for (std::size_t i = 0; i < x.size(); ++i) x[i] = c[i] + k * d[i];
    }
    return HPoint::ball(std::move(x));  // throws DomainError if roundoff pushed it into the guard band
  }

 private:
  void check_dim(const HPoint& p) const {
    if (p.dim() != nu_.size()) throw PreconditionError("CompactFoliationPlane: dimension mismatch");
  }

  std::vector<double> nu_;
  double s_;
};

/// Hemisphere leaf P_x(s) of the non-compact foliation.
class NoncompactFoliationPlane {
 public:
  NoncompactFoliationPlane(std::vector<double> foot, double s) : foot_(std::move(foot)), s_(s) {
    if (!(s_ > 0.0)) throw PreconditionError("NoncompactFoliationPlane: s must be > 0");
    if (foot_.empty() || foot_.size() + 1 > kMaxAmbientDim) throw PreconditionError("NoncompactFoliationPlane: bad dimension");
  }

  std::span<const double> foot() const { return foot_; }
  double parameter() const { return s_; }

  /// |p - (x,0)| - s; negative on H_+.
  double residual(std::span<const double> p) const {
    double r2 = p.back() * p.back();
    for (std::size_t i = 0; i < foot_.size(); ++i) r2 += (p[i] - foot_[i]) * (p[i] - foot_[i]);
    return std::sqrt(r2) - s_;
  }

  Side side(const HPoint& p) const {
    const HPoint h = convert(p, Model::HalfSpace);
    check_dim(h);
    const double r = residual(h.coords());
    if (std::abs(r) <= kOnTolerance) return Side::On;
    return r < 0.0 ? Side::Plus : Side::Minus;
  }

  HPoint reflect(const HPoint& p) const {
    const HPoint h = convert(p, Model::HalfSpace);
    check_dim(h);
    std::vector<double> d(h.coords().begin(), h.coords().end());
    for (std::size_t i = 0; i < foot_.size(); ++i) d[i] -= foot_[i];
    const double k = s_ * s_ / detail::norm2(d);
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = (i < foot_.size() ? foot_[i] : 0.0) + k * d[i];
    return HPoint::half_space(std::move(d));
  }

 private:
  void check_dim(const HPoint& p) const {
    if (p.dim() != foot_.size() + 1) throw PreconditionError("NoncompactFoliationPlane: dimension mismatch");
  }

  std::vector<double> foot_;
  double s_;
};

inline Side membership_compact(const HPoint& p, std::span<const double> nu, double s) {
  return CompactFoliationPlane({nu.begin(), nu.end()}, s).side(p);
}

inline HPoint reflect_compact(const HPoint& p, std::span<const double> nu, double s) {
  return CompactFoliationPlane({nu.begin(), nu.end()}, s).reflect(p);
}

inline Side membership_noncompact(const HPoint& p, std::span<const double> x, double s) {
  return NoncompactFoliationPlane({x.begin(), x.end()}, s).side(p);
}

inline HPoint reflect_noncompact(const HPoint& p, std::span<const double> x, double s) {
  return NoncompactFoliationPlane({x.begin(), x.end()}, s).reflect(p);
}

// ---------------------------------------------------------------------------
// Planar versions used in the inner loops of the admissibility searches.

/// Reflection across P_nu(s) in the Poincare disk.
class DiskReflection {
 public:
  DiskReflection(Complex nu, double s) : nu_(nu / std::abs(nu)), s_(s), tanh_s_(std::tanh(s)) {
    linear_ = std::abs(s) < kLinearReflectionZone;
    if (!linear_) {
      center_ = nu_ / tanh_s_;
      const double r = 1.0 / std::sinh(s);
      r2_ = r * r;
    }
  }

  Complex direction() const { return nu_; }
  double parameter() const { return s_; }

  /// Leaf parameter through z: tanh(s(z)) = <klein(z), nu>; linear in Klein coordinates.
  static double leaf_tanh(Complex z, Complex nu) { return dot(klein::from_disk(z), nu); }

  double residual(Complex z) const { return dot(z, nu_) - 0.5 * tanh_s_ * (1.0 + std::norm(z)); }

  Side side(Complex z) const {
    const double r = residual(z);
    if (std::abs(r) <= kOnTolerance) return Side::On;
    return r > 0.0 ? Side::Plus : Side::Minus;
  }

  Complex operator()(Complex z) const {
    if (linear_) return z - 2.0 * dot(z, nu_) * nu_;
    const Complex d = z - center_;
    return center_ + (r2_ / std::norm(d)) * d;
  }

 private:
  Complex nu_;
  double s_;
  double tanh_s_;
  bool linear_ = true;
  Complex center_{};
  double r2_ = 0.0;
};

/// Reflection across the hemisphere P_x(s) in the upper half-plane.
class HalfPlaneReflection {
 public:
  HalfPlaneReflection(double foot, double s) : foot_(foot), s_(s) {
    if (!(s > 0.0)) throw PreconditionError("HalfPlaneReflection: s must be > 0");
  }

  double foot() const { return foot_; }
  double parameter() const { return s_; }

  Side side(Complex p) const {
    const double r = std::abs(p - foot_) - s_;
    if (std::abs(r) <= kOnTolerance) return Side::On;
    return r < 0.0 ? Side::Plus : Side::Minus;
  }

  Complex operator()(Complex p) const {
    const Complex d = p - foot_;
    return foot_ + (s_ * s_ / std::norm(d)) * d;
  }

 private:
  double foot_;
  double s_;
};

/// Fermi coordinates relative to the leaf P_nu(s): `along` is the signed arclength
/// of the foot point on the leaf, `normal` the signed distance to it (positive in H_+).
struct FermiCoord {
  double along;
  double normal;
};

inline Complex fermi_to_disk(Complex nu, double s, FermiCoord f) {
  nu /= std::abs(nu);
  // Leaf P_nu(0) rotated to the vertical diameter is the imaginary axis of the upper half-plane.
  const double scale = std::exp(f.along);
  const Complex w(scale * std::tanh(f.normal), scale / std::cosh(f.normal));
  const Complex z0 = disk::from_upper(w) * nu;
  return disk::from_origin(z0, std::tanh(0.5 * s) * nu);
}

inline FermiCoord disk_to_fermi(Complex nu, double s, Complex z) {
  nu /= std::abs(nu);
  const Complex z0 = disk::to_origin(z, std::tanh(0.5 * s) * nu) / nu;
  const Complex w = disk::to_upper(z0);
  return {std::log(std::abs(w)), std::asinh(w.real() / w.imag())};
}

}  // namespace hyperflow
