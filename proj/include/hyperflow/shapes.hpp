#pragma once

// Builders for the curves and graphs used as flow scenarios and test fixtures.

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include "hyperflow/curve.hpp"
#include "hyperflow/geometry.hpp"
#include "hyperflow/horograph.hpp"

namespace hyperflow::shapes {

/// Geodesic circle of hyperbolic radius `radius` whose center sits at distance
/// `offset` from the origin in direction `dir` (unit complex number).
inline DiscreteCurve circle(double radius, std::size_t n, double offset = 0.0, Complex dir = 1.0) {
  if (!(radius > 0.0)) throw PreconditionError("circle: radius must be > 0");
  const double rho = std::tanh(0.5 * radius);
  const Complex c = std::tanh(0.5 * offset) * dir / std::abs(dir);
  std::vector<Complex> v(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double t = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n);
    v[j] = disk::from_origin(std::polar(rho, t), c);
  }
  return DiscreteCurve::make(std::move(v));
}

/// Radial graph theta -> exp_0(r(theta) e^{i theta}) sampled at n uniform angles.
inline DiscreteCurve radial(const std::function<double(double)>& r, std::size_t n) {
  std::vector<Complex> v(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double t = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n);
    const double rj = r(t);
    if (!(rj > 0.0)) throw PreconditionError("radial: r(theta) must be > 0");
    v[j] = std::polar(std::tanh(0.5 * rj), t);
  }
  return DiscreteCurve::make(std::move(v));
}

/// r(theta) = base (1 + amplitude cos(lobes theta)) in hyperbolic polar coordinates.
inline DiscreteCurve flower(std::size_t n, double amplitude, int lobes = 3, double base = 1.0) {
  return radial([=](double t) { return base * (1.0 + amplitude * std::cos(lobes * t)); }, n);
}

/// Largest amplitude a <= requested whose flower keeps curvature >= min_kappa,
/// measured on a 2048-vertex discretization.
inline double clipped_flower_amplitude(double requested, double min_kappa, int lobes = 3, double base = 1.0) {
  auto ok = [&](double a) { return curvature(flower(2048, a, lobes, base)).min() >= min_kappa; };
  if (ok(requested)) return requested;
  double lo = 0.0, hi = requested;
  for (int it = 0; it < 50; ++it) {
    const double mid = 0.5 * (lo + hi);
    (ok(mid) ? lo : hi) = mid;
  }
  return lo;
}

/// The flower fixture r = 1 + A cos(3 theta) with A = 0.25 reduced until min curvature >= 0.25.
inline DiscreteCurve clipped_flower(std::size_t n, double amplitude = 0.25, double min_kappa = 0.25) {
  return flower(n, clipped_flower_amplitude(amplitude, min_kappa), 3);
}

/// Two-lobed curve with a narrow waist; the origin sits in the right lobe so the
/// curve is simple but not star-shaped about it.
inline DiscreteCurve peanut(std::size_t n) {
  std::vector<Complex> v(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double t = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n);
    const double c = std::cos(t);
    v[j] = Complex(0.5 * c - 0.3, 0.35 * std::sin(t) * (0.1 + 0.9 * c * c));
  }
  return DiscreteCurve::make(std::move(v));
}

/// Smooth random radial curve (few low Fourier modes) moved off the origin by a
/// random isometry that keeps the origin inside.
inline DiscreteCurve random_smooth(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const double base = 0.6 + 0.8 * u01(rng);
  double amp[3], phase[3];
  for (int k = 0; k < 3; ++k) {
    amp[k] = 0.12 * u01(rng) / (k + 1);
    phase[k] = 2.0 * std::numbers::pi * u01(rng);
  }
  const Complex shift = std::polar(0.3 * std::tanh(0.5 * base) * u01(rng), 2.0 * std::numbers::pi * u01(rng));
  std::vector<Complex> v(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double t = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n);
    double r = 1.0;
    for (int k = 0; k < 3; ++k) r += amp[k] * std::cos((k + 2) * t + phase[k]);
    v[j] = disk::from_origin(std::polar(std::tanh(0.5 * base * r), t), shift);
  }
  return DiscreteCurve::make(std::move(v));
}

/// Horizontal horosphere y = height over one period.
inline HoroGraph flat_horograph(double height, std::size_t m, double period = 2.0 * std::numbers::pi) {
  return HoroGraph::make(period, std::vector<double>(m, height));
}

/// y = mean + amplitude sin(2 pi x / period).
inline HoroGraph sine_horograph(double amplitude, std::size_t m, double period = 2.0 * std::numbers::pi,
                                double mean = 1.0) {
  std::vector<double> f(m);
  for (std::size_t j = 0; j < m; ++j)
    f[j] = mean + amplitude * std::sin(2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(m));
  return HoroGraph::make(period, std::move(f));
}

}  // namespace hyperflow::shapes
