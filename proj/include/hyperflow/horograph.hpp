#pragma once

// Periodic graphs y = f(x) in the upper half-plane: perturbations of the
// horosphere {y = const}, whose only point at infinity is infinity itself.
// Omega is the region above the graph; curvature is taken w.r.t. the upward normal.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "hyperflow/curve.hpp"
#include "hyperflow/error.hpp"
#include "hyperflow/geometry.hpp"

namespace hyperflow {

inline constexpr std::size_t kMinGraphResolution = 8;

/// Monotone piecewise-cubic (Fritsch-Carlson) interpolant of periodic data.
class PeriodicPchip {
 public:
  /// Knots must be strictly increasing with x.back() < x.front() + period.
  PeriodicPchip(std::vector<double> x, std::vector<double> y, double period)
      : x_(std::move(x)), y_(std::move(y)), period_(period) {
    const std::size_t m = x_.size();
    if (m < 3 || y_.size() != m) throw PreconditionError("PeriodicPchip: need >= 3 matching knots");
    x_.push_back(x_.front() + period_);
    y_.push_back(y_.front());
    for (std::size_t i = 0; i < m; ++i)
      if (!(x_[i + 1] > x_[i])) throw SurgeryNeeded("PeriodicPchip: knots are not strictly increasing (graph folded)");
    std::vector<double> h(m), delta(m);
    for (std::size_t i = 0; i < m; ++i) {
      h[i] = x_[i + 1] - x_[i];
      delta[i] = (y_[i + 1] - y_[i]) / h[i];
    }
    d_.assign(m + 1, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t p = (i + m - 1) % m;
      const double dm = delta[p];
      const double dp = delta[i];
      if (dm * dp <= 0.0) continue;
      const double w1 = 2.0 * h[i] + h[p];
      const double w2 = h[i] + 2.0 * h[p];
      d_[i] = (w1 + w2) / (w1 / dm + w2 / dp);
    }
    d_[m] = d_[0];
  }

  double operator()(double x) const {
    const double x0 = x_.front();
    double t = std::fmod(x - x0, period_);
    if (t < 0.0) t += period_;
    const double xr = x0 + t;
    auto it = std::upper_bound(x_.begin(), x_.end(), xr);
    std::size_t i = static_cast<std::size_t>(std::distance(x_.begin(), it));
    i = std::clamp<std::size_t>(i, 1, x_.size() - 1) - 1;
    const double h = x_[i + 1] - x_[i];
    const double s = (xr - x_[i]) / h;
    const double s2 = s * s;
    const double s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * y_[i] + (s3 - 2 * s2 + s) * h * d_[i] + (-2 * s3 + 3 * s2) * y_[i + 1] +
           (s3 - s2) * h * d_[i + 1];
  }

 private:
  std::vector<double> x_, y_, d_;
  double period_;
};

/// Samples f_j = f(j L / M), j = 0..M-1, of an L-periodic positive function.
class HoroGraph {
 public:
  static HoroGraph make(double period, std::vector<double> samples) {
    if (!(period > 0.0) || !std::isfinite(period)) throw PreconditionError("HoroGraph: period must be > 0");
    if (samples.size() < kMinGraphResolution) throw PreconditionError("HoroGraph: need at least 8 samples");
    for (double f : samples) {
      if (!std::isfinite(f)) throw DomainError("HoroGraph: non-finite sample");
      if (f < kGuardBand) throw DomainError("HoroGraph: sample inside the half-plane guard band");
    }
    HoroGraph g;
    g.period_ = period;
    g.f_ = std::move(samples);
    return g;
  }

  double period() const { return period_; }
  std::size_t size() const { return f_.size(); }
  double spacing() const { return period_ / static_cast<double>(f_.size()); }
  double x(std::size_t j) const { return spacing() * static_cast<double>(j); }
  const std::vector<double>& samples() const { return f_; }
  double operator[](std::size_t j) const { return f_[j]; }

  double min() const { return *std::min_element(f_.begin(), f_.end()); }
  double max() const { return *std::max_element(f_.begin(), f_.end()); }

  /// Centered periodic differences.
  double derivative(std::size_t j) const {
    const std::size_t m = size();
    return (f_[(j + 1) % m] - f_[(j + m - 1) % m]) / (2.0 * spacing());
  }
  double second_derivative(std::size_t j) const {
    const std::size_t m = size();
    const double h = spacing();
    return (f_[(j + 1) % m] - 2.0 * f_[j] + f_[(j + m - 1) % m]) / (h * h);
  }

  /// Monotone cubic interpolation of the periodic extension.
  double value_at(double x) const {
    std::vector<double> xs(size());
    for (std::size_t j = 0; j < size(); ++j) xs[j] = this->x(j);
    return PeriodicPchip(std::move(xs), f_, period_)(x);
  }

 private:
  HoroGraph() = default;

  double period_ = 1.0;
  std::vector<double> f_;
};

/// Hyperbolic curvature of y = f(x) w.r.t. the upward normal:
/// y times the Euclidean curvature plus the vertical normal component.
inline double graph_curvature(double f, double fp, double fpp) {
  const double w = std::sqrt(1.0 + fp * fp);
  return f * fpp / (w * w * w) + 1.0 / w;
}

inline CurvatureField curvature_horograph(const HoroGraph& g) {
  CurvatureField out;
  out.kappa.resize(g.size());
  for (std::size_t j = 0; j < g.size(); ++j)
    out.kappa[j] = graph_curvature(g[j], g.derivative(j), g.second_derivative(j));
  return out;
}

/// Curvature at the interior samples of a uniformly spaced open window of a graph.
inline std::vector<double> curvature_graph_window(std::span<const double> f, double h) {
  if (!(h > 0.0)) throw PreconditionError("curvature_graph_window: spacing must be > 0");
  std::vector<double> out;
  for (std::size_t j = 1; j + 1 < f.size(); ++j) {
    if (f[j] < kGuardBand) throw DomainError("curvature_graph_window: sample inside the guard band");
    const double fp = (f[j + 1] - f[j - 1]) / (2.0 * h);
    const double fpp = (f[j + 1] - 2.0 * f[j] + f[j - 1]) / (h * h);
    out.push_back(graph_curvature(f[j], fp, fpp));
  }
  return out;
}

}  // namespace hyperflow
