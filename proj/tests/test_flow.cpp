#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "hyperflow/flow.hpp"
#include "hyperflow/shapes.hpp"

using namespace hyperflow;

namespace {

// Reference decimals below come from 30-digit evaluations of the closed forms.

// Hyperbolic distances from a fixed center to every vertex.
std::vector<double> radii(const DiscreteCurve& c, Complex center = 0.0) {
  std::vector<double> r;
  for (Complex v : c.vertices()) r.push_back(disk::dist(v, center));
  return r;
}

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double spread(const std::vector<double>& v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *hi - *lo;
}

}  // namespace

TEST(Speed, NormalizationHomogeneityMonotonicity) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.05, 4.0);
  for (int n = 1; n <= 4; ++n) {
    for (const SpeedFunction& f :
         {SpeedFunction::inverse_mean(n), SpeedFunction::inverse_power_mean(n, 0.5), SpeedFunction::inverse_power_mean(n, 0.0),
          SpeedFunction::inverse_power_mean(n, -1.0)}) {
      const std::vector<double> ones(n, 1.0);
      EXPECT_EQ(f(ones), static_cast<double>(n)) << f.name();
      for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> k(n), k2(n);
        for (double& x : k) x = u(rng);
        const double lambda = u(rng);
        for (int i = 0; i < n; ++i) k2[i] = lambda * k[i];
        EXPECT_NEAR(f(k2), lambda * f(k), 1e-12 * lambda * f(k)) << f.name();
        std::vector<double> bigger = k;
        bigger[trial % n] += u(rng);
        EXPECT_GE(f(bigger), f(k)) << f.name();
      }
    }
  }
}

TEST(Speed, UmbilicValuesAgreeAcrossKinds) {
  for (int n = 1; n <= 7; ++n) {
    const std::vector<double> k(n, 1.7);
    const double expect = n * 1.7;
    EXPECT_NEAR(SpeedFunction::inverse_mean(n)(k), expect, 1e-12);
    EXPECT_NEAR(SpeedFunction::inverse_power_mean(n, 0.0)(k), expect, 1e-12);
    EXPECT_NEAR(SpeedFunction::inverse_power_mean(n, -2.0)(k), expect, 1e-12);
    EXPECT_EQ(SpeedFunction::inverse_mean(n).umbilic(1.7), expect);
  }
}

TEST(Speed, Errors) {
  EXPECT_THROW(SpeedFunction::inverse_power_mean(2, 1.5), PreconditionError);
  EXPECT_THROW(SpeedFunction::inverse_mean(0), PreconditionError);
  const std::vector<double> bad{1.0, -0.1};
  EXPECT_THROW(SpeedFunction::inverse_mean(2)(bad), PreconditionError);
}

TEST(ClosedForm, Examples) {
  EXPECT_EQ(sphere_radius(0.7, 3, 0.0), 0.7);
  EXPECT_NEAR(sphere_radius(1.0, 1, 1.0), 1.8782301658116513, 1e-12);
  EXPECT_NEAR(equidistant_distance(0.4, 2, 0.0), 0.4, 1e-12);
  EXPECT_NEAR(equidistant_distance(0.0, 1, 1.0), 1.657454, 1e-6);
  EXPECT_GT(equidistant_distance(0.0, 1, 1e-6), 0.0);
  EXPECT_EQ(horosphere_height(1.3, 1, 0.0), 1.3);
  EXPECT_NEAR(horosphere_height(1.0, 2, 2.0), 0.367879, 1e-6);
  EXPECT_EQ(predicted_starshaped_time(0.8, 0.8, 2), 0.0);
  EXPECT_NEAR(predicted_starshaped_time(0.5, 1.0, 1), 0.8132616875182228, 1e-12);
  EXPECT_EQ(predicted_graphical_time_nc(1.5, 1.5, 3), 0.0);
  EXPECT_NEAR(predicted_graphical_time_nc(2.0, 1.0, 2), 1.386294, 1e-6);
  EXPECT_THROW(sphere_radius(0.0, 1, 1.0), PreconditionError);
  EXPECT_THROW(predicted_starshaped_time(1.0, 0.5, 1), PreconditionError);
}

TEST(ClosedForm, SphereRadiusIncreasing) {
  double prev = 0.0;
  for (double t = 0.0; t < 5.0; t += 0.25) {
    const double r = sphere_radius(0.3, 2, t);
    EXPECT_GT(r, prev);
    prev = r;
  }
}

TEST(Envelope, Examples) {
  const auto [lo0, hi0] = barrier_envelope(2.0, 1.0, 1, 0.0);
  EXPECT_DOUBLE_EQ(lo0, 1.0);
  EXPECT_DOUBLE_EQ(hi0, 2.0);
  EXPECT_NEAR(barrier_envelope(2.0, 1.0, 1, 1.0).second, 0.735759, 1e-6);
  EXPECT_NEAR(barrier_envelope(2.0, 1.0, 1, 1.0).first, 0.1906236041473306, 1e-12);
  const BarrierEnvelope env(1.4, 0.7, 2);
  for (double t = 0.0; t <= 20.0; t += 0.1) {
    EXPECT_LT(env.lower(t), env.upper(t));
    EXPECT_GE(env.lower(t), 0.5 * 0.7 * std::exp(-t / 2) - 1e-15);
  }
  EXPECT_LT(env.upper(60.0), 1e-12);
  EXPECT_LT(env.lower(60.0), 1e-12);
  EXPECT_THROW(BarrierEnvelope(1.0, 2.0, 1), PreconditionError);
}

TEST(Envelope, LowerIsLimitOfEquidistants) {
  const double s_minus = 1.0;
  for (double t : {0.3, 1.0, 2.5}) {
    const double d = equidistant_distance(1e-6, 1, t);
    EXPECT_NEAR(s_minus * std::exp(-d), BarrierEnvelope(2.0, s_minus, 1).lower(t), 1e-6);
  }
}

TEST(StepCompact, OneStepOnUnitCircle) {
  const DiscreteCurve c = shapes::circle(1.0, 512);
  const DiscreteCurve next = step_compact(c, 1e-3);
  const auto r = radii(next);
  EXPECT_NEAR(mean(r), sphere_radius(1.0, 1, 1e-3), 1e-7);
  EXPECT_LT(spread(r), 1e-12);
}

TEST(StepCompact, NonPositiveCurvatureIsAnError) {
  const DiscreteCurve c = shapes::flower(256, 0.5, 3);
  ASSERT_LE(curvature(c).min(), 0.0);
  EXPECT_THROW(step_compact(c, 1e-4), FlowNotDefined);
  try {
    run_compact(c, 0.1);
    FAIL() << "expected FlowNotDefined";
  } catch (const FlowNotDefined& e) {
    EXPECT_LE(curvature(c).kappa[e.vertex()], 0.0);
  }
}

TEST(StepCompact, PreservesDihedralSymmetry) {
  const std::size_t n = 512;
  DiscreteCurve c = shapes::flower(n, 0.08, 4);
  ASSERT_GT(curvature(c).min(), 0.0);
  const double dt = cfl_step(c, {}, 0.2);
  for (int k = 0; k < 50; ++k) c = step_compact(c, dt);
  ASSERT_EQ(c.size(), n);
  const Complex rot(0.0, 1.0);
  double worst = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    worst = std::max(worst, std::abs(rot * c[j] - c[(j + n / 4) % n]));
    worst = std::max(worst, std::abs(std::conj(c[j]) - c[(n - j) % n]));
  }
  EXPECT_LT(worst, 1e-10);
}

TEST(RunCompact, CircleMatchesClosedForm) {
  RunOptions o;
  o.record_times = {0.25, 0.5};
  const CurveTrajectory tr = run_compact(shapes::circle(0.5, 128), 0.5, o);
  ASSERT_TRUE(tr.complete());
  ASSERT_EQ(tr.size(), 3u);
  for (std::size_t i = 0; i < tr.size(); ++i) {
    const double exact = sphere_radius(0.5, 1, tr.time(i));
    EXPECT_NEAR(mean(radii(tr.states[i])) / exact, 1.0, 1e-6);
  }
  EXPECT_DOUBLE_EQ(tr.time(1), 0.25);
  EXPECT_DOUBLE_EQ(tr.time(2), 0.5);
}

TEST(RunCompact, TimesStrictlyIncreasingAndStatesValid) {
  RunOptions o;
  o.record_count = 6;
  const CurveTrajectory tr = run_compact(shapes::clipped_flower(256), 0.6, o);
  ASSERT_TRUE(tr.complete());
  ASSERT_EQ(tr.size(), 7u);
  for (std::size_t i = 1; i < tr.size(); ++i) {
    EXPECT_GT(tr.time(i), tr.time(i - 1));
    EXPECT_TRUE(tr.states[i].satisfies_edge_ratio());
    EXPECT_GT(tr.diagnostics[i].kappa_min, 0.0);
  }
}

TEST(RunCompact, AreaStrictlyIncreasing) {
  RunOptions o;
  o.record_count = 8;
  const CurveTrajectory tr = run_compact(shapes::clipped_flower(256), 0.8, o);
  ASSERT_TRUE(tr.complete());
  for (std::size_t i = 1; i < tr.size(); ++i) EXPECT_GT(tr.diagnostics[i].area, tr.diagnostics[i - 1].area);
}

TEST(RunCompact, OffCenterCircleStaysCircle) {
  const Complex center = disk::exp(0.0, 1.0, 0.5);
  RunOptions o;
  o.record_count = 4;
  const CurveTrajectory tr = run_compact(shapes::circle(1.0, 256, 0.5), 1.0, o);
  ASSERT_TRUE(tr.complete());
  for (std::size_t i = 0; i < tr.size(); ++i) {
    const auto r = radii(tr.states[i], center);
    const double fit = mean(r);
    double dev = 0.0;
    for (double x : r) dev = std::max(dev, std::abs(x - fit));
    EXPECT_LT(dev, 2.0 * tr.diagnostics[i].edge_max);
    EXPECT_NEAR(fit, sphere_radius(1.0, 1, tr.time(i)), 1e-4);
  }
}

TEST(RunCompact, AvoidanceOfNestedCircles) {
  RunOptions o;
  o.record_count = 5;
  const CurveTrajectory inner = run_compact(shapes::circle(0.3, 128), 1.0, o);
  const CurveTrajectory outer = run_compact(shapes::circle(0.8, 128), 1.0, o);
  ASSERT_EQ(inner.size(), outer.size());
  double prev_gap = 0.0;
  for (std::size_t i = 0; i < inner.size(); ++i) {
    const auto ri = radii(inner.states[i]);
    const auto ro = radii(outer.states[i]);
    const double gap = *std::min_element(ro.begin(), ro.end()) - *std::max_element(ri.begin(), ri.end());
    EXPECT_GT(gap, 0.0);
    EXPECT_GE(gap, prev_gap);
    EXPECT_NEAR(gap, sphere_radius(0.8, 1, inner.time(i)) - sphere_radius(0.3, 1, inner.time(i)), 1e-4);
    prev_gap = gap;
  }
}

TEST(RunCompact, SpeedKindDoesNotMatterForCurves) {
  RunOptions a;
  a.record_count = 2;
  RunOptions b = a;
  b.speed = SpeedFunction::inverse_power_mean(1, 0.0);
  const CurveTrajectory ta = run_compact(shapes::circle(0.5, 128), 0.3, a);
  const CurveTrajectory tb = run_compact(shapes::circle(0.5, 128), 0.3, b);
  ASSERT_EQ(ta.size(), tb.size());
  for (std::size_t j = 0; j < ta.states.back().size(); ++j)
    EXPECT_NEAR(std::abs(ta.states.back()[j] - tb.states.back()[j]), 0.0, 1e-10);
}

TEST(RunCompact, SecondOrderInVertexCount) {
  std::vector<double> err;
  for (std::size_t n : {32, 64, 128}) {
    RunOptions o;
    o.record_count = 1;
    o.stepper = Stepper::Euler;
    const CurveTrajectory tr = run_compact(shapes::circle(0.5, n), 0.5, o);
    err.push_back(std::abs(mean(radii(tr.states.back())) - sphere_radius(0.5, 1, 0.5)));
  }
  for (std::size_t i = 1; i < err.size(); ++i) EXPECT_GT(std::log2(err[i - 1] / err[i]), 1.8);
}

TEST(RunCompact, RequiresPlanarSpeed) {
  RunOptions o;
  o.speed = SpeedFunction::inverse_mean(2);
  EXPECT_THROW(run_compact(shapes::circle(0.5, 64), 0.1, o), PreconditionError);
}

TEST(RunNoncompact, FlatGraphIsHorosphereSolution) {
  RunOptions o;
  o.record_count = 4;
  const GraphTrajectory tr = run_noncompact(shapes::flat_horograph(1.0, 64), 1.0, o);
  ASSERT_TRUE(tr.complete());
  for (std::size_t i = 0; i < tr.size(); ++i) {
    const double h = horosphere_height(1.0, 1, tr.time(i));
    EXPECT_NEAR(tr.diagnostics[i].f_min, h, 1e-6);
    EXPECT_NEAR(tr.diagnostics[i].f_max, h, 1e-6);
  }
}

TEST(RunNoncompact, SineStaysInsideEnvelopeAndFlattens) {
  const HoroGraph g = shapes::sine_horograph(0.1, 128);
  const BarrierEnvelope env(g.max(), g.min(), 1);
  RunOptions o;
  o.record_count = 6;
  const GraphTrajectory tr = run_noncompact(g, 1.5, o);
  ASSERT_TRUE(tr.complete());
  for (std::size_t i = 0; i < tr.size(); ++i) {
    const double t = tr.time(i);
    EXPECT_LE(tr.diagnostics[i].f_max, env.upper(t) + 1e-9);
    EXPECT_GE(tr.diagnostics[i].f_min, env.lower(t) - 1e-9);
    if (i > 0) EXPECT_LT(tr.diagnostics[i].umbilic_deviation, tr.diagnostics[i - 1].umbilic_deviation);
  }
}

TEST(RunNoncompact, PeriodPreserved) {
  const HoroGraph g = shapes::sine_horograph(0.1, 64, 3.0);
  const HoroGraph next = step_noncompact(g, cfl_step(g, {}, 0.2));
  EXPECT_EQ(next.period(), 3.0);
  EXPECT_EQ(next.size(), g.size());
}
