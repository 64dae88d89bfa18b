// Acceptance run: one PASS/FAIL line per criterion, exit status 0 iff all pass.
// Usage: acceptance [--skip-refinement]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "hyperflow/flow.hpp"
#include "hyperflow/geometry.hpp"
#include "hyperflow/isometry.hpp"
#include "hyperflow/reflection.hpp"
#include "hyperflow/shapes.hpp"
#include "hyperflow/verify.hpp"

using namespace hyperflow;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool ok = true;
  std::string detail;
};

int failures = 0;

void report(int id, const char* title, const Outcome& o, double secs, double limit) {
  const bool ok = o.ok && (limit <= 0.0 || secs <= limit);
  if (!ok) ++failures;
  std::printf("criterion %2d  %s  %-36s %s", id, ok ? "PASS" : "FAIL", title, o.detail.c_str());
  if (limit > 0.0)
    std::printf("  [%.1f s, limit %.0f s]\n", secs, limit);
  else
    std::printf("  [%.1f s]\n", secs);
  std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

/// One named sub-check of a suite criterion.
struct Check {
  std::string name;
  Status status;
  double margin;
};

std::string summarize(const std::vector<Check>& checks) {
  std::string s;
  for (const auto& c : checks) {
    if (!s.empty()) s += ", ";
    s += c.name + " " + to_string(c.status) + fmt(" (margin %.3g)", c.margin);
  }
  return s;
}

Outcome all_pass(const std::vector<Check>& checks) {
  Outcome o;
  for (const auto& c : checks) o.ok = o.ok && c.status == Status::Pass;
  o.detail = summarize(checks);
  return o;
}

Check to_check(const std::string& name, const VerificationReport& r) { return {name, r.status, r.margin}; }

// ---------------------------------------------------------------------------
// 1: closed-form sphere flow

Outcome criterion_sphere_flow() {
  RunOptions o;
  o.c_cfl = 0.2;
  o.record_times = {0.5, 1.0, 2.0};
  const CurveTrajectory tr = run_compact(shapes::circle(0.5, 512), 2.0, o);
  Outcome out;
  if (tr.halt) return {false, "flow halted: " + tr.halt->message};
  double worst = 0.0;
  for (std::size_t i = 1; i < tr.size(); ++i) {
    double mean = 0.0;
    for (Complex z : tr.states[i].vertices()) mean += disk::radius_of(z);
    mean /= static_cast<double>(tr.states[i].size());
    const double exact = sphere_radius(0.5, 1, tr.time(i));
    worst = std::max(worst, std::abs(mean - exact) / exact);
  }
  out.ok = tr.size() == 4 && worst <= 1e-3;
  out.detail = fmt("max relative radius error %.3g at t in {0.5, 1, 2} (tol 1e-3)", worst);
  return out;
}

// ---------------------------------------------------------------------------
// 2: isometry suite

std::vector<double> random_unit(std::mt19937_64& rng, std::size_t dim) {
  std::normal_distribution<double> g;
  std::vector<double> v(dim);
  double n2 = 0.0;
  for (double& c : v) n2 += (c = g(rng)) * c;
  for (double& c : v) c /= std::sqrt(n2);
  return v;
}

double max_diff(const HPoint& a, const HPoint& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

Outcome criterion_isometry() {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> us(-2.0, 2.0), ur(0.0, 3.0), ux(-2.0, 2.0), uy(0.05, 3.0), up(0.1, 3.0),
      ua(0.05, 3.09);
  double involution = 0.0, isometry = 0.0, fixed = 0.0;
  std::size_t side_errors = 0;
  auto half_point = [&](std::size_t dim) {
    std::vector<double> c(dim);
    for (std::size_t i = 0; i + 1 < dim; ++i) c[i] = ux(rng);
    c.back() = uy(rng);
    return HPoint::half_space(std::move(c));
  };
  auto track = [&](const auto& plane, const HPoint& p, const HPoint& q, const HPoint& on) {
    involution = std::max(involution, max_diff(plane.reflect(plane.reflect(p)), p));
    const double d = dist(p, q);
    isometry = std::max(isometry, std::abs(dist(plane.reflect(p), plane.reflect(q)) - d) / std::max(1.0, d));
    const Side sp = plane.side(p);
    if (sp != Side::On && plane.side(plane.reflect(p)) == sp) ++side_errors;
    if (plane.side(on) != Side::On) ++side_errors;
    fixed = std::max(fixed, max_diff(plane.reflect(on), on));
  };
  for (int i = 0; i < 1000; ++i) {
    const std::size_t dim = 2 + i % 2;
    const auto nu = random_unit(rng, dim);
    const double s = i % 10 == 0 ? 0.0 : us(rng);
    CompactFoliationPlane plane(nu, s);
    const HPoint p = exp_polar(random_unit(rng, dim), ur(rng));
    const HPoint q = exp_polar(random_unit(rng, dim), ur(rng));
    // A point of the leaf: Fermi coordinates with zero normal component (planar slice).
    const Complex nz(nu[0], nu[1]);
    const double nn = std::abs(nz);
    const HPoint on = dim == 2 ? HPoint::disk(fermi_to_disk(nz / nn, s, {ux(rng), 0.0})) : [&] {
      // In 3D take the leaf point on the geodesic through the origin along nu.
      std::vector<double> c(3);
      const double rho = std::tanh(0.5 * s);
      for (std::size_t k = 0; k < 3; ++k) c[k] = rho * nu[k];
      return HPoint::ball(c);
    }();
    track(plane, p, q, on);
  }
  for (int i = 0; i < 1000; ++i) {
    const std::size_t dim = 2 + i % 2;
    std::vector<double> foot(dim - 1);
    for (double& c : foot) c = ux(rng);
    const double s = up(rng);
    NoncompactFoliationPlane plane(foot, s);
    std::vector<double> onc(dim);
    const double ang = ua(rng);
    for (std::size_t k = 0; k + 1 < dim; ++k) onc[k] = foot[k] + (k == 0 ? s * std::cos(ang) : 0.0);
    onc.back() = s * std::sin(ang);
    track(plane, half_point(dim), half_point(dim), HPoint::half_space(onc));
  }
  Outcome o;
  o.ok = involution <= 1e-10 && isometry <= 1e-10 && fixed <= 1e-10 && side_errors == 0;
  o.detail = "2x1000 samples: involution " + fmt("%.2g", involution) + ", isometry " + fmt("%.2g", isometry) +
             ", fixed set " + fmt("%.2g", fixed) + ", side errors " + std::to_string(side_errors);
  return o;
}

// ---------------------------------------------------------------------------
// 3: admissibility closed form

Outcome criterion_admissibility_closed_form() {
  const OverallOptimal o = overall_optimal(shapes::circle(1.0, 512, 0.5), 256);
  double worst = 0.0;
  for (const auto& d : o.per_direction)
    worst = std::max(worst, std::abs(d.value.s0 - std::atanh(std::tanh(0.5) * d.direction.real())));
  Outcome out;
  out.ok = worst <= 1e-4 && std::abs(o.s_bar - 0.5) <= 1e-4;
  out.detail = fmt("max |s0 - closed form| %.3g", worst) + fmt(", s_bar %.7f", o.s_bar);
  return out;
}

// ---------------------------------------------------------------------------
// 4-10 at a given resolution

struct SuiteResults {
  std::vector<Check> c4, c5, c6, c7, c8, c9, c10;
  std::string note6;
  double t4 = 0, t5 = 0, t6 = 0, t7 = 0, t8 = 0, t9 = 0, t10 = 0;
};

SuiteResults run_suites(std::size_t N, double c_cfl, std::size_t raster) {
  SuiteResults s;
  RunOptions base;
  base.c_cfl = c_cfl;
  base.record_count = 12;

  auto t0 = Clock::now();
  const CurveTrajectory off = run_compact(shapes::circle(1.0, N, 0.5), 3.0, base);
  const double t_off = seconds_since(t0);

  t0 = Clock::now();
  const DiscreteCurve flower0 = shapes::clipped_flower(N);
  RunOptions of = base;
  of.record_times = starshaped_record_times(flower0, 3.0, 12);
  const CurveTrajectory flower = run_compact(flower0, 3.0, of);
  const double t_flower = seconds_since(t0);

  t0 = Clock::now();
  s.c4 = {to_check("off-center circle", suite_admissibility_preserved(off)),
          to_check("flower", suite_admissibility_preserved(flower))};
  s.t4 = t_off + t_flower + seconds_since(t0);

  t0 = Clock::now();
  AdmissibilityOptions ao;
  ao.compute_margin = false;
  const double flower_s_bar = overall_optimal(flower0, 256, ao).s_bar;
  const VerificationReport star = suite_starshaped_time(flower);
  GradientOptions go;
  go.from_time = star.metric("T");
  s.c5 = {to_check("off-center circle profile", suite_gradient_profile(circle_polar_profile(1.0, 0.5, N), 0.5)),
          to_check("flowed flower", suite_gradient_estimate(flower, flower_s_bar, go))};
  s.t5 = t_flower + seconds_since(t0);

  s.c6 = {to_check("flower", star)};
  s.note6 = fmt("T %.4f", star.metric("T")) + fmt(", measured %.4f", star.metric("measured_time")) +
            fmt(", barrier inclusion %.4f", star.metric("barrier_inclusion_time"));
  s.t6 = t_flower;

  t0 = Clock::now();
  LemmaOptions lo;
  lo.curves = 20;
  lo.trials_per_curve = 10;
  lo.resolution = raster;
  const VerificationReport lemma = suite_lemma_equivalence(lo);
  s.c7 = {to_check(fmt("agreement %.4f", lemma.metric("agreement")), lemma)};
  s.t7 = seconds_since(t0);

  t0 = Clock::now();
  const CurveTrajectory circle = run_compact(shapes::circle(1.0, N), 3.0, base);
  const VerificationReport u_circle = suite_umbilic_convergence(circle);
  const VerificationReport u_flower = suite_umbilic_convergence(flower);
  s.t10 = t_flower + seconds_since(t0);
  std::vector<Check> umbilic{to_check("circle", u_circle), to_check("flower", u_flower)};

  for (double amp : {0.1, 0.3}) {
    const std::string tag = fmt("amp %.1f", amp);
    t0 = Clock::now();
    const HoroGraph g = shapes::sine_horograph(amp, N);
    const GraphTrajectory gt = run_noncompact(g, 3.0, base);
    const double t_run = seconds_since(t0);

    t0 = Clock::now();
    const VerificationReport trap = suite_barrier_trapping(gt, g.min(), g.max());
    Check c8 = to_check(tag, trap);
    // Positive margin is required strictly after t = 0 (the envelopes touch the data at t = 0).
    c8.margin = trap.metric("envelope_margin");
    if (!(c8.margin > 0.0)) c8.status = Status::Fail;
    s.c8.push_back(c8);
    s.t8 += t_run + seconds_since(t0);

    t0 = Clock::now();
    s.c9.push_back(to_check(tag, suite_graphical_nc(gt, overall_optimal_nc(g, 128).s_bar)));
    s.t9 += t_run + seconds_since(t0);

    umbilic.push_back(to_check("horograph " + tag, suite_umbilic_convergence(gt)));
    s.t10 += t_run;
  }
  s.c10 = umbilic;
  return s;
}

// ---------------------------------------------------------------------------
// 11: Saccheri summit

Outcome criterion_saccheri() {
  // Quadrilateral in the upper half-plane: base on the imaginary axis from i to i e^b,
  // legs along the circles |z| = const, which meet the axis orthogonally.
  auto oracle = [](double b, double l) {
    auto leg_end = [l](double h) { return Complex(h * std::tanh(l), h / std::cosh(l)); };
    return upper::dist(leg_end(1.0), leg_end(std::exp(b)));
  };
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    double b = 0.0, l = 0.0;
    while (b == 0.0) b = u(rng);
    while (l == 0.0) l = u(rng);
    const double a = saccheri_summit(b, l);
    worst = std::max(worst, std::abs(a - oracle(b, l)) / std::max(1.0, a));
  }
  return {worst <= 1e-10, fmt("max relative deviation %.3g over 100 (b, l)", worst)};
}

}  // namespace

int main(int argc, char** argv) {
  bool refine = true;
  for (int i = 1; i < argc; ++i)
    if (std::strcmp(argv[i], "--skip-refinement") == 0) refine = false;

  auto timed = [](int id, const char* title, double limit, const std::function<Outcome()>& f) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = f();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    report(id, title, o, seconds_since(t0), limit);
  };

  timed(1, "closed-form sphere flow", 10.0, criterion_sphere_flow);
  timed(2, "isometry suite", 1.0, criterion_isometry);
  timed(3, "admissibility closed form", 30.0, criterion_admissibility_closed_form);

  const std::size_t N = 512;
  const double c_cfl = 0.2;
  const std::size_t raster = 512;
  SuiteResults base;
  try {
    base = run_suites(N, c_cfl, raster);
  } catch (const std::exception& e) {
    std::printf("suite run failed: %s\n", e.what());
    return 1;
  }
  report(4, "admissibility preserved", all_pass(base.c4), base.t4, 300.0);
  report(5, "gradient estimate", all_pass(base.c5), base.t5, 120.0);
  {
    Outcome o = all_pass(base.c6);
    o.detail += "; " + base.note6;
    report(6, "star-shaped time", o, base.t6, 300.0);
  }
  report(7, "lemma equivalence (200 trials)", all_pass(base.c7), base.t7, 300.0);
  report(8, "barrier trapping", all_pass(base.c8), base.t8, 120.0);
  report(9, "graphicality below H(s_bar)", all_pass(base.c9), base.t9, 120.0);
  report(10, "umbilic convergence", all_pass(base.c10), base.t10, 600.0);

  timed(11, "Saccheri summit", 1.0, criterion_saccheri);

  if (!refine) {
    std::printf("criterion 12  SKIP  refinement stability (--skip-refinement)\n");
    return failures == 0 ? 0 : 1;
  }
  const auto t0 = Clock::now();
  Outcome o12;
  try {
    const SuiteResults fine = run_suites(2 * N, 0.5 * c_cfl, 2 * raster);
    const std::vector<std::pair<const std::vector<Check>*, const std::vector<Check>*>> pairs{
        {&base.c4, &fine.c4}, {&base.c5, &fine.c5}, {&base.c6, &fine.c6}, {&base.c7, &fine.c7},
        {&base.c8, &fine.c8}, {&base.c9, &fine.c9}, {&base.c10, &fine.c10}};
    std::size_t compared = 0, flips = 0;
    for (std::size_t k = 0; k < pairs.size(); ++k)
      for (std::size_t j = 0; j < pairs[k].first->size(); ++j) {
        const Check& a = (*pairs[k].first)[j];
        const Check& b = (*pairs[k].second)[j];
        ++compared;
        if (a.status == Status::Pass && b.status == Status::Fail) {
          ++flips;
          o12.detail += "criterion " + std::to_string(k + 4) + " " + a.name + " flipped; ";
        }
      }
    o12.ok = flips == 0;
    o12.detail += std::to_string(compared) + " checks at N=" + std::to_string(2 * N) + fmt(", c_cfl=%.2f", 0.5 * c_cfl) +
                  ", raster " + std::to_string(2 * raster) + ", pass-to-fail flips " + std::to_string(flips);
  } catch (const std::exception& e) {
    o12 = {false, std::string("exception: ") + e.what()};
  }
  report(12, "refinement stability", o12, seconds_since(t0), 0.0);
  return failures == 0 ? 0 : 1;
}
