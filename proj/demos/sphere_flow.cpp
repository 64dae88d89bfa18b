// Flows a geodesic circle and compares the tracked radius with sinh r(t) = e^t sinh r0.

#include <cstdio>

#include "hyperflow/flow.hpp"
#include "hyperflow/shapes.hpp"

using namespace hyperflow;

int main() {
  const double r0 = 0.5;
  RunOptions opts;
  opts.record_count = 6;
  const CurveTrajectory tr = run_compact(shapes::circle(r0, 256), 3.0, opts);
  std::printf("%6s %12s %12s %10s\n", "t", "r (tracked)", "r (exact)", "kappa_min");
  for (std::size_t i = 0; i < tr.size(); ++i) {
    const auto& d = tr.diagnostics[i];
    double r = 0.0;
    for (Complex z : tr.states[i].vertices()) r += disk::radius_of(z);
    r /= static_cast<double>(tr.states[i].size());
    std::printf("%6.2f %12.8f %12.8f %10.6f\n", d.t, r, sphere_radius(r0, 1, d.t), d.kappa_min);
  }
  std::printf("%zu steps\n", tr.steps);
}
