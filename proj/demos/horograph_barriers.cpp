// A perturbed horosphere in the half-plane flows between the horosphere barriers
// and flattens out (kappa -> 1).

#include <cstdio>

#include "hyperflow/flow.hpp"
#include "hyperflow/shapes.hpp"

using namespace hyperflow;

int main() {
  const HoroGraph g = shapes::sine_horograph(0.3, 256);
  RunOptions opts;
  opts.record_count = 6;
  const GraphTrajectory tr = run_noncompact(g, 3.0, opts);
  std::printf("%6s %10s %10s %10s %10s %12s\n", "t", "lower", "f_min", "f_max", "upper", "sup|k-1|");
  const BarrierEnvelope env(g.max(), g.min(), 1);
  for (const auto& d : tr.diagnostics) {
    std::printf("%6.2f %10.6f %10.6f %10.6f %10.6f %12.3e\n", d.t, env.lower(d.t), d.f_min, d.f_max, env.upper(d.t),
                d.umbilic_deviation);
  }
}
