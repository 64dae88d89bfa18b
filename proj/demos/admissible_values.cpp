// Optimal admissible values of an off-center circle against artanh(tanh a <nu, e1>).

#include <cmath>
#include <cstdio>

#include "hyperflow/reflection.hpp"
#include "hyperflow/shapes.hpp"

using namespace hyperflow;

int main() {
  const double a = 0.5;
  const DiscreteCurve c = shapes::circle(1.0, 512, a);
  const OverallOptimal o = overall_optimal(c, 64);
  std::printf("%10s %12s %12s\n", "angle", "s0", "closed form");
  for (std::size_t k = 0; k < o.per_direction.size(); k += 8) {
    const auto& d = o.per_direction[k];
    std::printf("%10.4f %12.8f %12.8f\n", std::arg(d.direction), d.value.s0, std::atanh(std::tanh(a) * d.direction.real()));
  }
  std::printf("s_bar = %.8f at (%.3f, %.3f)\n", o.s_bar, o.argmax.real(), o.argmax.imag());
}
