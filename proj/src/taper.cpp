#include "bbmb/taper.hpp"

#include <cmath>

namespace bbmb {

namespace {
double bump_factor(double s) { return s > 0.0 ? std::exp(-1.0 / s) : 0.0; }
}  // namespace

double smooth_step(double s) {
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  const double a = bump_factor(s);
  const double b = bump_factor(1.0 - s);
  return a / (a + b);
}

double box_cutoff(double x, double half_width) {
  const double start = kCutoffStart * half_width;
  const double ramp = half_width - start;
  return 1.0 - smooth_step((std::abs(x) - start) / ramp);
}

}  // namespace bbmb
