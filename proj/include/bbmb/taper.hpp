#pragma once

namespace bbmb {

/// C-infinity step: 0 for s <= 0, 1 for s >= 1.
double smooth_step(double s);

/// Box cutoff: 1 on [-0.8 L, 0.8 L], smoothly down to 0 at |x| = L.
double box_cutoff(double x, double half_width);

inline constexpr double kCutoffStart = 0.8;

}  // namespace bbmb
