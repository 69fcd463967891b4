#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include <boost/math/quadrature/gauss.hpp>

namespace bbmb {

/// Composite 20-point Gauss-Legendre rule on [a, b].
///
/// Panels are bisected until their width is at most min(max_width, max(1, d))
/// where d is the distance from the panel to `kink`; this grades the panels
/// geometrically towards a point where the integrand is only piecewise smooth.
/// `kink` is also forced to be a panel boundary when it lies inside (a, b).
template <class F>
double integrate_panels(F&& f, double a, double b, double max_width, double kink = 0.0) {
  using rule = boost::math::quadrature::gauss<double, 20>;
  if (!(b > a)) return 0.0;

  auto panel = [&](double lo, double hi) {
    const double half = 0.5 * (hi - lo);
    const double mid = 0.5 * (hi + lo);
    const auto& nodes = rule::abscissa();
    const auto& weights = rule::weights();
    double acc = 0.0;
    // boost stores the nonnegative half of a symmetric rule
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (nodes[i] == 0.0) {
        acc += weights[i] * f(mid);
      } else {
        acc += weights[i] * (f(mid - half * nodes[i]) + f(mid + half * nodes[i]));
      }
    }
    return acc * half;
  };

  std::function<double(double, double)> graded = [&](double lo, double hi) -> double {
    const double dist = (kink >= lo && kink <= hi) ? 0.0 : std::min(std::abs(lo - kink), std::abs(hi - kink));
    const double allowed = std::min(max_width, std::max(1.0, dist));
    if (hi - lo <= allowed) return panel(lo, hi);
    const double m = 0.5 * (lo + hi);
    return graded(lo, m) + graded(m, hi);
  };

  if (kink > a && kink < b) return graded(a, kink) + graded(kink, b);
  return graded(a, b);
}

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
};

/// Adaptive Gauss-Kronrod (61 points) on [a, b]; infinite limits allowed.
/// Throws QuadratureError when the error estimate exceeds tol * max(1, |value|) by 100x.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    double tol);

}  // namespace bbmb
