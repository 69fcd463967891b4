#include "bbmb/norms.hpp"

#include <algorithm>
#include <cmath>

namespace bbmb {

namespace {

template <class Pred>
double norm_where(const Field& f, Norm p, Pred&& keep) {
  const double dx = f.grid.dx();
  double acc = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) {
    if (!keep(j)) continue;
    const double a = std::abs(f.values[j]);
    switch (p) {
      case Norm::L1: acc += a; break;
      case Norm::L2: acc += a * a; break;
      case Norm::Linf: acc = std::max(acc, a); break;
    }
  }
  switch (p) {
    case Norm::L1: return acc * dx;
    case Norm::L2: return std::sqrt(acc * dx);
    case Norm::Linf: return acc;
  }
  return acc;
}

}  // namespace

double lp_norm(const Field& f, Norm p) {
  return norm_where(f, p, [](std::size_t) { return true; });
}

double lp_norm_window(const Field& f, Norm p, double radius) {
  return norm_where(f, p, [&](std::size_t j) { return std::abs(f.grid.x(j)) <= radius; });
}

double mass(const Field& f) {
  double s = 0.0;
  for (double v : f.values) s += v;
  return s * f.grid.dx();
}

double max_abs_diff(const Field& a, const Field& b) {
  require_same_grid(a.grid, b.grid);
  double m = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a.values[j] - b.values[j]));
  return m;
}

}  // namespace bbmb
