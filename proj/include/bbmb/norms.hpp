#pragma once

#include <span>

#include "bbmb/grid.hpp"

namespace bbmb {

enum class Norm { L1, L2, Linf };

/// Rectangle rule with weight dx for p in {1, 2}; max |f| for p = inf.
double lp_norm(const Field& f, Norm p);

/// Same as lp_norm but restricted to grid points with |x| <= radius.
double lp_norm_window(const Field& f, Norm p, double radius);

/// dx * sum f_j; the exact integral of the trigonometric interpolant.
double mass(const Field& f);

double max_abs_diff(const Field& a, const Field& b);

}  // namespace bbmb
