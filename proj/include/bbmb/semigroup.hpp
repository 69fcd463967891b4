#pragma once

#include <complex>

#include "bbmb/grid.hpp"
#include "bbmb/params.hpp"

namespace bbmb {

/// Symbol of the linear BBM-Burgers flow, exp((-t xi^2 + i gamma t xi^3)/(1 + xi^2)).
/// The real part of the exponent is clamped at -700; at the Nyquist slot the
/// (odd) dispersive phase is dropped so the flow stays real and a semigroup.
std::complex<double> T_multiplier(double xi, double t, double gamma, bool nyquist = false);

inline double G_multiplier(double xi, double t) { return std::exp(-t * xi * xi); }
inline double helmholtz_multiplier(double xi) { return 1.0 / (1.0 + xi * xi); }

Field T_apply(const Field& f, double t, const ModelParams& p);
Field G_apply(const Field& f, double t);

/// || d^l/dx^l (T(t) - G(t)) f ||_2.
double TG_gap(const Field& f, double t, const ModelParams& p, int l = 0);

/// (1 - d^2/dx^2)^{-1} f via the multiplier 1/(1 + xi^2).
Field helmholtz_inv(const Field& f);

/// Same operator computed in physical space as the convolution with
/// exp(-|x|)/2 on the periodic box, truncated at 40 e-foldings. The two
/// one-sided exponential integrals are swept cell by cell, integrating a
/// 12-point local interpolant of f exactly against the kernel.
Field helmholtz_inv_direct(const Field& f);

/// U[h](x, t, tau) = int d/dx(G(x-y, t-tau) eta(x,t)) eta(y,tau)^{-1} (int_{-inf}^y h) dy.
///
/// The primitive is anchored at -L; the y integral is the trapezoid rule on
/// the grid restricted to the Gaussian window |x - y| <= 12 sqrt(t - tau).
/// Requires t > tau >= 0 and |int h| <= 1e-6.
Field U_apply(const Field& h, double t, double tau, const ModelParams& p);

}  // namespace bbmb
