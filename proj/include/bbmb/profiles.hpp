#pragma once

#include <cmath>
#include <limits>

#include "bbmb/grid.hpp"
#include "bbmb/params.hpp"

namespace bbmb {

// Nonlinear diffusion wave and its weights. All evaluators are closed form;
// the tail integral int_{x/2}^inf exp(-y^2) dy is (sqrt(pi)/2) erfc(x/2).

double chi_star(double x, const ModelParams& p);
/// chi(x, t) = chi_star(x / sqrt(1+t)) / sqrt(1+t).
double chi(double x, double t, const ModelParams& p);

/// eta_star(x) = exp((beta/2) int_{-inf}^x chi_star), in the closed form
/// sqrt(pi) e^{beta M/2} / (sqrt(pi) + (e^{beta M/2} - 1) int_{x/2}^inf e^{-y^2} dy).
double eta_star(double x, const ModelParams& p);
double eta(double x, double t, const ModelParams& p);
/// d/dx eta_star obtained by differentiating the closed-form denominator.
double eta_star_derivative(double x, const ModelParams& p);

/// (1/(4 sqrt(pi))) (beta chi_star - x) eta_star e^{-x^2/4}.
double V_star(double x, const ModelParams& p);
/// (1/sqrt(4 pi)) d/dx (eta_star e^{-x^2/4}) by the product rule.
double V_star_derivative_form(double x, const ModelParams& p);

/// Constants attached to a parameter set and a particular initial datum.
struct ProfileSet {
  ModelParams params;
  double c_alpha_plus = 0.0;
  double c_alpha_minus = 0.0;
  double d = 0.0;
  double d_error = 0.0;
  double kappa = 0.0;
  /// Only defined for 1 < alpha < 2; NaN otherwise.
  double mu0 = std::numeric_limits<double>::quiet_NaN();
  double mu1 = 0.0;

  bool has_mu0() const { return !std::isnan(mu0); }
};

/// d by adaptive quadrature at the given tolerance, kappa, mu0 (1<alpha<2) and mu1.
ProfileSet constants(const ModelParams& p, double c_alpha_plus, double c_alpha_minus,
                     double quadrature_tol = 1e-10);

/// Log-correction profile -kappa d V_star(x/sqrt(1+t)) log(1+t) / (1+t).
double V_profile(double x, double t, const ProfileSet& ps);

/// Second profile for slowly decaying data, 1 < alpha <= 2, t > 0:
/// Z = int c(y) (1+|y|)^{1-alpha} d/dx (G(x-y,t) eta(x,t)) dy.
double Z_eval(double x, double t, const ProfileSet& ps);

Field chi_field(const GridSpec& g, double t, const ModelParams& p);
Field eta_field(const GridSpec& g, double t, const ModelParams& p);
Field V_field(const GridSpec& g, double t, const ProfileSet& ps);
Field Z_field(const GridSpec& g, double t, const ProfileSet& ps);

/// r0 = eta_star^{-1} int_{-L}^x (u0 - chi_star); requires matched mass (1e-6).
Field r0_eval(const Field& u0, const ModelParams& p);

struct TailConstants {
  double plus = 0.0;
  double minus = 0.0;
  /// max - min of the windowed estimator; large spread means the tail has not settled.
  double spread_plus = 0.0;
  double spread_minus = 0.0;
};

/// Averages (1+|x|)^{alpha-1} r0(x) over x in +-[0.5 L, 0.7 L].
TailConstants extract_c_alpha(const Field& r0, const ModelParams& p);

/// constants() with c_alpha extracted from the initial datum.
ProfileSet constants(const ModelParams& p, const Field& u0, double quadrature_tol = 1e-10);

// Classical beta = 1 self-similar forms used as an independent cross-check.
double self_similar_fM(double x, double mass);
double self_similar_H(double x, double mass);
/// f~_M(x); `h_moment` is int H(y) f_M(y)^3 dy.
double second_order_fM(double x, const ModelParams& p, double h_moment);
double h_moment(double mass, double quadrature_tol = 1e-12);

struct FmCheck {
  double max_dev_first = 0.0;   // max |f_M - chi_star|
  double max_dev_second = 0.0;  // max |f~_M + kappa d V_star|
};

/// Requires beta = 1; evaluates both deviations on 801 points of [-half_range, half_range].
FmCheck fM_check(const ModelParams& p, double half_range = 20.0);

}  // namespace bbmb
