#pragma once

namespace bbmb {

/// Coefficients of u_t - u_xxt - u_xx + gamma u_xxx + beta u u_x = 0,
/// the tail exponent alpha of the initial data and the mass M = int u0.
struct ModelParams {
  double beta = 1.0;
  double gamma = 0.0;
  double alpha = 2.0;
  double mass = 0.0;

  /// Rejects alpha <= 1 and non-finite entries. beta = 0 is accepted as the
  /// linear limit.
  void validate() const;

  /// kappa = beta^2 gamma / 8.
  double kappa() const { return beta * beta * gamma / 8.0; }
};

}  // namespace bbmb
