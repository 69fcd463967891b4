#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "bbmb/grid.hpp"
#include "bbmb/params.hpp"

namespace bbmb {

/// Steps taken between two consecutive sample times.
struct StepStats {
  double t_end = 0.0;
  double dt = 0.0;
  std::size_t steps = 0;
  /// Largest |u^| seen at the Nyquist slot over those steps (aliasing sentinel).
  double max_nyquist = 0.0;
};

struct Trajectory {
  ModelParams params;
  GridSpec grid;
  std::vector<double> times;
  std::vector<Field> snapshots;
  std::vector<double> mass_log;
  std::vector<StepStats> step_stats;
  std::vector<double> high_band_fraction;
  int halvings = 0;

  /// max |mass_log[i] - mass_log[0]| / max(|mass_log[0]|, 1).
  double mass_drift() const;
  double max_high_band_fraction() const;
};

struct SolverOptions {
  /// Base step; 0 selects default_dt.
  double dt = 0.0;
  /// Small-data guard on ||u0||_inf for the nonlinear problem; <= 0 disables it.
  double amplitude_cap = 0.5;
  /// Refuse sample times beyond (L/8)^2.
  bool enforce_validity = true;
  int max_halvings = 3;
};

/// -(beta/2) d/dx (1 - d^2/dx^2)^{-1} (u^2), with the 2/3 rule applied to u and to u^2.
Field rhs_nonlinear(const Field& u, const ModelParams& p);

/// Largest step accepted by step_etdrk4.
inline constexpr double kMaxStep = 1.0;

/// One ETDRK4 step of the full equation with the exact linear multiplier.
Field step_etdrk4(const Field& u, double t, double dt, const ModelParams& p);

/// min(0.1, 0.5 dx / max(1, ||u0||_inf)).
double default_dt(const Field& u0);

/// Validity window of the periodic box, (L/8)^2.
double validity_horizon(const GridSpec& g);

Trajectory integrate(const Field& u0, const ModelParams& p, const std::vector<double>& t_samples,
                     const SolverOptions& opts = {});

/// lambda(t) for z_t + (beta chi z)_x - z_xx = lambda_x. An empty function means lambda = 0.
using Forcing = std::function<Field(double)>;

Trajectory solve_aux(const Field& z0, const Forcing& lambda, const ModelParams& p,
                     const std::vector<double>& t_samples, const SolverOptions& opts = {});

/// v_t + (beta chi v)_x - v_xx = -gamma chi_xxx with v(0) = 0; requires |M| <= 1.
Trajectory solve_second_aux(const ModelParams& p, const GridSpec& g, const std::vector<double>& t_samples,
                            const SolverOptions& opts = {});

}  // namespace bbmb
