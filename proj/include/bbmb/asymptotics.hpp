#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bbmb/error.hpp"
#include "bbmb/norms.hpp"
#include "bbmb/profiles.hpp"
#include "bbmb/solver.hpp"

namespace bbmb {

enum class Combo { Chi, ChiZ, ChiV, ChiZV };

std::string combo_name(Combo c);
/// Accepts "chi", "chi+Z", "chi+V", "chi+Z+V".
Combo parse_combo(const std::string& s);
std::string norm_name(Norm n);
/// Accepts "l1", "l2", "linf".
Norm parse_norm(const std::string& s);

/// Errors are measured on |x| <= kMeasureFraction * L after multiplying the
/// difference by the box cutoff, so the taper region never enters a norm.
inline constexpr double kMeasureFraction = 0.5;

struct ErrorSeries {
  Combo combo = Combo::Chi;
  Norm norm = Norm::Linf;
  int l = 0;
  std::vector<double> times;
  std::vector<double> values;
};

/// Profile fields sampled on a trajectory's grid, memoized per sample time.
class ProfileCache {
 public:
  explicit ProfileCache(ProfileSet ps) : ps_(std::move(ps)) {}

  const ProfileSet& profile_set() const { return ps_; }
  /// chi(t) plus the requested second profiles.
  Field combination(const GridSpec& g, double t, Combo c);

 private:
  const Field& chi_at(const GridSpec& g, double t);
  const Field& Z_at(const GridSpec& g, double t);
  const Field& V_at(const GridSpec& g, double t);

  ProfileSet ps_;
  std::map<double, Field> chi_, z_, v_;
};

/// Samples at t <= 0 are skipped (Z is defined for t > 0 only).
ErrorSeries error_series(const Trajectory& traj, Combo combo, int l, Norm norm, ProfileCache& cache);
ErrorSeries error_series(const Trajectory& traj, Combo combo, int l, Norm norm, const ProfileSet& ps);

/// ||d^l (f - g)||_p on the measurement window of the grid.
double measured_norm(const Field& f, const Field& g, int l, Norm norm);

struct Window {
  double t_min = 0.0;
  double t_max = 0.0;
};

struct RateFit {
  double exponent = 0.0;
  int log_power = 0;
  double amplitude = 0.0;
  double residual_rms = 0.0;
  Window window;
  std::size_t samples = 0;
  double theil_sen_exponent = 0.0;
  double theil_sen_amplitude = 0.0;
};

/// Least squares of log(value / log(1+t)^log_power) against log(1+t) over the
/// samples with t in the window; needs >= 8 samples, all positive.
RateFit fit_rate(const std::vector<double>& times, const std::vector<double>& values, Window w, int log_power);
RateFit fit_rate(const ErrorSeries& es, Window w, int log_power);

/// Median of pairwise slopes of (x, y).
double theil_sen_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Theil-Sen slope of log(value (1+t)^scale / log(1+t)^log_power) against log(1+t).
double scaled_slope(const ErrorSeries& es, Window w, double scale, int log_power);

/// Window shrunk by `fraction` of its log(1+t) extent at both ends.
Window shrink_window(Window w, double fraction);

struct WindowStability {
  double exponent_full = 0.0;
  double exponent_shrunk = 0.0;
  bool stable = false;
};

/// Refit on the window shrunk by 10% at both ends; stable when the exponent moves by < 0.05.
WindowStability window_stability(const ErrorSeries& es, Window w, int log_power);

struct BandTest {
  double r_lo = 0.0;
  double r_hi = 0.0;
  double ratio = 0.0;
  double slope = 0.0;
  bool passed = false;
  bool degenerate = false;
  /// Earliest t_min (same t_max) on which the band test passes; empty if none.
  std::optional<double> earliest_passing_t_min;
};

inline constexpr double kBandRatioMax = 10.0;
inline constexpr double kBandSlopeTol = 0.1;
inline constexpr double kStrictDecaySlope = -0.05;
inline constexpr double kBoundedSlope = 0.05;

/// Band test for the series scaled by (1+t)^scale / log(1+t)^log_power.
BandTest band_test(const ErrorSeries& es, Window w, double scale, int log_power);

struct SecondOrderCheck {
  std::string description;
  Combo combo = Combo::Chi;
  double scale = 0.0;
  int log_power = 0;
  double slope = 0.0;
  double threshold = 0.0;
  bool passed = false;
};

struct OptimalRateReport {
  double alpha = 0.0;
  int l = 0;
  Window window;
  bool applicable = true;
  std::vector<std::string> violated;
  /// Scale for ||u - chi||: (1+t)^{alpha/2 + l/2}, or (1+t)^{1 + l/2}/log(1+t) for alpha >= 2.
  double scale = 0.0;
  int log_power = 0;
  BandTest band;
  SecondOrderCheck second_order;
  bool passed = false;
};

/// Thrown by optimal_rate_report in strict mode when mu, kappa or M vanish.
class HypothesisError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

OptimalRateReport optimal_rate_report(const Trajectory& traj, ProfileCache& cache, Window w, int l = 0,
                                      bool strict = false);

}  // namespace bbmb
