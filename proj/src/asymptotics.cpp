#include "bbmb/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "bbmb/error.hpp"
#include "bbmb/spectral.hpp"
#include "bbmb/taper.hpp"

namespace bbmb {

std::string combo_name(Combo c) {
  switch (c) {
    case Combo::Chi: return "chi";
    case Combo::ChiZ: return "chi+Z";
    case Combo::ChiV: return "chi+V";
    case Combo::ChiZV: return "chi+Z+V";
  }
  return "chi";
}

Combo parse_combo(const std::string& s) {
  if (s == "chi") return Combo::Chi;
  if (s == "chi+Z") return Combo::ChiZ;
  if (s == "chi+V") return Combo::ChiV;
  if (s == "chi+Z+V") return Combo::ChiZV;
  throw ConfigError("unknown profile combination '" + s + "'");
}

std::string norm_name(Norm n) {
  switch (n) {
    case Norm::L1: return "l1";
    case Norm::L2: return "l2";
    case Norm::Linf: return "linf";
  }
  return "linf";
}

Norm parse_norm(const std::string& s) {
  if (s == "l1") return Norm::L1;
  if (s == "l2") return Norm::L2;
  if (s == "linf") return Norm::Linf;
  throw ConfigError("unknown norm '" + s + "'");
}

const Field& ProfileCache::chi_at(const GridSpec& g, double t) {
  auto it = chi_.find(t);
  if (it == chi_.end()) it = chi_.emplace(t, chi_field(g, t, ps_.params)).first;
  return it->second;
}

const Field& ProfileCache::Z_at(const GridSpec& g, double t) {
  auto it = z_.find(t);
  if (it == z_.end()) it = z_.emplace(t, Z_field(g, t, ps_)).first;
  return it->second;
}

const Field& ProfileCache::V_at(const GridSpec& g, double t) {
  auto it = v_.find(t);
  if (it == v_.end()) it = v_.emplace(t, V_field(g, t, ps_)).first;
  return it->second;
}

Field ProfileCache::combination(const GridSpec& g, double t, Combo c) {
  Field phi = chi_at(g, t);
  if (c == Combo::ChiZ || c == Combo::ChiZV) phi += Z_at(g, t);
  if (c == Combo::ChiV || c == Combo::ChiZV) phi += V_at(g, t);
  return phi;
}

double measured_norm(const Field& f, const Field& g, int l, Norm norm) {
  require_same_grid(f.grid, g.grid);
  Field diff = f - g;
  const double L = f.grid.half_width;
  for (std::size_t j = 0; j < diff.size(); ++j) diff.values[j] *= box_cutoff(f.grid.x(j), L);
  const Field d = derivative(diff, l);
  return lp_norm_window(d, norm, kMeasureFraction * L);
}

ErrorSeries error_series(const Trajectory& traj, Combo combo, int l, Norm norm, ProfileCache& cache) {
  if (l < 0) throw ConfigError("derivative order must be nonnegative");
  ErrorSeries es{combo, norm, l, {}, {}};
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    const double t = traj.times[i];
    if (t <= 0.0) continue;
    const Field phi = cache.combination(traj.grid, t, combo);
    es.times.push_back(t);
    es.values.push_back(measured_norm(traj.snapshots[i], phi, l, norm));
  }
  return es;
}

ErrorSeries error_series(const Trajectory& traj, Combo combo, int l, Norm norm, const ProfileSet& ps) {
  ProfileCache cache(ps);
  return error_series(traj, combo, l, norm, cache);
}

double theil_sen_slope(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> slopes;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      if (x[j] != x[i]) slopes.push_back((y[j] - y[i]) / (x[j] - x[i]));
    }
  }
  if (slopes.empty()) throw ConfigError("Theil-Sen slope needs two distinct abscissae");
  std::sort(slopes.begin(), slopes.end());
  const std::size_t n = slopes.size();
  return n % 2 == 1 ? slopes[n / 2] : 0.5 * (slopes[n / 2 - 1] + slopes[n / 2]);
}

namespace {

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// (log(1+t), log(value (1+t)^scale / log(1+t)^log_power)) on the window.
void log_points(const std::vector<double>& times, const std::vector<double>& values, Window w, double scale,
                int log_power, std::vector<double>& xs, std::vector<double>& ys) {
  if (times.size() != values.size()) throw ConfigError("series times and values differ in length");
  xs.clear();
  ys.clear();
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double t = times[i];
    if (t < w.t_min || t > w.t_max) continue;
    if (!(values[i] > 0.0) || !std::isfinite(values[i])) {
      std::ostringstream os;
      os << "fit window contains a non-positive value at t = " << t;
      throw ConfigError(os.str());
    }
    const double lt = std::log1p(t);
    double v = values[i] * std::pow(1.0 + t, scale);
    if (log_power == 1) v /= lt;
    xs.push_back(lt);
    ys.push_back(std::log(v));
  }
  if (xs.size() < 8) {
    std::ostringstream os;
    os << "degenerate fit window [" << w.t_min << ", " << w.t_max << "]: " << xs.size() << " samples, need 8";
    throw ConfigError(os.str());
  }
}

}  // namespace

RateFit fit_rate(const std::vector<double>& times, const std::vector<double>& values, Window w, int log_power) {
  if (log_power != 0 && log_power != 1) throw ConfigError("log_power must be 0 or 1");
  std::vector<double> xs, ys;
  log_points(times, values, w, 0.0, log_power, xs, ys);
  const auto n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) mx += xs[i], my += ys[i];
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (!(sxx > 0.0)) throw ConfigError("degenerate fit window: all samples at one time");
  RateFit fit;
  fit.exponent = sxy / sxx;
  const double intercept = my - fit.exponent * mx;
  fit.amplitude = std::exp(intercept);
  fit.log_power = log_power;
  fit.window = w;
  fit.samples = xs.size();
  double ss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (intercept + fit.exponent * xs[i]);
    ss += r * r;
  }
  fit.residual_rms = std::sqrt(ss / n);
  fit.theil_sen_exponent = theil_sen_slope(xs, ys);
  std::vector<double> offsets(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) offsets[i] = ys[i] - fit.theil_sen_exponent * xs[i];
  fit.theil_sen_amplitude = std::exp(median(offsets));
  return fit;
}

RateFit fit_rate(const ErrorSeries& es, Window w, int log_power) { return fit_rate(es.times, es.values, w, log_power); }

double scaled_slope(const ErrorSeries& es, Window w, double scale, int log_power) {
  std::vector<double> xs, ys;
  log_points(es.times, es.values, w, scale, log_power, xs, ys);
  return theil_sen_slope(xs, ys);
}

Window shrink_window(Window w, double fraction) {
  const double a = std::log1p(w.t_min);
  const double b = std::log1p(w.t_max);
  const double cut = fraction * (b - a);
  return {std::expm1(a + cut), std::expm1(b - cut)};
}

WindowStability window_stability(const ErrorSeries& es, Window w, int log_power) {
  WindowStability s;
  s.exponent_full = fit_rate(es, w, log_power).exponent;
  s.exponent_shrunk = fit_rate(es, shrink_window(w, 0.1), log_power).exponent;
  s.stable = std::abs(s.exponent_full - s.exponent_shrunk) < 0.05;
  return s;
}

namespace {

BandTest band_on(const ErrorSeries& es, Window w, double scale, int log_power) {
  BandTest b;
  std::vector<double> scaled;
  for (std::size_t i = 0; i < es.times.size(); ++i) {
    const double t = es.times[i];
    if (t < w.t_min || t > w.t_max) continue;
    double v = es.values[i] * std::pow(1.0 + t, scale);
    if (log_power == 1) v /= std::log1p(t);
    scaled.push_back(v);
  }
  if (scaled.size() < 8) throw ConfigError("degenerate band window: need 8 samples");
  b.r_lo = *std::min_element(scaled.begin(), scaled.end());
  b.r_hi = *std::max_element(scaled.begin(), scaled.end());
  if (!(b.r_lo > 0.0)) {
    b.degenerate = true;
    b.ratio = std::numeric_limits<double>::infinity();
    return b;
  }
  b.ratio = b.r_hi / b.r_lo;
  b.slope = scaled_slope(es, w, scale, log_power);
  b.passed = b.ratio <= kBandRatioMax && std::abs(b.slope) <= kBandSlopeTol;
  return b;
}

std::size_t count_in(const std::vector<double>& times, Window w) {
  return static_cast<std::size_t>(
      std::count_if(times.begin(), times.end(), [&](double t) { return t >= w.t_min && t <= w.t_max; }));
}

}  // namespace

BandTest band_test(const ErrorSeries& es, Window w, double scale, int log_power) {
  BandTest b = band_on(es, w, scale, log_power);
  if (b.degenerate) return b;
  for (double t0 : es.times) {
    if (t0 < w.t_min || t0 > w.t_max) continue;
    const Window sub{t0, w.t_max};
    if (count_in(es.times, sub) < 8) break;
    if (band_on(es, sub, scale, log_power).passed) {
      b.earliest_passing_t_min = t0;
      break;
    }
  }
  return b;
}

OptimalRateReport optimal_rate_report(const Trajectory& traj, ProfileCache& cache, Window w, int l, bool strict) {
  const ProfileSet& ps = cache.profile_set();
  const ModelParams& p = ps.params;
  OptimalRateReport r;
  r.alpha = p.alpha;
  r.l = l;
  r.window = w;
  const bool slow = p.alpha < 2.0;
  const double mu = slow ? ps.mu0 : (p.alpha > 2.0 ? -ps.kappa * ps.d : ps.mu1);
  if (!(std::abs(mu) > 0.0)) r.violated.push_back(slow ? "mu0 = 0" : "mu1 = 0");
  if (ps.kappa == 0.0) r.violated.push_back("kappa = 0");
  if (p.mass == 0.0) r.violated.push_back("M = 0");
  r.applicable = r.violated.empty();
  if (!r.applicable && strict) {
    std::string msg = "optimal-rate hypotheses violated:";
    for (const auto& v : r.violated) msg += " " + v + ";";
    throw HypothesisError(msg);
  }

  const double half_l = 0.5 * l;
  if (slow) {
    r.scale = 0.5 * p.alpha + half_l;
    r.log_power = 0;
  } else {
    r.scale = 1.0 + half_l;
    r.log_power = 1;
  }
  const ErrorSeries first = error_series(traj, Combo::Chi, l, Norm::Linf, cache);
  r.band = band_test(first, w, r.scale, r.log_power);
  if (r.band.degenerate) return r;

  SecondOrderCheck& c = r.second_order;
  if (slow) {
    c = {"(1+t)^(alpha/2+l/2) ||d^l(u-chi-Z)||_inf decays", Combo::ChiZ, r.scale, 0, 0.0, kStrictDecaySlope, false};
  } else if (p.alpha == 2.0) {
    c = {"(1+t)^(1+l/2)/log(1+t) ||d^l(u-chi-Z-V)||_inf decays", Combo::ChiZV, r.scale, 1, 0.0, kStrictDecaySlope,
         false};
  } else {
    c = {"(1+t)^(1+l/2) ||d^l(u-chi-V)||_inf bounded", Combo::ChiV, 1.0 + half_l, 0, 0.0, kBoundedSlope, false};
  }
  const ErrorSeries second = error_series(traj, c.combo, l, Norm::Linf, cache);
  c.slope = scaled_slope(second, w, c.scale, c.log_power);
  c.passed = c.slope <= c.threshold;
  r.passed = r.applicable && r.band.passed && c.passed;
  return r;
}

}  // namespace bbmb
