#include "bbmb/profiles.hpp"

#include <algorithm>
#include <cassert>
#include <numbers>
#include <sstream>

#include "bbmb/error.hpp"
#include "bbmb/norms.hpp"
#include "bbmb/quadrature.hpp"
#include "bbmb/spectral.hpp"

namespace bbmb {

namespace {

constexpr double kSqrtPi = 1.7724538509055160273;

double tail_integral(double x) { return 0.5 * kSqrtPi * std::erfc(0.5 * x); }

double growth(const ModelParams& p) { return std::expm1(0.5 * p.beta * p.mass); }

// (e^{beta M/2} - 1) / beta, continuous at beta = 0.
double amplitude(const ModelParams& p) {
  if (p.beta == 0.0) return 0.5 * p.mass;
  return growth(p) / p.beta;
}

double denominator(double x, const ModelParams& p) {
  const double D = kSqrtPi + growth(p) * tail_integral(x);
  // e^{bM/2} - 1 > -1 and the tail integral lies in (0, sqrt(pi)).
  assert(D > 0.0);
  return D;
}

double tail_profile(double y, const ProfileSet& ps) {
  const double c = y >= 0.0 ? ps.c_alpha_plus : ps.c_alpha_minus;
  if (c == 0.0) return 0.0;
  return c * std::pow(1.0 + std::abs(y), 1.0 - ps.params.alpha);
}

}  // namespace

double chi_star(double x, const ModelParams& p) {
  if (p.mass == 0.0) return 0.0;
  return amplitude(p) * std::exp(-0.25 * x * x) / denominator(x, p);
}

double chi(double x, double t, const ModelParams& p) {
  const double s = std::sqrt(1.0 + t);
  return chi_star(x / s, p) / s;
}

double eta_star(double x, const ModelParams& p) {
  return kSqrtPi * std::exp(0.5 * p.beta * p.mass) / denominator(x, p);
}

double eta(double x, double t, const ModelParams& p) { return eta_star(x / std::sqrt(1.0 + t), p); }

double eta_star_derivative(double x, const ModelParams& p) {
  const double D = denominator(x, p);
  return kSqrtPi * std::exp(0.5 * p.beta * p.mass) * growth(p) * 0.5 * std::exp(-0.25 * x * x) / (D * D);
}

double V_star(double x, const ModelParams& p) {
  return (p.beta * chi_star(x, p) - x) * eta_star(x, p) * std::exp(-0.25 * x * x) / (4.0 * kSqrtPi);
}

double V_star_derivative_form(double x, const ModelParams& p) {
  const double g = std::exp(-0.25 * x * x);
  const double dg = -0.5 * x * g;
  return (eta_star_derivative(x, p) * g + eta_star(x, p) * dg) / (2.0 * kSqrtPi);
}

ProfileSet constants(const ModelParams& p, double c_alpha_plus, double c_alpha_minus,
                     double quadrature_tol) {
  p.validate();
  ProfileSet ps;
  ps.params = p;
  ps.c_alpha_plus = c_alpha_plus;
  ps.c_alpha_minus = c_alpha_minus;
  ps.kappa = p.kappa();
  if (p.mass != 0.0) {
    const auto r = integrate_adaptive(
        [&p](double y) {
          const double c = chi_star(y, p);
          return c * c * c / eta_star(y, p);
        },
        -60.0, 60.0, quadrature_tol);
    ps.d = r.value;
    ps.d_error = r.error_estimate;
  }
  if (p.alpha < 2.0) {
    const double a = p.alpha;
    ps.mu0 = (c_alpha_plus - c_alpha_minus) * std::tgamma(0.5 * (3.0 - a)) +
             (c_alpha_plus + c_alpha_minus) * p.beta * chi_star(0.0, p) / (2.0 - a) * std::tgamma(2.0 - 0.5 * a);
  }
  ps.mu1 = 0.5 * (c_alpha_plus + c_alpha_minus) - ps.kappa * ps.d;
  return ps;
}

double V_profile(double x, double t, const ProfileSet& ps) {
  if (t <= 0.0 || ps.kappa == 0.0 || ps.d == 0.0) return 0.0;
  const double s = std::sqrt(1.0 + t);
  return -ps.kappa * ps.d * V_star(x / s, ps.params) * std::log1p(t) / (1.0 + t);
}

double Z_eval(double x, double t, const ProfileSet& ps) {
  if (!(t > 0.0)) throw ConfigError("Z_eval requires t > 0");
  const ModelParams& p = ps.params;
  if (!(p.alpha > 1.0 && p.alpha <= 2.0)) throw ConfigError("Z_eval requires 1 < alpha <= 2");
  if (ps.c_alpha_plus == 0.0 && ps.c_alpha_minus == 0.0) return 0.0;

  const double sqrt_t = std::sqrt(t);
  // The Gaussian window exp(-36) leaves out less than 1e-15 of the kernel mass.
  const double window = 12.0 * sqrt_t;
  const double norm = 1.0 / std::sqrt(4.0 * std::numbers::pi * t);
  const double drift = 0.5 * p.beta * chi(x, t, p);
  auto integrand = [&](double y) {
    const double s = x - y;
    const double G = norm * std::exp(-s * s / (4.0 * t));
    return tail_profile(y, ps) * G * (drift - s / (2.0 * t));
  };
  const double integral = integrate_panels(integrand, x - window, x + window, sqrt_t, 0.0);
  return eta(x, t, p) * integral;
}

namespace {
template <class F>
Field fill(const GridSpec& g, F&& f) {
  Field out(g);
  for (std::size_t j = 0; j < g.n_points; ++j) out.values[j] = f(g.x(j));
  return out;
}
}  // namespace

Field chi_field(const GridSpec& g, double t, const ModelParams& p) {
  return fill(g, [&](double x) { return chi(x, t, p); });
}

Field eta_field(const GridSpec& g, double t, const ModelParams& p) {
  return fill(g, [&](double x) { return eta(x, t, p); });
}

Field V_field(const GridSpec& g, double t, const ProfileSet& ps) {
  return fill(g, [&](double x) { return V_profile(x, t, ps); });
}

Field Z_field(const GridSpec& g, double t, const ProfileSet& ps) {
  return fill(g, [&](double x) { return Z_eval(x, t, ps); });
}

Field r0_eval(const Field& u0, const ModelParams& p) {
  const GridSpec& g = u0.grid;
  Field diff = u0;
  for (std::size_t j = 0; j < g.n_points; ++j) diff.values[j] -= chi_star(g.x(j), p);
  const double excess = mass(diff);
  if (std::abs(excess) > 1e-6) {
    std::ostringstream os;
    os << "r0_eval: int (u0 - chi_star) = " << excess << " but the masses must match within 1e-6";
    throw MassMismatchError(os.str());
  }
  Field r0 = cumulative_integral(diff);
  for (std::size_t j = 0; j < g.n_points; ++j) r0.values[j] /= eta_star(g.x(j), p);
  return r0;
}

TailConstants extract_c_alpha(const Field& r0, const ModelParams& p) {
  const GridSpec& g = r0.grid;
  const double lo = 0.5 * g.half_width;
  const double hi = 0.7 * g.half_width;
  struct Acc {
    double sum = 0.0;
    double min = std::numeric_limits<double>::infinity();
    double max = -std::numeric_limits<double>::infinity();
    std::size_t n = 0;
  } plus, minus;
  for (std::size_t j = 0; j < g.n_points; ++j) {
    const double x = g.x(j);
    const double ax = std::abs(x);
    if (ax < lo || ax > hi) continue;
    const double v = std::pow(1.0 + ax, p.alpha - 1.0) * r0.values[j];
    Acc& a = x > 0.0 ? plus : minus;
    a.sum += v;
    a.min = std::min(a.min, v);
    a.max = std::max(a.max, v);
    ++a.n;
  }
  if (plus.n == 0 || minus.n == 0) throw ConfigError("extract_c_alpha: grid too coarse for the tail window");
  return {plus.sum / static_cast<double>(plus.n), minus.sum / static_cast<double>(minus.n), plus.max - plus.min,
          minus.max - minus.min};
}

ProfileSet constants(const ModelParams& p, const Field& u0, double quadrature_tol) {
  const TailConstants c = extract_c_alpha(r0_eval(u0, p), p);
  return constants(p, c.plus, c.minus, quadrature_tol);
}

double self_similar_H(double x, double mass) {
  return std::cosh(0.25 * mass) - std::sinh(0.25 * mass) * std::erf(0.5 * x);
}

double self_similar_fM(double x, double mass) {
  // -2 d/dx log H with dH/dx = -sinh(M/4) e^{-x^2/4} / sqrt(pi)
  const double dH = -std::sinh(0.25 * mass) * std::exp(-0.25 * x * x) / kSqrtPi;
  return -2.0 * dH / self_similar_H(x, mass);
}

double h_moment(double mass, double quadrature_tol) {
  if (mass == 0.0) return 0.0;
  return integrate_adaptive(
             [mass](double y) {
               const double f = self_similar_fM(y, mass);
               return self_similar_H(y, mass) * f * f * f;
             },
             -60.0, 60.0, quadrature_tol)
      .value;
}

double second_order_fM(double x, const ModelParams& p, double moment) {
  const double fm = self_similar_fM(x, p.mass);
  return -p.gamma * (fm - x) * std::exp(-0.25 * x * x) / (32.0 * kSqrtPi * self_similar_H(x, p.mass)) * moment;
}

FmCheck fM_check(const ModelParams& p, double half_range) {
  if (p.beta != 1.0) throw ConfigError("fM_check requires beta = 1");
  const ProfileSet ps = constants(p, 0.0, 0.0, 1e-12);
  const double moment = h_moment(p.mass);
  FmCheck out;
  constexpr int kPoints = 801;
  for (int i = 0; i < kPoints; ++i) {
    const double x = -half_range + 2.0 * half_range * i / (kPoints - 1);
    out.max_dev_first = std::max(out.max_dev_first, std::abs(self_similar_fM(x, p.mass) - chi_star(x, p)));
    const double rhs = -ps.kappa * ps.d * V_star(x, p);
    out.max_dev_second = std::max(out.max_dev_second, std::abs(second_order_fM(x, p, moment) - rhs));
  }
  return out;
}

}  // namespace bbmb
