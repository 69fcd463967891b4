#include "bbmb/semigroup.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>

#include "bbmb/error.hpp"
#include "bbmb/norms.hpp"
#include "bbmb/profiles.hpp"
#include "bbmb/spectral.hpp"

namespace bbmb {

std::complex<double> T_multiplier(double xi, double t, double gamma, bool nyquist) {
  const double xi2 = xi * xi;
  const double denom = 1.0 + xi2;
  const double re = std::max(-t * xi2 / denom, -700.0);
  if (nyquist) return std::exp(re);
  const double im = gamma * t * xi2 * xi / denom;
  return std::polar(std::exp(re), im);
}

Field T_apply(const Field& f, double t, const ModelParams& p) {
  if (t < 0.0) throw ConfigError("T_apply requires t >= 0");
  if (t == 0.0) return f;
  return apply_symbol(f, [&](double xi, bool nyq) { return T_multiplier(xi, t, p.gamma, nyq); });
}

Field G_apply(const Field& f, double t) {
  if (t < 0.0) throw ConfigError("G_apply requires t >= 0");
  if (t == 0.0) return f;
  return apply_symbol(f, [t](double xi, bool) { return std::complex<double>(G_multiplier(xi, t)); });
}

double TG_gap(const Field& f, double t, const ModelParams& p, int l) {
  if (t < 0.0) throw ConfigError("TG_gap requires t >= 0");
  const Field gap = apply_symbol(f, [&](double xi, bool nyq) {
    return (T_multiplier(xi, t, p.gamma, nyq) - G_multiplier(xi, t)) * derivative_symbol(xi, l, nyq);
  });
  return lp_norm(gap, Norm::L2);
}

Field helmholtz_inv(const Field& f) {
  return apply_symbol(f, [](double xi, bool) { return std::complex<double>(helmholtz_multiplier(xi)); });
}

namespace {

constexpr int kStencil = 12;
constexpr int kStencilOffset = 5;  // nodes j-5 .. j+6 around the cell [x_j, x_{j+1}]

// Weights of the cell integrals int_0^1 e^{-h(1-s)} l_m(s) ds and int_0^1 e^{-h s} l_m(s) ds
// for the Lagrange basis on nodes s = -5..6, scaled by h.
struct CellWeights {
  std::array<double, kStencil> forward{};
  std::array<double, kStencil> backward{};
};

CellWeights cell_weights(double h) {
  using rule = boost::math::quadrature::gauss<double, 20>;
  CellWeights w;
  auto lagrange = [](int m, double s) {
    double v = 1.0;
    for (int k = 0; k < kStencil; ++k) {
      if (k == m) continue;
      const double sk = k - kStencilOffset;
      const double sm = m - kStencilOffset;
      v *= (s - sk) / (sm - sk);
    }
    return v;
  };
  const auto& nodes = rule::abscissa();
  const auto& weights = rule::weights();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (double sign : {-1.0, 1.0}) {
      const double s = 0.5 + 0.5 * sign * nodes[i];
      const double wq = 0.5 * weights[i];
      for (int m = 0; m < kStencil; ++m) {
        const double l = lagrange(m, s);
        w.forward[m] += wq * std::exp(-h * (1.0 - s)) * l * h;
        w.backward[m] += wq * std::exp(-h * s) * l * h;
      }
    }
  }
  return w;
}

}  // namespace

Field helmholtz_inv_direct(const Field& f) {
  const GridSpec& g = f.grid;
  const auto n = static_cast<std::ptrdiff_t>(g.n_points);
  const double h = g.dx();
  const CellWeights w = cell_weights(h);
  const double decay = std::exp(-h);
  const auto lead = static_cast<std::ptrdiff_t>(std::ceil(40.0 / h));
  auto at = [&](std::ptrdiff_t j) { return f.values[static_cast<std::size_t>(((j % n) + n) % n)]; };
  auto cell = [&](std::ptrdiff_t j, const std::array<double, kStencil>& wt) {
    double acc = 0.0;
    for (int m = 0; m < kStencil; ++m) acc += wt[m] * at(j + m - kStencilOffset);
    return acc;
  };

  std::vector<double> left(g.n_points, 0.0);   // int_{-inf}^{x_j} e^{-(x_j - y)} f(y) dy
  std::vector<double> right(g.n_points, 0.0);  // int_{x_j}^{inf} e^{-(y - x_j)} f(y) dy
  double acc = 0.0;
  for (std::ptrdiff_t j = -lead; j < n; ++j) {
    // acc holds the value at node j; advance over cell [x_j, x_{j+1}]
    if (j >= 0) left[static_cast<std::size_t>(j)] = acc;
    acc = decay * acc + cell(j, w.forward);
  }
  acc = 0.0;
  for (std::ptrdiff_t j = n + lead; j >= 0; --j) {
    if (j < n) right[static_cast<std::size_t>(j)] = acc;
    acc = decay * acc + cell(j - 1, w.backward);
  }
  Field out(g);
  for (std::size_t j = 0; j < g.n_points; ++j) out.values[j] = 0.5 * (left[j] + right[j]);
  return out;
}

Field U_apply(const Field& h, double t, double tau, const ModelParams& p) {
  if (!(t > tau) || tau < 0.0) throw ConfigError("U_apply requires t > tau >= 0");
  const double m = mass(h);
  if (std::abs(m) > 1e-6) {
    std::ostringstream os;
    os << "U_apply: int h = " << m << " must vanish within 1e-6";
    throw MassMismatchError(os.str());
  }
  const GridSpec& g = h.grid;
  const Field primitive = cumulative_integral(h);
  std::vector<double> weighted(g.n_points);
  for (std::size_t j = 0; j < g.n_points; ++j) weighted[j] = primitive.values[j] / eta(g.x(j), tau, p);

  const double dt = t - tau;
  const double dx = g.dx();
  const double norm = 1.0 / std::sqrt(4.0 * std::numbers::pi * dt);
  const auto reach = static_cast<std::ptrdiff_t>(std::ceil(12.0 * std::sqrt(dt) / dx));
  const auto n = static_cast<std::ptrdiff_t>(g.n_points);

  Field out(g);
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const double x = g.x(static_cast<std::size_t>(i));
    const double drift = 0.5 * p.beta * chi(x, t, p);
    double acc = 0.0;
    for (std::ptrdiff_t j = std::max<std::ptrdiff_t>(0, i - reach); j <= std::min(n - 1, i + reach); ++j) {
      const double s = x - g.x(static_cast<std::size_t>(j));
      const double G = norm * std::exp(-s * s / (4.0 * dt));
      acc += weighted[static_cast<std::size_t>(j)] * G * (drift - s / (2.0 * dt));
    }
    out.values[static_cast<std::size_t>(i)] = eta(x, t, p) * acc * dx;
  }
  return out;
}

}  // namespace bbmb
