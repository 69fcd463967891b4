#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "bbmb/error.hpp"
#include "bbmb/fft.hpp"
#include "bbmb/grid.hpp"
#include "bbmb/norms.hpp"
#include "bbmb/quadrature.hpp"
#include "bbmb/spectral.hpp"
#include "bbmb/taper.hpp"

using namespace bbmb;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST(Grid, RejectsBadSizes) {
  EXPECT_THROW(make_grid(10.0, 1000), ConfigError);
  EXPECT_THROW(make_grid(10.0, 8), ConfigError);
  EXPECT_THROW(make_grid(0.0, 64), ConfigError);
  EXPECT_THROW(make_grid(-1.0, 64), ConfigError);
  EXPECT_NO_THROW(make_grid(10.0, 16));
}

TEST(Grid, NodesAndWavenumbers) {
  const GridSpec g = make_grid(8.0, 32);
  EXPECT_DOUBLE_EQ(g.dx(), 0.5);
  EXPECT_DOUBLE_EQ(g.x(0), -8.0);
  EXPECT_DOUBLE_EQ(g.x(31), 7.5);
  EXPECT_EQ(g.mode(1), 1);
  EXPECT_EQ(g.mode(16), -16);
  EXPECT_EQ(g.mode(31), -1);
  EXPECT_DOUBLE_EQ(g.wavenumber(3), 3.0 * kPi / 8.0);
  EXPECT_EQ(g.half_size(), 17u);
}

TEST(Grid, FieldArithmeticRequiresSameGrid) {
  Field a(make_grid(8.0, 32));
  Field b(make_grid(8.0, 64));
  EXPECT_THROW(a += b, ConfigError);
}

TEST(Fft, RoundTrip) {
  const GridSpec g = make_grid(10.0, 128);
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Field f(g);
  for (double& v : f.values) v = u(rng);
  const Field back = from_spectral(to_spectral(f));
  EXPECT_LT(max_abs_diff(f, back), 1e-14);
}

TEST(Spectral, DerivativeOfTrigPolynomialIsExact) {
  const GridSpec g = make_grid(kPi, 64);
  const Field f = Field::sample(g, [](double x) { return std::sin(3.0 * x) + 0.5 * std::cos(7.0 * x); });
  const Field d1 = derivative(f, 1);
  const Field d2 = derivative(f, 2);
  const Field e1 = Field::sample(g, [](double x) { return 3.0 * std::cos(3.0 * x) - 3.5 * std::sin(7.0 * x); });
  const Field e2 = Field::sample(g, [](double x) { return -9.0 * std::sin(3.0 * x) - 24.5 * std::cos(7.0 * x); });
  EXPECT_LT(max_abs_diff(d1, e1), 1e-12);
  EXPECT_LT(max_abs_diff(d2, e2), 1e-11);
  EXPECT_THROW(derivative(f, -1), ConfigError);
}

TEST(Spectral, CumulativeIntegralAnchoredAtLeftEdge) {
  const GridSpec g = make_grid(kPi, 64);
  // int_{-pi}^x (0.25 + cos 2y) dy = 0.25 (x + pi) + sin(2x)/2
  const Field f = Field::sample(g, [](double x) { return 0.25 + std::cos(2.0 * x); });
  const Field P = cumulative_integral(f);
  const Field exact = Field::sample(g, [](double x) { return 0.25 * (x + kPi) + 0.5 * std::sin(2.0 * x); });
  EXPECT_LT(max_abs_diff(P, exact), 1e-13);
}

TEST(Spectral, HighBandFraction) {
  const GridSpec g = make_grid(kPi, 64);
  const Field low = Field::sample(g, [](double x) { return std::cos(4.0 * x); });
  const Field high = Field::sample(g, [](double x) { return std::cos(4.0 * x) + std::cos(25.0 * x); });
  EXPECT_LT(high_band_energy_fraction(low), 1e-28);
  EXPECT_NEAR(high_band_energy_fraction(high), 0.5, 1e-12);
}

TEST(Norms, KnownValues) {
  const GridSpec g = make_grid(kPi, 256);
  const Field f = Field::sample(g, [](double x) { return std::sin(x); });
  EXPECT_NEAR(lp_norm(f, Norm::L2), std::sqrt(kPi), 1e-12);
  EXPECT_NEAR(lp_norm(f, Norm::L1), 4.0, 1e-3);
  EXPECT_NEAR(lp_norm(f, Norm::Linf), 1.0, 1e-3);
  EXPECT_NEAR(mass(f), 0.0, 1e-14);
  EXPECT_NEAR(lp_norm_window(f, Norm::Linf, 0.5), std::sin(0.5), 2e-2);
}

TEST(Taper, SmoothStepAndCutoff) {
  EXPECT_EQ(smooth_step(-0.5), 0.0);
  EXPECT_EQ(smooth_step(1.5), 1.0);
  EXPECT_NEAR(smooth_step(0.5), 0.5, 1e-12);
  for (double s = 0.0; s < 1.0; s += 0.01) EXPECT_LE(smooth_step(s), smooth_step(s + 0.01));
  EXPECT_EQ(box_cutoff(0.0, 100.0), 1.0);
  EXPECT_EQ(box_cutoff(79.9, 100.0), 1.0);
  EXPECT_EQ(box_cutoff(-100.0, 100.0), 0.0);
  EXPECT_GT(box_cutoff(90.0, 100.0), 0.0);
  EXPECT_LT(box_cutoff(90.0, 100.0), 1.0);
}

TEST(Quadrature, PanelsOnGaussian) {
  const double v = integrate_panels([](double y) { return std::exp(-y * y); }, -12.0, 12.0, 1.0);
  EXPECT_NEAR(v, std::sqrt(kPi), 1e-14);
}

TEST(Quadrature, PanelsGradeTowardsKink) {
  auto f = [](double y) { return std::exp(-std::abs(y)); };
  EXPECT_NEAR(integrate_panels(f, -30.0, 30.0, 4.0, 0.0), 2.0 * (1.0 - std::exp(-30.0)), 1e-13);
}

TEST(Quadrature, AdaptiveInfiniteRange) {
  const auto r = integrate_adaptive([](double y) { return 1.0 / (1.0 + y * y); }, -INFINITY, INFINITY, 1e-12);
  EXPECT_NEAR(r.value, kPi, 1e-10);
}

TEST(Quadrature, AdaptiveReportsFailure) {
  auto jump = [](double y) { return y < 1.0 / 3.0 ? 0.0 : 1.0 / std::sqrt(y - 1.0 / 3.0); };
  EXPECT_THROW(integrate_adaptive(jump, 0.0, 1.0, 1e-15), QuadratureError);
}
