#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "bbmb/asymptotics.hpp"
#include "bbmb/error.hpp"
#include "bbmb/norms.hpp"
#include "bbmb/semigroup.hpp"
#include "bbmb/spectral.hpp"

using namespace bbmb;

namespace {
constexpr double kPi = std::numbers::pi;

// Random trigonometric polynomial with modes up to k_max.
Field random_band_limited(const GridSpec& g, int k_max, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<double> a(k_max + 1), b(k_max + 1);
  for (int k = 0; k <= k_max; ++k) {
    a[k] = n(rng);
    b[k] = n(rng);
  }
  return Field::sample(g, [&](double x) {
    double s = 0.0;
    for (int k = 0; k <= k_max; ++k) {
      const double w = kPi * k / g.half_width;
      s += a[k] * std::cos(w * x) + b[k] * std::sin(w * x);
    }
    return s / std::sqrt(k_max + 1.0);
  });
}

Field gaussian(const GridSpec& g, double center, double width) {
  return Field::sample(g, [=](double x) { return std::exp(-(x - center) * (x - center) / (width * width)); });
}

const ModelParams kDispersive{1.0, 1.0, 2.0, 0.0};
}  // namespace

TEST(Semigroup, TAtZeroIsIdentity) {
  const GridSpec g = make_grid(20.0, 256);
  const Field f = random_band_limited(g, 30, 1);
  EXPECT_LT(max_abs_diff(T_apply(f, 0.0, kDispersive), f), 1e-13);
  EXPECT_LT(max_abs_diff(G_apply(f, 0.0), f), 1e-13);
}

TEST(Semigroup, RejectsNegativeTime) {
  const GridSpec g = make_grid(20.0, 64);
  Field f(g);
  EXPECT_THROW(T_apply(f, -1.0, kDispersive), ConfigError);
  EXPECT_THROW(G_apply(f, -0.1), ConfigError);
}

TEST(Semigroup, MultiplierSymmetryAndClamp) {
  for (double xi : {0.1, 0.7, 3.0, 40.0}) {
    for (double t : {0.5, 10.0, 1e5}) {
      const auto m = T_multiplier(xi, t, 0.8);
      const auto mm = T_multiplier(-xi, t, 0.8);
      EXPECT_NEAR(std::abs(m - std::conj(mm)), 0.0, 1e-15);
      EXPECT_LE(std::abs(m), 1.0);
      EXPECT_TRUE(std::isfinite(m.real()) && std::isfinite(m.imag()));
    }
  }
  EXPECT_EQ(T_multiplier(0.0, 1e9, 1.0), std::complex<double>(1.0, 0.0));
  EXPECT_EQ(T_multiplier(2.0, 3.0, 1.0, true).imag(), 0.0);
}

TEST(Semigroup, MassIsPreserved) {
  const GridSpec g = make_grid(40.0, 512);
  const Field f = gaussian(g, 3.0, 2.0) + 0.3 * random_band_limited(g, 20, 2);
  for (double t : {0.5, 5.0, 80.0}) {
    EXPECT_NEAR(mass(T_apply(f, t, kDispersive)), mass(f), 1e-12 * std::max(1.0, lp_norm(f, Norm::L1)));
  }
}

TEST(Semigroup, SemigroupProperty) {
  const GridSpec g = make_grid(30.0, 512);
  const Field f = random_band_limited(g, 60, 4);
  const ModelParams p{1.0, 0.7, 2.0, 0.0};
  const Field two_steps = T_apply(T_apply(f, 1.3, p), 2.4, p);
  EXPECT_LT(max_abs_diff(two_steps, T_apply(f, 3.7, p)), 1e-10);
  EXPECT_LT(max_abs_diff(G_apply(G_apply(f, 0.4), 0.9), G_apply(f, 1.3)), 1e-10);
}

TEST(Semigroup, MultipliersCommute) {
  const GridSpec g = make_grid(25.0, 256);
  const Field f = random_band_limited(g, 50, 5);
  const double t = 1.7;
  EXPECT_LT(max_abs_diff(T_apply(G_apply(f, t), t, kDispersive), G_apply(T_apply(f, t, kDispersive), t)), 1e-10);
  EXPECT_LT(max_abs_diff(T_apply(helmholtz_inv(f), t, kDispersive), helmholtz_inv(T_apply(f, t, kDispersive))),
            1e-10);
  EXPECT_LT(max_abs_diff(G_apply(helmholtz_inv(f), t), helmholtz_inv(G_apply(f, t))), 1e-10);
}

TEST(Semigroup, DecayBoundWithCalibratedConstant) {
  const GridSpec g = make_grid(200.0, 4096);
  const Field f = gaussian(g, 0.0, 1.0);
  const double l1 = lp_norm(f, Norm::L1);
  for (int l : {0, 1}) {
    const double fl2 = lp_norm(derivative(f, l), Norm::L2);
    auto lhs = [&](double t) { return lp_norm(derivative(T_apply(f, t, kDispersive), l), Norm::L2); };
    const double e = 0.25 + 0.5 * l;
    // C from the algebraic term alone at t = 1
    const double C = lhs(1.0) / (std::pow(2.0, -e) * l1);
    for (double t : {1.0, 10.0, 100.0, 1000.0}) {
      const double rhs = C * std::pow(1.0 + t, -e) * l1 + std::exp(-0.5 * t) * fl2;
      EXPECT_LE(lhs(t), rhs * (1.0 + 1e-12)) << "l=" << l << " t=" << t;
    }
  }
}

TEST(Semigroup, HeatFlowOfGaussianIsGaussian) {
  const GridSpec g = make_grid(60.0, 1024);
  const double s0 = 0.5;
  auto heat = [](double x, double s) { return std::exp(-x * x / (4.0 * s)) / std::sqrt(4.0 * kPi * s); };
  const Field f = Field::sample(g, [&](double x) { return heat(x, s0); });
  for (double t : {0.5, 2.0, 10.0}) {
    const Field exact = Field::sample(g, [&](double x) { return heat(x, s0 + t); });
    EXPECT_LT(max_abs_diff(G_apply(f, t), exact), 1e-8);
  }
}

TEST(Semigroup, HeatFlowMaximumPrinciple) {
  const GridSpec g = make_grid(40.0, 1024);
  Field f = gaussian(g, -5.0, 2.0) - 0.7 * gaussian(g, 4.0, 1.5) + 0.4 * gaussian(g, 10.0, 3.0);
  const auto [lo, hi] = std::minmax_element(f.values.begin(), f.values.end());
  for (double t : {0.1, 1.0, 10.0}) {
    const Field h = G_apply(f, t);
    for (double v : h.values) {
      EXPECT_GE(v, *lo - 1e-12);
      EXPECT_LE(v, *hi + 1e-12);
    }
  }
}

TEST(Semigroup, GapOfLowModesWithoutDispersion) {
  const GridSpec g = make_grid(400.0, 256);
  const Field f = Field::sample(g, [&](double x) { return std::cos(kPi * x / g.half_width); });
  const ModelParams p{1.0, 0.0, 2.0, 0.0};
  EXPECT_LT(TG_gap(f, 1.0, p), 1e-3 * lp_norm(f, Norm::L2));
  EXPECT_EQ(TG_gap(Field(g), 3.0, kDispersive), 0.0);
}

TEST(Semigroup, GapDecayExponent) {
  const GridSpec g = make_grid(400.0, 4096);
  const Field f = gaussian(g, 0.0, 1.0);
  std::vector<double> ts, l0, l1;
  for (int i = 0; i < 16; ++i) {
    const double t = 10.0 * std::pow(100.0, i / 15.0);
    ts.push_back(t);
    l0.push_back(TG_gap(f, t, kDispersive, 0));
    l1.push_back(TG_gap(f, t, kDispersive, 1));
  }
  const RateFit r0 = fit_rate(ts, l0, {10.0, 1000.0}, 0);
  const RateFit r1 = fit_rate(ts, l1, {10.0, 1000.0}, 0);
  EXPECT_GE(r0.exponent, -0.85);
  EXPECT_LE(r0.exponent, -0.65);
  EXPECT_GE(r1.exponent, -1.35);
  EXPECT_LE(r1.exponent, -1.15);
}

TEST(Helmholtz, CosineIsEigenfunction) {
  const GridSpec g = make_grid(10.0, 256);
  const double k = 5.0 * kPi / g.half_width;
  const Field f = Field::sample(g, [&](double x) { return std::cos(k * x); });
  const Field expected = Field::sample(g, [&](double x) { return std::cos(k * x) / (1.0 + k * k); });
  EXPECT_LT(max_abs_diff(helmholtz_inv(f), expected), 1e-14);
}

TEST(Helmholtz, DualImplementationsAgree) {
  const GridSpec g = make_grid(60.0, 2048);
  for (unsigned seed : {7u, 8u}) {
    const Field f = random_band_limited(g, 200, seed);
    EXPECT_LT(max_abs_diff(helmholtz_inv(f), helmholtz_inv_direct(f)), 1e-8);
  }
}

TEST(Helmholtz, ContractionAndPositivity) {
  const GridSpec g = make_grid(30.0, 512);
  const Field f = random_band_limited(g, 80, 9);
  EXPECT_LE(lp_norm(helmholtz_inv(f), Norm::L2), lp_norm(f, Norm::L2));
  Field pos = gaussian(g, -4.0, 0.5) + gaussian(g, 6.0, 3.0);
  for (double& v : pos.values) v = v * v;
  const Field out = helmholtz_inv(pos);
  EXPECT_GE(*std::min_element(out.values.begin(), out.values.end()), -1e-12);
}

TEST(UOperator, ZeroInputGivesZero) {
  const GridSpec g = make_grid(40.0, 512);
  const Field u = U_apply(Field(g), 2.0, 0.5, {1.0, 1.0, 2.0, 0.4});
  for (double v : u.values) EXPECT_EQ(v, 0.0);
}

TEST(UOperator, ReducesToHeatFlowAtZeroMass) {
  // eta = 1: integrating by parts turns U[h] into G(t - tau) * h
  const GridSpec g = make_grid(60.0, 2048);
  const Field h = Field::sample(g, [](double x) { return x * std::exp(-x * x / 2.0); });
  const ModelParams p{1.0, 1.0, 2.0, 0.0};
  for (double t : {1.0, 4.0}) {
    EXPECT_LT(max_abs_diff(U_apply(h, t, 0.0, p), G_apply(h, t)), 1e-6);
  }
  EXPECT_LT(max_abs_diff(U_apply(h, 3.0, 1.0, p), G_apply(h, 2.0)), 1e-6);
}

TEST(UOperator, HasZeroIntegral) {
  const GridSpec g = make_grid(80.0, 2048);
  const Field h = Field::sample(g, [](double x) { return (x - 1.0) * std::exp(-(x - 1.0) * (x - 1.0)); });
  const Field u = U_apply(h, 5.0, 1.0, {1.0, 1.0, 1.5, 0.6});
  EXPECT_LT(std::abs(mass(u)), 1e-7);
}

TEST(UOperator, RejectsBadArguments) {
  const GridSpec g = make_grid(40.0, 512);
  const ModelParams p{1.0, 1.0, 2.0, 0.4};
  const Field h = Field::sample(g, [](double x) { return x * std::exp(-x * x); });
  EXPECT_THROW(U_apply(h, 1.0, 1.0, p), ConfigError);
  EXPECT_THROW(U_apply(h, 1.0, 2.0, p), ConfigError);
  EXPECT_THROW(U_apply(h, 1.0, -0.5, p), ConfigError);
  const Field bump = gaussian(g, 0.0, 1.0);
  EXPECT_THROW(U_apply(bump, 2.0, 0.0, p), MassMismatchError);
}
