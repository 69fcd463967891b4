#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "bbmb/error.hpp"
#include "bbmb/norms.hpp"
#include "bbmb/profiles.hpp"
#include "bbmb/quadrature.hpp"
#include "bbmb/scenario.hpp"
#include "bbmb/spectral.hpp"

using namespace bbmb;

namespace {
constexpr double kPi = std::numbers::pi;

// Composite Simpson on a fine uniform mesh; independent of the library quadrature.
template <class F>
double simpson(F&& f, double a, double b, int n) {
  if (n % 2) ++n;
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}
}  // namespace

TEST(Params, Validation) {
  EXPECT_THROW((ModelParams{1.0, 0.0, 1.0, 0.1}).validate(), ConfigError);
  EXPECT_THROW((ModelParams{NAN, 0.0, 2.0, 0.1}).validate(), ConfigError);
  EXPECT_NO_THROW((ModelParams{0.0, 1.0, 1.5, 0.1}).validate());
  EXPECT_EQ((ModelParams{1.0, 1.0, 2.0, 0.0}).kappa(), 0.125);
  EXPECT_DOUBLE_EQ((ModelParams{2.0, 0.5, 2.0, 0.0}).kappa(), 0.25);
}

TEST(Profiles, ZeroMassIsTrivial) {
  const ModelParams p{1.0, 1.0, 2.0, 0.0};
  for (double x : {-5.0, 0.0, 3.0}) {
    EXPECT_EQ(chi_star(x, p), 0.0);
    EXPECT_DOUBLE_EQ(eta_star(x, p), 1.0);
  }
}

TEST(Profiles, LinearLimitIsHeatKernel) {
  const ModelParams p{0.0, 0.0, 2.0, 0.7};
  for (double x : {-4.0, 0.0, 1.5}) {
    EXPECT_NEAR(chi_star(x, p), 0.7 * std::exp(-x * x / 4.0) / std::sqrt(4.0 * kPi), 1e-15);
  }
}

TEST(Profiles, ChiCarriesMassAndSolvesBurgersScaling) {
  for (double M : {-0.8, 0.3, 1.5}) {
    const ModelParams p{1.0, 0.0, 2.0, M};
    for (double t : {0.0, 3.0, 50.0}) {
      const double s = std::sqrt(1.0 + t);
      EXPECT_NEAR(simpson([&](double x) { return chi(x, t, p); }, -40.0 * s, 40.0 * s, 20000), M, 1e-10);
    }
  }
}

TEST(Profiles, EtaStarIsExponentOfChiPrimitive) {
  const ModelParams p{1.5, 0.0, 2.0, 0.6};
  for (double x : {-10.0, -1.0, 0.0, 2.5, 10.0}) {
    const double I = simpson([&](double y) { return chi_star(y, p); }, -40.0, x, 40000);
    EXPECT_NEAR(eta_star(x, p), std::exp(0.5 * p.beta * I), 1e-9);
  }
  EXPECT_NEAR(eta_star(40.0, p), std::exp(0.5 * p.beta * p.mass), 1e-12);
}

TEST(Profiles, VStarFormsAgree) {
  const ModelParams p{1.0, 1.0, 2.0, -0.4};
  for (double x = -20.0; x <= 20.0; x += 0.25) EXPECT_NEAR(V_star(x, p), V_star_derivative_form(x, p), 1e-12);
}

TEST(Profiles, ConstantsAgainstIndependentQuadrature) {
  const ModelParams p{1.0, 1.0, 1.5, 0.3};
  const ProfileSet ps = constants(p, 1.0, -1.0);
  EXPECT_EQ(ps.kappa, 0.125);
  const double d = simpson(
      [&](double y) {
        const double c = chi_star(y, p);
        return c * c * c / eta_star(y, p);
      },
      -40.0, 40.0, 20000);
  EXPECT_NEAR(ps.d, d, 1e-12);
  ASSERT_TRUE(ps.has_mu0());
  const double mu0 = 2.0 * std::tgamma(0.75);  // c+ + c- = 0 removes the second term
  EXPECT_NEAR(ps.mu0, mu0, 1e-14);
  EXPECT_NEAR(ps.mu1, -0.125 * d, 1e-14);
  EXPECT_FALSE(constants({1.0, 1.0, 2.0, 0.3}, 1.0, 1.0).has_mu0());
}

TEST(Profiles, VProfileVanishesAtStartAndWithoutDispersion) {
  const ProfileSet ps = constants({1.0, 1.0, 2.0, 0.5}, 0.0, 0.0);
  EXPECT_EQ(V_profile(0.3, 0.0, ps), 0.0);
  EXPECT_NE(V_profile(0.3, 2.0, ps), 0.0);
  const ProfileSet flat = constants({1.0, 0.0, 2.0, 0.5}, 0.0, 0.0);
  EXPECT_EQ(V_profile(0.3, 2.0, flat), 0.0);
}

TEST(Profiles, ZRejectsBadArguments) {
  const ProfileSet ps = constants({1.0, 1.0, 1.5, 0.3}, 1.0, -1.0);
  EXPECT_THROW(Z_eval(0.0, 0.0, ps), ConfigError);
  const ProfileSet steep = constants({1.0, 1.0, 3.0, 0.3}, 1.0, -1.0);
  EXPECT_THROW(Z_eval(0.0, 1.0, steep), ConfigError);
  const ProfileSet zero = constants({1.0, 1.0, 1.5, 0.3}, 0.0, 0.0);
  EXPECT_EQ(Z_eval(1.0, 4.0, zero), 0.0);
}

TEST(Profiles, ZAtZeroMassMatchesDirectQuadrature) {
  // eta = 1: Z = int c(y) (1+|y|)^{1-alpha} d/dx G(x-y, t) dy
  const ProfileSet ps = constants({1.0, 1.0, 1.5, 0.0}, 0.7, -0.4);
  const double t = 9.0;
  for (double x : {-6.0, 0.0, 2.0, 11.0}) {
    auto side = [&](double c) {
      return [&, c](double y) {
        const double s = x - y;
        return c * std::pow(1.0 + std::abs(y), -0.5) * (-s / (2.0 * t)) * std::exp(-s * s / (4.0 * t)) /
               std::sqrt(4.0 * kPi * t);
      };
    };
    const double ref = simpson(side(-0.4), x - 60.0, 0.0, 400000) + simpson(side(0.7), 0.0, x + 60.0, 400000);
    EXPECT_NEAR(Z_eval(x, t, ps), ref, 1e-11);
  }
}

TEST(Profiles, ZIntegratesToBoundaryFlux) {
  // Z = d/dx [eta (G * rho)], so its integral over the box is the boundary flux
  const ModelParams p{1.0, 1.0, 1.5, 0.3};
  const ProfileSet ps = constants(p, 1.0, -1.0);
  const GridSpec g = make_grid(200.0, 4096);
  const double t = 25.0;
  auto smoothed = [&](double x) {
    auto f = [&](double y) {
      const double r = (y >= 0 ? 1.0 : -1.0) / std::sqrt(1.0 + std::abs(y));
      return r * std::exp(-(x - y) * (x - y) / (4.0 * t)) / std::sqrt(4.0 * kPi * t);
    };
    return simpson(f, x - 60.0, x + 60.0, 200000);
  };
  const double flux = eta(200.0, t, p) * smoothed(200.0) - eta(-200.0, t, p) * smoothed(-200.0);
  const Field Z = Z_field(g, t, ps);
  EXPECT_NEAR(mass(Z), flux, 1e-3 * std::abs(flux));
}

TEST(Profiles, R0OfChiStarIsZero) {
  const ModelParams p{1.0, 1.0, 2.0, 0.4};
  const GridSpec g = make_grid(60.0, 2048);
  const Field u0 = chi_field(g, 0.0, p);
  const Field r0 = r0_eval(u0, p);
  EXPECT_LT(lp_norm(r0, Norm::Linf), 1e-12);
  Field shifted = u0;
  for (double& v : shifted.values) v += 1e-3;
  EXPECT_THROW(r0_eval(shifted, p), MassMismatchError);
}

TEST(Profiles, SelfSimilarFormsAtUnitBeta) {
  for (double M : {0.3, -0.9}) {
    const FmCheck c = fM_check({1.0, 1.0, 2.0, M});
    EXPECT_LT(c.max_dev_first, 1e-12);
    // compare relative to the size of the second-order profile itself
    const ProfileSet ps = constants({1.0, 1.0, 2.0, M}, 0.0, 0.0);
    EXPECT_LT(c.max_dev_second, 1e-9 * std::abs(ps.kappa * ps.d));
  }
  EXPECT_THROW(fM_check({2.0, 1.0, 2.0, 0.3}), ConfigError);
}

TEST(Profiles, TailConstantsOfPrescribedData) {
  Scenario s;
  s.params = {1.0, 1.0, 1.5, 0.3};
  s.data_kind = DataKind::PrescribedR0;
  s.c_plus = 1.0;
  s.c_minus = 1.0;
  s.grid = make_grid(400.0, 8192);
  s.t_samples = {1.0};
  const InitialData d = make_initial_data(s);
  const TailConstants c = extract_c_alpha(r0_eval(d.u0, s.params), s.params);
  EXPECT_NEAR(c.plus, 1.0, 0.02);
  EXPECT_NEAR(c.minus, 1.0, 0.02);
}
