#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>

#include <gtest/gtest.h>

#include "bbmb/error.hpp"
#include "bbmb/experiment.hpp"
#include "bbmb/norms.hpp"
#include "bbmb/profiles.hpp"
#include "bbmb/scenario.hpp"
#include "bbmb/verification.hpp"

using namespace bbmb;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

json base_doc() {
  return json{{"name", "t"}, {"beta", 1.0}, {"gamma", 1.0}, {"alpha", 2.0}, {"mass", 0.3},
              {"data_kind", "gaussian"}, {"amplitude", 1.0}, {"L", 80.0}, {"N", 1024}};
}

std::string slurp(const fs::path& f) {
  std::ifstream in(f, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

class TempDir {
 public:
  TempDir() : path_(fs::temp_directory_path() / ("bbmb-test-" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "-" +
                                                  ::testing::UnitTest::GetInstance()->current_test_info()->name())) {
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

Scenario tailed(DataKind kind, double alpha) {
  Scenario s;
  s.params = {1.0, 1.0, alpha, 0.3};
  s.data_kind = kind;
  s.amplitude = 0.05;
  s.c_plus = 1.0;
  s.c_minus = -1.0;
  s.grid = make_grid(400.0, 8192);
  s.t_samples = default_t_samples(s.grid);
  return s;
}

}  // namespace

TEST(ScenarioJson, ParsesAndFillsDefaults) {
  const Scenario s = scenario_from_json(base_doc());
  EXPECT_EQ(s.name, "t");
  EXPECT_EQ(s.data_kind, DataKind::Gaussian);
  EXPECT_EQ(s.grid, make_grid(80.0, 1024));
  ASSERT_EQ(s.t_samples.size(), 32u);
  EXPECT_DOUBLE_EQ(s.t_samples.front(), 1.0);
  EXPECT_NEAR(s.t_samples.back(), 100.0, 1e-12);
  for (std::size_t i = 1; i < s.t_samples.size(); ++i) {
    EXPECT_NEAR(s.t_samples[i] / s.t_samples[i - 1], s.t_samples[1] / s.t_samples[0], 1e-12);
  }
  EXPECT_EQ(s.norms.size(), 2u);
  EXPECT_EQ(s.derivative_orders, (std::vector<int>{0, 1}));
}

TEST(ScenarioJson, RejectsBadDocuments) {
  json j = base_doc();
  j["dt"] = 0.1;
  EXPECT_THROW(scenario_from_json(j), ConfigError);
  j = base_doc();
  j.erase("data_kind");
  EXPECT_THROW(scenario_from_json(j), ConfigError);
  j = base_doc();
  j["data_kind"] = "triangle";
  EXPECT_THROW(scenario_from_json(j), ConfigError);
  j = base_doc();
  j["N"] = 1000;
  EXPECT_THROW(scenario_from_json(j), ConfigError);
  j = base_doc();
  j["beta"] = "one";
  EXPECT_THROW(scenario_from_json(j), ConfigError);
  j = base_doc();
  j["norms"] = {"l3"};
  EXPECT_THROW(scenario_from_json(j), ConfigError);
  j = base_doc();
  j["data_kind"] = "custom_table";
  EXPECT_THROW(scenario_from_json(j), ConfigError);
  EXPECT_THROW(scenario_from_json(json::array()), ConfigError);
  EXPECT_THROW(load_scenario("/nonexistent/scenario.json"), ConfigError);
}

TEST(ScenarioJson, CanonicalRoundTripAndHash) {
  const Scenario s = scenario_from_json(base_doc());
  const Scenario back = scenario_from_json(scenario_to_json(s));
  EXPECT_EQ(scenario_to_json(back).dump(), scenario_to_json(s).dump());
  EXPECT_EQ(scenario_hash(back), scenario_hash(s));
  EXPECT_EQ(scenario_hash(s).size(), 16u);
  json j = base_doc();
  j["mass"] = 0.31;
  EXPECT_NE(scenario_hash(scenario_from_json(j)), scenario_hash(s));
}

TEST(InitialDataTest, GaussianCarriesMass) {
  const InitialData d = make_initial_data(scenario_from_json(base_doc()));
  EXPECT_NEAR(d.mass, 0.3, 1e-14);
  EXPECT_NEAR(d.linf, 0.3 / std::sqrt(4.0 * M_PI), 1e-12);
}

TEST(InitialDataTest, GaussianWithZeroAmplitude) {
  json j = base_doc();
  j["amplitude"] = 0.0;
  EXPECT_THROW(make_initial_data(scenario_from_json(j)), ConfigError);
  j["mass"] = 0.0;
  const InitialData d = make_initial_data(scenario_from_json(j));
  EXPECT_EQ(d.linf, 0.0);
}

TEST(InitialDataTest, PowerTailPrimitiveIdentities) {
  for (double alpha : {1.5, 2.0, 3.0}) {
    const double m = power_bump_mass(alpha);
    EXPECT_NEAR(2.0 * power_tail_integral(0.0, alpha), m, 1e-13);
    // far tail of (1+y^2)^{-alpha/2} behaves like y^{1-alpha} / (alpha - 1)
    const double x = 1e4;
    EXPECT_NEAR(power_tail_integral(x, alpha) * (alpha - 1.0) * std::pow(x, alpha - 1.0), 1.0, 1e-6);
  }
  EXPECT_NEAR(power_bump_mass(2.0), M_PI, 1e-14);
  EXPECT_NEAR(power_tail_integral(1.0, 2.0), 0.25 * M_PI, 1e-14);
  EXPECT_THROW(power_tail_integral(-1.0, 2.0), ConfigError);
}

TEST(InitialDataTest, PowerTailBoundMassAndTails) {
  const Scenario s = tailed(DataKind::PowerTail, 1.5);
  const InitialData d = make_initial_data(s);
  EXPECT_NEAR(d.mass, 0.3, 1e-8);
  EXPECT_GT(d.tail_bound, 0.0);
  EXPECT_LT(d.tail_bound, 1.0);
  const GridSpec& g = s.grid;
  for (std::size_t j = 0; j < g.n_points; ++j) {
    const double ax = std::abs(g.x(j));
    if (ax > 0.8 * g.half_width) continue;
    EXPECT_LE(std::abs(d.u0.values[j]), d.tail_bound * std::pow(1.0 + ax, -1.5) * (1.0 + 1e-12));
  }
  // r0 tails: -a e^{-beta M/2} / (alpha - 1) on the right, a / (alpha - 1) on the left
  const TailConstants c = extract_c_alpha(r0_eval(d.u0, s.params), s.params);
  EXPECT_NEAR(c.plus, -0.1 * std::exp(-0.15), 0.003);
  EXPECT_NEAR(c.minus, 0.1, 0.003);
}

TEST(InitialDataTest, PrescribedTailsRoundTrip) {
  for (double alpha : {1.5, 2.0, 3.0}) {
    const Scenario s = tailed(DataKind::PrescribedR0, alpha);
    const InitialData d = make_initial_data(s);
    const TailConstants c = extract_c_alpha(r0_eval(d.u0, s.params), s.params);
    EXPECT_NEAR(c.plus, 1.0, 0.02);
    EXPECT_NEAR(c.minus, -1.0, 0.02);
  }
}

TEST(InitialDataTest, TailedDataNeedsRoom) {
  Scenario s = tailed(DataKind::PrescribedR0, 1.5);
  s.grid = make_grid(30.0, 1024);
  EXPECT_THROW(make_initial_data(s), ConfigError);
  s.grid = make_grid(400.0, 1024);
  EXPECT_THROW(make_initial_data(s), ConfigError);
}

TEST(InitialDataTest, CustomTable) {
  TempDir tmp;
  const GridSpec g = make_grid(20.0, 64);
  const fs::path table = tmp.path() / "u0.csv";
  {
    std::ofstream out(table);
    out << "x,u\n";
    out.precision(17);
    for (std::size_t j = 0; j < g.n_points; ++j) out << g.x(j) << "," << 0.2 * std::exp(-g.x(j) * g.x(j)) << "\n";
  }
  json j = base_doc();
  j["data_kind"] = "custom_table";
  j["L"] = 20.0;
  j["N"] = 64;
  j["table_file"] = "u0.csv";
  j["mass"] = 0.2 * std::sqrt(M_PI);
  const Scenario s = scenario_from_json(j, tmp.path());
  const InitialData d = make_initial_data(s);
  EXPECT_NEAR(d.linf, 0.2, 1e-15);
  j["mass"] = 0.5;
  EXPECT_THROW(make_initial_data(scenario_from_json(j, tmp.path())), MassMismatchError);
  j["N"] = 128;
  j["mass"] = 0.2 * std::sqrt(M_PI);
  EXPECT_THROW(make_initial_data(scenario_from_json(j, tmp.path())), ConfigError);
}

TEST(Experiment, RefusesBeyondValidityWindow) {
  Scenario s = scenario_from_json(base_doc());
  s.t_samples = {1.0, 10.0, 200.0};
  EXPECT_THROW(run_experiment(s, {"unused", false, false}), DomainValidityError);
}

TEST(Experiment, FitWindowAndCombos) {
  const Window w = fit_window({0.0, 1.0, 10.0, 1000.0});
  EXPECT_DOUBLE_EQ(w.t_min, 20.0);
  EXPECT_DOUBLE_EQ(w.t_max, 1000.0);
  EXPECT_EQ(combos_for(1.5), (std::vector<Combo>{Combo::Chi, Combo::ChiZ}));
  EXPECT_EQ(combos_for(3.0), (std::vector<Combo>{Combo::Chi, Combo::ChiV}));
  EXPECT_EQ(first_profile_exponent(1.5, Norm::Linf, 1), -1.25);
}

TEST(Experiment, LinearOracleBundle) {
  TempDir tmp;
  ExperimentOptions opts;
  opts.out_root = tmp.path();
  const Scenario s = named_scenario("lin-oracle");
  const Bundle b = run_experiment(s, opts);
  EXPECT_EQ(b.dir, tmp.path() / scenario_hash(s));
  bool seen = false;
  for (const Check& c : b.checks) {
    if (c.name == "linear_oracle_vs_semigroup") {
      seen = true;
      EXPECT_LE(c.value, 1e-10);
      EXPECT_TRUE(c.passed);
    }
    if (c.name == "mass_conservation") EXPECT_TRUE(c.passed);
  }
  EXPECT_TRUE(seen);
  EXPECT_TRUE(fs::exists(b.dir / "report.json"));
  EXPECT_FALSE(fs::is_empty(b.dir / "series"));
  EXPECT_FALSE(fs::is_empty(b.dir / "snapshots"));

  const LoadedBundle lb = load_bundle(b.dir);
  EXPECT_EQ(scenario_hash(lb.scenario), b.hash);
  ASSERT_EQ(lb.trajectory.snapshots.size(), b.trajectory.snapshots.size());
  for (std::size_t i = 0; i < lb.trajectory.snapshots.size(); ++i) {
    EXPECT_LT(max_abs_diff(lb.trajectory.snapshots[i], b.trajectory.snapshots[i]), 1e-15);
  }

  const std::string first = slurp(b.dir / "report.json");
  const Bundle again = run_experiment(s, opts);
  EXPECT_EQ(slurp(again.dir / "report.json"), first);
}

TEST(Experiment, LoadBundleErrors) {
  TempDir tmp;
  EXPECT_THROW(load_bundle(tmp.path()), ConfigError);
  std::ofstream(tmp.path() / "report.json") << "{ not json";
  EXPECT_THROW(load_bundle(tmp.path()), ConfigError);
}

TEST(Experiment, NamedScenariosAreValid) {
  for (const std::string& name : named_scenario_names()) {
    const Scenario s = named_scenario(name);
    EXPECT_LE(s.t_samples.back(), validity_horizon(s.grid)) << name;
    EXPECT_NO_THROW(s.params.validate()) << name;
  }
  EXPECT_THROW(named_scenario("nope"), ConfigError);
}
