#include "bbmb/verification.hpp"

#include <cmath>
#include <fstream>
#include <iterator>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include <unistd.h>

#include "bbmb/norms.hpp"
#include "bbmb/profiles.hpp"
#include "bbmb/quadrature.hpp"
#include "bbmb/semigroup.hpp"
#include "bbmb/spectral.hpp"

namespace bbmb {

using nlohmann::json;

bool SuiteResult::passed() const {
  for (const auto& r : results) {
    if (!r.passed) return false;
  }
  return !results.empty();
}

json SuiteResult::to_json() const {
  json rs = json::array();
  for (const auto& r : results) {
    rs.push_back(json{{"criterion", r.criterion},
                      {"name", r.name},
                      {"value", r.value},
                      {"rule", r.rule},
                      {"passed", r.passed},
                      {"detail", r.detail}});
  }
  return json{{"suite", suite}, {"results", rs}, {"passed", passed()}};
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"identities",     "semigroup",      "oracles",        "rates",
                                                 "first-profile", "second-profile", "reproducibility"};
  return names;
}

std::vector<std::string> named_scenario_names() {
  return {"alpha15-main", "alpha15-r0", "alpha2-r0", "alpha3-r0", "lin-oracle"};
}

namespace {

std::vector<double> geometric(double a, double b, int n) {
  std::vector<double> t(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) t[static_cast<std::size_t>(i)] = a * std::pow(b / a, static_cast<double>(i) / (n - 1));
  t.back() = b;
  return t;
}

std::string num(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

CriterionResult at_most(const std::string& crit, const std::string& name, double value, double bound,
                        std::string detail = {}) {
  return {crit, name, value, "<= " + num(bound), std::isfinite(value) && value <= bound, std::move(detail)};
}

CriterionResult at_least(const std::string& crit, const std::string& name, double value, double bound,
                         std::string detail = {}) {
  return {crit, name, value, ">= " + num(bound), std::isfinite(value) && value >= bound, std::move(detail)};
}

CriterionResult within(const std::string& crit, const std::string& name, double value, double lo, double hi,
                       std::string detail = {}) {
  return {crit, name, value, "in [" + num(lo) + ", " + num(hi) + "]", value >= lo && value <= hi, std::move(detail)};
}

Field random_band_limited(const GridSpec& g, int modes, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> nd;
  Field f(g);
  for (int k = 1; k <= modes; ++k) {
    const double a = nd(rng);
    const double b = nd(rng);
    const double xi = std::numbers::pi * k / g.half_width;
    for (std::size_t j = 0; j < g.n_points; ++j) {
      f.values[j] += a * std::cos(xi * g.x(j)) + b * std::sin(xi * g.x(j));
    }
  }
  return f;
}

const SeriesResult& find_series(const Bundle& b, Combo c, Norm n, int l) {
  for (const auto& s : b.series) {
    if (s.series.combo == c && s.series.norm == n && s.series.l == l) return s;
  }
  throw ConfigError("bundle '" + b.scenario.name + "' has no series " + combo_name(c) + "/" + norm_name(n) + "/l" +
                    std::to_string(l));
}

std::string window_text(const Window& w) { return "t in [" + num(w.t_min) + ", " + num(w.t_max) + "]"; }

}  // namespace

Scenario named_scenario(const std::string& name) {
  Scenario s;
  s.name = name;
  s.grid = make_grid(400.0, 16384);
  s.t_samples = geometric(1.0, 1000.0, 32);
  s.params.beta = 1.0;
  s.params.gamma = 1.0;
  s.params.mass = 0.3;
  if (name == "alpha15-main") {
    s.params.alpha = 1.5;
    s.data_kind = DataKind::PowerTail;
    s.amplitude = 0.05;
  } else if (name == "alpha15-r0" || name == "alpha2-r0" || name == "alpha3-r0") {
    s.params.alpha = name == "alpha15-r0" ? 1.5 : (name == "alpha2-r0" ? 2.0 : 3.0);
    s.data_kind = DataKind::PrescribedR0;
    s.c_plus = 1.0;
    s.c_minus = -1.0;
  } else if (name == "lin-oracle") {
    s.params.beta = 0.0;
    s.params.alpha = 3.0;
    s.data_kind = DataKind::Gaussian;
    s.amplitude = 1.0;
    s.grid = make_grid(80.0, 1024);
    s.t_samples = geometric(1.0, 100.0, 32);
  } else {
    throw ConfigError("unknown named scenario '" + name + "'");
  }
  return s;
}

SuiteResult Verifier::run(const std::string& suite) {
  if (suite == "identities") return identities();
  if (suite == "semigroup") return semigroup();
  if (suite == "oracles") return oracles();
  if (suite == "rates") return rates();
  if (suite == "first-profile") return first_profile();
  if (suite == "second-profile") return second_profile();
  if (suite == "reproducibility") return reproducibility();
  throw ConfigError("unknown suite '" + suite + "'");
}

const Bundle& Verifier::bundle(const std::string& scenario) {
  auto it = bundles_.find(scenario);
  if (it == bundles_.end()) {
    ExperimentOptions opts;
    opts.write_files = false;
    it = bundles_.emplace(scenario, run_experiment(named_scenario(scenario), opts)).first;
  }
  return it->second;
}

SuiteResult Verifier::identities() {
  SuiteResult s{"identities", {}};
  const ModelParams unit{1.0, 1.0, 2.0, 0.3};
  s.results.push_back({"1", "kappa(beta=1, gamma=1) == 0.125", unit.kappa(), "== 0.125", unit.kappa() == 0.125, ""});

  const std::vector<ModelParams> sets = {{1.0, 1.0, 2.0, 0.3}, {1.0, 1.0, 2.0, -0.5}, {2.0, 0.5, 2.0, 0.8}};
  double v_forms = 0.0;
  double eta_quad = 0.0;
  double chi_mass = 0.0;
  for (const ModelParams& p : sets) {
    for (int i = 0; i <= 400; ++i) {
      const double x = -20.0 + 0.1 * i;
      v_forms = std::max(v_forms, std::abs(V_star(x, p) - V_star_derivative_form(x, p)));
    }
    for (int i = 0; i <= 80; ++i) {
      const double x = -20.0 + 0.5 * i;
      const auto q = integrate_adaptive([&](double y) { return chi_star(y, p); }, -60.0, x, 1e-14);
      eta_quad = std::max(eta_quad, std::abs(std::exp(0.5 * p.beta * q.value) - eta_star(x, p)));
    }
    for (double t : {0.0, 1.0, 10.0, 100.0}) {
      const double r = 60.0 * std::sqrt(1.0 + t);
      const auto q = integrate_adaptive([&](double x) { return chi(x, t, p); }, -r, r, 1e-14);
      chi_mass = std::max(chi_mass, std::abs(q.value - p.mass));
    }
  }
  s.results.push_back(at_most("1", "V_star product-rule form vs closed form, x in [-20, 20]", v_forms, 1e-10));

  double fm_first = 0.0;
  double fm_second = 0.0;
  for (double M : {0.3, -0.5, 1.0}) {
    const FmCheck c = fM_check({1.0, 1.0, 2.0, M});
    fm_first = std::max(fm_first, c.max_dev_first);
    fm_second = std::max(fm_second, c.max_dev_second);
  }
  s.results.push_back(at_most("1", "self-similar f_M == chi_star (beta=1)", fm_first, 1e-8));
  s.results.push_back(at_most("1", "second-order f~_M == -kappa d V_star (beta=1)", fm_second, 1e-8));
  s.results.push_back(at_most("1", "eta_star closed form vs quadrature of its exponent", eta_quad, 1e-8));
  s.results.push_back(at_most("1", "int chi(., t) == M at t in {0, 1, 10, 100}", chi_mass, 1e-8));
  return s;
}

SuiteResult Verifier::semigroup() {
  SuiteResult s{"semigroup", {}};
  const GridSpec g = make_grid(64.0, 1024);
  const Field f = random_band_limited(g, 40, 7);
  s.results.push_back(
      at_most("2", "helmholtz_inv spectral vs direct convolution (L-inf)", max_abs_diff(helmholtz_inv(f), helmholtz_inv_direct(f)), 1e-8));

  const ModelParams p{1.0, 1.0, 2.0, 0.3};
  const Field gauss = Field::sample(g, [](double x) { return std::exp(-x * x / 4.0) * (1.0 + 0.3 * x); });
  double semi = 0.0;
  for (auto [a, b] : {std::pair{0.7, 2.3}, std::pair{5.0, 11.0}, std::pair{40.0, 60.0}}) {
    semi = std::max(semi, max_abs_diff(T_apply(T_apply(gauss, a, p), b, p), T_apply(gauss, a + b, p)));
  }
  s.results.push_back(at_most("2", "T(t) T(s) f == T(s+t) f", semi, 1e-10));

  double mass_dev = 0.0;
  const double m0 = mass(gauss);
  for (double t : {0.5, 10.0, 100.0, 1000.0}) mass_dev = std::max(mass_dev, std::abs(mass(T_apply(gauss, t, p)) - m0));
  s.results.push_back(at_most("2", "mass preserved by T(t) (FFT round-off only)", mass_dev, 1e-13 * std::max(1.0, std::abs(m0))));

  const GridSpec gb = make_grid(40.0, 1024);
  const double h = 1e-3;
  auto chi_at = [&](double t) { return chi_field(gb, t, p); };
  Field chi_t = chi_at(1.0 - 2.0 * h) - chi_at(1.0 + 2.0 * h);
  chi_t += 8.0 * (chi_at(1.0 + h) - chi_at(1.0 - h));
  chi_t *= 1.0 / (12.0 * h);
  const Field c = chi_at(1.0);
  const Field cx = derivative(c, 1);
  const Field cxx = derivative(c, 2);
  Field residual = chi_t - cxx;
  for (std::size_t j = 0; j < gb.n_points; ++j) residual.values[j] += p.beta * c.values[j] * cx.values[j];
  s.results.push_back(at_most("2", "viscous Burgers residual of sampled chi at t = 1", lp_norm(residual, Norm::Linf), 1e-6));
  return s;
}

SuiteResult Verifier::oracles() {
  SuiteResult s{"oracles", {}};
  {
    const GridSpec g = make_grid(80.0, 1024);
    const ModelParams p{0.0, 1.0, 2.0, 0.0};
    const Field u0 = Field::sample(g, [](double x) { return 0.4 * std::exp(-x * x / 4.0) * (1.0 + 0.2 * x); });
    std::vector<double> ts = geometric(0.5, 100.0, 16);
    ts.insert(ts.begin(), 0.0);
    const Trajectory tr = integrate(u0, p, ts);
    double worst = 0.0;
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
      worst = std::max(worst, max_abs_diff(tr.snapshots[i], T_apply(u0, tr.times[i], p)));
    }
    s.results.push_back(at_most("3", "beta = 0 solver vs T_apply, t in [0, 100]", worst, 1e-10));
  }
  {
    const GridSpec g = make_grid(64.0, 1024);
    const ModelParams p{1.0, 1.0, 2.0, 0.5};
    const Field z0 = Field::sample(g, [](double x) { return -x * std::exp(-x * x / 2.0); });
    const Trajectory tr = solve_aux(z0, {}, p, {1.0, 4.0, 16.0});
    double worst = 0.0;
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
      worst = std::max(worst, max_abs_diff(tr.snapshots[i], U_apply(z0, tr.times[i], 0.0, p)));
    }
    s.results.push_back(at_most("3", "solve_aux (lambda = 0) vs U[z0](t, 0), t in {1, 4, 16}, M = 0.5", worst, 1e-4));
  }
  {
    const GridSpec g = make_grid(64.0, 1024);
    const ModelParams p{1.0, 1.0, 2.0, 0.0};
    const Field u0 = Field::sample(g, [](double x) { return 0.4 * std::exp(-x * x / 4.0) * (1.0 + x / 3.0); });
    const double dts[] = {0.4, 0.2, 0.1, 0.05};
    std::vector<Field> r;
    for (double dt : dts) {
      SolverOptions o;
      o.dt = dt;
      r.push_back(integrate(u0, p, {2.0}, o).snapshots[0]);
    }
    const double e1 = max_abs_diff(r[0], r[1]);
    const double e2 = max_abs_diff(r[1], r[2]);
    const double e3 = max_abs_diff(r[2], r[3]);
    const double order = std::min(std::log2(e1 / e2), std::log2(e2 / e3));
    s.results.push_back(at_least("3", "ETDRK4 self-convergence order (dt = 0.4 .. 0.05)", order, 3.5,
                                 "successive differences " + num(e1) + ", " + num(e2) + ", " + num(e3)));
  }
  {
    const Bundle& b = bundle("lin-oracle");
    double v = std::numeric_limits<double>::quiet_NaN();
    for (const Check& c : b.checks) {
      if (c.name == "linear_oracle_vs_semigroup") v = c.value;
    }
    s.results.push_back(at_most("3", "lin-oracle bundle: solver/semigroup cross-check", v, 1e-10));
  }
  return s;
}

SuiteResult Verifier::rates() {
  SuiteResult s{"rates", {}};
  const GridSpec g = make_grid(400.0, 4096);
  const ModelParams p{1.0, 1.0, 2.0, 0.0};
  const Field f = Field::sample(g, [](double x) { return std::exp(-x * x / 4.0); });
  const std::vector<double> ts = geometric(10.0, 1000.0, 20);
  for (int l : {0, 1}) {
    std::vector<double> v;
    for (double t : ts) v.push_back(TG_gap(f, t, p, l));
    const RateFit fit = fit_rate(ts, v, {10.0, 1000.0}, 0);
    const double c = -0.75 - 0.5 * l;
    s.results.push_back(within("4", "exponent of ||d^" + std::to_string(l) + " (T - G)(t) f||_2, Gaussian f",
                               fit.exponent, c - 0.1, c + 0.1, "t in [10, 1000], residual rms " + num(fit.residual_rms)));
  }
  return s;
}

SuiteResult Verifier::first_profile() {
  SuiteResult s{"first-profile", {}};
  for (int l : {0, 1}) {
    const std::string crit = l == 0 ? "5" : "7";
    const std::string suffix = " (l = " + std::to_string(l) + ")";
    {
      const Bundle& b = bundle("alpha15-main");
      const SeriesResult& r = find_series(b, Combo::Chi, Norm::Linf, l);
      const double c = -0.75 - 0.5 * l;
      const double e = r.fit ? r.fit->exponent : std::numeric_limits<double>::quiet_NaN();
      s.results.push_back(within(crit, "alpha = 1.5 power tail: exponent of ||u - chi||_inf" + suffix, e, c - 0.1,
                                 c + 0.1, window_text(b.window)));
    }
    {
      const Bundle& b = bundle("alpha3-r0");
      const SeriesResult& r = find_series(b, Combo::Chi, Norm::Linf, l);
      const double e = r.fit ? r.fit->exponent : std::numeric_limits<double>::quiet_NaN();
      s.results.push_back(at_most(crit, "alpha = 3: exponent of ||u - chi||_inf" + suffix, e, -0.9 - 0.5 * l,
                                  window_text(b.window)));
    }
  }
  return s;
}

const Trajectory& Verifier::second_aux() {
  if (!second_aux_) {
    const ModelParams p{1.0, 1.0, 2.0, 0.5};
    second_aux_ = solve_second_aux(p, make_grid(200.0, 4096), geometric(1.0, 400.0, 24));
  }
  return *second_aux_;
}

SuiteResult Verifier::second_profile() {
  SuiteResult s{"second-profile", {}};
  for (int l : {0, 1}) {
    const std::string crit = l == 0 ? "6" : "7";
    const std::string suffix = " (l = " + std::to_string(l) + ")";
    const double hl = 0.5 * l;
    {
      const Bundle& b = bundle("alpha15-r0");
      const ErrorSeries& first = find_series(b, Combo::Chi, Norm::Linf, l).series;
      const BandTest band = band_test(first, b.window, 0.75 + hl, 0);
      s.results.push_back(at_most(crit, "alpha = 1.5, c = (1, -1): band ratio of (1+t)^" + num(0.75 + hl) +
                                            " ||u - chi||_inf" + suffix,
                                  band.ratio, kBandRatioMax,
                                  window_text(b.window) + ", Theil-Sen slope " + num(band.slope)));
      const ErrorSeries& second = find_series(b, Combo::ChiZ, Norm::Linf, l).series;
      s.results.push_back(at_most(crit, "alpha = 1.5: slope of (1+t)^" + num(0.75 + hl) + " ||u - chi - Z||_inf" + suffix,
                                  scaled_slope(second, b.window, 0.75 + hl, 0), kStrictDecaySlope,
                                  window_text(b.window)));
    }
    {
      const Bundle& b = bundle("alpha3-r0");
      const ErrorSeries& es = find_series(b, Combo::ChiV, Norm::Linf, l).series;
      s.results.push_back(at_most(crit, "alpha = 3: slope of (1+t)^" + num(1.0 + hl) + " ||u - chi - V||_inf" + suffix,
                                  scaled_slope(es, b.window, 1.0 + hl, 0), kBoundedSlope, window_text(b.window)));
    }
    {
      const Bundle& b = bundle("alpha2-r0");
      const ErrorSeries& es = find_series(b, Combo::ChiZV, Norm::Linf, l).series;
      s.results.push_back(at_most(crit,
                                  "alpha = 2: slope of (1+t)^" + num(1.0 + hl) + "/log(1+t) ||u - chi - Z - V||_inf" + suffix,
                                  scaled_slope(es, b.window, 1.0 + hl, 1), kStrictDecaySlope, window_text(b.window)));
    }
    {
      const Trajectory& tr = second_aux();
      const ProfileSet ps = constants(tr.params, 0.0, 0.0);
      ErrorSeries es{Combo::ChiV, Norm::Linf, l, {}, {}};
      for (std::size_t i = 0; i < tr.times.size(); ++i) {
        es.times.push_back(tr.times[i]);
        es.values.push_back(measured_norm(tr.snapshots[i], V_field(tr.grid, tr.times[i], ps), l, Norm::Linf));
      }
      const Window w{10.0, 400.0};
      s.results.push_back(at_most(crit, "second auxiliary problem: slope of (1+t)^" + num(1.0 + hl) + " ||v - V||_inf" + suffix,
                                  scaled_slope(es, w, 1.0 + hl, 0), kBoundedSlope,
                                  "beta = 1, gamma = 1, M = 0.5, " + window_text(w)));
    }
  }
  return s;
}

SuiteResult Verifier::reproducibility() {
  SuiteResult s{"reproducibility", {}};
  {
    Verifier a, b;
    const std::string first = a.identities().to_json().dump() + a.semigroup().to_json().dump();
    const std::string second = b.identities().to_json().dump() + b.semigroup().to_json().dump();
    s.results.push_back({"8", "identities + semigroup suite JSON identical across reruns", first == second ? 0.0 : 1.0,
                         "identical bytes", first == second, std::to_string(first.size()) + " bytes"});
  }
  {
    const auto root = std::filesystem::temp_directory_path() / ("bbmb-repro-" + std::to_string(::getpid()));
    auto read = [](const std::filesystem::path& f) {
      std::ifstream in(f, std::ios::binary);
      return std::string(std::istreambuf_iterator<char>(in), {});
    };
    std::string reports[2];
    for (int k = 0; k < 2; ++k) {
      ExperimentOptions opts;
      opts.out_root = root / std::to_string(k);
      opts.write_snapshots = false;
      const Bundle b = run_experiment(named_scenario("lin-oracle"), opts);
      reports[k] = read(b.dir / "report.json");
    }
    std::filesystem::remove_all(root);
    const bool same = !reports[0].empty() && reports[0] == reports[1];
    s.results.push_back({"8", "lin-oracle report.json byte-identical across reruns", same ? 0.0 : 1.0,
                         "identical bytes", same, std::to_string(reports[0].size()) + " bytes"});
  }
  return s;
}

}  // namespace bbmb
