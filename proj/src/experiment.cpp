#include "bbmb/experiment.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "bbmb/norms.hpp"
#include "bbmb/semigroup.hpp"

namespace bbmb {

using nlohmann::json;

bool Bundle::passed() const {
  for (const Check& c : checks) {
    if (c.applicable && !c.passed) return false;
  }
  return true;
}

Window fit_window(const std::vector<double>& t_samples) {
  if (t_samples.empty()) throw ConfigError("no sample times");
  const double t_max = t_samples.back();
  return {t_max / 50.0, t_max};
}

std::vector<Combo> combos_for(double alpha) {
  if (alpha < 2.0) return {Combo::Chi, Combo::ChiZ};
  if (alpha == 2.0) return {Combo::Chi, Combo::ChiZ, Combo::ChiV, Combo::ChiZV};
  return {Combo::Chi, Combo::ChiV};
}

double first_profile_exponent(double alpha, Norm norm, int l) {
  const double half_l = 0.5 * l;
  if (norm == Norm::L2) return alpha < 2.0 ? -0.5 * alpha + 0.25 - half_l : -0.75 - half_l;
  return alpha < 2.0 ? -0.5 * alpha - half_l : -1.0 - half_l;
}

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(6) << v;
  return os.str();
}

template <class F>
auto stage(const std::string& name, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const StageError&) {
    throw;
  } catch (const Error& e) {
    throw StageError(name, e);
  }
}

json window_json(const Window& w) { return json{{"t_min", w.t_min}, {"t_max", w.t_max}}; }

}  // namespace

json to_json(const RateFit& f) {
  return json{{"exponent", f.exponent},
              {"log_power", f.log_power},
              {"amplitude", f.amplitude},
              {"residual_rms", f.residual_rms},
              {"window", window_json(f.window)},
              {"samples", f.samples},
              {"theil_sen_exponent", f.theil_sen_exponent},
              {"theil_sen_amplitude", f.theil_sen_amplitude}};
}

json to_json(const Check& c) {
  json j{{"name", c.name}, {"value", c.value}, {"rule", c.rule}, {"applicable", c.applicable}, {"passed", c.passed}};
  if (c.window) j["window"] = window_json(*c.window);
  return j;
}

json to_json(const OptimalRateReport& r) {
  json band{{"r_lo", r.band.r_lo},
            {"r_hi", r.band.r_hi},
            {"ratio", r.band.ratio},
            {"ratio_max", kBandRatioMax},
            {"slope", r.band.slope},
            {"slope_tolerance", kBandSlopeTol},
            {"degenerate", r.band.degenerate},
            {"passed", r.band.passed}};
  band["earliest_passing_t_min"] = r.band.earliest_passing_t_min ? json(*r.band.earliest_passing_t_min) : json();
  const SecondOrderCheck& c = r.second_order;
  json second{{"description", c.description},
              {"combo", combo_name(c.combo)},
              {"scale", c.scale},
              {"log_power", c.log_power},
              {"slope", c.slope},
              {"threshold", c.threshold},
              {"passed", c.passed}};
  return json{{"alpha", r.alpha},      {"l", r.l},         {"window", window_json(r.window)},
              {"applicable", r.applicable}, {"violated", r.violated}, {"scale", r.scale},
              {"log_power", r.log_power}, {"band", band},    {"second_order", second},
              {"passed", r.passed}};
}

Bundle run_experiment(const Scenario& s, const ExperimentOptions& opts) {
  s.params.validate();
  if (s.t_samples.empty()) throw ConfigError("scenario has no sample times");
  if (s.t_samples.back() > validity_horizon(s.grid)) {
    std::ostringstream os;
    os << "scenario '" << s.name << "': t = " << s.t_samples.back() << " exceeds the validity window (L/8)^2 = "
       << validity_horizon(s.grid);
    throw DomainValidityError(os.str());
  }

  Bundle b;
  b.scenario = s;
  b.hash = scenario_hash(s);
  b.data = stage("initial-data", [&] { return make_initial_data(s); });
  const ModelParams& p = s.params;
  b.tails = stage("profiles", [&] {
    if (p.mass == 0.0 && s.data_kind == DataKind::Gaussian) return TailConstants{};
    return extract_c_alpha(r0_eval(b.data.u0, p), p);
  });
  b.profiles = stage("profiles", [&] { return constants(p, b.tails.plus, b.tails.minus); });
  b.trajectory = stage("solve", [&] { return integrate(b.data.u0, p, s.t_samples); });
  b.window = fit_window(s.t_samples);

  const Trajectory& tr = b.trajectory;
  b.checks.push_back({"mass_conservation", tr.mass_drift(), "<= 1e-08", std::nullopt, true, tr.mass_drift() <= 1e-8});
  b.checks.push_back({"resolution_high_band_fraction", tr.max_high_band_fraction(), "< 1e-06", std::nullopt, true,
                      tr.max_high_band_fraction() < 1e-6});
  if (p.beta == 0.0) {
    double worst = 0.0;
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
      worst = std::max(worst, max_abs_diff(tr.snapshots[i], T_apply(b.data.u0, tr.times[i], p)));
    }
    b.checks.push_back({"linear_oracle_vs_semigroup", worst, "<= 1e-10", std::nullopt, true, worst <= 1e-10});
  }

  ProfileCache cache(b.profiles);
  stage("asymptotics", [&] {
    const bool optimal_hypotheses = p.alpha < 2.0 ? b.profiles.has_mu0() && b.profiles.mu0 != 0.0 && p.mass != 0.0
                                                  : p.kappa() != 0.0 && p.mass != 0.0;
    for (int l : s.derivative_orders) {
      for (Norm n : s.norms) {
        for (Combo c : combos_for(p.alpha)) {
          SeriesResult r;
          r.series = error_series(tr, c, l, n, cache);
          r.scale = -first_profile_exponent(p.alpha, n, l);
          r.log_power = (p.alpha >= 2.0 && n == Norm::Linf) ? 1 : 0;
          try {
            r.fit = fit_rate(r.series, b.window, 0);
            if (r.log_power == 1) r.log_fit = fit_rate(r.series, b.window, 1);
            r.stability = window_stability(r.series, b.window, 0);
          } catch (const ConfigError& e) {
            r.fit_error = e.what();
          }
          if (c == Combo::Chi && p.beta != 0.0) {
            const double claimed = first_profile_exponent(p.alpha, n, l);
            Check k;
            k.name = "first_profile_rate_" + norm_name(n) + "_l" + std::to_string(l);
            k.window = b.window;
            if (!r.fit) {
              k.applicable = false;
              k.rule = "fit unavailable: " + r.fit_error;
            } else {
              k.value = r.fit->exponent;
              if (p.alpha < 2.0 && optimal_hypotheses) {
                k.rule = "in [" + fmt(claimed - 0.1) + ", " + fmt(claimed + 0.1) + "]";
                k.passed = std::abs(k.value - claimed) <= 0.1;
              } else {
                k.rule = "<= " + fmt(claimed + 0.1);
                k.passed = k.value <= claimed + 0.1;
              }
            }
            b.checks.push_back(k);
          }
          b.series.push_back(std::move(r));
        }
      }
      if (p.beta != 0.0) {
        OptimalRateReport rep;
        try {
          rep = optimal_rate_report(tr, cache, b.window, l);
        } catch (const ConfigError& e) {
          rep.alpha = p.alpha;
          rep.l = l;
          rep.window = b.window;
          rep.applicable = false;
          rep.violated.push_back(e.what());
        }
        b.checks.push_back({"optimal_rate_band_l" + std::to_string(l), rep.band.ratio,
                            "ratio <= 10 and |slope| <= 0.1", b.window, rep.applicable, rep.band.passed});
        const SecondOrderCheck& so = rep.second_order;
        b.checks.push_back({"second_profile_l" + std::to_string(l), so.slope, "slope <= " + fmt(so.threshold),
                            b.window, !so.description.empty(), so.passed});
        b.optimal.push_back(rep);
      }
    }
    return 0;
  });

  json& j = b.report;
  j["scenario"] = scenario_to_json(s);
  j["hash"] = b.hash;
  j["initial_data"] = json{{"mass", b.data.mass}, {"tail_bound_C", b.data.tail_bound}, {"tail_alpha", p.alpha},
                           {"l1", b.data.l1},     {"l2", b.data.l2},                 {"linf", b.data.linf},
                           {"h2", b.data.h2}};
  j["profiles"] = json{{"c_alpha_plus", b.profiles.c_alpha_plus},
                       {"c_alpha_minus", b.profiles.c_alpha_minus},
                       {"c_alpha_spread_plus", b.tails.spread_plus},
                       {"c_alpha_spread_minus", b.tails.spread_minus},
                       {"d", b.profiles.d},
                       {"d_error", b.profiles.d_error},
                       {"kappa", b.profiles.kappa},
                       {"mu0", b.profiles.has_mu0() ? json(b.profiles.mu0) : json()},
                       {"mu1", b.profiles.mu1}};
  double max_nyq = 0.0, dt_min = std::numeric_limits<double>::infinity();
  for (const StepStats& st : tr.step_stats) {
    max_nyq = std::max(max_nyq, st.max_nyquist);
    dt_min = std::min(dt_min, st.dt);
  }
  j["trajectory"] = json{{"times", tr.times},
                         {"mass_log", tr.mass_log},
                         {"mass_drift", tr.mass_drift()},
                         {"max_high_band_fraction", tr.max_high_band_fraction()},
                         {"max_nyquist_amplitude", max_nyq},
                         {"min_dt", std::isfinite(dt_min) ? json(dt_min) : json()},
                         {"halvings", tr.halvings}};
  json series = json::array();
  for (const SeriesResult& r : b.series) {
    json e{{"combo", combo_name(r.series.combo)}, {"norm", norm_name(r.series.norm)}, {"l", r.series.l}};
    e["fit"] = r.fit ? to_json(*r.fit) : json();
    e["log_fit"] = r.log_fit ? to_json(*r.log_fit) : json();
    if (r.stability) {
      e["window_stability"] = json{{"exponent_full", r.stability->exponent_full},
                                   {"exponent_shrunk", r.stability->exponent_shrunk},
                                   {"shrink_fraction", 0.1},
                                   {"tolerance", 0.05},
                                   {"stable", r.stability->stable}};
    } else {
      e["window_stability"] = json();
    }
    if (!r.fit_error.empty()) e["fit_error"] = r.fit_error;
    series.push_back(e);
  }
  j["series"] = series;
  json optimal = json::array();
  for (const auto& r : b.optimal) optimal.push_back(to_json(r));
  j["optimal_rate"] = optimal;
  json checks = json::array();
  for (const Check& c : b.checks) checks.push_back(to_json(c));
  j["checks"] = checks;
  j["passed"] = b.passed();

  if (opts.write_files) {
    b.dir = opts.out_root / b.hash;
    write_bundle(b, b.dir, opts.write_snapshots);
  }
  return b;
}

namespace {

void write_text(const std::filesystem::path& file, const std::string& text) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + file.string());
  out << text;
}

}  // namespace

void write_bundle(const Bundle& b, const std::filesystem::path& dir, bool snapshots) {
  std::filesystem::create_directories(dir / "series");
  write_text(dir / "report.json", b.report.dump(2) + "\n");
  for (const SeriesResult& r : b.series) {
    std::ostringstream os;
    os << std::setprecision(17) << "t,value,scaled\n";
    for (std::size_t i = 0; i < r.series.times.size(); ++i) {
      const double t = r.series.times[i];
      double scaled = r.series.values[i] * std::pow(1.0 + t, r.scale);
      if (r.log_power == 1) scaled /= std::log1p(t);
      os << t << ',' << r.series.values[i] << ',' << scaled << '\n';
    }
    const std::string name = combo_name(r.series.combo) + "_" + norm_name(r.series.norm) + "_l" +
                             std::to_string(r.series.l) + ".csv";
    write_text(dir / "series" / name, os.str());
  }
  if (!snapshots) return;
  std::filesystem::create_directories(dir / "snapshots");
  const Trajectory& tr = b.trajectory;
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    std::ostringstream os;
    os << std::setprecision(17) << "# t=" << tr.times[i] << "\nx,u\n";
    for (std::size_t j = 0; j < tr.grid.n_points; ++j) os << tr.grid.x(j) << ',' << tr.snapshots[i].values[j] << '\n';
    std::ostringstream name;
    name << std::setw(4) << std::setfill('0') << i << ".csv";
    write_text(dir / "snapshots" / name.str(), os.str());
  }
}

LoadedBundle load_bundle(const std::filesystem::path& dir) {
  std::ifstream in(dir / "report.json");
  if (!in) throw ConfigError("no report.json in " + dir.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("malformed report.json: " + std::string(e.what()));
  }
  LoadedBundle lb;
  lb.scenario = scenario_from_json(j.at("scenario"));
  const ModelParams& p = lb.scenario.params;
  lb.profiles = constants(p, j.at("profiles").at("c_alpha_plus").get<double>(),
                          j.at("profiles").at("c_alpha_minus").get<double>());
  Trajectory& tr = lb.trajectory;
  tr.params = p;
  tr.grid = lb.scenario.grid;
  const auto times = j.at("trajectory").at("times").get<std::vector<double>>();
  for (std::size_t i = 0; i < times.size(); ++i) {
    std::ostringstream name;
    name << std::setw(4) << std::setfill('0') << i << ".csv";
    std::ifstream snap(dir / "snapshots" / name.str());
    if (!snap) throw ConfigError("bundle has no snapshot " + name.str() + " (run simulate with snapshots)");
    Field f(tr.grid);
    std::string line;
    std::size_t k = 0;
    while (std::getline(snap, line)) {
      if (line.empty() || line[0] == '#' || line[0] == 'x') continue;
      const auto comma = line.find(',');
      if (comma == std::string::npos || k >= f.size()) throw ConfigError("malformed snapshot " + name.str());
      f.values[k++] = std::stod(line.substr(comma + 1));
    }
    if (k != f.size()) throw ConfigError("snapshot " + name.str() + " has the wrong length");
    tr.times.push_back(times[i]);
    tr.mass_log.push_back(mass(f));
    tr.snapshots.push_back(std::move(f));
  }
  return lb;
}

}  // namespace bbmb
