#include <atomic>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include <glob.h>

#include "CLI11.hpp"

#include "bbmb/asymptotics.hpp"
#include "bbmb/error.hpp"
#include "bbmb/experiment.hpp"
#include "bbmb/profiles.hpp"
#include "bbmb/semigroup.hpp"
#include "bbmb/verification.hpp"

namespace {

using namespace bbmb;

int code(ExitCode c) { return static_cast<int>(c); }

int cmd_profiles(double beta, double gamma, double mass, double alpha, double c_plus, double c_minus,
                 const std::string& table_out, double range, int points) {
  const ModelParams p{beta, gamma, alpha, mass};
  p.validate();
  const ProfileSet ps = constants(p, c_plus, c_minus);
  std::cout << std::setprecision(12);
  std::cout << "kappa  " << ps.kappa << "\n";
  std::cout << "d      " << ps.d << "  (quadrature error " << ps.d_error << ")\n";
  if (ps.has_mu0()) {
    std::cout << "mu0    " << ps.mu0 << "\n";
  } else {
    std::cout << "mu0    undefined (alpha >= 2)\n";
  }
  std::cout << "mu1    " << ps.mu1 << "\n";
  if (!table_out.empty()) {
    std::ofstream out(table_out);
    if (!out) throw ConfigError("cannot write " + table_out);
    out << std::setprecision(17) << "x,chi_star,eta_star,V_star\n";
    for (int i = 0; i < points; ++i) {
      const double x = -range + 2.0 * range * i / (points - 1);
      out << x << ',' << chi_star(x, p) << ',' << eta_star(x, p) << ',' << V_star(x, p) << '\n';
    }
    std::cout << "table written to " << table_out << "\n";
  }
  return code(ExitCode::ok);
}

void print_checks(const Bundle& b) {
  for (const Check& c : b.checks) {
    const char* tag = !c.applicable ? "N/A " : (c.passed ? "PASS" : "FAIL");
    std::cout << "  " << tag << "  " << c.name << " = " << c.value << "  (" << c.rule << ")\n";
  }
}

int cmd_simulate(const std::string& config, const std::string& out, bool snapshots) {
  const Scenario s = load_scenario(config);
  ExperimentOptions opts;
  opts.out_root = out;
  opts.write_snapshots = snapshots;
  const Bundle b = run_experiment(s, opts);
  std::cout << "scenario " << s.name << " -> " << b.dir.string() << "\n";
  print_checks(b);
  return code(b.passed() ? ExitCode::ok : ExitCode::check_failure);
}

int cmd_verify(const std::string& suite, const std::string& report) {
  Verifier v;
  std::vector<std::string> suites;
  if (suite == "all") {
    suites = suite_names();
  } else {
    suites.push_back(suite);
  }
  bool ok = true;
  nlohmann::json all = nlohmann::json::array();
  for (const auto& name : suites) {
    const SuiteResult r = v.run(name);
    for (const auto& c : r.results) {
      std::cout << (c.passed ? "PASS" : "FAIL") << " [" << c.criterion << "] " << r.suite << ": " << c.name
                << " = " << c.value << " (" << c.rule << ")";
      if (!c.detail.empty()) std::cout << " ; " << c.detail;
      std::cout << "\n";
    }
    ok = ok && r.passed();
    all.push_back(r.to_json());
  }
  if (!report.empty()) {
    std::ofstream out(report, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + report);
    out << all.dump(2) << "\n";
  }
  return code(ok ? ExitCode::ok : ExitCode::check_failure);
}

int cmd_rates(const std::string& dir, const std::string& combo, const std::string& norm, int l, double t_min,
              double t_max, int log_power) {
  const LoadedBundle lb = load_bundle(dir);
  const ErrorSeries es = error_series(lb.trajectory, parse_combo(combo), l, parse_norm(norm), lb.profiles);
  Window w = fit_window(lb.scenario.t_samples);
  if (t_min > 0.0) w.t_min = t_min;
  if (t_max > 0.0) w.t_max = t_max;
  const RateFit f = fit_rate(es, w, log_power);
  std::cout << std::setprecision(8);
  std::cout << "series     " << combo << " " << norm << " l=" << l << "\n";
  std::cout << "window     [" << f.window.t_min << ", " << f.window.t_max << "], " << f.samples << " samples\n";
  std::cout << "exponent   " << f.exponent << (log_power ? "  (after dividing by log(1+t))" : "") << "\n";
  std::cout << "amplitude  " << f.amplitude << "\n";
  std::cout << "residual   " << f.residual_rms << "\n";
  std::cout << "theil-sen  " << f.theil_sen_exponent << "\n";
  return code(ExitCode::ok);
}

int cmd_sweep(const std::string& pattern, int jobs, const std::string& out, bool snapshots) {
  glob_t g{};
  const int rc = ::glob(pattern.c_str(), 0, nullptr, &g);
  std::vector<std::string> files;
  if (rc == 0) {
    for (std::size_t i = 0; i < g.gl_pathc; ++i) files.emplace_back(g.gl_pathv[i]);
  }
  globfree(&g);
  if (files.empty()) throw ConfigError("no configs match " + pattern);

  std::vector<int> status(files.size(), 0);
  std::atomic<std::size_t> next{0};
  std::mutex io;
  auto worker = [&] {
    for (std::size_t i = next++; i < files.size(); i = next++) {
      std::string line;
      try {
        const Scenario s = load_scenario(files[i]);
        ExperimentOptions opts;
        opts.out_root = out;
        opts.write_snapshots = snapshots;
        const Bundle b = run_experiment(s, opts);
        status[i] = code(b.passed() ? ExitCode::ok : ExitCode::check_failure);
        line = std::string(b.passed() ? "PASS " : "FAIL ") + files[i] + " -> " + b.dir.string();
      } catch (const Error& e) {
        status[i] = code(e.code());
        line = "ERROR " + files[i] + ": " + e.what();
      }
      std::lock_guard<std::mutex> lock(io);
      std::cout << line << std::endl;
    }
  };
  std::vector<std::thread> pool;
  const int n = std::max(1, std::min<int>(jobs, static_cast<int>(files.size())));
  for (int k = 0; k < n; ++k) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  int worst = 0;
  for (int s : status) worst = std::max(worst, s);
  return worst;
}

int cmd_kernel_table(const std::string& op, double gamma, double t, double xi_max, int points,
                     const std::string& out_file) {
  if (points < 2) throw ConfigError("need at least two points");
  std::ofstream file;
  if (!out_file.empty()) {
    file.open(out_file);
    if (!file) throw ConfigError("cannot write " + out_file);
  }
  std::ostream& out = out_file.empty() ? std::cout : file;
  out << std::setprecision(17) << "xi,re,im\n";
  for (int i = 0; i < points; ++i) {
    const double xi = -xi_max + 2.0 * xi_max * i / (points - 1);
    std::complex<double> m;
    if (op == "T") {
      m = T_multiplier(xi, t, gamma);
    } else if (op == "G") {
      m = G_multiplier(xi, t);
    } else if (op == "helmholtz") {
      m = helmholtz_multiplier(xi);
    } else if (op == "T-G") {
      m = T_multiplier(xi, t, gamma) - G_multiplier(xi, t);
    } else {
      throw ConfigError("unknown operator '" + op + "'");
    }
    out << xi << ',' << m.real() << ',' << m.imag() << '\n';
  }
  return code(ExitCode::ok);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Asymptotic profiles and long-time numerics for the BBM-Burgers equation"};
  app.require_subcommand(1);

  double beta = 1.0, gamma = 0.0, mass = 0.0, alpha = 2.0, c_plus = 0.0, c_minus = 0.0, range = 20.0;
  int points = 401;
  std::string table_out;
  auto* profiles = app.add_subcommand("profiles", "tabulate chi_star, eta_star, V_star and the constants");
  profiles->add_option("--beta", beta, "nonlinearity coefficient")->capture_default_str();
  profiles->add_option("--gamma", gamma, "dispersion coefficient")->capture_default_str();
  profiles->add_option("--mass", mass, "mass M")->capture_default_str();
  profiles->add_option("--alpha", alpha, "tail exponent (> 1)")->capture_default_str();
  profiles->add_option("--c-plus", c_plus, "tail constant at +infinity")->capture_default_str();
  profiles->add_option("--c-minus", c_minus, "tail constant at -infinity")->capture_default_str();
  profiles->add_option("--table-out", table_out, "CSV file for the profile table");
  profiles->add_option("--range", range, "table covers [-range, range]")->capture_default_str();
  profiles->add_option("--points", points, "table rows")->capture_default_str()->check(CLI::Range(2, 1000000));

  std::string config, out = "out";
  bool no_snapshots = false;
  auto* simulate = app.add_subcommand("simulate", "run one scenario and write its bundle");
  simulate->add_option("--config", config, "scenario JSON")->required();
  simulate->add_option("--out", out, "output root")->capture_default_str();
  simulate->add_flag("--no-snapshots", no_snapshots, "skip snapshots/*.csv");

  std::string suite, report;
  auto* verify = app.add_subcommand("verify", "run an acceptance suite");
  verify->add_option("--suite", suite, "suite name or 'all'")->required()->check([](const std::string& s) {
    if (s == "all") return std::string();
    for (const auto& n : suite_names()) {
      if (n == s) return std::string();
    }
    return "unknown suite " + s;
  });
  verify->add_option("--report", report, "write suite results as JSON");

  std::string bundle_dir, combo = "chi", norm = "linf";
  int l = 0, log_power = 0;
  double t_min = 0.0, t_max = 0.0;
  auto* rates = app.add_subcommand("rates", "fit a decay exponent from a bundle");
  rates->add_option("--bundle", bundle_dir, "bundle directory")->required();
  rates->add_option("--combo", combo, "chi, chi+Z, chi+V or chi+Z+V")->capture_default_str();
  rates->add_option("--norm", norm, "l2 or linf")->capture_default_str()->check(CLI::IsMember({"l2", "linf"}));
  rates->add_option("--l", l, "derivative order")->capture_default_str()->check(CLI::Range(0, 4));
  rates->add_option("--t-min", t_min, "window start (default t_max/50)");
  rates->add_option("--t-max", t_max, "window end (default last sample)");
  rates->add_option("--log-power", log_power, "divide by log(1+t) before fitting")->check(CLI::Range(0, 1));

  std::string pattern;
  int jobs = 1;
  auto* sweep = app.add_subcommand("sweep", "run many scenarios concurrently");
  sweep->add_option("--configs", pattern, "glob of scenario files")->required();
  sweep->add_option("--jobs", jobs, "worker threads")->capture_default_str()->check(CLI::Range(1, 1024));
  sweep->add_option("--out", out, "output root")->capture_default_str();
  sweep->add_flag("--no-snapshots", no_snapshots, "skip snapshots/*.csv");

  std::string op = "T", kernel_out;
  double t = 1.0, xi_max = 10.0;
  int kpoints = 201;
  auto* kernel = app.add_subcommand("kernel-table", "dump Fourier multiplier values as CSV");
  kernel->add_option("--operator", op, "T, G, helmholtz or T-G")->capture_default_str();
  kernel->add_option("--gamma", gamma, "dispersion coefficient")->capture_default_str();
  kernel->add_option("--t", t, "time")->capture_default_str();
  kernel->add_option("--xi-max", xi_max, "table covers [-xi_max, xi_max]")->capture_default_str();
  kernel->add_option("--points", kpoints, "rows")->capture_default_str()->check(CLI::Range(2, 10000000));
  kernel->add_option("--out", kernel_out, "CSV file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : code(ExitCode::config_error);
  }

  try {
    if (*profiles) return cmd_profiles(beta, gamma, mass, alpha, c_plus, c_minus, table_out, range, points);
    if (*simulate) return cmd_simulate(config, out, !no_snapshots);
    if (*verify) return cmd_verify(suite, report);
    if (*rates) return cmd_rates(bundle_dir, combo, norm, l, t_min, t_max, log_power);
    if (*sweep) return cmd_sweep(pattern, jobs, out, !no_snapshots);
    if (*kernel) return cmd_kernel_table(op, gamma, t, xi_max, kpoints, kernel_out);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return code(ExitCode::config_error);
  }
  return code(ExitCode::ok);
}
