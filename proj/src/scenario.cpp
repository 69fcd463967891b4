#include "bbmb/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>

#include <boost/math/special_functions/beta.hpp>

#include "bbmb/error.hpp"
#include "bbmb/profiles.hpp"
#include "bbmb/solver.hpp"
#include "bbmb/spectral.hpp"
#include "bbmb/taper.hpp"

namespace bbmb {

using nlohmann::json;

std::string data_kind_name(DataKind k) {
  switch (k) {
    case DataKind::Gaussian: return "gaussian";
    case DataKind::PowerTail: return "power_tail";
    case DataKind::PrescribedR0: return "prescribed_r0";
    case DataKind::CustomTable: return "custom_table";
  }
  return "gaussian";
}

DataKind parse_data_kind(const std::string& s) {
  if (s == "gaussian") return DataKind::Gaussian;
  if (s == "power_tail") return DataKind::PowerTail;
  if (s == "prescribed_r0") return DataKind::PrescribedR0;
  if (s == "custom_table") return DataKind::CustomTable;
  throw ConfigError("unknown data_kind '" + s + "'");
}

std::vector<double> default_t_samples(const GridSpec& g) {
  const double t_max = validity_horizon(g);
  std::vector<double> t(32);
  const double ratio = std::log(t_max);
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = std::exp(ratio * static_cast<double>(i) / 31.0);
  t.back() = t_max;
  return t;
}

namespace {

const std::vector<std::string> kKeys = {"name", "beta", "gamma", "alpha", "mass", "data_kind", "amplitude",
                                        "c_plus", "c_minus", "L", "N", "t_samples", "norms",
                                        "derivative_orders", "table_file"};

template <class T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("scenario key '") + key + "': " + e.what());
  }
}

}  // namespace

Scenario scenario_from_json(const json& j, const std::filesystem::path& base_dir) {
  if (!j.is_object()) throw ConfigError("scenario must be a JSON object");
  for (const auto& item : j.items()) {
    if (std::find(kKeys.begin(), kKeys.end(), item.key()) == kKeys.end()) {
      throw ConfigError("unknown scenario key '" + item.key() + "'");
    }
  }
  if (!j.contains("data_kind")) throw ConfigError("scenario needs a data_kind");
  Scenario s;
  s.name = get_or<std::string>(j, "name", s.name);
  s.params.beta = get_or(j, "beta", s.params.beta);
  s.params.gamma = get_or(j, "gamma", s.params.gamma);
  s.params.alpha = get_or(j, "alpha", s.params.alpha);
  s.params.mass = get_or(j, "mass", s.params.mass);
  s.params.validate();
  s.data_kind = parse_data_kind(get_or<std::string>(j, "data_kind", ""));
  s.amplitude = get_or(j, "amplitude", s.amplitude);
  s.c_plus = get_or(j, "c_plus", s.c_plus);
  s.c_minus = get_or(j, "c_minus", s.c_minus);
  s.grid = make_grid(get_or(j, "L", s.grid.half_width), get_or<std::size_t>(j, "N", s.grid.n_points));
  s.t_samples = get_or(j, "t_samples", default_t_samples(s.grid));
  if (j.contains("norms")) {
    s.norms.clear();
    for (const auto& n : get_or<std::vector<std::string>>(j, "norms", {})) {
      if (n == "l2") s.norms.push_back(Norm::L2);
      else if (n == "linf") s.norms.push_back(Norm::Linf);
      else throw ConfigError("norms must be 'l2' or 'linf', got '" + n + "'");
    }
  }
  s.derivative_orders = get_or(j, "derivative_orders", s.derivative_orders);
  for (int l : s.derivative_orders) {
    if (l < 0 || l > 4) throw ConfigError("derivative orders must lie in 0..4");
  }
  if (j.contains("table_file")) {
    std::filesystem::path p = get_or<std::string>(j, "table_file", "");
    if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
    s.table_file = p.string();
  }
  if (s.data_kind == DataKind::CustomTable && s.table_file.empty()) {
    throw ConfigError("custom_table scenarios need a table_file");
  }
  return s;
}

Scenario load_scenario(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("cannot open scenario file " + file.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("malformed scenario " + file.string() + ": " + e.what());
  }
  return scenario_from_json(j, file.parent_path());
}

json scenario_to_json(const Scenario& s) {
  json j;
  j["name"] = s.name;
  j["beta"] = s.params.beta;
  j["gamma"] = s.params.gamma;
  j["alpha"] = s.params.alpha;
  j["mass"] = s.params.mass;
  j["data_kind"] = data_kind_name(s.data_kind);
  j["amplitude"] = s.amplitude;
  j["c_plus"] = s.c_plus;
  j["c_minus"] = s.c_minus;
  j["L"] = s.grid.half_width;
  j["N"] = s.grid.n_points;
  j["t_samples"] = s.t_samples;
  std::vector<std::string> norms;
  for (Norm n : s.norms) norms.push_back(n == Norm::L2 ? "l2" : "linf");
  j["norms"] = norms;
  j["derivative_orders"] = s.derivative_orders;
  if (!s.table_file.empty()) j["table_file"] = s.table_file;
  return j;
}

std::string scenario_hash(const Scenario& s) {
  const std::string text = scenario_to_json(s).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

double power_tail_integral(double x, double alpha) {
  if (x < 0.0) throw ConfigError("power_tail_integral needs x >= 0");
  // y = sqrt(1/w - 1) turns the tail into (1/2) B(1/(1+x^2); (alpha-1)/2, 1/2)
  const double w = 1.0 / (1.0 + x * x);
  return 0.5 * boost::math::beta(0.5 * (alpha - 1.0), 0.5, w);
}

double power_bump_mass(double alpha) {
  return std::sqrt(std::numbers::pi) * std::tgamma(0.5 * (alpha - 1.0)) / std::tgamma(0.5 * alpha);
}

namespace {

Field gaussian_data(const Scenario& s) {
  const GridSpec& g = s.grid;
  const double M = s.params.mass;
  if (s.amplitude == 0.0) {
    if (M != 0.0) throw ConfigError("gaussian data with amplitude 0 cannot carry mass M != 0");
    return Field(g);
  }
  Field u = Field::sample(g, [&](double x) { return s.amplitude * std::exp(-x * x / 4.0); });
  const double m = mass(u);
  u *= M / m;
  return u;
}

void require_tail_room(const Scenario& s) {
  // the tail estimator reads |x| in [0.5 L, 0.7 L] and the data must be in its
  // power-law regime (|x| >= 10) there
  if (0.5 * s.grid.half_width < 20.0) {
    throw ConfigError("box too small to resolve the power tail: need L >= 40");
  }
  if (s.grid.dx() > 0.5) throw ConfigError("grid too coarse for tailed data: need dx <= 0.5");
}

Field with_chi_star(const GridSpec& g, const ModelParams& p, Field perturbation) {
  for (std::size_t j = 0; j < g.n_points; ++j) perturbation.values[j] += chi_star(g.x(j), p);
  return perturbation;
}

Field power_tail_data(const Scenario& s) {
  require_tail_room(s);
  const GridSpec& g = s.grid;
  const double alpha = s.params.alpha;
  const double a = s.amplitude;
  const double m = power_bump_mass(alpha);
  auto primitive = [&](double x) {
    const double bump = x <= 0.0 ? power_tail_integral(-x, alpha) : m - power_tail_integral(x, alpha);
    const double heat = 0.5 * std::erfc(-x / 2.0);
    return a * (bump - m * heat);
  };
  const Field P = Field::sample(g, [&](double x) { return primitive(x) * box_cutoff(x, g.half_width); });
  return with_chi_star(g, s.params, derivative(P, 1));
}

Field prescribed_r0_data(const Scenario& s) {
  require_tail_room(s);
  const GridSpec& g = s.grid;
  const ModelParams& p = s.params;
  auto rho = [&](double x) {
    const double ax = std::abs(x);
    const double c = x >= 0.0 ? s.c_plus : s.c_minus;
    return c * std::pow(1.0 + ax, 1.0 - p.alpha) * smooth_step((ax - 2.0) / 8.0);
  };
  const Field F = Field::sample(g, [&](double x) { return eta_star(x, p) * rho(x) * box_cutoff(x, g.half_width); });
  return with_chi_star(g, p, derivative(F, 1));
}

Field table_data(const Scenario& s) {
  const GridSpec& g = s.grid;
  std::ifstream in(s.table_file);
  if (!in) throw ConfigError("cannot open table " + s.table_file);
  Field u(g);
  std::string line;
  std::size_t j = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    double x = 0.0, v = 0.0;
    if (!(row >> x >> v)) continue;  // header
    if (j >= g.n_points) throw ConfigError("table has more rows than grid points");
    if (std::abs(x - g.x(j)) > 1e-9 * g.half_width) {
      std::ostringstream os;
      os << "table row " << j << " has x = " << x << ", grid node is " << g.x(j);
      throw ConfigError(os.str());
    }
    u.values[j++] = v;
  }
  if (j != g.n_points) throw ConfigError("table has fewer rows than grid points");
  return u;
}

}  // namespace

InitialData make_initial_data(const Scenario& s) {
  s.params.validate();
  InitialData d;
  switch (s.data_kind) {
    case DataKind::Gaussian: d.u0 = gaussian_data(s); break;
    case DataKind::PowerTail: d.u0 = power_tail_data(s); break;
    case DataKind::PrescribedR0: d.u0 = prescribed_r0_data(s); break;
    case DataKind::CustomTable: d.u0 = table_data(s); break;
  }
  const Field& u = d.u0;
  if (!u.all_finite()) throw ConfigError("initial data is not finite");
  d.mass = mass(u);
  if (std::abs(d.mass - s.params.mass) > 1e-8) {
    std::ostringstream os;
    os << "initial mass " << d.mass << " differs from M = " << s.params.mass << " by more than 1e-8";
    throw MassMismatchError(os.str());
  }
  const GridSpec& g = s.grid;
  for (std::size_t j = 0; j < g.n_points; ++j) {
    const double ax = std::abs(g.x(j));
    if (ax > kCutoffStart * g.half_width) continue;
    d.tail_bound = std::max(d.tail_bound, std::abs(u.values[j]) * std::pow(1.0 + ax, s.params.alpha));
  }
  d.l1 = lp_norm(u, Norm::L1);
  d.l2 = lp_norm(u, Norm::L2);
  d.linf = lp_norm(u, Norm::Linf);
  const double d1 = lp_norm(derivative(u, 1), Norm::L2);
  const double d2 = lp_norm(derivative(u, 2), Norm::L2);
  d.h2 = std::sqrt(d.l2 * d.l2 + d1 * d1 + d2 * d2);
  return d;
}

}  // namespace bbmb
