#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "bbmb/grid.hpp"
#include "bbmb/norms.hpp"
#include "bbmb/params.hpp"

namespace bbmb {

enum class DataKind { Gaussian, PowerTail, PrescribedR0, CustomTable };

std::string data_kind_name(DataKind k);
DataKind parse_data_kind(const std::string& s);

struct Scenario {
  std::string name = "scenario";
  ModelParams params;
  DataKind data_kind = DataKind::Gaussian;
  double amplitude = 0.0;
  double c_plus = 0.0;
  double c_minus = 0.0;
  GridSpec grid{400.0, 16384};
  std::vector<double> t_samples;
  std::vector<Norm> norms{Norm::Linf, Norm::L2};
  std::vector<int> derivative_orders{0, 1};
  /// custom_table only: two-column CSV (x, u) on the grid nodes.
  std::string table_file;
};

/// 32 geometric samples from 1 to (L/8)^2.
std::vector<double> default_t_samples(const GridSpec& g);

/// Parses a scenario document. Relative table paths resolve against base_dir.
Scenario scenario_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
Scenario load_scenario(const std::filesystem::path& file);
/// Canonical form: every key written, t_samples expanded.
nlohmann::json scenario_to_json(const Scenario& s);

/// 64-bit FNV-1a of the canonical JSON, as 16 hex digits.
std::string scenario_hash(const Scenario& s);

struct InitialData {
  Field u0;
  /// Smallest C with |u0(x)| <= C (1+|x|)^{-alpha} on the untapered region |x| <= 0.8 L.
  double tail_bound = 0.0;
  double mass = 0.0;
  double l1 = 0.0;
  double l2 = 0.0;
  double linf = 0.0;
  /// ||u0||_{H^2} from the spectrum.
  double h2 = 0.0;
};

/// gaussian: M e^{-x^2/4} normalized to mass M (a = 0 only with M = 0).
/// power_tail: chi_star + d/dx[P(x) cutoff(x)], P the exact primitive on the
///   line of a ((1+x^2)^{-alpha/2} - m g(x)) with g the unit heat kernel at
///   t = 1 and m the mass of the bump, so the box mass stays M.
/// prescribed_r0: chi_star + d/dx[eta_star rho cutoff], rho = c^{+-}(1+|x|)^{1-alpha}
///   for |x| >= 10 blended smoothly to 0 on |x| <= 2.
/// custom_table: read from table_file.
InitialData make_initial_data(const Scenario& s);

/// int_x^inf (1+y^2)^{-alpha/2} dy for x >= 0.
double power_tail_integral(double x, double alpha);
/// int_R (1+y^2)^{-alpha/2} dy.
double power_bump_mass(double alpha);

}  // namespace bbmb
