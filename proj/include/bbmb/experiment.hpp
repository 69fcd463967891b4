#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "bbmb/asymptotics.hpp"
#include "bbmb/error.hpp"
#include "bbmb/profiles.hpp"
#include "bbmb/scenario.hpp"
#include "bbmb/solver.hpp"

namespace bbmb {

/// An error raised inside run_experiment, tagged with the pipeline stage.
class StageError : public Error {
 public:
  StageError(const std::string& stage, const Error& cause)
      : Error("stage '" + stage + "': " + cause.what(), cause.code()), stage_(stage) {}

  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

struct Check {
  std::string name;
  double value = 0.0;
  /// Human-readable acceptance rule, e.g. "<= 1e-08" or "in [-0.85, -0.65]".
  std::string rule;
  std::optional<Window> window;
  bool applicable = true;
  bool passed = false;
};

struct SeriesResult {
  ErrorSeries series;
  std::optional<RateFit> fit;
  std::optional<RateFit> log_fit;
  std::optional<WindowStability> stability;
  /// Scaling used for the `scaled` CSV column: (1+t)^scale / log(1+t)^log_power.
  double scale = 0.0;
  int log_power = 0;
  std::string fit_error;
};

struct ExperimentOptions {
  std::filesystem::path out_root = "out";
  bool write_files = true;
  bool write_snapshots = true;
};

struct Bundle {
  Scenario scenario;
  std::string hash;
  InitialData data;
  ProfileSet profiles;
  TailConstants tails;
  Trajectory trajectory;
  Window window;
  std::vector<SeriesResult> series;
  std::vector<OptimalRateReport> optimal;
  std::vector<Check> checks;
  nlohmann::json report;
  std::filesystem::path dir;

  bool passed() const;
};

/// [t_max / 50, t_max] over the positive sample times.
Window fit_window(const std::vector<double>& t_samples);

/// Profile combinations measured for a given alpha.
std::vector<Combo> combos_for(double alpha);

/// Upper-bound exponent of ||d^l (u - chi)||_p for the scenario's alpha.
double first_profile_exponent(double alpha, Norm norm, int l);

Bundle run_experiment(const Scenario& s, const ExperimentOptions& opts = {});

/// Writes report.json, series/*.csv and (optionally) snapshots/*.csv into dir.
void write_bundle(const Bundle& b, const std::filesystem::path& dir, bool snapshots);

/// Reads a bundle directory back: scenario, tail constants and snapshots.
struct LoadedBundle {
  Scenario scenario;
  ProfileSet profiles;
  Trajectory trajectory;
};
LoadedBundle load_bundle(const std::filesystem::path& dir);

nlohmann::json to_json(const RateFit& f);
nlohmann::json to_json(const Check& c);
nlohmann::json to_json(const OptimalRateReport& r);

}  // namespace bbmb
