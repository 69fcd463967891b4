#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "bbmb/experiment.hpp"

namespace bbmb {

struct CriterionResult {
  /// Acceptance criterion number, e.g. "1" or "7".
  std::string criterion;
  std::string name;
  double value = 0.0;
  std::string rule;
  bool passed = false;
  std::string detail;
};

struct SuiteResult {
  std::string suite;
  std::vector<CriterionResult> results;

  bool passed() const;
  nlohmann::json to_json() const;
};

/// identities, semigroup, oracles, rates, first-profile, second-profile, reproducibility.
const std::vector<std::string>& suite_names();

/// Named production scenarios (L = 400, N = 16384, 32 samples up to t = 1000):
/// alpha15-main, alpha15-r0, alpha2-r0, alpha3-r0; plus the small lin-oracle.
Scenario named_scenario(const std::string& name);
std::vector<std::string> named_scenario_names();

/// Runs suites; long scenario runs are shared between suites of one Verifier.
class Verifier {
 public:
  SuiteResult run(const std::string& suite);

  const Bundle& bundle(const std::string& scenario);

 private:
  SuiteResult identities();
  SuiteResult semigroup();
  SuiteResult oracles();
  SuiteResult rates();
  SuiteResult first_profile();
  SuiteResult second_profile();
  SuiteResult reproducibility();

  const Trajectory& second_aux();

  std::map<std::string, Bundle> bundles_;
  std::optional<Trajectory> second_aux_;
};

}  // namespace bbmb
