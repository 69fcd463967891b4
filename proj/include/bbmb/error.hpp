#pragma once

#include <stdexcept>
#include <string>

namespace bbmb {

/// Process exit codes shared by the CLI and the acceptance runner.
enum class ExitCode : int {
  ok = 0,
  check_failure = 1,
  config_error = 2,
  numerical_instability = 3,
};

class Error : public std::runtime_error {
 public:
  Error(const std::string& what, ExitCode code)
      : std::runtime_error(what), code_(code) {}

  ExitCode code() const noexcept { return code_; }

 private:
  ExitCode code_;
};

/// Invalid parameters, grids, scenarios or unsatisfied preconditions.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what)
      : Error(what, ExitCode::config_error) {}
};

/// Requested sample times leave the window where the periodic box stands in for the line.
class DomainValidityError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// A field whose mass should vanish (or match M) does not.
class MassMismatchError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class NumericalInstability : public Error {
 public:
  explicit NumericalInstability(const std::string& what)
      : Error(what, ExitCode::numerical_instability) {}
};

class QuadratureError : public Error {
 public:
  QuadratureError(const std::string& what, double achieved_error)
      : Error(what, ExitCode::numerical_instability), achieved_error_(achieved_error) {}

  double achieved_error() const noexcept { return achieved_error_; }

 private:
  double achieved_error_;
};

}  // namespace bbmb
