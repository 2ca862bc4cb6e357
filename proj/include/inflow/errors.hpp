#pragma once

#include <stdexcept>
#include <string>

namespace inflow {

/// Eigenstructure is complex or defective at the queried state.
struct HyperbolicityError : std::runtime_error {
  explicit HyperbolicityError(const std::string& what) : std::runtime_error(what) {}
};

/// A wave speed fell below the configured floor; inflow data cannot be imposed.
struct CharacteristicDegeneracyError : std::runtime_error {
  explicit CharacteristicDegeneracyError(const std::string& what) : std::runtime_error(what) {}
};

/// An iteration stopped contracting.
struct SolverDivergenceError : std::runtime_error {
  explicit SolverDivergenceError(const std::string& what) : std::runtime_error(what) {}
};

/// A norm budget that the scheme relies on was exceeded mid-run.
struct StabilityBudgetError : std::runtime_error {
  explicit StabilityBudgetError(const std::string& what) : std::runtime_error(what) {}
};

/// Inputs violate a documented precondition of the operation.
struct PreconditionError : std::invalid_argument {
  explicit PreconditionError(const std::string& what) : std::invalid_argument(what) {}
};

/// Requested setup is valid mathematics but outside what this code solves directly.
struct UnsupportedConfigurationError : std::runtime_error {
  explicit UnsupportedConfigurationError(const std::string& what) : std::runtime_error(what) {}
};

/// Bad experiment configuration (unknown preset, parameter out of range, ...).
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace inflow
