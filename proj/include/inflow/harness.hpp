#pragma once

#include <json.hpp>

#include <cstdint>
#include <string>

#include "inflow/report.hpp"

namespace inflow {

/// Validates the configuration and dispatches to the module solvers.
/// Modules: "transport1d", "hyp1d", "pipe3d", "divcurl".
/// A fixed configuration and seed reproduce the report exactly, apart from
/// the timestamp entry in meta.
SolveReport run_experiment(const std::string& module, const nlohmann::json& config,
                           std::uint64_t seed);

}  // namespace inflow
