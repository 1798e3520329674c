#pragma once

#include <string>
#include <vector>

#include "regen/scenario.hpp"

namespace regen {

inline constexpr const char* kVersion = "0.1.0";

enum class Status : int {
    pass = 0,
    internal = 1,
    config = 2,
    statistical_fail = 3,
    hypothesis_gate = 4,
    budget = 5,
};

struct CommandOutcome {
    Status status = Status::pass;
    /// JSON summary, identical to the JSON file the command writes.
    std::string report;
    std::vector<std::string> files;
};

/// Product-form sweep over run.t_grid. Writes gap.csv and verdict.json.
CommandOutcome run_verify_independence(const ScenarioConfig& config, unsigned threads = 1);

/// Closed-form vs simulated probability that every source is up to date.
/// Writes status_pi.json.
CommandOutcome run_status_pi(const ScenarioConfig& config, unsigned threads = 1);

/// Renewal-reward vs time-average estimate of E g(X_i(inf)). Writes
/// stationary.csv and stationary.json.
CommandOutcome run_stationary(const ScenarioConfig& config);

/// "%.17g"
std::string format_double(double x);

}  // namespace regen
