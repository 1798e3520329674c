#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "regen/asymptotics.hpp"
#include "regen/models.hpp"

namespace regen {

using ModelSpec = std::variant<LevyQueueSpec, ClearingSpec, StatusSpec, AgeResidualSpec, JacksonSpec>;

std::string model_kind(const ModelSpec& spec);

struct StationaryQuery {
    std::size_t coordinate = 0;
    TestFunction g = ConstantFn{1.0};
    bool operator==(const StationaryQuery&) const = default;
};

struct RunSpec {
    std::uint64_t seed = 1;
    std::size_t replications = 100'000;
    std::vector<double> t_grid{10.0, 100.0, 1000.0};
    std::size_t n_cycles = 100'000;
    double horizon = 1e5;
    std::optional<double> burn_in;
    bool allow_hypothesis_fail = false;
    /// "quantile_indicators" or "exponential".
    std::string test_functions = "quantile_indicators";
    /// State component read by each coordinate's test functions.
    std::optional<std::vector<std::size_t>> components;
    std::optional<StationaryQuery> stationary;
    std::size_t bootstrap = 400;
    std::size_t quantile_draws = 10'000;
    std::size_t cycle_budget = kDefaultCycleBudget;
    bool operator==(const RunSpec&) const = default;
};

struct OutputSpec {
    std::string directory = ".";
    std::vector<std::string> formats{"csv", "json"};
    bool operator==(const OutputSpec&) const = default;
    bool wants(std::string_view format) const;
};

struct ScenarioConfig {
    ModelSpec model = ClearingSpec{};
    /// Absent for jackson, whose observations carry the schedule.
    std::optional<ScheduleSpec> schedule;
    RunSpec run;
    OutputSpec output;
    bool operator==(const ScenarioConfig&) const = default;
};

/// Re-check every invariant, e.g. after command-line overrides.
void validate(const ScenarioConfig& config);

/// Parse and validate JSON text. Errors are ConfigError with a JSON pointer.
ScenarioConfig parse_config(std::string_view json_text);
ScenarioConfig load_config(const std::string& path);
/// Normalised JSON with every default spelled out.
std::string serialize_config(const ScenarioConfig& config);

ModelPtr build_model(const ModelSpec& spec, std::size_t event_budget = kDefaultEventBudget);
/// The configured schedule, or the jackson observation times.
ScheduleSpec effective_schedule(const ScenarioConfig& config);
std::vector<std::size_t> effective_components(const ScenarioConfig& config);
double effective_burn_in(const ScenarioConfig& config, const RegenModel& model);

}  // namespace regen
