#pragma once

#include <vector>

#include "regen/dependence.hpp"
#include "regen/engine.hpp"
#include "regen/marginal.hpp"

namespace regen {

inline constexpr std::size_t kDefaultEventBudget = 10'000'000;

// ---------------------------------------------------------------------------
// Levy-driven queues with secondary jumps at the origin.
//
// Coordinate i is a compound Poisson process (rate jump_rate, sizes
// jump_size) with unit negative drift. Each cycle starts at a restart level
// U^i, drawn jointly across coordinates, and ends at first passage to zero.

struct LevyQueueCoordinate {
    double jump_rate = 0.0;
    MarginalSpec jump_size = Exponential{1.0};
    MarginalSpec restart = Exponential{1.0};
    bool operator==(const LevyQueueCoordinate&) const = default;
};

struct LevyQueueSpec {
    std::vector<LevyQueueCoordinate> coordinates;
    DependenceSpec dependence = Independent{};
    bool operator==(const LevyQueueSpec&) const = default;
};

void validate(const LevyQueueSpec& spec);
/// E T = E U / (1 - jump_rate * E B), the first-passage identity.
std::vector<double> levy_cycle_means(const LevyQueueSpec& spec);
ModelPtr build_levy_queue(const LevyQueueSpec& spec, std::size_t event_budget = kDefaultEventBudget);

// ---------------------------------------------------------------------------
// Clearing processes: a subordinator (drift plus compound Poisson) restarted
// from zero at dependent clearing epochs.

struct ClearingCoordinate {
    double drift = 1.0;
    double jump_rate = 0.0;
    MarginalSpec jump_size = Exponential{1.0};
    MarginalSpec cycle = Exponential{1.0};
    bool operator==(const ClearingCoordinate&) const = default;
};

struct ClearingSpec {
    std::vector<ClearingCoordinate> coordinates;
    DependenceSpec dependence = Independent{};
    bool operator==(const ClearingSpec&) const = default;
};

void validate(const ClearingSpec& spec);
ModelPtr build_clearing(const ClearingSpec& spec);

// ---------------------------------------------------------------------------
// Real-time status updating. The state of source i is (age, Y/c) where Y is
// the size of the most recent update; the source is up to date when the age
// strictly exceeds the transfer time Y/c.

struct StatusCoordinate {
    MarginalSpec cycle = Exponential{1.0};
    MarginalSpec update_size = Deterministic{1.0};
    double capacity = 1.0;
    bool operator==(const StatusCoordinate&) const = default;
};

struct StatusSpec {
    std::vector<StatusCoordinate> coordinates;
    DependenceSpec dependence = Independent{};
    bool operator==(const StatusSpec&) const = default;
};

void validate(const StatusSpec& spec);
ModelPtr build_status(const StatusSpec& spec);

/// Indicator of "source is up to date" on a status coordinate's state.
inline TestFunction status_updated() { return UpdatedFn{0, 1}; }

/// Limiting probability that every source is up to date:
/// prod_i E[1 - F_e^i(Y^i / c_i)].
double pi_closed_form(const StatusSpec& spec);

// ---------------------------------------------------------------------------
// Renewal age/residual processes; state (age, residual).

struct AgeResidualSpec {
    std::vector<MarginalSpec> cycles;
    DependenceSpec dependence = Independent{};
    bool operator==(const AgeResidualSpec&) const = default;
};

void validate(const AgeResidualSpec& spec);
ModelPtr build_age_residual(const AgeResidualSpec& spec);

// ---------------------------------------------------------------------------
// Open Jackson networks, regenerating whenever the network empties.
// Observation coordinate k sees the full station vector at time
// alpha_k * t + beta_k.

struct JacksonObservation {
    double alpha = 1.0;
    double beta = 0.0;
    bool operator==(const JacksonObservation&) const = default;
};

struct JacksonSpec {
    std::vector<double> arrival_rates;
    std::vector<double> service_rates;
    std::vector<std::vector<double>> routing;
    std::vector<JacksonObservation> observations;
    bool operator==(const JacksonSpec&) const = default;
};

/// Effective arrival rates r solving r = a + P^T r.
std::vector<double> traffic_solve(const JacksonSpec& spec);
void validate(const JacksonSpec& spec);
/// 1 / (total external rate * P(network empty)).
double jackson_cycle_mean(const JacksonSpec& spec);
ModelPtr build_jackson(const JacksonSpec& spec, std::size_t event_budget = kDefaultEventBudget);

}  // namespace regen
