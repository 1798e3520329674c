#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "regen/cycle_path.hpp"
#include "regen/renewal.hpp"
#include "regen/rng.hpp"
#include "regen/stats.hpp"
#include "regen/test_function.hpp"

namespace regen {

inline constexpr std::size_t kDefaultCycleBudget = 10'000'000;

/// A jointly generated family of m regenerative processes.
///
/// Each call to `generate` draws one i.i.d. cycle tuple: coordinate i gets a
/// path whose length is its cycle length T^i. Coordinates within a tuple may
/// depend on each other arbitrarily.
class RegenModel {
public:
    virtual ~RegenModel() = default;

    virtual std::string name() const = 0;
    virtual std::size_t dimension() const = 0;
    virtual std::size_t state_dimension(std::size_t coordinate) const = 0;

    /// Fill `out` (size dimension()) with the next cycle tuple. Paths are
    /// reset and refilled so their storage can be reused.
    virtual void generate(RngStream& rng, std::span<CyclePath> out) const = 0;

    /// Analytic mean cycle lengths mu_i.
    virtual std::vector<double> cycle_means() const = 0;

    /// Non-fatal findings, e.g. arithmetic cycle-length laws.
    virtual std::vector<std::string> warnings() const { return {}; }
};

using ModelPtr = std::shared_ptr<const RegenModel>;

/// One realisation of a model with lazily materialised, cached cycles.
class Realization {
public:
    Realization(ModelPtr model, RngStream rng, std::size_t cycle_budget = kDefaultCycleBudget);

    const RegenModel& model() const noexcept { return *model_; }
    std::size_t cycles() const noexcept { return tuples_.size(); }

    /// X_i(t) = X^i_{N(t)+1}(t - S^i_{N(t)}).
    State evaluate_at(std::size_t coordinate, double t);

    /// Renewal epochs of a coordinate covering at least [0, t].
    RenewalPath renewal_path(std::size_t coordinate, double t);
    const CyclePath& cycle(std::size_t n, std::size_t coordinate) const { return tuples_.at(n)[coordinate]; }

private:
    void extend_past(std::size_t coordinate, double t);

    ModelPtr model_;
    RngStream rng_;
    std::size_t budget_;
    std::vector<std::vector<CyclePath>> tuples_;
    std::vector<std::vector<double>> epochs_;
    std::vector<CompensatedSum> sums_;
};

/// Streaming evaluation of X_i(times[i]) for all coordinates on one fresh
/// realisation drawn from `rng`; memory is O(m) regardless of horizon.
std::vector<State> evaluate_at_times(const RegenModel& model, RngStream& rng, std::span<const double> times,
                                     std::size_t cycle_budget = kDefaultCycleBudget);

struct RatioEstimate {
    double estimate = 0.0;
    double standard_error = 0.0;
    std::size_t cycles = 0;
};

/// E g(X_i(inf)) = E int_0^T g(X(s)) ds / E T from n_cycles i.i.d. cycles,
/// with a delta-method standard error.
RatioEstimate renewal_reward_estimate(const RegenModel& model, std::size_t coordinate, const TestFunction& g,
                                      std::size_t n_cycles, RngStream& rng);

/// (1/H) int_0^H g(X_i(s)) ds along one realisation. The standard error is
/// the regenerative one over the complete cycles inside the horizon.
RatioEstimate time_average_estimate(const RegenModel& model, std::size_t coordinate, const TestFunction& g,
                                    double horizon, RngStream& rng,
                                    std::size_t cycle_budget = kDefaultCycleBudget);

/// X_i(t_burn) on a fresh realisation; t_burn >= 100 mu_i.
State sample_stationary(const RegenModel& model, std::size_t coordinate, double t_burn, RngStream& rng,
                        std::size_t cycle_budget = kDefaultCycleBudget);

/// max(10^3, 100 * max_i mu_i)
double default_burn_in(std::span<const double> cycle_means);

}  // namespace regen
