#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "regen/engine.hpp"
#include "regen/test_function.hpp"

namespace regen {

/// v(t) = a * t + b
struct AffineSchedule {
    double a = 1.0;
    double b = 0.0;
    bool operator==(const AffineSchedule&) const = default;
};

/// v(t) = a * t^p
struct PowerSchedule {
    double p = 1.0;
    double a = 1.0;
    bool operator==(const PowerSchedule&) const = default;
};

using ScheduleEntry = std::variant<AffineSchedule, PowerSchedule>;

/// Observation-time functions v_1, ..., v_m.
struct ScheduleSpec {
    std::vector<ScheduleEntry> entries;
    bool operator==(const ScheduleSpec&) const = default;

    std::size_t size() const noexcept { return entries.size(); }
    double evaluate(std::size_t i, double t) const;
    std::vector<double> evaluate(double t) const;
    /// Smallest t0 >= 0 such that every v_i(t) > 0 for t > t0.
    double positive_after() const;
};

/// Throws ConfigError for a non-positive scale or exponent.
void validate(const ScheduleSpec& schedule);

/// liminf_{t->inf} v_i(t) / v_j(t), possibly +inf or 0.
double liminf_ratio(const ScheduleEntry& vi, const ScheduleEntry& vj);

struct HypothesisVerdict {
    bool pass = false;
    /// Coordinates in checking order: ascending mu, ties by decreasing growth.
    std::vector<std::size_t> order;
    /// Per consecutive pair in `order`: liminf ratio and the mu ratio it must beat.
    std::vector<double> ratios;
    std::vector<double> thresholds;
    /// First failing pair as original (0-based) coordinate indices.
    std::optional<std::pair<std::size_t, std::size_t>> witness;
};

HypothesisVerdict check_hypotheses(const ScheduleSpec& schedule, std::span<const double> means);

/// Replications (rows) by coordinates (columns).
struct SampleMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;  // row-major

    double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
    double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    std::vector<double> column(std::size_t c) const;
};

struct SamplingOptions {
    std::uint64_t seed = 1;
    std::size_t replications = 100'000;
    unsigned threads = 1;
    bool allow_hypothesis_fail = false;
    std::size_t cycle_budget = kDefaultCycleBudget;
};

using FunctionTuple = std::vector<TestFunction>;

/// For each replication (stream `options.seed`, index r) evaluate every
/// coordinate at its own scaled time v_i(t) on one shared realisation and
/// apply each tuple's f_i. Returns one replications x m matrix per tuple.
std::vector<SampleMatrix> sample_joint(const RegenModel& model, const ScheduleSpec& schedule, double t,
                                       std::span<const FunctionTuple> tuples, const SamplingOptions& options);
SampleMatrix sample_joint(const RegenModel& model, const ScheduleSpec& schedule, double t,
                          const FunctionTuple& fs, const SamplingOptions& options);

struct BootstrapOptions {
    std::size_t resamples = 400;
    std::uint64_t seed = 1;
    unsigned threads = 1;
};

struct GapEstimate {
    double t = 0.0;
    std::size_t tuple_id = 0;
    /// |mean(prod f_i) - prod mean(f_i)|
    double gap = 0.0;
    /// Bootstrap standard error of the signed difference.
    double se = 0.0;
    std::size_t n = 0;
    std::vector<double> marginal_means;
    std::vector<double> marginal_ses;
    /// Some column is constant: the product form holds exactly, SE is 0.
    bool degenerate = false;
};

/// Needs at least 1000 replications.
GapEstimate product_form_gap(const SampleMatrix& samples, const BootstrapOptions& options = {});

inline constexpr double kGapFloor = 0.02;
inline double gap_threshold(const GapEstimate& g) { return std::max(kGapFloor, 3.0 * g.se); }
inline bool gap_passes(const GapEstimate& g) { return g.gap < gap_threshold(g); }

struct SweepResult {
    std::vector<double> t_grid;
    /// gaps[k][j]: horizon k, tuple j.
    std::vector<std::vector<GapEstimate>> gaps;
    /// Spearman correlation of gap vs t, per tuple.
    std::vector<double> trend;
    /// Every tuple's gap at the final horizon is below max(0.02, 3 SE).
    bool final_pass = false;
};

struct SweepOptions {
    SamplingOptions sampling;
    std::size_t bootstrap_resamples = 400;
};

/// Gap estimates across an increasing grid of at least three horizons. Each
/// horizon uses its own independent family of streams.
SweepResult convergence_sweep(const RegenModel& model, const ScheduleSpec& schedule, std::span<const double> t_grid,
                              std::span<const FunctionTuple> tuples, const SweepOptions& options);

struct Ks2Result {
    double statistic = 0.0;
    double p_value = 1.0;
};

/// sup over a 32x32 grid of marginal quantiles of |F_12 - F_1 F_2|, with a
/// permutation p-value. Needs at least 10^4 paired samples.
Ks2Result independence_ks2(std::span<const double> x, std::span<const double> y, std::size_t permutations = 200,
                           std::uint64_t seed = 1);

/// Quantiles of each coordinate's `components[i]` at t_burn from `draws`
/// independent realisations; result[i][k] is the probs[k] quantile.
std::vector<std::vector<double>> stationary_quantiles(const RegenModel& model, std::span<const std::size_t> components,
                                                      std::span<const double> probs, std::size_t draws,
                                                      double t_burn, std::uint64_t seed, unsigned threads = 1,
                                                      std::size_t cycle_budget = kDefaultCycleBudget);

}  // namespace regen
