#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "regen/dependence.hpp"
#include "regen/marginal.hpp"
#include "regen/rng.hpp"

namespace regen {

/// Renewal epochs S_0 = 0 < S_1 < ... materialised up to a horizon.
class RenewalPath {
public:
    /// Epochs from cycle lengths by compensated summation. The horizon
    /// defaults to the last epoch.
    static RenewalPath from_cycle_lengths(std::span<const double> lengths);
    static RenewalPath from_cycle_lengths(std::span<const double> lengths, double horizon);
    /// Epochs given directly; must start at 0 and increase strictly.
    static RenewalPath from_epochs(std::vector<double> epochs);

    const std::vector<double>& epochs() const noexcept { return epochs_; }
    double horizon() const noexcept { return horizon_; }

private:
    RenewalPath(std::vector<double> epochs, double horizon);

    std::vector<double> epochs_;
    double horizon_ = 0.0;
};

/// Renewal path of i.i.d. draws from `spec`, extended until an epoch exceeds
/// `horizon` so age and residual are defined everywhere on [0, horizon].
RenewalPath simulate_renewal_path(const MarginalSpec& spec, RngStream& rng, double horizon);

struct AgeResidual {
    double age = 0.0;
    double residual = 0.0;
    double spread() const noexcept { return age + residual; }
};

/// N(t) = sup{n : S_n <= t}; a renewal at t counts.
std::size_t count_at(const RenewalPath& path, double t);

/// (t - S_{N(t)}, S_{N(t)+1} - t); age is 0 at an epoch.
AgeResidual age_residual_at(const RenewalPath& path, double t);

/// F_e(x) = mu^{-1} * integral_0^x P(T > u) du.
double equilibrium_cdf(const MarginalSpec& spec, double x);
double equilibrium_cdf(const CycleLaw& law, double x);

/// Draw from the size-biased law x P(T in dx) / mu.
double sample_spread(const MarginalSpec& spec, RngStream& rng);
double sample_spread(const CycleLaw& law, RngStream& rng);

/// KS distances of U*spread and (1-U)*spread against F_e, n >= 1000 draws.
std::pair<double, double> uniform_split_check(const MarginalSpec& spec, RngStream& rng, std::size_t n);

}  // namespace regen
