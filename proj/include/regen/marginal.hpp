#pragma once

#include <string_view>
#include <variant>
#include <vector>

#include "regen/rng.hpp"

namespace regen {

struct Exponential {
    double rate = 1.0;
    bool operator==(const Exponential&) const = default;
};

struct Gamma {
    double shape = 1.0;
    double rate = 1.0;
    bool operator==(const Gamma&) const = default;
};

struct Deterministic {
    double value = 1.0;
    bool operator==(const Deterministic&) const = default;
};

/// Mass `weights[k]` at (k + 1) * span. Weights must sum to one.
struct Lattice {
    double span = 1.0;
    std::vector<double> weights;
    bool operator==(const Lattice&) const = default;
};

struct ShiftedUniform {
    double lo = 0.0;
    double hi = 1.0;
    bool operator==(const ShiftedUniform&) const = default;
};

/// Law of a strictly positive cycle length, jump size or restart level.
using MarginalSpec = std::variant<Exponential, Gamma, Deterministic, Lattice, ShiftedUniform>;

/// Throws ConfigError (with an empty path) when parameters are inadmissible.
void validate_marginal(const MarginalSpec& spec);

std::string_view marginal_kind(const MarginalSpec& spec) noexcept;

double marginal_mean(const MarginalSpec& spec);
double marginal_second_moment(const MarginalSpec& spec);
double marginal_variance(const MarginalSpec& spec);

/// Deterministic and lattice laws are concentrated on a lattice.
bool is_arithmetic(const MarginalSpec& spec) noexcept;

double marginal_cdf(const MarginalSpec& spec, double x);
double marginal_survival(const MarginalSpec& spec, double x);

/// Generalised inverse CDF, u in (0, 1).
double marginal_quantile(const MarginalSpec& spec, double u);

double sample_marginal(const MarginalSpec& spec, RngStream& rng);

/// E[g(X)] for a bounded g: exact sums for discrete laws, quadrature over
/// the quantile function otherwise.
template <class F>
double marginal_expectation(const MarginalSpec& spec, F&& g, double abs_tol = 1e-11);

}  // namespace regen

#include "regen/detail/marginal_expectation.hpp"
