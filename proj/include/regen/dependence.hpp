#pragma once

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "regen/marginal.hpp"
#include "regen/rng.hpp"

namespace regen {

struct Independent {
    bool operator==(const Independent&) const = default;
};

/// One uniform per draw, pushed through every marginal's inverse CDF.
struct Comonotone {
    bool operator==(const Comonotone&) const = default;
};

/// Coordinate i is Z + R_i with a shared shock Z; the per-coordinate
/// marginals describe the residuals R_i.
struct CommonShock {
    MarginalSpec shock;
    bool operator==(const CommonShock&) const = default;
};

struct GaussianCopula {
    std::vector<std::vector<double>> correlation;
    bool operator==(const GaussianCopula&) const = default;
};

using DependenceSpec = std::variant<Independent, Comonotone, CommonShock, GaussianCopula>;

std::string dependence_kind(const DependenceSpec& dep);

/// Law of one coordinate of a dependent vector: the residual marginal plus
/// the common shock, if any.
struct CycleLaw {
    MarginalSpec base;
    std::optional<MarginalSpec> shock;

    double mean() const;
    double second_moment() const;
    double survival(double x) const;
    bool arithmetic() const;
};

std::vector<CycleLaw> cycle_laws(const DependenceSpec& dep, std::span<const MarginalSpec> marginals);

/// Sampler for i.i.d. vectors with the given marginals and dependence.
/// Construction validates everything; sampling is const and thread-safe as
/// long as each caller brings its own stream.
class CycleVectorSampler {
public:
    CycleVectorSampler(DependenceSpec dep, std::vector<MarginalSpec> marginals);

    std::size_t dimension() const noexcept { return marginals_.size(); }
    const DependenceSpec& dependence() const noexcept { return dep_; }
    const std::vector<MarginalSpec>& marginals() const noexcept { return marginals_; }

    void sample(RngStream& rng, std::span<double> out) const;

private:
    DependenceSpec dep_;
    std::vector<MarginalSpec> marginals_;
    bool identical_marginals_ = false;
    std::vector<double> copula_factor_;  // row-major m x m, Z = factor * N
};

std::vector<double> sample_cycle_vector(const DependenceSpec& dep, std::span<const MarginalSpec> marginals,
                                        RngStream& rng);

}  // namespace regen
