#include "regen/renewal.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/special_functions/gamma.hpp>

#include "regen/detail/overloaded.hpp"
#include "regen/error.hpp"
#include "regen/quadrature.hpp"
#include "regen/stats.hpp"

namespace regen {

using detail::overloaded;

namespace {

// Feeds the closed-form status probability; must stay well below its budget.
constexpr double kEquilibriumTol = 1e-10;

double support_upper(const MarginalSpec& spec) {
    return std::visit(overloaded{
                          [](const Deterministic& d) { return d.value; },
                          [](const Lattice& l) { return static_cast<double>(l.weights.size()) * l.span; },
                          [](const ShiftedUniform& u) { return u.hi; },
                          [](const auto&) { return std::numeric_limits<double>::infinity(); },
                      },
                      spec);
}

std::vector<double> survival_breakpoints(const MarginalSpec& spec, double upto) {
    std::vector<double> cuts;
    if (const auto* l = std::get_if<Lattice>(&spec)) {
        for (std::size_t k = 1; k <= l->weights.size(); ++k) {
            const double x = static_cast<double>(k) * l->span;
            if (x >= upto) break;
            cuts.push_back(x);
        }
    } else if (const auto* u = std::get_if<ShiftedUniform>(&spec)) {
        cuts = {u->lo, u->hi};
    } else if (const auto* d = std::get_if<Deterministic>(&spec)) {
        cuts = {d->value};
    }
    return cuts;
}

double sample_size_biased(const MarginalSpec& spec, RngStream& rng) {
    return std::visit(overloaded{
                          [&rng](const Exponential& e) { return rng.gamma(2.0) / e.rate; },
                          [&rng](const Gamma& g) { return rng.gamma(g.shape + 1.0) / g.rate; },
                          [](const Deterministic& d) { return d.value; },
                          [&](const Lattice& l) {
                              const double mu = marginal_mean(spec);
                              const double u = rng.uniform();
                              double c = 0.0;
                              double last = l.span;
                              for (std::size_t k = 0; k < l.weights.size(); ++k) {
                                  const double x = static_cast<double>(k + 1) * l.span;
                                  if (l.weights[k] <= 0.0) continue;
                                  last = x;
                                  c += l.weights[k] * x / mu;
                                  if (u <= c) return x;
                              }
                              return last;
                          },
                          [&rng](const ShiftedUniform& s) {
                              const double lo2 = s.lo * s.lo;
                              return std::sqrt(lo2 + rng.uniform() * (s.hi * s.hi - lo2));
                          },
                      },
                      spec);
}

}  // namespace

RenewalPath::RenewalPath(std::vector<double> epochs, double horizon)
    : epochs_(std::move(epochs)), horizon_(horizon) {}

RenewalPath RenewalPath::from_cycle_lengths(std::span<const double> lengths) {
    auto path = from_cycle_lengths(lengths, 0.0);
    path.horizon_ = path.epochs_.back();
    return path;
}

RenewalPath RenewalPath::from_cycle_lengths(std::span<const double> lengths, double horizon) {
    std::vector<double> epochs{0.0};
    epochs.reserve(lengths.size() + 1);
    CompensatedSum s;
    for (double t : lengths) {
        if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("cycle lengths must be positive and finite");
        s.add(t);
        epochs.push_back(s.value());
    }
    if (epochs.back() < horizon) throw DomainError("renewal path does not cover its horizon");
    return RenewalPath(std::move(epochs), horizon);
}

RenewalPath RenewalPath::from_epochs(std::vector<double> epochs) {
    if (epochs.empty() || epochs.front() != 0.0) throw DomainError("epochs must start at 0");
    for (std::size_t k = 1; k < epochs.size(); ++k)
        if (!(epochs[k] > epochs[k - 1])) throw DomainError("epochs must increase strictly");
    const double h = epochs.back();
    return RenewalPath(std::move(epochs), h);
}

RenewalPath simulate_renewal_path(const MarginalSpec& spec, RngStream& rng, double horizon) {
    validate_marginal(spec);
    std::vector<double> lengths;
    CompensatedSum s;
    while (s.value() <= horizon) {
        lengths.push_back(sample_marginal(spec, rng));
        s.add(lengths.back());
    }
    return RenewalPath::from_cycle_lengths(lengths, horizon);
}

std::size_t count_at(const RenewalPath& path, double t) {
    if (!(t >= 0.0) || t > path.horizon()) throw DomainError("time outside the materialised horizon");
    const auto& e = path.epochs();
    return static_cast<std::size_t>(std::upper_bound(e.begin(), e.end(), t) - e.begin()) - 1;
}

AgeResidual age_residual_at(const RenewalPath& path, double t) {
    const std::size_t n = count_at(path, t);
    const auto& e = path.epochs();
    if (n + 1 >= e.size()) throw DomainError("straddling cycle is not materialised");
    return {t - e[n], e[n + 1] - t};
}

double equilibrium_cdf(const MarginalSpec& spec, double x) {
    if (!(x > 0.0)) return 0.0;
    const double mu = marginal_mean(spec);
    return std::visit(
        overloaded{
            [x](const Exponential& e) { return -std::expm1(-e.rate * x); },
            [x](const Deterministic& d) { return std::min(x / d.value, 1.0); },
            [x](const Gamma& g) {
                const double z = g.rate * x;
                return boost::math::gamma_p(g.shape + 1.0, z) + z * boost::math::gamma_q(g.shape, z) / g.shape;
            },
            [&](const auto&) {
                const double upper = std::min(x, support_upper(spec));
                const auto cuts = survival_breakpoints(spec, upper);
                const auto r = integrate([&](double u) { return marginal_survival(spec, u); }, 0.0, upper,
                                         kEquilibriumTol * mu, cuts);
                return std::clamp(r.value / mu, 0.0, 1.0);
            },
        },
        spec);
}

double equilibrium_cdf(const CycleLaw& law, double x) {
    if (!law.shock) return equilibrium_cdf(law.base, x);
    if (!(x > 0.0)) return 0.0;
    const double mu = law.mean();
    const double upper = std::min(x, support_upper(law.base) + support_upper(*law.shock));
    std::vector<double> cuts;
    if (const auto* d = std::get_if<Deterministic>(&*law.shock))
        for (double c : survival_breakpoints(law.base, upper - d->value)) cuts.push_back(c + d->value);
    const auto r = integrate([&](double u) { return law.survival(u); }, 0.0, upper, kEquilibriumTol * mu, cuts);
    return std::clamp(r.value / mu, 0.0, 1.0);
}

double sample_spread(const MarginalSpec& spec, RngStream& rng) { return sample_size_biased(spec, rng); }

double sample_spread(const CycleLaw& law, RngStream& rng) {
    if (!law.shock) return sample_size_biased(law.base, rng);
    // Size-biasing Z + R splits into biasing Z or R with odds EZ : ER.
    const double ez = marginal_mean(*law.shock);
    const double er = marginal_mean(law.base);
    if (rng.uniform() * (ez + er) < ez)
        return sample_size_biased(*law.shock, rng) + sample_marginal(law.base, rng);
    return sample_marginal(*law.shock, rng) + sample_size_biased(law.base, rng);
}

std::pair<double, double> uniform_split_check(const MarginalSpec& spec, RngStream& rng, std::size_t n) {
    if (n < 1000) throw DomainError("uniform_split_check needs at least 1000 draws");
    validate_marginal(spec);
    std::vector<double> ages(n), residuals(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double spread = sample_spread(spec, rng);
        const double u = rng.uniform();
        ages[k] = u * spread;
        residuals[k] = (1.0 - u) * spread;
    }
    auto fe = [&](double x) { return equilibrium_cdf(spec, x); };
    return {ks_statistic(std::move(ages), fe), ks_statistic(std::move(residuals), fe)};
}

}  // namespace regen
