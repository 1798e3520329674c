#include "regen/marginal.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/special_functions/gamma.hpp>

#include "regen/detail/overloaded.hpp"
#include "regen/error.hpp"

namespace regen {

using detail::overloaded;

namespace {

bool positive_finite(double x) { return std::isfinite(x) && x > 0.0; }

}  // namespace

void validate_marginal(const MarginalSpec& spec) {
    std::visit(overloaded{
                   [](const Exponential& e) {
                       if (!positive_finite(e.rate)) throw ConfigError("/rate", "rate must be positive and finite");
                   },
                   [](const Gamma& g) {
                       if (!positive_finite(g.shape)) throw ConfigError("/shape", "shape must be positive and finite");
                       if (!positive_finite(g.rate)) throw ConfigError("/rate", "rate must be positive and finite");
                   },
                   [](const Deterministic& d) {
                       if (!positive_finite(d.value)) throw ConfigError("/value", "value must be positive and finite");
                   },
                   [](const Lattice& l) {
                       if (!positive_finite(l.span)) throw ConfigError("/span", "span must be positive and finite");
                       if (l.weights.empty()) throw ConfigError("/weights", "at least one weight is required");
                       for (std::size_t k = 0; k < l.weights.size(); ++k)
                           if (!std::isfinite(l.weights[k]) || l.weights[k] < 0.0)
                               throw ConfigError("/weights/" + std::to_string(k), "weight must be nonnegative");
                       const double total = std::accumulate(l.weights.begin(), l.weights.end(), 0.0);
                       if (std::abs(total - 1.0) > 1e-9) throw ConfigError("/weights", "weights must sum to 1");
                   },
                   [](const ShiftedUniform& u) {
                       if (!std::isfinite(u.lo) || u.lo < 0.0) throw ConfigError("/lo", "lo must be nonnegative");
                       if (!std::isfinite(u.hi) || !(u.hi > u.lo)) throw ConfigError("/hi", "hi must exceed lo");
                   },
               },
               spec);
}

std::string_view marginal_kind(const MarginalSpec& spec) noexcept {
    static constexpr std::string_view names[] = {"exponential", "gamma", "deterministic", "lattice",
                                                 "shifted_uniform"};
    return names[spec.index()];
}

double marginal_mean(const MarginalSpec& spec) {
    return std::visit(overloaded{
                          [](const Exponential& e) { return 1.0 / e.rate; },
                          [](const Gamma& g) { return g.shape / g.rate; },
                          [](const Deterministic& d) { return d.value; },
                          [](const Lattice& l) {
                              double m = 0.0;
                              for (std::size_t k = 0; k < l.weights.size(); ++k)
                                  m += l.weights[k] * static_cast<double>(k + 1) * l.span;
                              return m;
                          },
                          [](const ShiftedUniform& u) { return 0.5 * (u.lo + u.hi); },
                      },
                      spec);
}

double marginal_second_moment(const MarginalSpec& spec) {
    return std::visit(overloaded{
                          [](const Exponential& e) { return 2.0 / (e.rate * e.rate); },
                          [](const Gamma& g) { return g.shape * (g.shape + 1.0) / (g.rate * g.rate); },
                          [](const Deterministic& d) { return d.value * d.value; },
                          [](const Lattice& l) {
                              double m = 0.0;
                              for (std::size_t k = 0; k < l.weights.size(); ++k) {
                                  const double x = static_cast<double>(k + 1) * l.span;
                                  m += l.weights[k] * x * x;
                              }
                              return m;
                          },
                          [](const ShiftedUniform& u) {
                              return (u.hi * u.hi + u.hi * u.lo + u.lo * u.lo) / 3.0;
                          },
                      },
                      spec);
}

double marginal_variance(const MarginalSpec& spec) {
    const double m = marginal_mean(spec);
    return marginal_second_moment(spec) - m * m;
}

bool is_arithmetic(const MarginalSpec& spec) noexcept {
    return std::holds_alternative<Deterministic>(spec) || std::holds_alternative<Lattice>(spec);
}

double marginal_cdf(const MarginalSpec& spec, double x) {
    if (x < 0.0) return 0.0;
    return std::visit(overloaded{
                          [x](const Exponential& e) { return -std::expm1(-e.rate * x); },
                          [x](const Gamma& g) { return boost::math::gamma_p(g.shape, g.rate * x); },
                          [x](const Deterministic& d) { return x >= d.value ? 1.0 : 0.0; },
                          [x](const Lattice& l) {
                              double c = 0.0;
                              for (std::size_t k = 0; k < l.weights.size(); ++k) {
                                  if (static_cast<double>(k + 1) * l.span > x) break;
                                  c += l.weights[k];
                              }
                              return std::min(c, 1.0);
                          },
                          [x](const ShiftedUniform& u) {
                              if (x <= u.lo) return 0.0;
                              if (x >= u.hi) return 1.0;
                              return (x - u.lo) / (u.hi - u.lo);
                          },
                      },
                      spec);
}

double marginal_survival(const MarginalSpec& spec, double x) {
    if (x < 0.0) return 1.0;
    return std::visit(overloaded{
                          [x](const Exponential& e) { return std::exp(-e.rate * x); },
                          [x](const Gamma& g) { return boost::math::gamma_q(g.shape, g.rate * x); },
                          [&spec, x](const auto&) { return 1.0 - marginal_cdf(spec, x); },
                      },
                      spec);
}

double marginal_quantile(const MarginalSpec& spec, double u) {
    return std::visit(overloaded{
                          [u](const Exponential& e) { return -std::log1p(-u) / e.rate; },
                          [u](const Gamma& g) { return boost::math::gamma_p_inv(g.shape, u) / g.rate; },
                          [](const Deterministic& d) { return d.value; },
                          [u](const Lattice& l) {
                              double c = 0.0;
                              std::size_t last = 0;
                              for (std::size_t k = 0; k < l.weights.size(); ++k) {
                                  if (l.weights[k] <= 0.0) continue;
                                  last = k;
                                  c += l.weights[k];
                                  if (u <= c) return static_cast<double>(k + 1) * l.span;
                              }
                              return static_cast<double>(last + 1) * l.span;
                          },
                          [u](const ShiftedUniform& s) { return s.lo + (s.hi - s.lo) * u; },
                      },
                      spec);
}

double sample_marginal(const MarginalSpec& spec, RngStream& rng) {
    return std::visit(overloaded{
                          [&rng](const Exponential& e) { return rng.exponential() / e.rate; },
                          [&rng](const Gamma& g) { return rng.gamma(g.shape) / g.rate; },
                          [](const Deterministic& d) { return d.value; },
                          [&](const Lattice&) { return marginal_quantile(spec, rng.uniform()); },
                          [&rng](const ShiftedUniform& s) { return s.lo + (s.hi - s.lo) * rng.uniform(); },
                      },
                      spec);
}

}  // namespace regen
