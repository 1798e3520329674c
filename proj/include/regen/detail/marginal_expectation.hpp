#pragma once

#include <type_traits>

#include "regen/quadrature.hpp"

namespace regen {

template <class F>
double marginal_expectation(const MarginalSpec& spec, F&& g, double abs_tol) {
    if (const auto* d = std::get_if<Deterministic>(&spec)) return g(d->value);
    if (const auto* l = std::get_if<Lattice>(&spec)) {
        double sum = 0.0;
        for (std::size_t k = 0; k < l->weights.size(); ++k)
            if (l->weights[k] > 0.0) sum += l->weights[k] * g(static_cast<double>(k + 1) * l->span);
        return sum;
    }
    auto integrand = [&](double u) { return g(marginal_quantile(spec, u)); };
    return integrate(integrand, 0.0, 1.0, abs_tol).value;
}

}  // namespace regen
